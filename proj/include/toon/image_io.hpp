#ifndef TOON_IMAGE_IO_HPP
#define TOON_IMAGE_IO_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "toon/image.hpp"

namespace toon {

// 8-bit file boundary: samples are written as round(v * 255) and read as b / 255.
std::uint8_t quantize_sample(float v);
float dequantize_sample(std::uint8_t b);

/// Reads binary PPM (P6), PGM (P5) or 8-bit PNG; the format is detected from the magic bytes.
Image load_image(const std::filesystem::path& path);

/// Writes PNG when the extension is ".png", otherwise PPM (P6) or PGM (P5) for one channel.
void save_image(const Image& img, const std::filesystem::path& path);

std::vector<std::uint8_t> encode_png(const Image& img);
Image decode_png(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> encode_pnm(const Image& img);
Image decode_pnm(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace toon

#endif  // TOON_IMAGE_IO_HPP

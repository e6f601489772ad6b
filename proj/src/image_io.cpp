#include "toon/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>
#include <fstream>
#include <string>

namespace toon {

std::uint8_t quantize_sample(float v) {
  if (!std::isfinite(v)) return 0;
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0f, 1.0f) * 255.0f));
}

float dequantize_sample(std::uint8_t b) { return static_cast<float>(b) / 255.0f; }

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed: " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

namespace {

// Interleaves planes into 8-bit samples, row-major.
std::vector<std::uint8_t> interleave(const Image& img) {
  const int c = img.channels();
  std::vector<std::uint8_t> out(static_cast<std::size_t>(img.samples()));
  std::size_t i = 0;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int k = 0; k < c; ++k) out[i++] = quantize_sample(img(x, y, k));
  return out;
}

Image deinterleave(const std::uint8_t* data, int width, int height, int channels) {
  Image img(width, height, channels);
  std::size_t i = 0;
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      for (int k = 0; k < channels; ++k) img(x, y, k) = dequantize_sample(data[i++]);
  return img;
}

class PnmCursor {
 public:
  explicit PnmCursor(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  int read_uint() {
    skip_space_and_comments();
    if (pos_ >= bytes_.size() || !std::isdigit(bytes_[pos_])) {
      throw CorruptFile("pnm: malformed header field");
    }
    long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      v = v * 10 + (bytes_[pos_++] - '0');
      if (v > (1 << 24)) throw CorruptFile("pnm: header value too large");
    }
    return static_cast<int>(v);
  }

  void expect_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_])) {
      throw CorruptFile("pnm: missing separator before payload");
    }
    ++pos_;
  }

  std::size_t pos() const { return pos_; }
  void advance(std::size_t n) { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

const std::uint8_t kPngMagic[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

bool is_png(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kPngMagic, 8) == 0;
}

bool is_pnm(std::span<const std::uint8_t> bytes) {
  return bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6');
}

struct PngReadSource {
  std::span<const std::uint8_t> bytes;
  std::size_t pos = 0;
};

void png_read_from_span(png_structp png, png_bytep out, png_size_t n) {
  auto* src = static_cast<PngReadSource*>(png_get_io_ptr(png));
  if (src->pos + n > src->bytes.size()) png_error(png, "unexpected end of PNG data");
  std::memcpy(out, src->bytes.data() + src->pos, n);
  src->pos += n;
}

void png_write_to_vector(png_structp png, png_bytep data, png_size_t n) {
  auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
  out->insert(out->end(), data, data + n);
}

void png_flush_noop(png_structp) {}

void png_error_throw(png_structp png, png_const_charp msg) {
  auto* text = static_cast<std::string*>(png_get_error_ptr(png));
  if (text) *text = msg;
  png_longjmp(png, 1);
}

void png_warning_ignore(png_structp, png_const_charp) {}

}  // namespace

std::vector<std::uint8_t> encode_pnm(const Image& img) {
  const char magic = img.channels() == 3 ? '6' : '5';
  std::string header = std::string("P") + magic + "\n" + std::to_string(img.width()) + " " +
                       std::to_string(img.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  auto payload = interleave(img);
  out.insert(out.end(), payload.begin(), payload.end());
  return out;
}

Image decode_pnm(std::span<const std::uint8_t> bytes) {
  if (!is_pnm(bytes)) throw UnsupportedFormat("not a binary PPM/PGM file");
  const int channels = bytes[1] == '6' ? 3 : 1;
  PnmCursor cur(bytes);
  cur.advance(2);
  const int width = cur.read_uint();
  const int height = cur.read_uint();
  const int maxval = cur.read_uint();
  if (width < 1 || height < 1) throw CorruptFile("pnm: zero dimension");
  if (maxval != 255) throw UnsupportedFormat("pnm: only maxval 255 is supported");
  cur.expect_single_space();
  const std::size_t need = std::size_t(width) * height * channels;
  if (bytes.size() - cur.pos() < need) throw CorruptFile("pnm: truncated payload");
  return deinterleave(bytes.data() + cur.pos(), width, height, channels);
}

std::vector<std::uint8_t> encode_png(const Image& img) {
  std::vector<std::uint8_t> out;
  std::string err;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &err, png_error_throw,
                                            png_warning_ignore);
  if (!png) throw Error("png: cannot create write struct");
  png_infop info = png_create_info_struct(png);
  auto rows = interleave(img);
  const std::size_t stride = std::size_t(img.width()) * img.channels();
  std::vector<png_bytep> row_ptrs(img.height());
  for (int y = 0; y < img.height(); ++y) row_ptrs[y] = rows.data() + stride * y;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error("png encode failed: " + err);
  }
  png_set_write_fn(png, &out, png_write_to_vector, png_flush_noop);
  png_set_IHDR(png, info, img.width(), img.height(), 8,
               img.channels() == 3 ? PNG_COLOR_TYPE_RGB : PNG_COLOR_TYPE_GRAY,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_set_compression_level(png, 6);
  png_write_info(png, info);
  png_write_image(png, row_ptrs.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

Image decode_png(std::span<const std::uint8_t> bytes) {
  if (!is_png(bytes)) throw UnsupportedFormat("not a PNG file");
  std::string err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err, png_error_throw,
                                           png_warning_ignore);
  if (!png) throw Error("png: cannot create read struct");
  png_infop info = png_create_info_struct(png);
  PngReadSource src{bytes, 0};
  std::vector<std::uint8_t> pixels;
  std::vector<png_bytep> row_ptrs;

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw CorruptFile("png decode failed: " + err);
  }
  png_set_read_fn(png, &src, png_read_from_span);
  png_read_info(png, info);
  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int color_type = png_get_color_type(png, info);
  png_set_expand(png);
  png_set_strip_16(png);
  png_set_strip_alpha(png);
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  png_read_update_info(png, info);
  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) png_error(png, "unexpected channel count");
  const std::size_t stride = png_get_rowbytes(png, info);
  pixels.resize(stride * height);
  row_ptrs.resize(height);
  for (png_uint_32 y = 0; y < height; ++y) row_ptrs[y] = pixels.data() + stride * y;
  png_read_image(png, row_ptrs.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return deinterleave(pixels.data(), static_cast<int>(width), static_cast<int>(height), channels);
}

Image load_image(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  const auto bytes = read_file_bytes(path);
  if (is_png(bytes)) return decode_png(bytes);
  if (is_pnm(bytes)) return decode_pnm(bytes);
  throw UnsupportedFormat("unrecognized image format: " + path.string());
}

void save_image(const Image& img, const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
  const auto bytes = ext == ".png" ? encode_png(img) : encode_pnm(img);
  write_file_bytes(path, bytes);
}

}  // namespace toon

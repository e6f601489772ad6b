#ifndef TOON_CARTOON_HPP
#define TOON_CARTOON_HPP

#include <string>
#include <vector>

#include "toon/image.hpp"

namespace toon {

struct Palette {
  std::vector<Eigen::Vector3f> colors;  // 1..256 distinct RGB colours
  std::string method = "median-cut";
};

/*
 * Median-cut palette of at most k colours.
 *
 * Repeatedly takes the box with the widest channel range (lowest index on ties)
 * and cuts it along that channel at the value boundary whose pixel count is
 * closest to half of the box. Cuts never separate equal values, so an image
 * with at most k distinct colours gets each colour as its own entry. Each
 * entry is the pixel-count weighted mean of its box.
 */
Palette median_cut_palette(const Image& img, int k);

/// Index of the nearest palette colour (Euclidean RGB, lowest index on ties).
int nearest_palette_index(const Palette& palette, const Eigen::Vector3f& rgb);

/// Sobel gradient magnitude of the luma divided by its maximum (all zero for flat images).
Plane<double> normalized_edge_map(const Image& img);

/// Palette mapping followed by edge darkening: out = colour * (1 - edge_strength * E).
Image cartoonize_with_palette(const Image& img, const Palette& palette, double edge_strength);

Image cartoonize(const Image& img, int palette_size, double edge_strength);

}  // namespace toon

#endif  // TOON_CARTOON_HPP

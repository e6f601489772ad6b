#include "toon/cartoon.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>

#include "toon/features.hpp"
#include "toon/image_ops.hpp"

namespace toon {

namespace {

struct ColorCount {
  std::array<float, 3> rgb;
  long count;
};

using Box = std::vector<ColorCount>;

float channel_range(const Box& box, int c) {
  float lo = box.front().rgb[c], hi = lo;
  for (const auto& e : box) {
    lo = std::min(lo, e.rgb[c]);
    hi = std::max(hi, e.rgb[c]);
  }
  return hi - lo;
}

// Widest channel of a box and its range.
std::pair<int, float> widest_channel(const Box& box) {
  int best = 0;
  float range = channel_range(box, 0);
  for (int c = 1; c < 3; ++c) {
    const float r = channel_range(box, c);
    if (r > range) {
      best = c;
      range = r;
    }
  }
  return {best, range};
}

std::pair<Box, Box> cut_box(Box box, int channel) {
  std::sort(box.begin(), box.end(), [channel](const ColorCount& a, const ColorCount& b) {
    if (a.rgb[channel] != b.rgb[channel]) return a.rgb[channel] < b.rgb[channel];
    return a.rgb < b.rgb;
  });
  long total = 0;
  for (const auto& e : box) total += e.count;

  std::size_t best_split = 0;
  double best_gap = 0.0;
  long left = 0;
  for (std::size_t i = 1; i < box.size(); ++i) {
    left += box[i - 1].count;
    if (box[i].rgb[channel] == box[i - 1].rgb[channel]) continue;
    const double gap = std::abs(2.0 * left - double(total));
    if (best_split == 0 || gap < best_gap) {
      best_split = i;
      best_gap = gap;
    }
  }
  Box lo(box.begin(), box.begin() + static_cast<std::ptrdiff_t>(best_split));
  Box hi(box.begin() + static_cast<std::ptrdiff_t>(best_split), box.end());
  return {std::move(lo), std::move(hi)};
}

Eigen::Vector3f box_mean(const Box& box) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  long n = 0;
  for (const auto& e : box) {
    sum += double(e.count) * Eigen::Vector3d(e.rgb[0], e.rgb[1], e.rgb[2]);
    n += e.count;
  }
  return (sum / double(n)).cast<float>();
}

}  // namespace

Palette median_cut_palette(const Image& img, int k) {
  if (k < 1 || k > 256) throw InvalidArgument("palette size must lie in [1, 256]");
  if (img.channels() != 3) throw InvalidArgument("median cut requires a 3-channel image");

  std::map<std::array<float, 3>, long> histogram;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) ++histogram[{img(x, y, 0), img(x, y, 1), img(x, y, 2)}];

  std::vector<Box> boxes(1);
  for (const auto& [rgb, count] : histogram) boxes.front().push_back({rgb, count});

  while (static_cast<int>(boxes.size()) < k) {
    int target = -1;
    int target_channel = 0;
    float target_range = 0.0f;
    for (std::size_t i = 0; i < boxes.size(); ++i) {
      const auto [channel, range] = widest_channel(boxes[i]);
      if (range > target_range) {
        target = static_cast<int>(i);
        target_channel = channel;
        target_range = range;
      }
    }
    if (target < 0) break;  // every box holds a single colour
    auto [lo, hi] = cut_box(std::move(boxes[target]), target_channel);
    boxes[target] = std::move(lo);
    boxes.insert(boxes.begin() + target + 1, std::move(hi));
  }

  Palette palette;
  for (const auto& b : boxes) palette.colors.push_back(box_mean(b));
  return palette;
}

int nearest_palette_index(const Palette& palette, const Eigen::Vector3f& rgb) {
  int best = 0;
  float best_d = std::numeric_limits<float>::infinity();
  for (std::size_t i = 0; i < palette.colors.size(); ++i) {
    const float d = (palette.colors[i] - rgb).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

Plane<double> normalized_edge_map(const Image& img) {
  const Plane<double> mag = sobel(luma(img)).magnitude();
  const double peak = mag.maxCoeff();
  if (peak <= 0.0) return Plane<double>::Zero(mag.rows(), mag.cols());
  return mag / peak;
}

Image cartoonize_with_palette(const Image& img, const Palette& palette, double edge_strength) {
  if (img.channels() != 3) throw InvalidArgument("cartoonize requires a 3-channel image");
  if (palette.colors.empty()) throw InvalidArgument("empty palette");
  if (!(edge_strength >= 0.0 && edge_strength <= 1.0)) {
    throw InvalidArgument("edge strength must lie in [0, 1]");
  }
  const Plane<double> edges = edge_strength > 0.0 ? normalized_edge_map(img)
                                                  : Plane<double>::Zero(img.height(), img.width());
  Image out(img.width(), img.height(), 3);
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      const Eigen::Vector3f& colour =
          palette.colors[nearest_palette_index(palette, {img(x, y, 0), img(x, y, 1), img(x, y, 2)})];
      const float gain = static_cast<float>(1.0 - edge_strength * edges(y, x));
      for (int c = 0; c < 3; ++c) out(x, y, c) = colour[c] * gain;
    }
  }
  return clamp_to_image(out);
}

Image cartoonize(const Image& img, int palette_size, double edge_strength) {
  if (palette_size < 1) throw InvalidArgument("palette size must be >= 1");
  return cartoonize_with_palette(img, median_cut_palette(img, palette_size), edge_strength);
}

}  // namespace toon

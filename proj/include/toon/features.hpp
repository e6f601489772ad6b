#ifndef TOON_FEATURES_HPP
#define TOON_FEATURES_HPP

#include <vector>

#include "toon/image.hpp"

namespace toon {

enum class Border { mirror, wrap };

struct Gradient {
  Plane<double> gx;
  Plane<double> gy;

  Plane<double> magnitude() const { return (gx.square() + gy.square()).sqrt(); }
};

/// 3x3 Sobel, scaled by 1/8 so a unit step produces a response of at most 1/2 per axis.
Gradient sobel(const Plane<double>& p, Border border = Border::mirror);

/// Separable [1 2 1]/4 blur with mirror borders.
Plane<double> binomial_blur(const Plane<double>& p);

/// 2x2 box average; odd trailing rows/columns are dropped.
Plane<double> downsample2(const Plane<double>& p);

// Feature channels, in column order.
enum FeatureChannel : int { kIntensity = 0, kBlurred, kGradMag, kGradCos, kGradSin, kFeatureChannels };

/// Feature map of one pyramid level: one row per pixel (y * width + x), one column per channel.
struct FeatureMap {
  int width = 0;
  int height = 0;
  Eigen::MatrixXd values;
};

struct FeaturePyramid {
  std::vector<FeatureMap> levels;
};

/// Level 0 is full resolution; each further level halves the luma with a 2x2 box.
FeaturePyramid extract_features(const Image& img, int levels);

}  // namespace toon

#endif  // TOON_FEATURES_HPP

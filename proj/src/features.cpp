#include "toon/features.hpp"

#include <cmath>
#include <string>

#include "toon/image_ops.hpp"
#include "toon/tiler.hpp"

namespace toon {

namespace {

int border_index(int i, int n, Border b) {
  if (b == Border::mirror) return mirror_index(i, n);
  const int m = i % n;
  return m < 0 ? m + n : m;
}

}  // namespace

Gradient sobel(const Plane<double>& p, Border border) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  Gradient g{Plane<double>(h, w), Plane<double>(h, w)};
  for (int y = 0; y < h; ++y) {
    const int ym = border_index(y - 1, h, border), yp = border_index(y + 1, h, border);
    for (int x = 0; x < w; ++x) {
      const int xm = border_index(x - 1, w, border), xp = border_index(x + 1, w, border);
      g.gx(y, x) = ((p(ym, xp) + 2.0 * p(y, xp) + p(yp, xp)) - (p(ym, xm) + 2.0 * p(y, xm) + p(yp, xm))) / 8.0;
      g.gy(y, x) = ((p(yp, xm) + 2.0 * p(yp, x) + p(yp, xp)) - (p(ym, xm) + 2.0 * p(ym, x) + p(ym, xp))) / 8.0;
    }
  }
  return g;
}

Plane<double> binomial_blur(const Plane<double>& p) {
  const int h = static_cast<int>(p.rows());
  const int w = static_cast<int>(p.cols());
  Plane<double> tmp(h, w), out(h, w);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      tmp(y, x) = 0.25 * p(y, mirror_index(x - 1, w)) + 0.5 * p(y, x) + 0.25 * p(y, mirror_index(x + 1, w));
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      out(y, x) = 0.25 * tmp(mirror_index(y - 1, h), x) + 0.5 * tmp(y, x) + 0.25 * tmp(mirror_index(y + 1, h), x);
  return out;
}

Plane<double> downsample2(const Plane<double>& p) {
  const Eigen::Index h = p.rows() / 2, w = p.cols() / 2;
  if (h < 1 || w < 1) throw InvalidArgument("plane too small to downsample");
  Plane<double> out(h, w);
  for (Eigen::Index y = 0; y < h; ++y)
    for (Eigen::Index x = 0; x < w; ++x)
      out(y, x) = 0.25 * (p(2 * y, 2 * x) + p(2 * y, 2 * x + 1) + p(2 * y + 1, 2 * x) + p(2 * y + 1, 2 * x + 1));
  return out;
}

FeaturePyramid extract_features(const Image& img, int levels) {
  if (levels < 1) throw InvalidArgument("feature pyramid needs at least one level");
  if (levels > 30 || std::min(img.width(), img.height()) < (1 << levels)) {
    throw InvalidArgument("image too small for " + std::to_string(levels) + " pyramid levels");
  }
  FeaturePyramid pyr;
  Plane<double> intensity = luma(img);
  for (int level = 0; level < levels; ++level) {
    if (level > 0) intensity = downsample2(intensity);
    const int h = static_cast<int>(intensity.rows());
    const int w = static_cast<int>(intensity.cols());
    const Plane<double> blurred = binomial_blur(intensity);
    const Gradient g = sobel(intensity);
    const Plane<double> mag = g.magnitude();

    FeatureMap map{w, h, Eigen::MatrixXd(Eigen::Index(w) * h, kFeatureChannels)};
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        auto row = map.values.row(Eigen::Index(y) * w + x);
        const double m = mag(y, x);
        row[kIntensity] = intensity(y, x);
        row[kBlurred] = blurred(y, x);
        row[kGradMag] = m;
        row[kGradCos] = m > 1e-12 ? g.gx(y, x) / m : 0.0;
        row[kGradSin] = m > 1e-12 ? g.gy(y, x) / m : 0.0;
      }
    }
    pyr.levels.push_back(std::move(map));
  }
  return pyr;
}

}  // namespace toon

#ifndef TOON_IMAGE_HPP
#define TOON_IMAGE_HPP

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "toon/errors.hpp"

namespace toon {

/// One channel of samples, rows = image height, cols = image width.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/*
 * Planar raster templated on the sample type.
 *
 * Channels are stored as separate row-major planes so that per-channel
 * arithmetic maps onto Eigen array expressions. Two instantiations are used:
 * Image (float, samples in [0,1], what every public image operation returns)
 * and Raster (double, unclamped, used for diffusion intermediates).
 */
template <typename Scalar>
class BasicImage {
 public:
  using scalar_type = Scalar;
  using plane_type = Plane<Scalar>;

  BasicImage() = default;

  BasicImage(int width, int height, int channels, Scalar fill = Scalar(0))
      : width_(width), height_(height) {
    if (width < 1 || height < 1) {
      throw InvalidArgument("image dimensions must be >= 1, got " + std::to_string(width) + "x" +
                            std::to_string(height));
    }
    if (channels != 1 && channels != 3) {
      throw InvalidArgument("image must have 1 or 3 channels, got " + std::to_string(channels));
    }
    planes_.assign(channels, plane_type::Constant(height, width, fill));
  }

  explicit BasicImage(std::vector<plane_type> planes) : planes_(std::move(planes)) {
    if (planes_.size() != 1 && planes_.size() != 3) {
      throw InvalidArgument("image must have 1 or 3 channels");
    }
    height_ = static_cast<int>(planes_.front().rows());
    width_ = static_cast<int>(planes_.front().cols());
    if (width_ < 1 || height_ < 1) throw InvalidArgument("image dimensions must be >= 1");
    for (const auto& p : planes_) {
      if (p.rows() != height_ || p.cols() != width_) {
        throw DimensionMismatch("image planes differ in size");
      }
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return static_cast<int>(planes_.size()); }
  bool empty() const { return planes_.empty(); }
  Eigen::Index samples() const { return Eigen::Index(width_) * height_ * channels(); }

  const plane_type& plane(int c) const { return planes_[c]; }
  plane_type& plane(int c) { return planes_[c]; }
  const std::vector<plane_type>& planes() const { return planes_; }

  Scalar operator()(int x, int y, int c) const { return planes_[c](y, x); }
  Scalar& operator()(int x, int y, int c) { return planes_[c](y, x); }

  bool same_shape(const BasicImage& other) const {
    return width_ == other.width_ && height_ == other.height_ && channels() == other.channels();
  }

  template <typename Other>
  bool same_shape(const BasicImage<Other>& other) const {
    return width_ == other.width() && height_ == other.height() && channels() == other.channels();
  }

  template <typename Other>
  BasicImage<Other> cast() const {
    std::vector<Plane<Other>> out;
    out.reserve(planes_.size());
    for (const auto& p : planes_) out.push_back(p.template cast<Other>());
    return BasicImage<Other>(std::move(out));
  }

  bool operator==(const BasicImage& other) const {
    if (!same_shape(other)) return false;
    for (std::size_t c = 0; c < planes_.size(); ++c) {
      if ((planes_[c] != other.planes_[c]).any()) return false;
    }
    return true;
  }

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<plane_type> planes_;
};

using Image = BasicImage<float>;
using Raster = BasicImage<double>;

/// Clamp every sample into [0,1]; non-finite samples become 0.
template <typename Scalar>
Image clamp_to_image(const BasicImage<Scalar>& in) {
  std::vector<Plane<float>> out;
  out.reserve(in.channels());
  for (const auto& p : in.planes()) {
    Plane<float> q = p.template cast<float>();
    q = q.unaryExpr([](float v) { return std::isfinite(v) ? std::clamp(v, 0.0f, 1.0f) : 0.0f; });
    out.push_back(std::move(q));
  }
  return Image(std::move(out));
}

inline Raster to_raster(const Image& img) { return img.cast<double>(); }

/// Largest absolute per-sample difference; shapes must match.
template <typename A, typename B>
double max_abs_diff(const BasicImage<A>& a, const BasicImage<B>& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("max_abs_diff: shape mismatch");
  double m = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    m = std::max(m, (a.plane(c).template cast<double>() - b.plane(c).template cast<double>())
                        .abs()
                        .maxCoeff());
  }
  return m;
}

// Element-wise raster arithmetic used by the diffusion engine.
template <typename Scalar, typename F>
BasicImage<Scalar> zip_planes(const BasicImage<Scalar>& a, const BasicImage<Scalar>& b, F&& f) {
  if (!a.same_shape(b)) throw DimensionMismatch("raster shapes differ");
  std::vector<Plane<Scalar>> out;
  out.reserve(a.channels());
  for (int c = 0; c < a.channels(); ++c) out.push_back(f(a.plane(c), b.plane(c)));
  return BasicImage<Scalar>(std::move(out));
}

/// Returns alpha * a + beta * b.
template <typename Scalar>
BasicImage<Scalar> axpby(Scalar alpha, const BasicImage<Scalar>& a, Scalar beta,
                         const BasicImage<Scalar>& b) {
  return zip_planes(a, b, [&](const Plane<Scalar>& pa, const Plane<Scalar>& pb) -> Plane<Scalar> {
    return alpha * pa + beta * pb;
  });
}

}  // namespace toon

#endif  // TOON_IMAGE_HPP

#include "toon/image_ops.hpp"

#include <cmath>
#include <limits>

namespace toon {

namespace {

const Eigen::Matrix3d& rgb_to_ycc_matrix() {
  static const Eigen::Matrix3d m = (Eigen::Matrix3d() << 0.299, 0.587, 0.114,  //
                                    -0.168735891647856, -0.331264108352144, 0.5,  //
                                    0.5, -0.418687589158345, -0.081312410841655)
                                       .finished();
  return m;
}

const Eigen::Matrix3d& ycc_to_rgb_matrix() {
  static const Eigen::Matrix3d m = rgb_to_ycc_matrix().inverse();
  return m;
}

Raster apply_color_matrix(const Raster& in, const Eigen::Matrix3d& m, const Eigen::Vector3d& pre,
                          const Eigen::Vector3d& post) {
  if (in.channels() != 3) throw InvalidArgument("color conversion requires 3 channels");
  Raster out(in.width(), in.height(), 3);
  for (int r = 0; r < 3; ++r) {
    out.plane(r) = post[r] + m(r, 0) * (in.plane(0) + pre[0]) + m(r, 1) * (in.plane(1) + pre[1]) +
                   m(r, 2) * (in.plane(2) + pre[2]);
  }
  return out;
}

}  // namespace

Image resize_bilinear(const Image& img, int new_width, int new_height) {
  if (new_width < 1 || new_height < 1) throw InvalidArgument("resize target must be >= 1x1");
  const double sx = double(img.width()) / new_width;
  const double sy = double(img.height()) / new_height;

  struct Tap {
    int i0, i1;
    double f;
  };
  auto taps = [](int out_n, int in_n, double scale) {
    std::vector<Tap> t(out_n);
    for (int o = 0; o < out_n; ++o) {
      double src = (o + 0.5) * scale - 0.5;
      src = std::clamp(src, 0.0, double(in_n - 1));
      const int i0 = static_cast<int>(std::floor(src));
      const int i1 = std::min(i0 + 1, in_n - 1);
      t[o] = {i0, i1, src - i0};
    }
    return t;
  };
  const auto tx = taps(new_width, img.width(), sx);
  const auto ty = taps(new_height, img.height(), sy);

  Image out(new_width, new_height, img.channels());
  for (int c = 0; c < img.channels(); ++c) {
    const auto& p = img.plane(c);
    auto& q = out.plane(c);
    for (int y = 0; y < new_height; ++y) {
      const Tap& a = ty[y];
      for (int x = 0; x < new_width; ++x) {
        const Tap& b = tx[x];
        const double top = (1.0 - b.f) * p(a.i0, b.i0) + b.f * p(a.i0, b.i1);
        const double bot = (1.0 - b.f) * p(a.i1, b.i0) + b.f * p(a.i1, b.i1);
        q(y, x) = static_cast<float>((1.0 - a.f) * top + a.f * bot);
      }
    }
  }
  return clamp_to_image(out);
}

Raster gaussian_raster(int width, int height, int channels, Rng& rng) {
  Raster out(width, height, channels);
  for (int c = 0; c < channels; ++c)
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) out(x, y, c) = rng.gaussian();
  return out;
}

Image add_gaussian_noise(const Image& img, double sigma, Rng& rng) {
  if (!(sigma >= 0.0)) throw InvalidArgument("noise sigma must be >= 0");
  if (sigma == 0.0) return img;
  const Raster noise = gaussian_raster(img.width(), img.height(), img.channels(), rng);
  return clamp_to_image(axpby(1.0, to_raster(img), sigma, noise));
}

double mse(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw DimensionMismatch("mse: images differ in shape");
  double sum = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    sum += (a.plane(c).cast<double>() - b.plane(c).cast<double>()).square().sum();
  }
  return sum / static_cast<double>(a.samples());
}

double psnr(const Image& a, const Image& b) {
  const double e = mse(a, b);
  if (e == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / e);
}

Raster rgb_to_ycbcr(const Raster& img) {
  return apply_color_matrix(img, rgb_to_ycc_matrix(), Eigen::Vector3d::Zero(),
                            Eigen::Vector3d(0.0, 0.5, 0.5));
}

Raster ycbcr_to_rgb(const Raster& img) {
  return apply_color_matrix(img, ycc_to_rgb_matrix(), Eigen::Vector3d(0.0, -0.5, -0.5),
                            Eigen::Vector3d::Zero());
}

Image rgb_to_ycbcr(const Image& img) { return clamp_to_image(rgb_to_ycbcr(to_raster(img))); }

Image ycbcr_to_rgb(const Image& img) { return clamp_to_image(ycbcr_to_rgb(to_raster(img))); }

Plane<double> luma(const Image& img) {
  if (img.channels() == 1) return img.plane(0).cast<double>();
  return 0.299 * img.plane(0).cast<double>() + 0.587 * img.plane(1).cast<double>() +
         0.114 * img.plane(2).cast<double>();
}

}  // namespace toon

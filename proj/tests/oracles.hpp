// Brute-force reference implementations. They share no code with the
// optimised paths they are compared against (padding, box sums, blocked
// matrix products, softmax and normalisation are all re-derived here).
#ifndef TOON_TESTS_ORACLES_HPP
#define TOON_TESTS_ORACLES_HPP

#include <cmath>
#include <vector>

#include "toon/adaattn.hpp"
#include "toon/denoise.hpp"
#include "toon/image_ops.hpp"

namespace toon::testing {

inline int oracle_mirror(int i, int n) {
  // Reflect with edge repetition until inside [0, n).
  while (i < 0 || i >= n) {
    if (i < 0) i = -i - 1;
    if (i >= n) i = 2 * n - 1 - i;
  }
  return i;
}

/// Quadruple loop NLM: for every pixel, every search offset, every template offset.
inline Plane<double> oracle_nlm_plane(const Plane<double>& p, double h, int tw, int sw, double sigma0 = 0.0) {
  const int H = static_cast<int>(p.rows()), W = static_cast<int>(p.cols());
  const int tr = tw / 2, sr = sw / 2;
  auto at = [&](int y, int x) { return p(oracle_mirror(y, H), oracle_mirror(x, W)); };
  Plane<double> out(H, W);
  for (int y = 0; y < H; ++y) {
    for (int x = 0; x < W; ++x) {
      double num = 0.0, den = 0.0;
      for (int qy = y - sr; qy <= y + sr; ++qy) {
        for (int qx = x - sr; qx <= x + sr; ++qx) {
          double d2 = 0.0;
          for (int ty = -tr; ty <= tr; ++ty)
            for (int tx = -tr; tx <= tr; ++tx) {
              const double diff = at(y + ty, x + tx) - at(qy + ty, qx + tx);
              d2 += diff * diff;
            }
          d2 /= double(tw) * tw;
          const double w = std::exp(-std::max(d2 - 2.0 * sigma0 * sigma0, 0.0) / (h * h));
          num += w * at(qy, qx);
          den += w;
        }
      }
      out(y, x) = num / den;
    }
  }
  return out;
}

inline Image oracle_nlm_colored(const Image& img, const NlmParams& prm) {
  Raster ycc = rgb_to_ycbcr(to_raster(img));
  for (int c = 0; c < 3; ++c) {
    ycc.plane(c) = oracle_nlm_plane(ycc.plane(c), c == 0 ? prm.h_luma : prm.h_chroma,
                                    prm.template_window, prm.search_window, prm.sigma0);
  }
  return clamp_to_image(ycbcr_to_rgb(ycc));
}

/// Per-query loops over all key positions.
inline AttentionStats oracle_attention(const Eigen::MatrixXd& q, const Eigen::MatrixXd& k,
                                       const Eigen::MatrixXd& v, double temperature, bool uniform = false) {
  const Eigen::Index nq = q.rows(), nk = k.rows(), cv = v.cols();
  AttentionStats s{Eigen::MatrixXd(nq, cv), Eigen::MatrixXd(nq, cv)};
  std::vector<double> a(nk);
  for (Eigen::Index i = 0; i < nq; ++i) {
    double mx = -1e300;
    for (Eigen::Index j = 0; j < nk; ++j) {
      double dot = 0.0;
      for (Eigen::Index c = 0; c < q.cols(); ++c) dot += q(i, c) * k(j, c);
      a[j] = uniform ? 0.0 : dot / temperature;
      mx = std::max(mx, a[j]);
    }
    double total = 0.0;
    for (Eigen::Index j = 0; j < nk; ++j) total += (a[j] = std::exp(a[j] - mx));
    for (Eigen::Index c = 0; c < cv; ++c) {
      double m = 0.0, e2 = 0.0;
      for (Eigen::Index j = 0; j < nk; ++j) {
        const double w = a[j] / total;
        m += w * v(j, c);
        e2 += w * v(j, c) * v(j, c);
      }
      s.mean(i, c) = m;
      s.std(i, c) = std::sqrt(std::max(e2 - m * m, 0.0));
    }
  }
  return s;
}

/// Column loops: (x - mean) / std with population statistics, zero for flat columns.
inline Eigen::MatrixXd oracle_instance_norm(const Eigen::MatrixXd& f) {
  Eigen::MatrixXd out(f.rows(), f.cols());
  for (Eigen::Index c = 0; c < f.cols(); ++c) {
    double mean = 0.0;
    for (Eigen::Index i = 0; i < f.rows(); ++i) mean += f(i, c);
    mean /= double(f.rows());
    double var = 0.0;
    for (Eigen::Index i = 0; i < f.rows(); ++i) var += (f(i, c) - mean) * (f(i, c) - mean);
    const double sd = std::sqrt(var / double(f.rows()));
    for (Eigen::Index i = 0; i < f.rows(); ++i) out(i, c) = sd > 1e-12 ? (f(i, c) - mean) / sd : 0.0;
  }
  return out;
}

/// Feature rows of one level: 2-D kernels applied directly, no separable passes.
inline Eigen::MatrixXd oracle_level_features(const std::vector<std::vector<double>>& lum) {
  const int h = static_cast<int>(lum.size()), w = static_cast<int>(lum[0].size());
  const double binom[3][3] = {{1, 2, 1}, {2, 4, 2}, {1, 2, 1}};
  const double sx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  Eigen::MatrixXd f(Eigen::Index(w) * h, 5);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double blur = 0.0, gx = 0.0, gy = 0.0;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) {
          const double v = lum[oracle_mirror(y + j - 1, h)][oracle_mirror(x + i - 1, w)];
          blur += binom[j][i] * v / 16.0;
          gx += sx[j][i] * v / 8.0;
          gy += sx[i][j] * v / 8.0;
        }
      const double m = std::sqrt(gx * gx + gy * gy);
      const Eigen::Index r = Eigen::Index(y) * w + x;
      f(r, 0) = lum[y][x];
      f(r, 1) = blur;
      f(r, 2) = m;
      f(r, 3) = m > 1e-12 ? gx / m : 0.0;
      f(r, 4) = m > 1e-12 ? gy / m : 0.0;
    }
  return f;
}

/// Concatenated, instance-normalised features of `levels` box-halved luma levels,
/// each level-L pixel repeated over its 2^L x 2^L block of level-0 pixels.
inline Eigen::MatrixXd oracle_multilevel(const Image& img, int levels) {
  const int w0 = img.width(), h0 = img.height();
  std::vector<std::vector<double>> lum(h0, std::vector<double>(w0));
  for (int y = 0; y < h0; ++y)
    for (int x = 0; x < w0; ++x)
      lum[y][x] = 0.299 * double(img(x, y, 0)) + 0.587 * double(img(x, y, 1)) + 0.114 * double(img(x, y, 2));
  Eigen::MatrixXd out(Eigen::Index(w0) * h0, 5 * levels);
  for (int l = 0; l < levels; ++l) {
    if (l > 0) {
      const int h = static_cast<int>(lum.size()) / 2, w = static_cast<int>(lum[0].size()) / 2;
      std::vector<std::vector<double>> half(h, std::vector<double>(w));
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
          half[y][x] = 0.25 * (lum[2 * y][2 * x] + lum[2 * y][2 * x + 1] + lum[2 * y + 1][2 * x] +
                               lum[2 * y + 1][2 * x + 1]);
      lum = std::move(half);
    }
    const int h = static_cast<int>(lum.size()), w = static_cast<int>(lum[0].size());
    const Eigen::MatrixXd f = oracle_instance_norm(oracle_level_features(lum));
    for (int y = 0; y < h0; ++y)
      for (int x = 0; x < w0; ++x) {
        const int ly = std::min(y >> l, h - 1), lx = std::min(x >> l, w - 1);
        for (int c = 0; c < 5; ++c) out(Eigen::Index(y) * w0 + x, 5 * l + c) = f(Eigen::Index(ly) * w + lx, c);
      }
  }
  return out;
}

/// Whole transfer from the pixels up, with every feature and attention quantity evaluated by loops.
inline Image oracle_adaattn(const Image& content, const Image& style, int levels, double temperature,
                            bool uniform = false) {
  const Eigen::MatrixXd q = oracle_multilevel(content, levels);
  const Eigen::MatrixXd k = oracle_multilevel(style, levels);
  const Raster sy = rgb_to_ycbcr(to_raster(style));
  const Raster cy = rgb_to_ycbcr(to_raster(content));
  Eigen::MatrixXd v(Eigen::Index(style.width()) * style.height(), 3);
  Eigen::MatrixXd cv(Eigen::Index(content.width()) * content.height(), 3);
  for (int c = 0; c < 3; ++c) {
    for (int y = 0; y < style.height(); ++y)
      for (int x = 0; x < style.width(); ++x) v(Eigen::Index(y) * style.width() + x, c) = sy(x, y, c);
    for (int y = 0; y < content.height(); ++y)
      for (int x = 0; x < content.width(); ++x) cv(Eigen::Index(y) * content.width() + x, c) = cy(x, y, c);
  }
  const AttentionStats s = oracle_attention(q, k, v, temperature, uniform);
  const Eigen::MatrixXd cn = oracle_instance_norm(cv);
  Raster out(content.width(), content.height(), 3);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < content.height(); ++y)
      for (int x = 0; x < content.width(); ++x) {
        const Eigen::Index i = Eigen::Index(y) * content.width() + x;
        out(x, y, c) = s.std(i, c) * cn(i, c) + s.mean(i, c);
      }
  return clamp_to_image(ycbcr_to_rgb(out));
}

}  // namespace toon::testing

#endif  // TOON_TESTS_ORACLES_HPP

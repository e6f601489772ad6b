#include "toon/denoise.hpp"

#include <cmath>

#include "toon/image_ops.hpp"

namespace toon {

void NlmParams::validate() const {
  if (!(h_luma > 0.0) || !(h_chroma > 0.0)) throw InvalidArgument("NLM strengths must be > 0");
  if (template_window < 1 || template_window % 2 == 0) {
    throw InvalidArgument("NLM template window must be odd and >= 1");
  }
  if (search_window < 1 || search_window % 2 == 0) {
    throw InvalidArgument("NLM search window must be odd and >= 1");
  }
  if (search_window < template_window) {
    throw InvalidArgument("NLM search window must not be smaller than the template window");
  }
  if (!(sigma0 >= 0.0)) throw InvalidArgument("NLM sigma0 must be >= 0");
}

namespace {

// Sums of every `size` x `size` window of `src` (valid region only). Direct
// separable summation, so windows of zeros sum to exactly zero.
Plane<double> box_sums(const Plane<double>& src, int size) {
  const Eigen::Index rows = src.rows() - size + 1;
  const Eigen::Index cols = src.cols() - size + 1;
  Plane<double> vertical = src.topRows(rows);
  for (int k = 1; k < size; ++k) vertical += src.middleRows(k, rows);
  Plane<double> out = vertical.leftCols(cols);
  for (int k = 1; k < size; ++k) out += vertical.middleCols(k, cols);
  return out;
}

}  // namespace

Plane<double> nlm_denoise_plane(const Plane<double>& plane, double h, int template_window,
                                int search_window, double sigma0) {
  NlmParams check{h, h, template_window, search_window, sigma0};
  check.validate();
  const int height = static_cast<int>(plane.rows());
  const int width = static_cast<int>(plane.cols());
  if (height < template_window || width < template_window) {
    throw InvalidArgument("image is smaller than the NLM template window");
  }
  const int tr = template_window / 2;
  const int sr = search_window / 2;
  const int pad = sr + tr;

  Plane<double> padded(height + 2 * pad, width + 2 * pad);
  for (int i = 0; i < padded.rows(); ++i)
    for (int j = 0; j < padded.cols(); ++j)
      padded(i, j) = plane(mirror_index(i - pad, height), mirror_index(j - pad, width));

  const double inv_h2 = 1.0 / (h * h);
  const double floor2 = 2.0 * sigma0 * sigma0;
  const double inv_area = 1.0 / (double(template_window) * template_window);
  const int span_r = height + 2 * tr;
  const int span_c = width + 2 * tr;
  const auto centre = padded.block(sr, sr, span_r, span_c);

  Plane<double> num = Plane<double>::Zero(height, width);
  Plane<double> den = Plane<double>::Zero(height, width);
  for (int dy = -sr; dy <= sr; ++dy) {
    for (int dx = -sr; dx <= sr; ++dx) {
      const Plane<double> diff2 = (centre - padded.block(sr + dy, sr + dx, span_r, span_c)).square();
      const Plane<double> d2 = box_sums(diff2, template_window) * inv_area;
      const Plane<double> w = (-(d2 - floor2).max(0.0) * inv_h2).exp();
      num += w * padded.block(pad + dy, pad + dx, height, width);
      den += w;
    }
  }
  return num / den;
}

Image nlm_denoise_colored(const Image& img, const NlmParams& params) {
  params.validate();
  if (img.channels() != 3) throw InvalidArgument("colour NLM requires a 3-channel image");
  if (img.width() < params.template_window || img.height() < params.template_window) {
    throw InvalidArgument("image is smaller than the NLM template window");
  }
  Raster ycc = rgb_to_ycbcr(to_raster(img));
  for (int c = 0; c < 3; ++c) {
    const double h = c == 0 ? params.h_luma : params.h_chroma;
    ycc.plane(c) = nlm_denoise_plane(ycc.plane(c), h, params.template_window, params.search_window,
                                     params.sigma0);
  }
  return clamp_to_image(ycbcr_to_rgb(ycc));
}

DenoiseBackend parse_denoise_backend(const std::string& name) {
  if (name == "none") return DenoiseBackend::none;
  if (name == "nlm") return DenoiseBackend::nlm;
  if (name == "tiled-nlm") return DenoiseBackend::tiled_nlm;
  throw InvalidArgument("unknown denoise backend '" + name + "' (expected none, nlm or tiled-nlm)");
}

std::string to_string(DenoiseBackend b) {
  switch (b) {
    case DenoiseBackend::none: return "none";
    case DenoiseBackend::nlm: return "nlm";
    case DenoiseBackend::tiled_nlm: return "tiled-nlm";
  }
  return "none";
}

Image denoise_stage(const Image& img, const DenoiseStage& stage) {
  switch (stage.backend) {
    case DenoiseBackend::none:
      return img;
    case DenoiseBackend::nlm:
      return nlm_denoise_colored(img, stage.nlm);
    case DenoiseBackend::tiled_nlm:
      return process_tiled(
          img, [&](const Image& tile) { return nlm_denoise_colored(tile, stage.nlm); }, stage.tiling);
  }
  throw InvalidArgument("unknown denoise backend");
}

}  // namespace toon

#ifndef TOON_DENOISE_HPP
#define TOON_DENOISE_HPP

#include <string>

#include "toon/image.hpp"
#include "toon/tiler.hpp"

namespace toon {

/// Fast non-local means parameters. Strengths are in [0,1] sample units
/// (OpenCV's h = 3 on 8-bit data corresponds to 3/255 here).
struct NlmParams {
  double h_luma = 3.0 / 255.0;
  double h_chroma = 3.0 / 255.0;
  int template_window = 7;
  int search_window = 21;
  double sigma0 = 0.0;

  void validate() const;
};

/*
 * Non-local means on a single plane.
 *
 * out(p) = sum_q w(p,q) v(q) / sum_q w(p,q) over the search window centred at p,
 * with w(p,q) = exp(-max(d2 - 2 sigma0^2, 0) / h^2) and d2 the mean squared
 * difference of the template patches around p and q. Both windows read the
 * plane through symmetric (mirror) padding.
 */
Plane<double> nlm_denoise_plane(const Plane<double>& plane, double h, int template_window,
                                int search_window, double sigma0 = 0.0);

/// Colour NLM: luma and the two chroma planes of full-range YCbCr are denoised separately.
Image nlm_denoise_colored(const Image& img, const NlmParams& params = {});

enum class DenoiseBackend { none, nlm, tiled_nlm };

DenoiseBackend parse_denoise_backend(const std::string& name);
std::string to_string(DenoiseBackend b);

struct DenoiseStage {
  DenoiseBackend backend = DenoiseBackend::none;
  NlmParams nlm;
  TileParams tiling;
};

/// Post-processing denoiser dispatch. tiled_nlm runs NLM independently on each tile.
Image denoise_stage(const Image& img, const DenoiseStage& stage);

}  // namespace toon

#endif  // TOON_DENOISE_HPP

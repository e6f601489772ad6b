#ifndef TOON_STYLIZE_HPP
#define TOON_STYLIZE_HPP

#include <cstdint>

#include "json.hpp"
#include "toon/adaattn.hpp"
#include "toon/cartoon.hpp"
#include "toon/denoise.hpp"
#include "toon/diffusion.hpp"
#include "toon/features.hpp"
#include "toon/image.hpp"

namespace toon {

inline constexpr int kColorBins = 8;  // per channel, 8 x 8 x 8 joint histogram
inline constexpr int kOrientationBins = 36;
inline constexpr int kEmbeddingDim = kColorBins * kColorBins * kColorBins + kOrientationBins;

/*
 * Deterministic image descriptor used as the style embedding.
 *
 * A 512-bin joint RGB histogram followed by a 36-bin gradient-orientation
 * histogram (Sobel on luma with wrap-around borders, magnitude weighted,
 * linearly split between the two nearest 10-degree bin centres). Each block is
 * L1-normalised, then the concatenation is L2-normalised. Every entry is >= 0
 * and the result is invariant to circular shifts of the image.
 */
StyleEmbedding style_embed(const Image& style);

struct StylizeConfig {
  double strength = 0.6;  // t_star = round(strength * T), clamped to [1, T]
  int steps = 10;
  int palette_size = 16;
  double edge_strength = 0.5;
  DenoiseStage post_denoise;
  std::uint64_t seed = 0;
  NoiseSchedule schedule = NoiseSchedule::linear(50, 1e-4, 0.02);

  void validate() const;
};

/// Strict: unknown keys are rejected.
void to_json(nlohmann::json& j, const StylizeConfig& cfg);
void from_json(const nlohmann::json& j, StylizeConfig& cfg);

/*
 * Diffusion-based stylisation.
 *
 * The synthesis target is the content cartoonised with a median-cut palette
 * taken from the style image. The content is stochastically inverted at
 * t_star toward that target and synthesised back with the style embedding as
 * conditioning, then passed through the configured post-denoiser.
 */
Image inst_stylize(const Image& content, const Image& style, const StylizeConfig& cfg);

}  // namespace toon

#endif  // TOON_STYLIZE_HPP

#include "toon/stylize.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "toon/image_ops.hpp"

namespace toon {

StyleEmbedding style_embed(const Image& style) {
  if (style.channels() != 3) throw InvalidArgument("style embedding requires a 3-channel image");

  Eigen::VectorXd colour = Eigen::VectorXd::Zero(kColorBins * kColorBins * kColorBins);
  auto bin = [](float v) { return std::min(static_cast<int>(v * kColorBins), kColorBins - 1); };
  for (int y = 0; y < style.height(); ++y) {
    for (int x = 0; x < style.width(); ++x) {
      const int idx = (bin(style(x, y, 0)) * kColorBins + bin(style(x, y, 1))) * kColorBins +
                      bin(style(x, y, 2));
      colour[idx] += 1.0;
    }
  }

  Eigen::VectorXd orient = Eigen::VectorXd::Zero(kOrientationBins);
  const Gradient g = sobel(luma(style), Border::wrap);
  const double bin_width = 2.0 * std::numbers::pi / kOrientationBins;
  for (int y = 0; y < style.height(); ++y) {
    for (int x = 0; x < style.width(); ++x) {
      const double gx = g.gx(y, x), gy = g.gy(y, x);
      const double mag = std::hypot(gx, gy);
      if (mag <= 0.0) continue;
      double theta = std::atan2(gy, gx);
      if (theta < 0.0) theta += 2.0 * std::numbers::pi;
      const double pos = theta / bin_width;
      const double base = std::floor(pos);
      const double frac = pos - base;
      const int b0 = static_cast<int>(base) % kOrientationBins;
      orient[b0] += (1.0 - frac) * mag;
      orient[(b0 + 1) % kOrientationBins] += frac * mag;
    }
  }

  StyleEmbedding e(kEmbeddingDim);
  const double colour_sum = colour.sum();
  const double orient_sum = orient.sum();
  e.head(colour.size()) = colour_sum > 0.0 ? Eigen::VectorXd(colour / colour_sum) : colour;
  e.tail(orient.size()) = orient_sum > 0.0 ? Eigen::VectorXd(orient / orient_sum) : orient;
  return e / e.norm();
}

void StylizeConfig::validate() const {
  if (!(strength >= 0.0 && strength <= 1.0)) throw InvalidArgument("strength must lie in [0, 1]");
  if (steps < 1) throw InvalidArgument("steps must be >= 1");
  if (palette_size < 1 || palette_size > 256) throw InvalidArgument("palette_size must lie in [1, 256]");
  if (!(edge_strength >= 0.0 && edge_strength <= 1.0)) {
    throw InvalidArgument("edge_strength must lie in [0, 1]");
  }
  if (schedule.steps() < 1) throw InvalidArgument("schedule is not initialised");
  post_denoise.nlm.validate();
  if (post_denoise.tiling.tile < 1 || post_denoise.tiling.overlap < 0 ||
      post_denoise.tiling.overlap >= post_denoise.tiling.tile) {
    throw InvalidArgument("tiling requires tile >= 1 and 0 <= overlap < tile");
  }
}

void to_json(nlohmann::json& j, const StylizeConfig& cfg) {
  const NlmParams& nlm = cfg.post_denoise.nlm;
  j = nlohmann::json{
      {"strength", cfg.strength},
      {"steps", cfg.steps},
      {"palette_size", cfg.palette_size},
      {"edge_strength", cfg.edge_strength},
      {"post_denoise", to_string(cfg.post_denoise.backend)},
      {"nlm",
       {{"h_luma", nlm.h_luma},
        {"h_chroma", nlm.h_chroma},
        {"template_window", nlm.template_window},
        {"search_window", nlm.search_window},
        {"sigma0", nlm.sigma0}}},
      {"tile", cfg.post_denoise.tiling.tile},
      {"overlap", cfg.post_denoise.tiling.overlap},
      {"window", to_string(cfg.post_denoise.tiling.window)},
      {"seed", cfg.seed},
      {"schedule", cfg.schedule},
  };
}

namespace {

void reject_unknown_keys(const nlohmann::json& j, const std::set<std::string>& known,
                         const std::string& where) {
  if (!j.is_object()) throw InvalidArgument(where + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (!known.contains(item.key())) {
      throw InvalidArgument("unknown key '" + item.key() + "' in " + where);
    }
  }
}

template <typename T>
void read_if_present(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void from_json(const nlohmann::json& j, StylizeConfig& cfg) {
  reject_unknown_keys(j,
                      {"strength", "steps", "palette_size", "edge_strength", "post_denoise", "nlm",
                       "tile", "overlap", "window", "seed", "schedule"},
                      "stylize config");
  read_if_present(j, "strength", cfg.strength);
  read_if_present(j, "steps", cfg.steps);
  read_if_present(j, "palette_size", cfg.palette_size);
  read_if_present(j, "edge_strength", cfg.edge_strength);
  if (j.contains("post_denoise")) {
    cfg.post_denoise.backend = parse_denoise_backend(j.at("post_denoise").get<std::string>());
  }
  if (j.contains("nlm")) {
    const auto& n = j.at("nlm");
    reject_unknown_keys(n, {"h_luma", "h_chroma", "template_window", "search_window", "sigma0"},
                        "nlm config");
    NlmParams& p = cfg.post_denoise.nlm;
    read_if_present(n, "h_luma", p.h_luma);
    read_if_present(n, "h_chroma", p.h_chroma);
    read_if_present(n, "template_window", p.template_window);
    read_if_present(n, "search_window", p.search_window);
    read_if_present(n, "sigma0", p.sigma0);
  }
  read_if_present(j, "tile", cfg.post_denoise.tiling.tile);
  read_if_present(j, "overlap", cfg.post_denoise.tiling.overlap);
  if (j.contains("window")) {
    cfg.post_denoise.tiling.window = parse_blend_window(j.at("window").get<std::string>());
  }
  read_if_present(j, "seed", cfg.seed);
  if (j.contains("schedule")) {
    reject_unknown_keys(j.at("schedule"), {"T", "beta_start", "beta_end", "kind"}, "schedule");
    cfg.schedule = j.at("schedule").get<NoiseSchedule>();
  }
}

Image inst_stylize(const Image& content, const Image& style, const StylizeConfig& cfg) {
  cfg.validate();
  if (content.channels() != 3 || style.channels() != 3) {
    throw InvalidArgument("stylisation requires 3-channel images");
  }
  const StyleEmbedding embedding = style_embed(style);
  const Palette palette = median_cut_palette(style, cfg.palette_size);
  const Image target = cartoonize_with_palette(content, palette, cfg.edge_strength);

  const NoiseSchedule& sched = cfg.schedule;
  const int t_star = strength_to_timestep(cfg.strength, sched.steps());
  const NoisePredictor predictor = target_predictor(to_raster(target), sched);
  Rng rng(cfg.seed);
  const Inversion inv = stochastic_inversion(content, t_star, sched, predictor, rng);
  const std::vector<int> steps = make_step_list(t_star, cfg.steps);
  const Image synthesized = synthesize(inv.x_init, embedding, predictor, sched, steps);
  return denoise_stage(synthesized, cfg.post_denoise);
}

}  // namespace toon

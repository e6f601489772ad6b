#ifndef TOON_DIFFUSION_HPP
#define TOON_DIFFUSION_HPP

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "toon/image.hpp"
#include "toon/rng.hpp"

namespace toon {

/*
 * Variance-preserving noise schedule.
 *
 * Timesteps run 1..T. beta(t) is the per-step variance, alpha(t) = 1 - beta(t)
 * and alpha_bar(t) = prod_{s<=t} alpha(s), accumulated in double precision,
 * with alpha_bar(0) = 1.
 */
class NoiseSchedule {
 public:
  NoiseSchedule() = default;

  /// beta linear from beta_start (t = 1) to beta_end (t = T), both inclusive.
  static NoiseSchedule linear(int steps, double beta_start, double beta_end);

  int steps() const { return steps_; }
  double beta_start() const { return beta_start_; }
  double beta_end() const { return beta_end_; }

  double beta(int t) const;
  double alpha(int t) const { return 1.0 - beta(t); }
  double alpha_bar(int t) const;

  const Eigen::VectorXd& alpha_bars() const { return alpha_bar_; }

 private:
  int steps_ = 0;
  double beta_start_ = 0.0;
  double beta_end_ = 0.0;
  Eigen::VectorXd beta_;       // index t-1
  Eigen::VectorXd alpha_bar_;  // index t, alpha_bar_[0] = 1
};

inline NoiseSchedule make_linear_schedule(int steps, double beta_start, double beta_end) {
  return NoiseSchedule::linear(steps, beta_start, beta_end);
}

/// {"T": int, "beta_start": real, "beta_end": real, "kind": "linear"}
void to_json(nlohmann::json& j, const NoiseSchedule& s);
void from_json(const nlohmann::json& j, NoiseSchedule& s);

/// Style conditioning vector; finite entries, L2 norm <= 1.
using StyleEmbedding = Eigen::VectorXd;

/// eps_hat = predictor(x_t, t, style). Must return a raster shaped like x_t.
using NoisePredictor =
    std::function<Raster(const Raster& x_t, int t, const std::optional<StyleEmbedding>& style)>;

/// x_t = sqrt(alpha_bar(t)) x0 + sqrt(1 - alpha_bar(t)) eps.
Raster q_sample(const Raster& x0, int t, const Raster& eps, const NoiseSchedule& sched);

/// Deterministic (eta = 0) reverse step from t to t_prev < t.
Raster ddim_step(const Raster& x_t, const Raster& eps_hat, int t, int t_prev,
                 const NoiseSchedule& sched);

/// The noise that would have produced x_t from a known clean image.
NoisePredictor target_predictor(Raster target, const NoiseSchedule& sched);

/// Predicts zero noise everywhere.
NoisePredictor zero_predictor();

struct Inversion {
  Raster x_init;    // sqrt(ab) content + sqrt(1 - ab) eps_pred
  Raster eps_pred;  // predictor output at t_star
};

/*
 * Stochastic inversion of a content image at timestep t_star.
 *
 * Draws eps ~ N(0,1) from rng, forms x_t = q_sample(content, t_star, eps),
 * asks the predictor for the noise without style conditioning and rebuilds the
 * starting point of synthesis from the predicted noise.
 */
Inversion stochastic_inversion(const Image& content, int t_star, const NoiseSchedule& sched,
                               const NoisePredictor& predictor, Rng& rng);

/// Iterated ddim_step over `steps` (strictly decreasing, ending at 0), then clamped.
Image synthesize(const Raster& x_init, const std::optional<StyleEmbedding>& style,
                 const NoisePredictor& predictor, const NoiseSchedule& sched,
                 std::span<const int> steps);

/// count evenly spaced steps from t_start down to 0 (count + 1 timesteps, duplicates dropped).
std::vector<int> make_step_list(int t_start, int count);

/// round(strength * T) clamped into [1, T]; strength must lie in [0, 1].
int strength_to_timestep(double strength, int total_steps);

}  // namespace toon

#endif  // TOON_DIFFUSION_HPP

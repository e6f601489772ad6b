#include "toon/diffusion.hpp"

#include <cmath>
#include <string>

#include "toon/image_ops.hpp"

namespace toon {

NoiseSchedule NoiseSchedule::linear(int steps, double beta_start, double beta_end) {
  if (steps < 1) throw InvalidArgument("schedule needs at least one timestep");
  if (!(beta_start > 0.0) || !(beta_start <= beta_end) || !(beta_end < 1.0)) {
    throw InvalidArgument("schedule requires 0 < beta_start <= beta_end < 1");
  }
  NoiseSchedule s;
  s.steps_ = steps;
  s.beta_start_ = beta_start;
  s.beta_end_ = beta_end;
  s.beta_.resize(steps);
  for (int i = 0; i < steps; ++i) {
    const double f = steps == 1 ? 0.0 : double(i) / double(steps - 1);
    s.beta_[i] = beta_start + (beta_end - beta_start) * f;
  }
  s.alpha_bar_.resize(steps + 1);
  s.alpha_bar_[0] = 1.0;
  for (int t = 1; t <= steps; ++t) s.alpha_bar_[t] = s.alpha_bar_[t - 1] * (1.0 - s.beta_[t - 1]);
  return s;
}

double NoiseSchedule::beta(int t) const {
  if (t < 1 || t > steps_) throw InvalidArgument("timestep " + std::to_string(t) + " out of range");
  return beta_[t - 1];
}

double NoiseSchedule::alpha_bar(int t) const {
  if (t < 0 || t > steps_) throw InvalidArgument("timestep " + std::to_string(t) + " out of range");
  return alpha_bar_[t];
}

void to_json(nlohmann::json& j, const NoiseSchedule& s) {
  j = nlohmann::json{{"T", s.steps()},
                     {"beta_start", s.beta_start()},
                     {"beta_end", s.beta_end()},
                     {"kind", "linear"}};
}

void from_json(const nlohmann::json& j, NoiseSchedule& s) {
  const std::string kind = j.value("kind", std::string("linear"));
  if (kind != "linear") throw InvalidArgument("unsupported schedule kind '" + kind + "'");
  s = NoiseSchedule::linear(j.at("T").get<int>(), j.at("beta_start").get<double>(),
                            j.at("beta_end").get<double>());
}

Raster q_sample(const Raster& x0, int t, const Raster& eps, const NoiseSchedule& sched) {
  if (t < 1 || t > sched.steps()) throw InvalidArgument("q_sample: timestep out of range");
  if (!x0.same_shape(eps)) throw DimensionMismatch("q_sample: x0 and eps differ in shape");
  const double ab = sched.alpha_bar(t);
  return axpby(std::sqrt(ab), x0, std::sqrt(1.0 - ab), eps);
}

Raster ddim_step(const Raster& x_t, const Raster& eps_hat, int t, int t_prev,
                 const NoiseSchedule& sched) {
  if (!(0 <= t_prev && t_prev < t && t <= sched.steps())) {
    throw InvalidArgument("ddim_step requires 0 <= t_prev < t <= T (got t=" + std::to_string(t) +
                          ", t_prev=" + std::to_string(t_prev) + ")");
  }
  if (!x_t.same_shape(eps_hat)) throw DimensionMismatch("ddim_step: x_t and eps_hat differ in shape");
  const double ab = sched.alpha_bar(t);
  const double ab_prev = sched.alpha_bar(t_prev);
  const Raster x0_hat = axpby(1.0 / std::sqrt(ab), x_t, -std::sqrt(1.0 - ab) / std::sqrt(ab), eps_hat);
  if (t_prev == 0) return x0_hat;
  return axpby(std::sqrt(ab_prev), x0_hat, std::sqrt(1.0 - ab_prev), eps_hat);
}

NoisePredictor target_predictor(Raster target, const NoiseSchedule& sched) {
  return [target = std::move(target), sched](const Raster& x_t, int t,
                                             const std::optional<StyleEmbedding>&) {
    const double ab = sched.alpha_bar(t);
    const double s = std::sqrt(1.0 - ab);
    return axpby(1.0 / s, x_t, -std::sqrt(ab) / s, target);
  };
}

NoisePredictor zero_predictor() {
  return [](const Raster& x_t, int, const std::optional<StyleEmbedding>&) {
    return Raster(x_t.width(), x_t.height(), x_t.channels(), 0.0);
  };
}

namespace {

Raster predict_checked(const NoisePredictor& predictor, const Raster& x_t, int t,
                       const std::optional<StyleEmbedding>& style) {
  Raster eps = predictor(x_t, t, style);
  if (!eps.same_shape(x_t)) throw DimensionMismatch("noise predictor changed the raster shape");
  return eps;
}

}  // namespace

Inversion stochastic_inversion(const Image& content, int t_star, const NoiseSchedule& sched,
                               const NoisePredictor& predictor, Rng& rng) {
  if (t_star < 1 || t_star > sched.steps()) {
    throw InvalidArgument("stochastic_inversion: t_star out of range");
  }
  const Raster x0 = to_raster(content);
  const Raster eps = gaussian_raster(content.width(), content.height(), content.channels(), rng);
  const Raster x_t = q_sample(x0, t_star, eps, sched);
  Inversion out;
  out.eps_pred = predict_checked(predictor, x_t, t_star, std::nullopt);
  out.x_init = q_sample(x0, t_star, out.eps_pred, sched);
  return out;
}

Image synthesize(const Raster& x_init, const std::optional<StyleEmbedding>& style,
                 const NoisePredictor& predictor, const NoiseSchedule& sched,
                 std::span<const int> steps) {
  if (steps.empty()) throw InvalidArgument("synthesize: empty step list");
  if (steps.back() != 0) throw InvalidArgument("synthesize: step list must end at 0");
  if (steps.front() > sched.steps()) throw InvalidArgument("synthesize: first step exceeds T");
  for (std::size_t i = 1; i < steps.size(); ++i) {
    if (steps[i] >= steps[i - 1]) throw InvalidArgument("synthesize: steps must strictly decrease");
  }
  Raster x = x_init;
  for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
    const Raster eps_hat = predict_checked(predictor, x, steps[i], style);
    x = ddim_step(x, eps_hat, steps[i], steps[i + 1], sched);
  }
  return clamp_to_image(x);
}

std::vector<int> make_step_list(int t_start, int count) {
  if (t_start < 1) throw InvalidArgument("step list must start at t >= 1");
  if (count < 1) throw InvalidArgument("step count must be >= 1");
  std::vector<int> steps;
  for (int i = 0; i <= count; ++i) {
    const int t = static_cast<int>(std::lround(double(t_start) * (count - i) / count));
    if (steps.empty() || t < steps.back()) steps.push_back(t);
  }
  return steps;
}

int strength_to_timestep(double strength, int total_steps) {
  if (!(strength >= 0.0 && strength <= 1.0)) throw InvalidArgument("strength must lie in [0, 1]");
  if (total_steps < 1) throw InvalidArgument("schedule needs at least one timestep");
  const long t = std::lround(strength * total_steps);
  return static_cast<int>(std::clamp<long>(t, 1, total_steps));
}

}  // namespace toon

#include "doctest.h"

#include "fixtures.hpp"
#include "oracles.hpp"
#include "toon/denoise.hpp"
#include "toon/image_ops.hpp"
#include "toon/tiler.hpp"

using namespace toon;
using namespace toon::testing;

TEST_CASE("NlmParams defaults and validation") {
  const NlmParams p;
  CHECK(p.h_luma == 3.0 / 255.0);
  CHECK(p.h_chroma == 3.0 / 255.0);
  CHECK(p.template_window == 7);
  CHECK(p.search_window == 21);
  CHECK_NOTHROW(p.validate());

  NlmParams even = p;
  even.template_window = 6;
  CHECK_THROWS_AS(even.validate(), InvalidArgument);
  NlmParams narrow = p;
  narrow.search_window = 5;
  CHECK_THROWS_AS(narrow.validate(), InvalidArgument);
  NlmParams zero_h = p;
  zero_h.h_chroma = 0.0;
  CHECK_THROWS_AS(zero_h.validate(), InvalidArgument);
}

TEST_CASE("NLM leaves constant images untouched") {
  const Image flat = constant_image(20, 20, 0.3f, 0.6f, 0.9f);
  CHECK(nlm_denoise_colored(flat) == flat);
  NlmParams strong;
  strong.h_luma = strong.h_chroma = 0.5;
  CHECK(nlm_denoise_colored(flat, strong) == flat);
}

TEST_CASE("NLM with a 1-pixel search window is the identity") {
  const Image img = random_image(16, 12, 5);
  NlmParams p;
  p.template_window = 1;
  p.search_window = 1;
  CHECK(max_abs_diff(nlm_denoise_colored(img, p), img) < 1e-6);
}

TEST_CASE("NLM errors") {
  CHECK_THROWS_AS(nlm_denoise_colored(Image(16, 16, 1)), InvalidArgument);
  CHECK_THROWS_AS(nlm_denoise_colored(Image(6, 16, 3)), InvalidArgument);
}

TEST_CASE("fast NLM equals the quadruple-loop oracle") {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Image img = random_image(14 + 3 * int(seed), 11 + 2 * int(seed), 100 + seed);
    NlmParams p;
    p.h_luma = 0.1;
    p.h_chroma = 0.05;
    p.template_window = 3 + 2 * int(seed % 2);
    p.search_window = 9;
    CHECK(max_abs_diff(nlm_denoise_colored(img, p), oracle_nlm_colored(img, p)) <= 1e-6);
  }
  SUBCASE("plane level with a noise floor") {
    const Image img = random_image(12, 12, 7, 1);
    const Plane<double> p = img.plane(0).cast<double>();
    const Plane<double> fast = nlm_denoise_plane(p, 0.2, 5, 7, 0.05);
    const Plane<double> slow = oracle_nlm_plane(p, 0.2, 5, 7, 0.05);
    CHECK((fast - slow).abs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("NLM output stays inside the search neighbourhood range") {
  const Image img = random_image(20, 20, 11, 1);
  const Plane<double> p = img.plane(0).cast<double>();
  const int sw = 5;
  const Plane<double> out = nlm_denoise_plane(p, 0.3, 3, sw);
  for (int y = 0; y < 20; ++y)
    for (int x = 0; x < 20; ++x) {
      double lo = 1.0, hi = 0.0;
      for (int dy = -sw / 2; dy <= sw / 2; ++dy)
        for (int dx = -sw / 2; dx <= sw / 2; ++dx) {
          const double v = p(mirror_index(y + dy, 20), mirror_index(x + dx, 20));
          lo = std::min(lo, v);
          hi = std::max(hi, v);
        }
      CHECK(out(y, x) >= lo - 1e-12);
      CHECK(out(y, x) <= hi + 1e-12);
    }
}

TEST_CASE("NLM strength extremes") {
  const Image img = random_image(16, 16, 21, 1);
  const Plane<double> p = img.plane(0).cast<double>();
  SUBCASE("h -> 0 returns the input") {
    CHECK((nlm_denoise_plane(p, 1e-6, 3, 7) - p).abs().maxCoeff() < 1e-3);
  }
  SUBCASE("h -> infinity returns the search-window mean") {
    const Plane<double> out = nlm_denoise_plane(p, 1e6, 3, 7);
    for (int y = 0; y < 16; ++y)
      for (int x = 0; x < 16; ++x) {
        double sum = 0.0;
        for (int dy = -3; dy <= 3; ++dy)
          for (int dx = -3; dx <= 3; ++dx) sum += p(oracle_mirror(y + dy, 16), oracle_mirror(x + dx, 16));
        CHECK(std::abs(out(y, x) - sum / 49.0) < 1e-3);
      }
  }
}

TEST_CASE("NLM improves PSNR on the piecewise-constant fixture") {
  // Gain measured with the oracle (h = 15/255, 7/21 windows): 11.0428 dB.
  const Image clean = piecewise_constant(64);
  Rng rng(2024);
  const Image noisy = add_gaussian_noise(clean, 25.0 / 255.0, rng);
  NlmParams p;
  p.h_luma = p.h_chroma = 15.0 / 255.0;
  const Image out = nlm_denoise_colored(noisy, p);
  const double gain = psnr(out, clean) - psnr(noisy, clean);
  CHECK(gain >= 2.0);
  CHECK(std::abs(gain - 11.0428) <= 0.2);
}

TEST_CASE("denoise_stage dispatch") {
  const Image img = random_image(24, 24, 3);
  CHECK(denoise_stage(img, {}) == img);

  DenoiseStage nlm;
  nlm.backend = DenoiseBackend::nlm;
  const Image flat = constant_image(24, 24, 0.1f, 0.5f, 0.7f);
  CHECK(denoise_stage(flat, nlm) == flat);

  CHECK(parse_denoise_backend("tiled-nlm") == DenoiseBackend::tiled_nlm);
  CHECK(to_string(DenoiseBackend::nlm) == "nlm");
  CHECK_THROWS_AS(parse_denoise_backend("dncnn"), InvalidArgument);
}

TEST_CASE("tiled NLM backend equals process_tiled with NLM bit-exactly") {
  const Image clean = piecewise_constant(96);
  Rng rng(8);
  const Image noisy = add_gaussian_noise(clean, 0.08, rng);
  DenoiseStage stage;
  stage.backend = DenoiseBackend::tiled_nlm;
  stage.nlm.h_luma = stage.nlm.h_chroma = 0.06;
  stage.tiling = {48, 16, BlendWindow::hann};
  const Image via_stage = denoise_stage(noisy, stage);
  const Image direct = process_tiled(
      noisy, [&](const Image& t) { return nlm_denoise_colored(t, stage.nlm); }, 48, 16, BlendWindow::hann);
  CHECK(via_stage == direct);
}

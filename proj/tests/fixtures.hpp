// Synthetic images and scratch directories shared by the test binaries.
#ifndef TOON_TESTS_FIXTURES_HPP
#define TOON_TESTS_FIXTURES_HPP

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <string>

#include "toon/image.hpp"
#include "toon/rng.hpp"
#include "toon/video.hpp"

namespace toon::testing {

inline Image random_image(int w, int h, std::uint64_t seed, int channels = 3) {
  Rng rng(seed);
  Image img(w, h, channels);
  for (int c = 0; c < channels; ++c)
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) img(x, y, c) = static_cast<float>(rng.uniform());
  return img;
}

inline Image constant_image(int w, int h, float r, float g, float b) {
  Image img(w, h, 3);
  img.plane(0).setConstant(r);
  img.plane(1).setConstant(g);
  img.plane(2).setConstant(b);
  return img;
}

/// Four flat quadrants with distinct colours.
inline Image quadrant_image(int size) {
  const float colours[4][3] = {{0.2f, 0.3f, 0.7f}, {0.8f, 0.6f, 0.2f}, {0.3f, 0.7f, 0.3f}, {0.6f, 0.2f, 0.5f}};
  Image img(size, size, 3);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const int q = (y >= size / 2 ? 2 : 0) + (x >= size / 2 ? 1 : 0);
      for (int c = 0; c < 3; ++c) img(x, y, c) = colours[q][c];
    }
  return img;
}

/// Flat background, a rectangle and a disc: a piecewise-constant scene.
inline Image piecewise_constant(int size) {
  Image img = constant_image(size, size, 0.25f, 0.35f, 0.55f);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      if (x >= size / 8 && x < size / 2 && y >= size / 8 && y < size * 5 / 8) {
        img(x, y, 0) = 0.85f, img(x, y, 1) = 0.7f, img(x, y, 2) = 0.3f;
      }
      const double dx = x - size * 0.68, dy = y - size * 0.62;
      if (dx * dx + dy * dy < (size * 0.22) * (size * 0.22)) {
        img(x, y, 0) = 0.2f, img(x, y, 1) = 0.65f, img(x, y, 2) = 0.3f;
      }
    }
  return img;
}

/// Horizontal ramp from 0 to 1 replicated in every channel.
inline Image horizontal_gradient(int w, int h) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) img(x, y, c) = static_cast<float>(x) / static_cast<float>(w - 1);
  return img;
}

/// Value `lo` left of column `edge`, `hi` from it on.
inline Image vertical_step(int w, int h, int edge, float lo, float hi) {
  Image img(w, h, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c) img(x, y, c) = x < edge ? lo : hi;
  return img;
}

/*
 * Structured scene number `k`: oriented stripes, a disc and a few flat
 * colours chosen from the seed. Different k give clearly different layouts
 * and palettes.
 */
inline Image scene(int size, int k) {
  Rng rng(1000 + static_cast<std::uint64_t>(k));
  const double angle = std::numbers::pi * rng.uniform();
  const double period = 6.0 + 14.0 * rng.uniform();
  float a[3], b[3], d[3];
  for (int c = 0; c < 3; ++c) {
    a[c] = static_cast<float>(0.1 + 0.8 * rng.uniform());
    b[c] = static_cast<float>(0.1 + 0.8 * rng.uniform());
    d[c] = static_cast<float>(0.1 + 0.8 * rng.uniform());
  }
  const double cx = size * (0.3 + 0.4 * rng.uniform());
  const double cy = size * (0.3 + 0.4 * rng.uniform());
  const double r = size * (0.15 + 0.15 * rng.uniform());
  Image img(size, size, 3);
  for (int y = 0; y < size; ++y)
    for (int x = 0; x < size; ++x) {
      const double u = x * std::cos(angle) + y * std::sin(angle);
      const bool stripe = std::fmod(u / period + 1000.0, 1.0) < 0.5;
      const bool disc = (x - cx) * (x - cx) + (y - cy) * (y - cy) < r * r;
      for (int c = 0; c < 3; ++c) img(x, y, c) = disc ? d[c] : (stripe ? a[c] : b[c]);
    }
  return img;
}

/// Slow global fade of a gradient, `n` frames.
inline FrameSequence fade_sequence(int size, int n, float from = 0.2f, float to = 0.6f) {
  FrameSequence seq;
  const Image base = horizontal_gradient(size, size);
  for (int i = 0; i < n; ++i) {
    const float level = from + (to - from) * static_cast<float>(i) / static_cast<float>(std::max(1, n - 1));
    Image f = base;
    for (int c = 0; c < 3; ++c) f.plane(c) = 0.5f * f.plane(c) + level * 0.5f;
    seq.frames.push_back(std::move(f));
  }
  return seq;
}

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    Rng rng(std::hash<std::string>{}(tag) ^ static_cast<std::uint64_t>(
        std::chrono::steady_clock::now().time_since_epoch().count()));
    path_ = std::filesystem::temp_directory_path() / ("toon-" + tag + "-" + std::to_string(rng.next_u64() % 1000000007));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace toon::testing

#endif  // TOON_TESTS_FIXTURES_HPP

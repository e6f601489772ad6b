#ifndef TOON_IMAGE_OPS_HPP
#define TOON_IMAGE_OPS_HPP

#include "toon/image.hpp"
#include "toon/rng.hpp"

namespace toon {

/// Bilinear resampling with half-pixel-centre alignment and edge clamping.
Image resize_bilinear(const Image& img, int new_width, int new_height);

/// clamp(img + sigma * N(0,1)) per sample; draws samples plane by plane, row-major.
Image add_gaussian_noise(const Image& img, double sigma, Rng& rng);

/// Gaussian raster of the given shape drawn from rng (same draw order as add_gaussian_noise).
Raster gaussian_raster(int width, int height, int channels, Rng& rng);

double mse(const Image& a, const Image& b);

/// 10 log10(1 / mse); +infinity for identical images.
double psnr(const Image& a, const Image& b);

// Full-range BT.601. Chroma planes are offset by 0.5 so all three live in [0,1].
Image rgb_to_ycbcr(const Image& img);
Image ycbcr_to_rgb(const Image& img);

/// Unclamped variants on double planes, used internally where a round trip must be exact.
Raster rgb_to_ycbcr(const Raster& img);
Raster ycbcr_to_rgb(const Raster& img);

/// BT.601 luma of an RGB image (a one-channel image of a one-channel input).
Plane<double> luma(const Image& img);

}  // namespace toon

#endif  // TOON_IMAGE_OPS_HPP

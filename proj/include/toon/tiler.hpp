#ifndef TOON_TILER_HPP
#define TOON_TILER_HPP

#include <functional>
#include <string>
#include <vector>

#include "toon/image.hpp"

namespace toon {

enum class BlendWindow { rect, linear, hann };

BlendWindow parse_blend_window(const std::string& name);
std::string to_string(BlendWindow w);

/// Per-tile blend weights, tile x tile, strictly positive.
///
/// rect is all ones. linear and hann ramp up over the first `overlap` pixels of
/// each side and down over the last `overlap` (linear or raised-cosine ramp),
/// sampled at pixel centres, so that the weights of two tiles overlapping by
/// exactly `overlap` pixels sum to one across the band.
Plane<double> make_blend_window(BlendWindow kind, int tile, int overlap);

struct TileGrid {
  int tile = 0;
  int stride = 0;
  int width = 0;  // original image size
  int height = 0;
  int padded_width = 0;
  int padded_height = 0;
  std::vector<Eigen::Vector2i> origins;  // (x, y), row-major order
  Plane<double> window;

  int overlap() const { return tile - stride; }
  int tiles_x() const { return (padded_width - tile) / stride + 1; }
  int tiles_y() const { return (padded_height - tile) / stride + 1; }
};

struct TileSplit {
  TileGrid grid;
  std::vector<Image> tiles;
};

/// Symmetric (mirror) index: ... 2 1 0 | 0 1 2 ... n-1 | n-1 n-2 ...
int mirror_index(int i, int n);

/// Smallest padded length >= max(n, tile) whose excess over tile is a multiple of stride.
int padded_length(int n, int tile, int stride);

/// Mirror-pads on the right and bottom, then cuts tile x tile crops every `stride` pixels.
TileSplit split_tiles(const Image& img, int tile, int stride,
                      BlendWindow window = BlendWindow::rect);

/// Window-weighted average of the tiles, cropped back to the original size.
Image merge_tiles(const TileGrid& grid, const std::vector<Image>& tiles);

/// Normalised blend weight of every padded pixel, summed over tiles (ideally 1 everywhere).
Plane<double> normalized_weight_sum(const TileGrid& grid);

using TileOp = std::function<Image(const Image&)>;

struct TileParams {
  int tile = 48;
  int overlap = 16;
  BlendWindow window = BlendWindow::hann;
};

/// split -> op on each tile (in grid order) -> merge.
Image process_tiled(const Image& img, const TileOp& op, int tile, int overlap, BlendWindow window);
inline Image process_tiled(const Image& img, const TileOp& op, const TileParams& p) {
  return process_tiled(img, op, p.tile, p.overlap, p.window);
}

/*
 * Excess edge response on tile boundary lines.
 *
 * For each orientation, the mean absolute difference between neighbouring
 * columns (rows) straddling x = k * pitch (y = k * pitch), minus the mean over
 * all other neighbouring column (row) pairs, floored at zero. The result is the
 * sum of the two orientations. Differences are averaged over channels.
 */
double seam_energy(const Image& img, int pitch);

}  // namespace toon

#endif  // TOON_TILER_HPP

#include "toon/tiler.hpp"

#include <cmath>
#include <numbers>

namespace toon {

BlendWindow parse_blend_window(const std::string& name) {
  if (name == "rect") return BlendWindow::rect;
  if (name == "linear") return BlendWindow::linear;
  if (name == "hann") return BlendWindow::hann;
  throw InvalidArgument("unknown blend window '" + name + "' (expected rect, linear or hann)");
}

std::string to_string(BlendWindow w) {
  switch (w) {
    case BlendWindow::rect: return "rect";
    case BlendWindow::linear: return "linear";
    case BlendWindow::hann: return "hann";
  }
  return "rect";
}

Plane<double> make_blend_window(BlendWindow kind, int tile, int overlap) {
  if (tile < 1) throw InvalidArgument("tile size must be >= 1");
  if (overlap < 0 || overlap >= tile) throw InvalidArgument("overlap must lie in [0, tile)");
  Eigen::ArrayXd w = Eigen::ArrayXd::Ones(tile);
  if (kind != BlendWindow::rect && overlap > 0) {
    for (int i = 0; i < tile; ++i) {
      const double ramp = std::min({1.0, (i + 0.5) / overlap, (tile - i - 0.5) / overlap});
      if (kind == BlendWindow::linear) {
        w[i] = ramp;
      } else {
        const double s = std::sin(0.5 * std::numbers::pi * ramp);
        w[i] = s * s;
      }
    }
  }
  return (w.matrix() * w.matrix().transpose()).array();
}

int mirror_index(int i, int n) {
  if (n == 1) return 0;
  const int period = 2 * n;
  int m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

int padded_length(int n, int tile, int stride) {
  const int base = std::max(n, tile);
  const int excess = base - tile;
  return tile + (excess + stride - 1) / stride * stride;
}

TileSplit split_tiles(const Image& img, int tile, int stride, BlendWindow window) {
  if (tile < 1) throw InvalidArgument("tile size must be >= 1");
  if (stride < 1 || stride > tile) throw InvalidArgument("stride must lie in [1, tile]");

  TileSplit out;
  TileGrid& g = out.grid;
  g.tile = tile;
  g.stride = stride;
  g.width = img.width();
  g.height = img.height();
  g.padded_width = padded_length(img.width(), tile, stride);
  g.padded_height = padded_length(img.height(), tile, stride);
  g.window = make_blend_window(window, tile, tile - stride);

  for (int ty = 0; ty < g.tiles_y(); ++ty)
    for (int tx = 0; tx < g.tiles_x(); ++tx) g.origins.emplace_back(tx * stride, ty * stride);

  out.tiles.reserve(g.origins.size());
  for (const auto& o : g.origins) {
    Image t(tile, tile, img.channels());
    for (int c = 0; c < img.channels(); ++c)
      for (int y = 0; y < tile; ++y) {
        const int sy = mirror_index(o.y() + y, img.height());
        for (int x = 0; x < tile; ++x) t(x, y, c) = img(mirror_index(o.x() + x, img.width()), sy, c);
      }
    out.tiles.push_back(std::move(t));
  }
  return out;
}

Plane<double> normalized_weight_sum(const TileGrid& grid) {
  Plane<double> den = Plane<double>::Zero(grid.padded_height, grid.padded_width);
  for (const auto& o : grid.origins) den.block(o.y(), o.x(), grid.tile, grid.tile) += grid.window;
  Plane<double> sum = Plane<double>::Zero(grid.padded_height, grid.padded_width);
  for (const auto& o : grid.origins) {
    sum.block(o.y(), o.x(), grid.tile, grid.tile) +=
        grid.window / den.block(o.y(), o.x(), grid.tile, grid.tile);
  }
  return sum;
}

Image merge_tiles(const TileGrid& grid, const std::vector<Image>& tiles) {
  if (tiles.size() != grid.origins.size()) {
    throw DimensionMismatch("merge_tiles: expected " + std::to_string(grid.origins.size()) +
                            " tiles, got " + std::to_string(tiles.size()));
  }
  if (tiles.empty()) throw DimensionMismatch("merge_tiles: no tiles");
  const int channels = tiles.front().channels();
  for (const auto& t : tiles) {
    if (t.width() != grid.tile || t.height() != grid.tile || t.channels() != channels) {
      throw DimensionMismatch("merge_tiles: tile size does not match grid");
    }
  }

  Plane<double> den = Plane<double>::Zero(grid.padded_height, grid.padded_width);
  for (const auto& o : grid.origins) den.block(o.y(), o.x(), grid.tile, grid.tile) += grid.window;

  Image out(grid.width, grid.height, channels);
  for (int c = 0; c < channels; ++c) {
    Plane<double> num = Plane<double>::Zero(grid.padded_height, grid.padded_width);
    for (std::size_t i = 0; i < tiles.size(); ++i) {
      const auto& o = grid.origins[i];
      num.block(o.y(), o.x(), grid.tile, grid.tile) += grid.window * tiles[i].plane(c).cast<double>();
    }
    out.plane(c) = (num / den).topLeftCorner(grid.height, grid.width).cast<float>();
  }
  return clamp_to_image(out);
}

Image process_tiled(const Image& img, const TileOp& op, int tile, int overlap, BlendWindow window) {
  if (tile < 1) throw InvalidArgument("tile size must be >= 1");
  if (overlap < 0 || overlap >= tile) throw InvalidArgument("overlap must lie in [0, tile)");
  TileSplit split = split_tiles(img, tile, tile - overlap, window);
  for (auto& t : split.tiles) {
    Image processed = op(t);
    if (!processed.same_shape(t)) {
      throw DimensionMismatch("tile operator changed the tile shape");
    }
    t = std::move(processed);
  }
  return merge_tiles(split.grid, split.tiles);
}

double seam_energy(const Image& img, int pitch) {
  if (pitch < 2 || pitch >= std::max(img.width(), img.height())) {
    throw InvalidArgument("seam pitch must lie in [2, max(width, height))");
  }
  // Boundary k separates samples k-1 and k along one axis.
  auto excess = [&](bool along_x) {
    const int n = along_x ? img.width() : img.height();
    double seam_sum = 0.0, bg_sum = 0.0;
    long seam_count = 0, bg_count = 0;
    for (int c = 0; c < img.channels(); ++c) {
      const Plane<double> p = img.plane(c).cast<double>();
      for (int k = 1; k < n; ++k) {
        const double s = along_x ? (p.col(k) - p.col(k - 1)).abs().sum()
                                 : (p.row(k) - p.row(k - 1)).abs().sum();
        const long cnt = along_x ? p.rows() : p.cols();
        if (k % pitch == 0) {
          seam_sum += s;
          seam_count += cnt;
        } else {
          bg_sum += s;
          bg_count += cnt;
        }
      }
    }
    if (seam_count == 0) return 0.0;
    const double seam = seam_sum / seam_count;
    const double bg = bg_count > 0 ? bg_sum / bg_count : 0.0;
    return std::max(0.0, seam - bg);
  };
  return excess(true) + excess(false);
}

}  // namespace toon

#include "toon/adaattn.hpp"

#include <cmath>

#include "toon/image_ops.hpp"

namespace toon {

namespace {
constexpr double kStdFloor = 1e-12;
constexpr Eigen::Index kQueryBlock = 256;
}  // namespace

Eigen::RowVectorXd column_mean(const Eigen::MatrixXd& f) { return f.colwise().mean(); }

Eigen::RowVectorXd column_std(const Eigen::MatrixXd& f) {
  const Eigen::RowVectorXd mu = column_mean(f);
  return ((f.rowwise() - mu).array().square().colwise().mean()).sqrt().matrix();
}

Eigen::MatrixXd instance_normalize(const Eigen::MatrixXd& features) {
  const Eigen::RowVectorXd mu = column_mean(features);
  const Eigen::RowVectorXd sd = column_std(features);
  Eigen::MatrixXd out = features.rowwise() - mu;
  for (Eigen::Index c = 0; c < out.cols(); ++c) {
    if (sd[c] > kStdFloor) {
      out.col(c) /= sd[c];
    } else {
      out.col(c).setZero();
    }
  }
  return out;
}

AttentionStats attention_statistics(const Eigen::MatrixXd& query, const Eigen::MatrixXd& key,
                                    const Eigen::MatrixXd& value, double temperature,
                                    AttentionMode mode) {
  if (!(temperature > 0.0)) throw InvalidArgument("attention temperature must be > 0");
  if (query.cols() != key.cols()) throw DimensionMismatch("query and key widths differ");
  if (key.rows() != value.rows()) throw DimensionMismatch("key and value counts differ");
  if (key.rows() == 0) throw InvalidArgument("attention needs at least one key");

  const Eigen::MatrixXd value_sq = value.array().square().matrix();
  AttentionStats out{Eigen::MatrixXd(query.rows(), value.cols()),
                     Eigen::MatrixXd(query.rows(), value.cols())};

  if (mode == AttentionMode::uniform) {
    const Eigen::RowVectorXd m = value.colwise().mean();
    const Eigen::RowVectorXd e2 = value_sq.colwise().mean();
    const Eigen::RowVectorXd s = (e2.array() - m.array().square()).max(0.0).sqrt().matrix();
    out.mean.rowwise() = m;
    out.std.rowwise() = s;
    return out;
  }

  for (Eigen::Index start = 0; start < query.rows(); start += kQueryBlock) {
    const Eigen::Index n = std::min(kQueryBlock, query.rows() - start);
    Eigen::MatrixXd logits = (query.middleRows(start, n) * key.transpose()) / temperature;
    const Eigen::VectorXd row_max = logits.rowwise().maxCoeff();
    Eigen::MatrixXd attn = (logits.colwise() - row_max).array().exp().matrix();
    const Eigen::VectorXd row_sum = attn.rowwise().sum();
    attn = attn.array().colwise() / row_sum.array();

    const Eigen::MatrixXd m = attn * value;
    const Eigen::MatrixXd e2 = attn * value_sq;
    out.mean.middleRows(start, n) = m;
    out.std.middleRows(start, n) = (e2.array() - m.array().square()).max(0.0).sqrt().matrix();
  }
  return out;
}

Eigen::MatrixXd multilevel_features(const FeaturePyramid& pyramid) {
  if (pyramid.levels.empty()) throw InvalidArgument("empty feature pyramid");
  const FeatureMap& base = pyramid.levels.front();
  const Eigen::Index n = Eigen::Index(base.width) * base.height;
  const Eigen::Index levels = static_cast<Eigen::Index>(pyramid.levels.size());
  Eigen::MatrixXd out(n, levels * kFeatureChannels);
  for (Eigen::Index l = 0; l < levels; ++l) {
    const FeatureMap& level = pyramid.levels[l];
    const Eigen::MatrixXd normalized = instance_normalize(level.values);
    for (int y = 0; y < base.height; ++y) {
      const int ly = std::min(y >> l, level.height - 1);
      for (int x = 0; x < base.width; ++x) {
        const int lx = std::min(x >> l, level.width - 1);
        out.block(Eigen::Index(y) * base.width + x, l * kFeatureChannels, 1, kFeatureChannels) =
            normalized.row(Eigen::Index(ly) * level.width + lx);
      }
    }
  }
  return out;
}

Eigen::MatrixXd planes_as_rows(const Raster& r) {
  Eigen::MatrixXd out(Eigen::Index(r.width()) * r.height(), r.channels());
  for (int c = 0; c < r.channels(); ++c) {
    // Row-major planes flatten in y * width + x order.
    out.col(c) = Eigen::Map<const Eigen::VectorXd>(r.plane(c).data(), out.rows());
  }
  return out;
}

Raster rows_as_planes(const Eigen::MatrixXd& rows, int width, int height) {
  if (rows.rows() != Eigen::Index(width) * height) throw DimensionMismatch("row count != width * height");
  Raster out(width, height, static_cast<int>(rows.cols()));
  for (int c = 0; c < out.channels(); ++c) {
    Eigen::Map<Eigen::VectorXd>(out.plane(c).data(), rows.rows()) = rows.col(c);
  }
  return out;
}

Image adaattn_transfer(const Image& content, const Image& style, const AdaAttnOptions& options) {
  if (content.channels() != 3 || style.channels() != 3) {
    throw InvalidArgument("AdaAttN transfer requires 3-channel images");
  }
  if (!(options.temperature > 0.0)) throw InvalidArgument("attention temperature must be > 0");
  if (options.levels < 1) throw InvalidArgument("AdaAttN needs at least one level");
  const int min_side = 1 << std::min(options.levels, 30);
  if (std::min(content.width(), content.height()) < min_side ||
      std::min(style.width(), style.height()) < min_side) {
    throw InvalidArgument("images must be at least 2^levels pixels on each side");
  }

  Image keys_img = style;
  const double pixels = double(style.width()) * style.height();
  if (options.max_keys > 0 && pixels > options.max_keys) {
    const double scale = std::sqrt(options.max_keys / pixels);
    const int w = std::max(min_side, static_cast<int>(std::floor(style.width() * scale)));
    const int h = std::max(min_side, static_cast<int>(std::floor(style.height() * scale)));
    keys_img = resize_bilinear(style, w, h);
  }

  const Eigen::MatrixXd query = multilevel_features(extract_features(content, options.levels));
  const Eigen::MatrixXd key = multilevel_features(extract_features(keys_img, options.levels));
  const Eigen::MatrixXd value = planes_as_rows(rgb_to_ycbcr(to_raster(keys_img)));
  const Eigen::MatrixXd content_ycc = planes_as_rows(rgb_to_ycbcr(to_raster(content)));

  const AttentionStats stats = attention_statistics(query, key, value, options.temperature, options.mode);
  const Eigen::MatrixXd out =
      (stats.std.array() * instance_normalize(content_ycc).array() + stats.mean.array()).matrix();
  return clamp_to_image(ycbcr_to_rgb(rows_as_planes(out, content.width(), content.height())));
}

Image adaattn_transfer(const Image& content, const Image& style, int levels, double temperature) {
  AdaAttnOptions options;
  options.levels = levels;
  options.temperature = temperature;
  return adaattn_transfer(content, style, options);
}

}  // namespace toon

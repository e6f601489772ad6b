#ifndef TOON_ADAATTN_HPP
#define TOON_ADAATTN_HPP

#include "toon/features.hpp"
#include "toon/image.hpp"

namespace toon {

/// Column-wise instance normalisation: (f - mean) / std; constant columns map to 0.
Eigen::MatrixXd instance_normalize(const Eigen::MatrixXd& features);

/// Per-column population mean and standard deviation.
Eigen::RowVectorXd column_mean(const Eigen::MatrixXd& f);
Eigen::RowVectorXd column_std(const Eigen::MatrixXd& f);

/// Attention-weighted statistics of `value` rows, one row per query.
struct AttentionStats {
  Eigen::MatrixXd mean;  // M = A V
  Eigen::MatrixXd std;   // S = sqrt(max(A (V*V) - M*M, 0))
};

enum class AttentionMode { softmax, uniform };

/*
 * A = softmax(query key^T / temperature) over key rows (uniform mode replaces A
 * with 1 / key_count). Queries are processed in blocks so memory stays
 * O(block * keys).
 */
AttentionStats attention_statistics(const Eigen::MatrixXd& query, const Eigen::MatrixXd& key,
                                    const Eigen::MatrixXd& value, double temperature,
                                    AttentionMode mode = AttentionMode::softmax);

/// Instance-normalised features of every pyramid level, nearest-upsampled to level 0 and
/// concatenated: one row per level-0 pixel, kFeatureChannels * levels columns.
Eigen::MatrixXd multilevel_features(const FeaturePyramid& pyramid);

/// Pixel planes as a (pixels x channels) matrix and back.
Eigen::MatrixXd planes_as_rows(const Raster& r);
Raster rows_as_planes(const Eigen::MatrixXd& rows, int width, int height);

struct AdaAttnOptions {
  int levels = 3;
  double temperature = 1.0;
  AttentionMode mode = AttentionMode::softmax;
  // Styles with more pixels are bilinearly reduced to at most this many keys.
  int max_keys = 4096;
};

/*
 * Attention-weighted adaptive normalisation.
 *
 * Queries and keys are the multilevel features of content and style. The
 * values are the style pixels in full-range YCbCr; the output pixel is
 * S * instance_norm(content YCbCr) + M, converted back to RGB and clamped.
 */
Image adaattn_transfer(const Image& content, const Image& style, const AdaAttnOptions& options);
Image adaattn_transfer(const Image& content, const Image& style, int levels, double temperature);

}  // namespace toon

#endif  // TOON_ADAATTN_HPP

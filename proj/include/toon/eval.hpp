#ifndef TOON_EVAL_HPP
#define TOON_EVAL_HPP

#include <chrono>
#include <functional>
#include <string>
#include <vector>

#include "json.hpp"
#include "toon/image.hpp"

namespace toon {

struct Embedding {
  Eigen::VectorXd values;  // unit L2 norm
  std::string source;      // "builtin" or "remote:<model>"
};

/// Same descriptor as style_embed; D = 548, non-negative, unit norm.
Embedding embed_builtin(const Image& img);

/// Dot product of the two unit vectors, clamped into [-1, 1].
double cosine_similarity(const Embedding& a, const Embedding& b);

class RemoteError : public Error {
 public:
  using Error::Error;
};
/// No complete response within the timeout.
class RemoteTimeout : public RemoteError {
 public:
  using RemoteError::RemoteError;
};
class RemoteHttpStatus : public RemoteError {
 public:
  RemoteHttpStatus(int status, const std::string& what) : RemoteError(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};
/// Response body is not the expected JSON document.
class RemoteMalformed : public RemoteError {
 public:
  using RemoteError::RemoteError;
};
/// Declared "dim" disagrees with the embedding length (or the vector is unusable).
class RemoteDimMismatch : public RemoteError {
 public:
  using RemoteError::RemoteError;
};

/*
 * POST the PNG-encoded image to {endpoint}/embed and parse
 * {"embedding": [...], "dim": n, "model": "..."}. The vector is re-normalised
 * to unit length. No retries.
 */
Embedding embed_remote(const std::string& endpoint, const Image& img,
                       std::chrono::milliseconds timeout = std::chrono::seconds(30));

/// GET {endpoint}/healthz; returns the reported model name.
std::string remote_health(const std::string& endpoint,
                          std::chrono::milliseconds timeout = std::chrono::seconds(5));

using Embedder = std::function<Embedding(const Image&)>;

struct SimilarityRow {
  std::string label;
  double gen_style = 0.0;
  double gen_content = 0.0;
};

struct SimilarityReport {
  std::string method;
  std::string embedder;
  std::vector<SimilarityRow> rows;

  /// Aligned table with 4-decimal cells, one "ImgN" row per image.
  std::string render_table() const;
};

void to_json(nlohmann::json& j, const SimilarityReport& r);
void from_json(const nlohmann::json& j, SimilarityReport& r);

/// Row i = {"Img<i+1>", cos(gen_i, style_i), cos(gen_i, content_i)}.
SimilarityReport similarity_report(const std::vector<Image>& generated,
                                   const std::vector<Image>& styles,
                                   const std::vector<Image>& contents, const Embedder& embedder,
                                   const std::string& embedder_name = "builtin",
                                   const std::string& method = "");

}  // namespace toon

#endif  // TOON_EVAL_HPP

#include "toon/eval.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "httplib.h"
#include "toon/image_io.hpp"
#include "toon/stylize.hpp"

namespace toon {

Embedding embed_builtin(const Image& img) { return {style_embed(img), "builtin"}; }

double cosine_similarity(const Embedding& a, const Embedding& b) {
  if (a.values.size() != b.values.size()) {
    throw DimensionMismatch("embedding dimensions differ: " + std::to_string(a.values.size()) +
                            " vs " + std::to_string(b.values.size()));
  }
  return std::clamp(a.values.dot(b.values), -1.0, 1.0);
}

namespace {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // prefix without trailing slash
};

Endpoint split_endpoint(const std::string& url) {
  const auto scheme = url.find("://");
  if (scheme == std::string::npos || url.compare(0, scheme, "http") != 0) {
    throw InvalidArgument("endpoint must be an http:// URL: " + url);
  }
  const auto slash = url.find('/', scheme + 3);
  Endpoint e;
  e.base = url.substr(0, slash);
  e.path = slash == std::string::npos ? "" : url.substr(slash);
  while (!e.path.empty() && e.path.back() == '/') e.path.pop_back();
  return e;
}

httplib::Client make_client(const Endpoint& e, std::chrono::milliseconds timeout) {
  httplib::Client cli(e.base);
  cli.set_connection_timeout(timeout);
  cli.set_read_timeout(timeout);
  cli.set_write_timeout(timeout);
  return cli;
}

[[noreturn]] void throw_transport(httplib::Error err, const std::string& url,
                                  std::chrono::milliseconds timeout) {
  if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
    throw RemoteTimeout("no response from " + url + " within " + std::to_string(timeout.count()) +
                        " ms");
  }
  throw RemoteError("request to " + url + " failed: " + httplib::to_string(err));
}

}  // namespace

Embedding embed_remote(const std::string& endpoint, const Image& img,
                       std::chrono::milliseconds timeout) {
  const Endpoint e = split_endpoint(endpoint);
  auto cli = make_client(e, timeout);
  const auto png = encode_png(img);
  const std::string url = e.base + e.path + "/embed";
  auto res = cli.Post(e.path + "/embed", reinterpret_cast<const char*>(png.data()), png.size(),
                      "image/png");
  if (!res) throw_transport(res.error(), url, timeout);
  if (res->status != 200) {
    throw RemoteHttpStatus(res->status, "embedding service returned HTTP " + std::to_string(res->status));
  }

  nlohmann::json body;
  try {
    body = nlohmann::json::parse(res->body);
  } catch (const nlohmann::json::parse_error& ex) {
    throw RemoteMalformed(std::string("embedding response is not JSON: ") + ex.what());
  }
  if (!body.is_object() || !body.contains("embedding") || !body["embedding"].is_array() ||
      !body.contains("dim") || !body["dim"].is_number_integer()) {
    throw RemoteMalformed("embedding response lacks 'embedding' array or integer 'dim'");
  }
  const auto& arr = body["embedding"];
  const long dim = body["dim"].get<long>();
  if (dim != static_cast<long>(arr.size())) {
    throw RemoteDimMismatch("embedding response declares dim " + std::to_string(dim) + " but carries " +
                            std::to_string(arr.size()) + " values");
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw RemoteMalformed("embedding contains a non-numeric entry");
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  }
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw RemoteDimMismatch("embedding vector is zero or not finite");
  }
  const std::string model =
      body.contains("model") && body["model"].is_string() ? body["model"].get<std::string>() : "unknown";
  return {v / norm, "remote:" + model};
}

std::string remote_health(const std::string& endpoint, std::chrono::milliseconds timeout) {
  const Endpoint e = split_endpoint(endpoint);
  auto cli = make_client(e, timeout);
  auto res = cli.Get(e.path + "/healthz");
  if (!res) throw_transport(res.error(), e.base + e.path + "/healthz", timeout);
  if (res->status != 200) {
    throw RemoteHttpStatus(res->status, "health check returned HTTP " + std::to_string(res->status));
  }
  try {
    const auto body = nlohmann::json::parse(res->body);
    if (body.at("status").get<std::string>() != "ok") throw RemoteMalformed("service not ok");
    return body.at("model").get<std::string>();
  } catch (const nlohmann::json::exception& ex) {
    throw RemoteMalformed(std::string("malformed health response: ") + ex.what());
  }
}

namespace {

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string pad_left(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

std::string pad_right(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string SimilarityReport::render_table() const {
  const std::string style_head = "Generated & Style Img";
  const std::string content_head = "Generated & Content Img";
  std::size_t label_w = 4;
  for (const auto& r : rows) label_w = std::max(label_w, r.label.size());

  std::ostringstream out;
  if (!method.empty()) out << method << "\n";
  out << pad_right("", label_w) << "  " << style_head << "  " << content_head << "\n";
  for (const auto& r : rows) {
    out << pad_right(r.label, label_w) << "  " << pad_left(fixed4(r.gen_style), style_head.size())
        << "  " << pad_left(fixed4(r.gen_content), content_head.size()) << "\n";
  }
  return out.str();
}

void to_json(nlohmann::json& j, const SimilarityReport& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"label", row.label}, {"gen_style", row.gen_style}, {"gen_content", row.gen_content}});
  }
  j = nlohmann::json{{"method", r.method}, {"embedder", r.embedder}, {"rows", rows}};
}

void from_json(const nlohmann::json& j, SimilarityReport& r) {
  r.method = j.at("method").get<std::string>();
  r.embedder = j.at("embedder").get<std::string>();
  r.rows.clear();
  for (const auto& row : j.at("rows")) {
    r.rows.push_back({row.at("label").get<std::string>(), row.at("gen_style").get<double>(),
                      row.at("gen_content").get<double>()});
  }
}

SimilarityReport similarity_report(const std::vector<Image>& generated,
                                   const std::vector<Image>& styles,
                                   const std::vector<Image>& contents, const Embedder& embedder,
                                   const std::string& embedder_name, const std::string& method) {
  if (generated.empty()) throw InvalidArgument("similarity report needs at least one image");
  if (generated.size() != styles.size() || generated.size() != contents.size()) {
    throw DimensionMismatch("generated, style and content lists differ in length");
  }
  SimilarityReport report;
  report.method = method;
  report.embedder = embedder_name;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const Embedding g = embedder(generated[i]);
    report.rows.push_back({"Img" + std::to_string(i + 1), cosine_similarity(g, embedder(styles[i])),
                           cosine_similarity(g, embedder(contents[i]))});
  }
  return report;
}

}  // namespace toon

#include "cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>

#include "CLI11.hpp"
#include "toon/adaattn.hpp"
#include "toon/cartoon.hpp"
#include "toon/denoise.hpp"
#include "toon/eval.hpp"
#include "toon/image_io.hpp"
#include "toon/image_ops.hpp"
#include "toon/stylize.hpp"
#include "toon/tiler.hpp"
#include "toon/video.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace toon::cli {

void PipelineConfig::validate() const {
  stylize.validate();
  if (levels < 1 || levels > 8) throw InvalidArgument("levels must lie in [1, 8]");
  if (!(temperature > 0.0)) throw InvalidArgument("temperature must be > 0");
  if (smoothing != "none" && smoothing != "ema") {
    throw InvalidArgument("smoothing must be 'none' or 'ema'");
  }
  if (!(ema_alpha > 0.0 && ema_alpha <= 1.0)) throw InvalidArgument("ema_alpha must lie in (0, 1]");
}

void to_json(json& j, const PipelineConfig& cfg) {
  j = cfg.stylize;
  j["levels"] = cfg.levels;
  j["temperature"] = cfg.temperature;
  j["smoothing"] = cfg.smoothing;
  j["ema_alpha"] = cfg.ema_alpha;
}

void from_json(const json& j, PipelineConfig& cfg) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  json rest = j;
  auto take = [&](const char* key, auto& out) {
    if (rest.contains(key)) {
      out = rest.at(key).get<std::decay_t<decltype(out)>>();
      rest.erase(key);
    }
  };
  take("levels", cfg.levels);
  take("temperature", cfg.temperature);
  take("smoothing", cfg.smoothing);
  take("ema_alpha", cfg.ema_alpha);
  from_json(rest, cfg.stylize);
}

std::string config_hash(const PipelineConfig& cfg) {
  const std::string text = json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

// Raised for problems with how the tool was invoked (exit code 1).
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Optional overrides bound to flags; only flags given on the command line are applied.
struct ConfigFlags {
  std::string config_path;
  bool dump_config = false;
  std::optional<std::uint64_t> seed;
  std::optional<double> strength, edge_strength, h_luma, h_chroma, sigma0, beta_start, beta_end,
      temperature, ema_alpha;
  std::optional<int> steps, palette_size, template_window, search_window, tile, overlap,
      schedule_steps, levels;
  std::optional<std::string> post_denoise, window, smoothing;

  void add_common(CLI::App* app) {
    app->add_option("--config", config_path, "JSON config; explicit flags override it");
    app->add_flag("--dump-config", dump_config, "Print the effective config JSON and exit");
    app->add_option("--seed", seed, "Random seed");
  }
  void add_stylize(CLI::App* app) {
    app->add_option("--strength", strength, "Inversion strength in [0,1]");
    app->add_option("--steps", steps, "Number of synthesis steps");
    app->add_option("--schedule-steps", schedule_steps, "Diffusion timesteps T");
    app->add_option("--beta-start", beta_start, "First beta of the linear schedule");
    app->add_option("--beta-end", beta_end, "Last beta of the linear schedule");
    add_palette(app);
    add_denoise(app, "--post-denoise");
  }
  void add_palette(CLI::App* app) {
    app->add_option("--palette-size", palette_size, "Palette colours (1-256)");
    app->add_option("--edge-strength", edge_strength, "Edge darkening in [0,1]");
  }
  void add_denoise(CLI::App* app, const std::string& backend_flag) {
    app->add_option(backend_flag, post_denoise, "none | nlm | tiled-nlm");
    app->add_option("--h-luma", h_luma, "NLM luma strength (sample units)");
    app->add_option("--h-chroma", h_chroma, "NLM chroma strength (sample units)");
    app->add_option("--template-window", template_window, "NLM template side (odd)");
    app->add_option("--search-window", search_window, "NLM search side (odd)");
    app->add_option("--sigma0", sigma0, "NLM noise floor");
    app->add_option("--tile", tile, "Tile side for tiled denoising");
    app->add_option("--overlap", overlap, "Tile overlap in pixels");
    app->add_option("--window", window, "rect | linear | hann");
  }
  void add_adaattn(CLI::App* app) {
    app->add_option("--levels", levels, "Feature pyramid levels");
    app->add_option("--temperature", temperature, "Attention softmax temperature");
  }
  void add_smoothing(CLI::App* app) {
    app->add_option("--smoothing", smoothing, "none | ema");
    app->add_option("--ema-alpha", ema_alpha, "EMA weight of the current frame");
  }

  PipelineConfig resolve() const {
    PipelineConfig cfg;
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw UsageError("--config: cannot open " + config_path);
      try {
        cfg = json::parse(in).get<PipelineConfig>();
      } catch (const json::exception& e) {
        throw UsageError("--config: " + std::string(e.what()));
      } catch (const InvalidArgument& e) {
        throw UsageError("--config: " + std::string(e.what()));
      }
    }
    StylizeConfig& s = cfg.stylize;
    try {
      if (seed) s.seed = *seed;
      if (strength) s.strength = *strength;
      if (steps) s.steps = *steps;
      if (palette_size) s.palette_size = *palette_size;
      if (edge_strength) s.edge_strength = *edge_strength;
      if (post_denoise) s.post_denoise.backend = parse_denoise_backend(*post_denoise);
      if (h_luma) s.post_denoise.nlm.h_luma = *h_luma;
      if (h_chroma) s.post_denoise.nlm.h_chroma = *h_chroma;
      if (template_window) s.post_denoise.nlm.template_window = *template_window;
      if (search_window) s.post_denoise.nlm.search_window = *search_window;
      if (sigma0) s.post_denoise.nlm.sigma0 = *sigma0;
      if (tile) s.post_denoise.tiling.tile = *tile;
      if (overlap) s.post_denoise.tiling.overlap = *overlap;
      if (window) s.post_denoise.tiling.window = parse_blend_window(*window);
      if (schedule_steps || beta_start || beta_end) {
        s.schedule = NoiseSchedule::linear(schedule_steps.value_or(s.schedule.steps()),
                                           beta_start.value_or(s.schedule.beta_start()),
                                           beta_end.value_or(s.schedule.beta_end()));
      }
      if (levels) cfg.levels = *levels;
      if (temperature) cfg.temperature = *temperature;
      if (smoothing) cfg.smoothing = *smoothing;
      if (ema_alpha) cfg.ema_alpha = *ema_alpha;
      cfg.validate();
    } catch (const InvalidArgument& e) {
      throw UsageError(e.what());
    }
    return cfg;
  }
};

struct Manifest {
  std::string subcommand;
  PipelineConfig config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  json metrics;

  json to_json() const {
    json j{{"subcommand", subcommand},
           {"config", config},
           {"seed", config.stylize.seed},
           {"inputs", inputs},
           {"outputs", outputs},
           {"config_hash", config_hash(config)}};
    if (!metrics.is_null()) j["metrics"] = metrics;
    return j;
  }
};

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".png" || ext == ".ppm" || ext == ".pgm")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw IoError("no images in " + dir.string());
  return files;
}

std::vector<Image> load_all(const std::vector<fs::path>& files) {
  std::vector<Image> out;
  for (const auto& f : files) out.push_back(load_image(f));
  return out;
}

bool is_y4m(const fs::path& p) { return p.extension() == ".y4m"; }

FrameSequence read_video(const fs::path& p, const std::string& pattern, ChromaFormat* chroma) {
  if (is_y4m(p)) return read_y4m(p, chroma);
  return read_frame_dir(p, pattern);
}

void write_video(const FrameSequence& seq, const fs::path& p, const std::string& pattern,
                 ChromaFormat chroma) {
  if (is_y4m(p)) {
    write_y4m(seq, p, chroma);
  } else {
    write_frame_dir(seq, p, pattern);
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cartoon stylisation pipeline", "toonpipe"};
  app.require_subcommand(1);
  ConfigFlags flags;
  Manifest manifest;

  std::string content, style, output, input, pattern = "frame_%04d.png";
  std::string generated_dir, styles_dir, contents_dir, embedder = "builtin", endpoint, method;
  std::string table_path, video, reference, image, reference_image;
  int resize = 0, timeout_ms = 30000, seam_pitch = 0;
  bool flicker = false;

  auto* stylize_image = app.add_subcommand("stylize-image", "Diffusion stylisation of one image");
  stylize_image->add_option("--content", content, "Content image")->required();
  stylize_image->add_option("--style", style, "Style image")->required();
  stylize_image->add_option("--out", output, "Output image (.png or .ppm)")->required();
  flags.add_common(stylize_image);
  flags.add_stylize(stylize_image);

  auto* stylize_video_cmd = app.add_subcommand("stylize-video", "Frame-wise stylisation of a video");
  stylize_video_cmd->add_option("--input", input, "Input .y4m file or frame directory")->required();
  stylize_video_cmd->add_option("--style", style, "Style image")->required();
  stylize_video_cmd->add_option("--out", output, "Output .y4m file or frame directory")->required();
  stylize_video_cmd->add_option("--pattern", pattern, "Frame file pattern for directories");
  flags.add_common(stylize_video_cmd);
  flags.add_stylize(stylize_video_cmd);
  flags.add_smoothing(stylize_video_cmd);

  auto* cartoon_cmd = app.add_subcommand("cartoonize", "Median-cut palette cartoon filter");
  cartoon_cmd->add_option("--in", input, "Input image")->required();
  cartoon_cmd->add_option("--out", output, "Output image")->required();
  flags.add_common(cartoon_cmd);
  flags.add_palette(cartoon_cmd);

  auto* adaattn_cmd = app.add_subcommand("adaattn", "Attention-weighted adaptive normalisation baseline");
  adaattn_cmd->add_option("--content", content, "Content image")->required();
  adaattn_cmd->add_option("--style", style, "Style image")->required();
  adaattn_cmd->add_option("--out", output, "Output image")->required();
  flags.add_common(adaattn_cmd);
  flags.add_adaattn(adaattn_cmd);

  auto* denoise_cmd = app.add_subcommand("denoise", "Post-denoising of one image");
  denoise_cmd->add_option("--in", input, "Input image")->required();
  denoise_cmd->add_option("--out", output, "Output image")->required();
  denoise_cmd->add_option("--resize", resize, "Resize to N x N before denoising (0 keeps the size)");
  flags.add_common(denoise_cmd);
  flags.add_denoise(denoise_cmd, "--backend");

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Embedding-similarity report");
  evaluate_cmd->add_option("--generated", generated_dir, "Directory of generated images")->required();
  evaluate_cmd->add_option("--styles", styles_dir, "Directory of style images")->required();
  evaluate_cmd->add_option("--contents", contents_dir, "Directory of content images")->required();
  evaluate_cmd->add_option("--embedder", embedder, "builtin | remote")
      ->check(CLI::IsMember({"builtin", "remote"}));
  evaluate_cmd->add_option("--endpoint", endpoint, "Embedding service base URL (remote embedder)");
  evaluate_cmd->add_option("--timeout-ms", timeout_ms, "Remote request timeout");
  evaluate_cmd->add_option("--method", method, "Method name printed above the table");
  evaluate_cmd->add_option("--out", output, "Report JSON path")->required();
  evaluate_cmd->add_option("--table", table_path, "Also write the text table here");
  flags.add_common(evaluate_cmd);

  auto* metrics_cmd = app.add_subcommand("metrics", "Temporal and fidelity metrics");
  metrics_cmd->add_option("--video", video, "Video (.y4m or frame directory)");
  metrics_cmd->add_flag("--flicker", flicker, "Report the flicker index of --video");
  metrics_cmd->add_option("--reference", reference, "Source video for the temporal consistency ratio");
  metrics_cmd->add_option("--image", image, "Image for fidelity or seam metrics");
  metrics_cmd->add_option("--reference-image", reference_image, "Reference for mse / psnr");
  metrics_cmd->add_option("--seam-pitch", seam_pitch, "Tile pitch for the seam energy of --image");
  metrics_cmd->add_option("--pattern", pattern, "Frame file pattern for directories");
  flags.add_common(metrics_cmd);

  std::vector<const char*> argv{"toonpipe"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  manifest.subcommand = cmd->get_name();
  try {
    manifest.config = flags.resolve();
    if (flags.dump_config) {
      out << json(manifest.config).dump(2) << "\n";
      return kOk;
    }
    const PipelineConfig& cfg = manifest.config;

    if (cmd == stylize_image) {
      manifest.inputs = {content, style};
      const Image result = inst_stylize(load_image(content), load_image(style), cfg.stylize);
      save_image(result, output);
      manifest.outputs = {output};
    } else if (cmd == stylize_video_cmd) {
      manifest.inputs = {input, style};
      ChromaFormat chroma = ChromaFormat::c444;
      const FrameSequence source = read_video(input, pattern, &chroma);
      const Image style_img = load_image(style);
      const Smoothing smoothing =
          cfg.smoothing == "ema" ? Smoothing::ema(cfg.ema_alpha) : Smoothing::none();
      const FrameSequence styled = stylize_video(
          source,
          [&](const Image& frame, int index) {
            StylizeConfig per_frame = cfg.stylize;
            per_frame.seed = Rng(cfg.stylize.seed).derive(static_cast<std::uint64_t>(index)).seed();
            return inst_stylize(frame, style_img, per_frame);
          },
          smoothing);
      write_video(styled, output, pattern, chroma);
      manifest.outputs = {output};
      manifest.metrics = {{"flicker_source", source.frames.size() > 1 ? json(flicker_index(source)) : json()},
                          {"flicker_output", styled.frames.size() > 1 ? json(flicker_index(styled)) : json()}};
    } else if (cmd == cartoon_cmd) {
      manifest.inputs = {input};
      save_image(cartoonize(load_image(input), cfg.stylize.palette_size, cfg.stylize.edge_strength), output);
      manifest.outputs = {output};
    } else if (cmd == adaattn_cmd) {
      manifest.inputs = {content, style};
      save_image(adaattn_transfer(load_image(content), load_image(style), cfg.levels, cfg.temperature),
                 output);
      manifest.outputs = {output};
    } else if (cmd == denoise_cmd) {
      manifest.inputs = {input};
      if (resize < 0) throw UsageError("--resize must be >= 0");
      Image img = load_image(input);
      if (resize > 0) img = resize_bilinear(img, resize, resize);
      save_image(denoise_stage(img, cfg.stylize.post_denoise), output);
      manifest.outputs = {output};
    } else if (cmd == evaluate_cmd) {
      if (embedder == "remote" && endpoint.empty()) throw UsageError("--endpoint is required for --embedder remote");
      const auto gen_files = list_images(generated_dir);
      const auto style_files = list_images(styles_dir);
      const auto content_files = list_images(contents_dir);
      for (const auto* list : {&gen_files, &style_files, &content_files})
        for (const auto& f : *list) manifest.inputs.push_back(f.string());
      Embedder embed = embed_builtin;
      std::string embedder_name = "builtin";
      if (embedder == "remote") {
        embed = [&](const Image& img) {
          return embed_remote(endpoint, img, std::chrono::milliseconds(timeout_ms));
        };
        embedder_name = "remote:" + endpoint;
      }
      const SimilarityReport report = similarity_report(load_all(gen_files), load_all(style_files),
                                                        load_all(content_files), embed, embedder_name, method);
      std::ofstream(output) << json(report).dump(2) << "\n";
      manifest.outputs = {output};
      if (!table_path.empty()) {
        std::ofstream(table_path) << report.render_table();
        manifest.outputs.push_back(table_path);
      }
    } else if (cmd == metrics_cmd) {
      json m = json::object();
      if (!video.empty()) {
        manifest.inputs.push_back(video);
        const FrameSequence seq = read_video(video, pattern, nullptr);
        if (flicker) m["flicker"] = flicker_index(seq);
        if (!reference.empty()) {
          manifest.inputs.push_back(reference);
          m["temporal_consistency_ratio"] =
              temporal_consistency_ratio(seq, read_video(reference, pattern, nullptr));
        }
      }
      if (!image.empty()) {
        manifest.inputs.push_back(image);
        const Image img = load_image(image);
        if (!reference_image.empty()) {
          manifest.inputs.push_back(reference_image);
          const Image ref = load_image(reference_image);
          m["mse"] = mse(img, ref);
          const double p = psnr(img, ref);
          m["psnr"] = std::isinf(p) ? json("inf") : json(p);
        }
        if (seam_pitch > 0) m["seam_energy"] = seam_energy(img, seam_pitch);
      }
      if (m.empty()) throw UsageError("metrics: nothing to compute (use --video/--flicker, --reference, --image)");
      manifest.metrics = m;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kProcessing;
  }

  out << manifest.to_json().dump(2) << "\n";
  return kOk;
}

}  // namespace toon::cli

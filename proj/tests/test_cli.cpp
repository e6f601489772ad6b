#include "doctest.h"

#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "fixtures.hpp"
#include "toon/image_io.hpp"
#include "toon/video.hpp"

using namespace toon;
using namespace toon::testing;
using nlohmann::json;

namespace {

struct Result {
  int code = -1;
  std::string out;
  std::string err;
  json manifest() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("usage errors exit with 1 and name the flag") {
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"transmogrify"}).code == cli::kUsage);
  const Result missing = run({"cartoonize", "--in", "x.png"});
  CHECK(missing.code == cli::kUsage);
  CHECK(missing.err.find("--out") != std::string::npos);
  const Result bad = run({"cartoonize", "--in", "a.png", "--out", "b.png", "--palette-size", "lots"});
  CHECK(bad.code == cli::kUsage);
  CHECK(bad.err.find("--palette-size") != std::string::npos);
}

TEST_CASE("processing errors exit with 2") {
  TempDir dir("cli-errors");
  const Result r = run({"cartoonize", "--in", (dir / "missing.png").string(), "--out", (dir / "o.png").string()});
  CHECK(r.code == cli::kProcessing);
  CHECK_FALSE(r.err.empty());
  save_image(random_image(8, 8, 1), dir / "a.png");
  CHECK(run({"cartoonize", "--in", (dir / "a.png").string(), "--out", (dir / "o.png").string(), "--palette-size",
             "0"})
            .code == cli::kUsage);
  CHECK(run({"adaattn", "--content", (dir / "a.png").string(), "--style", (dir / "a.png").string(), "--out",
             (dir / "o.png").string(), "--levels", "5"})
            .code == cli::kProcessing);
}

TEST_CASE("config files") {
  TempDir dir("cli-config");
  SUBCASE("unknown keys are usage errors") {
    std::ofstream(dir / "bad.json") << R"({"strength": 0.5, "strenght": 0.4})";
    const Result r = run({"stylize-image", "--content", "c.png", "--style", "s.png", "--out", "o.png", "--config",
                          (dir / "bad.json").string()});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("strenght") != std::string::npos);
  }
  SUBCASE("flags override the file") {
    std::ofstream(dir / "cfg.json") << R"({"strength": 0.25, "steps": 4, "seed": 3})";
    const Result r = run({"stylize-image", "--content", "c.png", "--style", "s.png", "--out", "o.png", "--config",
                          (dir / "cfg.json").string(), "--steps", "7", "--dump-config"});
    REQUIRE(r.code == cli::kOk);
    const json cfg = json::parse(r.out);
    CHECK(cfg.at("strength") == 0.25);
    CHECK(cfg.at("steps") == 7);
    CHECK(cfg.at("seed") == 3);
  }
  SUBCASE("dumped config reproduces the manifest hash") {
    save_image(scene(24, 1), dir / "c.png");
    save_image(scene(24, 2), dir / "s.png");
    const std::vector<std::string> base = {"stylize-image", "--content", (dir / "c.png").string(), "--style",
                                           (dir / "s.png").string(), "--out", (dir / "o.png").string()};
    auto with = [&](std::vector<std::string> extra) {
      auto a = base;
      a.insert(a.end(), extra.begin(), extra.end());
      return a;
    };
    const std::vector<std::string> flags = {"--seed", "11", "--strength", "0.4", "--post-denoise", "nlm",
                                            "--window", "linear", "--palette-size", "8"};
    const Result first = run(with(flags));
    REQUIRE(first.code == cli::kOk);
    auto dump_args = with(flags);
    dump_args.push_back("--dump-config");
    const Result dumped = run(dump_args);
    REQUIRE(dumped.code == cli::kOk);
    std::ofstream(dir / "dumped.json") << dumped.out;
    const Result second = run(with({"--config", (dir / "dumped.json").string()}));
    REQUIRE(second.code == cli::kOk);
    CHECK(first.manifest().at("config_hash") == second.manifest().at("config_hash"));
    CHECK(first.manifest().at("config") == second.manifest().at("config"));
    CHECK(slurp(dir / "o.png").size() > 0);
  }
}

TEST_CASE("config hash") {
  cli::PipelineConfig a, b;
  CHECK(cli::config_hash(a) == cli::config_hash(b));
  CHECK(cli::config_hash(a).size() == 16);
  b.stylize.seed = 1;
  CHECK(cli::config_hash(a) != cli::config_hash(b));
  const json j = a;
  CHECK_NOTHROW(j.get<cli::PipelineConfig>().validate());
}

TEST_CASE("stylize-image is byte-identical across runs and reports a manifest") {
  TempDir dir("cli-stylize");
  save_image(scene(32, 3), dir / "c.png");
  save_image(scene(32, 8), dir / "s.png");
  auto args = [&](const std::string& out) {
    return std::vector<std::string>{"stylize-image", "--content", (dir / "c.png").string(), "--style",
                                    (dir / "s.png").string(), "--out", (dir / out).string(), "--seed", "7"};
  };
  const Result a = run(args("a.png"));
  const Result b = run(args("b.png"));
  REQUIRE(a.code == cli::kOk);
  REQUIRE(b.code == cli::kOk);
  CHECK(slurp(dir / "a.png") == slurp(dir / "b.png"));
  const json m = a.manifest();
  CHECK(m.at("subcommand") == "stylize-image");
  CHECK(m.at("seed") == 7);
  CHECK(m.at("inputs").size() == 2);
  CHECK(m.at("outputs")[0] == (dir / "a.png").string());
  CHECK(m.at("config").at("seed") == 7);
}

TEST_CASE("stylize-video on y4m and frame directories") {
  TempDir dir("cli-video");
  write_y4m(fade_sequence(16, 3), dir / "in.y4m");
  save_image(scene(16, 4), dir / "s.png");
  const Result r = run({"stylize-video", "--input", (dir / "in.y4m").string(), "--style", (dir / "s.png").string(),
                        "--out", (dir / "out.y4m").string(), "--smoothing", "ema", "--ema-alpha", "0.5"});
  REQUIRE(r.code == cli::kOk);
  CHECK(read_y4m(dir / "out.y4m").frames.size() == 3);
  CHECK(r.manifest().at("metrics").contains("flicker_output"));

  write_frame_dir(fade_sequence(16, 2), dir / "frames", "f_%03d.png");
  const Result d = run({"stylize-video", "--input", (dir / "frames").string(), "--style", (dir / "s.png").string(),
                        "--out", (dir / "styled").string(), "--pattern", "f_%03d.png"});
  REQUIRE(d.code == cli::kOk);
  CHECK(read_frame_dir(dir / "styled", "f_%03d.png").frames.size() == 2);

  CHECK(run({"stylize-video", "--input", (dir / "in.y4m").string(), "--style", (dir / "s.png").string(), "--out",
             (dir / "x.y4m").string(), "--smoothing", "median"})
            .code == cli::kUsage);
}

TEST_CASE("cartoonize, adaattn and denoise subcommands") {
  TempDir dir("cli-ops");
  save_image(scene(32, 5), dir / "a.png");
  save_image(scene(32, 6), dir / "b.png");
  CHECK(run({"cartoonize", "--in", (dir / "a.png").string(), "--out", (dir / "cart.ppm").string(), "--palette-size",
             "4", "--edge-strength", "0"})
            .code == cli::kOk);
  CHECK(load_image(dir / "cart.ppm").width() == 32);
  CHECK(run({"adaattn", "--content", (dir / "a.png").string(), "--style", (dir / "b.png").string(), "--out",
             (dir / "ada.png").string(), "--levels", "2", "--temperature", "0.5"})
            .code == cli::kOk);
  const Result d = run({"denoise", "--in", (dir / "a.png").string(), "--out", (dir / "dn.png").string(), "--backend",
                        "tiled-nlm", "--resize", "96", "--tile", "48", "--overlap", "16"});
  REQUIRE(d.code == cli::kOk);
  CHECK(load_image(dir / "dn.png").width() == 96);
  CHECK(d.manifest().at("config").at("post_denoise") == "tiled-nlm");
  CHECK(run({"denoise", "--in", (dir / "a.png").string(), "--out", (dir / "dn.png").string(), "--backend", "dncnn"})
            .code != cli::kOk);
}

TEST_CASE("evaluate writes a report and table") {
  TempDir dir("cli-eval");
  for (const char* sub : {"g", "s", "c"}) std::filesystem::create_directories(dir / sub);
  for (int i = 0; i < 3; ++i) {
    const std::string name = "img" + std::to_string(i) + ".png";
    save_image(scene(24, i), dir / "g" / name);
    save_image(scene(24, 10 + i), dir / "s" / name);
    save_image(scene(24, i), dir / "c" / name);
  }
  const Result r = run({"evaluate", "--generated", (dir / "g").string(), "--styles", (dir / "s").string(),
                        "--contents", (dir / "c").string(), "--embedder", "builtin", "--out",
                        (dir / "report.json").string(), "--table", (dir / "table.txt").string(), "--method", "InST"});
  REQUIRE(r.code == cli::kOk);
  const json report = json::parse(slurp(dir / "report.json"));
  CHECK(report.at("method") == "InST");
  CHECK(report.at("embedder") == "builtin");
  REQUIRE(report.at("rows").size() == 3);
  CHECK(report.at("rows")[0].at("label") == "Img1");
  CHECK(report.at("rows")[0].at("gen_content") == doctest::Approx(1.0));
  CHECK(slurp(dir / "table.txt").find("Generated & Content Img") != std::string::npos);
  CHECK(run({"evaluate", "--generated", (dir / "g").string(), "--styles", (dir / "s").string(), "--contents",
             (dir / "c").string(), "--embedder", "remote", "--out", (dir / "r.json").string()})
            .code == cli::kUsage);
}

TEST_CASE("metrics") {
  TempDir dir("cli-metrics");
  FrameSequence still;
  for (int i = 0; i < 4; ++i) still.frames.push_back(scene(16, 2));
  write_y4m(still, dir / "still.y4m");
  const Result r = run({"metrics", "--video", (dir / "still.y4m").string(), "--flicker"});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.manifest().at("metrics").at("flicker") == 0.0);

  save_image(scene(96, 1), dir / "a.png");
  const Result img = run({"metrics", "--image", (dir / "a.png").string(), "--reference-image",
                          (dir / "a.png").string(), "--seam-pitch", "48"});
  REQUIRE(img.code == cli::kOk);
  CHECK(img.manifest().at("metrics").at("psnr") == "inf");
  CHECK(img.manifest().at("metrics").contains("seam_energy"));
  CHECK(run({"metrics"}).code == cli::kUsage);
}

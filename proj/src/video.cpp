#include "toon/video.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "toon/image_io.hpp"
#include "toon/image_ops.hpp"

namespace toon {

void FrameSequence::validate() const {
  if (frames.empty()) throw InvalidArgument("frame sequence is empty");
  for (std::size_t i = 1; i < frames.size(); ++i) {
    if (!frames[i].same_shape(frames.front())) {
      throw DimensionMismatch("frame " + std::to_string(i) + " differs in shape from frame 0");
    }
  }
  if (fps.num <= 0 || fps.den <= 0) throw InvalidArgument("frame rate must be positive");
}

namespace {

constexpr std::string_view kMagic = "YUV4MPEG2 ";

std::uint8_t quantize(double v) {
  if (!std::isfinite(v)) return 0;
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

// Chroma bytes are centred on 128 (JPEG full range); the float planes are centred on 0.5.
double chroma_from_byte(std::uint8_t b) { return (double(b) - 128.0) / 255.0 + 0.5; }

std::uint8_t chroma_to_byte(double v) {
  if (!std::isfinite(v)) return 128;
  return static_cast<std::uint8_t>(std::clamp(std::lround((v - 0.5) * 255.0 + 128.0), 0L, 255L));
}

struct Y4mHeader {
  int width = 0;
  int height = 0;
  FrameRate fps;
  ChromaFormat chroma = ChromaFormat::c420jpeg;
};

FrameRate parse_ratio(const std::string& token) {
  const auto colon = token.find(':');
  if (colon == std::string::npos) throw CorruptFile("y4m: malformed frame rate '" + token + "'");
  try {
    FrameRate r{std::stoi(token.substr(0, colon)), std::stoi(token.substr(colon + 1))};
    if (r.num <= 0 || r.den <= 0) throw CorruptFile("y4m: non-positive frame rate");
    return r;
  } catch (const std::logic_error&) {
    throw CorruptFile("y4m: malformed frame rate '" + token + "'");
  }
}

Y4mHeader parse_header(const std::string& line) {
  if (line.compare(0, kMagic.size(), kMagic) != 0) throw BadMagic("not a YUV4MPEG2 stream");
  Y4mHeader h;
  std::istringstream tokens(line.substr(kMagic.size()));
  std::string tok;
  while (tokens >> tok) {
    const char tag = tok[0];
    const std::string val = tok.substr(1);
    try {
      switch (tag) {
        case 'W': h.width = std::stoi(val); break;
        case 'H': h.height = std::stoi(val); break;
        case 'F': h.fps = parse_ratio(val); break;
        case 'C':
          if (val == "444") {
            h.chroma = ChromaFormat::c444;
          } else if (val == "420jpeg") {
            h.chroma = ChromaFormat::c420jpeg;
          } else {
            throw UnsupportedChroma("y4m: unsupported chroma tag 'C" + val + "'");
          }
          break;
        default: break;  // interlacing, aspect, comments
      }
    } catch (const std::logic_error&) {
      throw CorruptFile("y4m: malformed header token '" + tok + "'");
    }
  }
  if (h.width < 1 || h.height < 1) throw CorruptFile("y4m: missing or invalid frame size");
  return h;
}

int chroma_width(const Y4mHeader& h) { return h.chroma == ChromaFormat::c444 ? h.width : (h.width + 1) / 2; }
int chroma_height(const Y4mHeader& h) { return h.chroma == ChromaFormat::c444 ? h.height : (h.height + 1) / 2; }

Image frame_from_planes(const Y4mHeader& h, const std::uint8_t* data) {
  Raster ycc(h.width, h.height, 3);
  const int cw = chroma_width(h), ch = chroma_height(h);
  for (int y = 0; y < h.height; ++y)
    for (int x = 0; x < h.width; ++x) ycc(x, y, 0) = data[std::size_t(y) * h.width + x] / 255.0;
  const std::uint8_t* chroma = data + std::size_t(h.width) * h.height;
  for (int c = 1; c < 3; ++c) {
    for (int y = 0; y < h.height; ++y) {
      for (int x = 0; x < h.width; ++x) {
        const int sx = h.chroma == ChromaFormat::c444 ? x : x / 2;
        const int sy = h.chroma == ChromaFormat::c444 ? y : y / 2;
        ycc(x, y, c) = chroma_from_byte(chroma[std::size_t(sy) * cw + sx]);
      }
    }
    chroma += std::size_t(cw) * ch;
  }
  return clamp_to_image(ycbcr_to_rgb(ycc));
}

void append_planes(const Image& frame, ChromaFormat chroma, std::vector<std::uint8_t>& out) {
  const Raster ycc = rgb_to_ycbcr(to_raster(frame));
  const int w = frame.width(), h = frame.height();
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.push_back(quantize(ycc(x, y, 0)));
  for (int c = 1; c < 3; ++c) {
    if (chroma == ChromaFormat::c444) {
      for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) out.push_back(chroma_to_byte(ycc(x, y, c)));
      continue;
    }
    for (int y = 0; y < h; y += 2) {
      for (int x = 0; x < w; x += 2) {
        double sum = 0.0;
        int n = 0;
        for (int dy = 0; dy < 2 && y + dy < h; ++dy)
          for (int dx = 0; dx < 2 && x + dx < w; ++dx, ++n) sum += ycc(x + dx, y + dy, c);
        out.push_back(chroma_to_byte(sum / n));
      }
    }
  }
}

}  // namespace

FrameSequence decode_y4m(std::span<const std::uint8_t> bytes, ChromaFormat* chroma) {
  const auto header_end = std::find(bytes.begin(), bytes.end(), std::uint8_t('\n'));
  if (bytes.size() < kMagic.size() ||
      !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw BadMagic("not a YUV4MPEG2 stream");
  }
  if (header_end == bytes.end()) throw CorruptFile("y4m: unterminated stream header");
  const Y4mHeader h = parse_header(std::string(bytes.begin(), header_end));
  if (chroma) *chroma = h.chroma;

  const std::size_t frame_bytes = std::size_t(h.width) * h.height +
                                  2 * std::size_t(chroma_width(h)) * chroma_height(h);
  FrameSequence seq;
  seq.fps = h.fps;
  std::size_t pos = static_cast<std::size_t>(header_end - bytes.begin()) + 1;
  while (pos < bytes.size()) {
    const int index = static_cast<int>(seq.frames.size());
    constexpr std::string_view kFrame = "FRAME";
    if (bytes.size() - pos < kFrame.size() ||
        !std::equal(kFrame.begin(), kFrame.end(), bytes.begin() + static_cast<std::ptrdiff_t>(pos))) {
      throw TruncatedStream(index, "y4m: frame " + std::to_string(index) + " has no FRAME marker");
    }
    const auto line_end = std::find(bytes.begin() + static_cast<std::ptrdiff_t>(pos), bytes.end(),
                                    std::uint8_t('\n'));
    if (line_end == bytes.end()) {
      throw TruncatedStream(index, "y4m: truncated header of frame " + std::to_string(index));
    }
    pos = static_cast<std::size_t>(line_end - bytes.begin()) + 1;
    if (bytes.size() - pos < frame_bytes) {
      throw TruncatedStream(index, "y4m: truncated payload in frame " + std::to_string(index));
    }
    seq.frames.push_back(frame_from_planes(h, bytes.data() + pos));
    pos += frame_bytes;
  }
  if (seq.frames.empty()) throw CorruptFile("y4m: stream contains no frames");
  return seq;
}

std::vector<std::uint8_t> encode_y4m(const FrameSequence& seq, ChromaFormat chroma) {
  seq.validate();
  const Image& first = seq.frames.front();
  if (first.channels() != 3) throw InvalidArgument("y4m frames must be RGB");
  const std::string header = "YUV4MPEG2 W" + std::to_string(first.width()) + " H" +
                             std::to_string(first.height()) + " F" + std::to_string(seq.fps.num) +
                             ":" + std::to_string(seq.fps.den) + " Ip A1:1 " +
                             (chroma == ChromaFormat::c444 ? "C444" : "C420jpeg") + "\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  for (const Image& f : seq.frames) {
    constexpr std::string_view kFrame = "FRAME\n";
    out.insert(out.end(), kFrame.begin(), kFrame.end());
    append_planes(f, chroma, out);
  }
  return out;
}

FrameSequence read_y4m(const std::filesystem::path& path, ChromaFormat* chroma) {
  if (!std::filesystem::exists(path)) throw IoError("no such file: " + path.string());
  return decode_y4m(read_file_bytes(path), chroma);
}

void write_y4m(const FrameSequence& seq, const std::filesystem::path& path, ChromaFormat chroma) {
  write_file_bytes(path, encode_y4m(seq, chroma));
}

FramePattern FramePattern::parse(const std::string& pattern) {
  const auto pct = pattern.find('%');
  if (pct == std::string::npos || pattern.find('%', pct + 1) != std::string::npos) {
    throw InvalidArgument("frame pattern needs exactly one %0Nd placeholder: " + pattern);
  }
  std::size_t i = pct + 1;
  if (i >= pattern.size() || pattern[i] != '0') {
    throw InvalidArgument("frame index placeholder must be zero padded (%0Nd): " + pattern);
  }
  int width = 0;
  while (++i < pattern.size() && std::isdigit(static_cast<unsigned char>(pattern[i]))) {
    width = width * 10 + (pattern[i] - '0');
  }
  if (width < 1 || i >= pattern.size() || pattern[i] != 'd') {
    throw InvalidArgument("malformed frame index placeholder: " + pattern);
  }
  return {pattern.substr(0, pct), pattern.substr(i + 1), width};
}

std::string FramePattern::format(int index) const {
  std::string digits = std::to_string(index);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits + suffix;
}

bool FramePattern::match(const std::string& name, int& index) const {
  if (name.size() < prefix.size() + suffix.size() + width) return false;
  if (name.compare(0, prefix.size(), prefix) != 0) return false;
  if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) return false;
  const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
  if (static_cast<int>(digits.size()) < width || digits.size() > 9) return false;
  if (!std::all_of(digits.begin(), digits.end(), [](unsigned char c) { return std::isdigit(c); })) {
    return false;
  }
  index = std::stoi(digits);
  return true;
}

FrameSequence read_frame_dir(const std::filesystem::path& dir, const std::string& pattern,
                             FrameRate fps) {
  const FramePattern pat = FramePattern::parse(pattern);
  if (!std::filesystem::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<int, std::filesystem::path> found;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    int index = 0;
    if (entry.is_regular_file() && pat.match(entry.path().filename().string(), index)) {
      found.emplace(index, entry.path());
    }
  }
  if (found.empty()) throw IoError("no frames matching '" + pattern + "' in " + dir.string());

  std::vector<int> missing;
  int expected = found.begin()->first;
  for (const auto& [index, path] : found) {
    while (expected < index) missing.push_back(expected++);
    ++expected;
  }
  if (!missing.empty()) {
    std::string list;
    for (int m : missing) list += (list.empty() ? "" : ", ") + std::to_string(m);
    throw FrameGap(missing, "frame directory is missing indices: " + list);
  }

  FrameSequence seq;
  seq.fps = fps;
  for (const auto& [index, path] : found) seq.frames.push_back(load_image(path));
  seq.validate();
  return seq;
}

void write_frame_dir(const FrameSequence& seq, const std::filesystem::path& dir,
                     const std::string& pattern) {
  seq.validate();
  const FramePattern pat = FramePattern::parse(pattern);
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    save_image(seq.frames[i], dir / pat.format(static_cast<int>(i)));
  }
}

FrameSequence stylize_video(const FrameSequence& seq, const FrameOp& op, Smoothing smoothing) {
  seq.validate();
  if (smoothing.kind == Smoothing::Kind::ema && !(smoothing.alpha > 0.0 && smoothing.alpha <= 1.0)) {
    throw InvalidArgument("ema alpha must lie in (0, 1]");
  }
  FrameSequence out;
  out.fps = seq.fps;
  out.frames.reserve(seq.frames.size());
  for (std::size_t i = 0; i < seq.frames.size(); ++i) {
    Image styled = op(seq.frames[i], static_cast<int>(i));
    if (smoothing.kind == Smoothing::Kind::ema && i > 0) {
      const Image& prev = out.frames.back();
      if (!styled.same_shape(prev)) throw DimensionMismatch("frame operator changed the frame shape");
      styled = clamp_to_image(axpby(smoothing.alpha, to_raster(styled), 1.0 - smoothing.alpha,
                                    to_raster(prev)));
    }
    out.frames.push_back(std::move(styled));
  }
  out.validate();
  return out;
}

double flicker_index(const FrameSequence& seq) {
  seq.validate();
  if (seq.frames.size() < 2) throw InvalidArgument("flicker index needs at least two frames");
  double total = 0.0;
  for (std::size_t i = 1; i < seq.frames.size(); ++i) {
    const Image& a = seq.frames[i - 1];
    const Image& b = seq.frames[i];
    double sum = 0.0;
    for (int c = 0; c < a.channels(); ++c) {
      sum += (a.plane(c).cast<double>() - b.plane(c).cast<double>()).abs().sum();
    }
    total += sum / static_cast<double>(a.samples());
  }
  return total / static_cast<double>(seq.frames.size() - 1);
}

double temporal_consistency_ratio(const FrameSequence& stylized, const FrameSequence& source) {
  if (stylized.frames.size() != source.frames.size()) {
    throw DimensionMismatch("stylized and source sequences differ in frame count");
  }
  const double base = flicker_index(source);
  if (base <= 0.0) throw InvalidArgument("source sequence has zero flicker");
  return flicker_index(stylized) / base;
}

}  // namespace toon

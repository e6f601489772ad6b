#ifndef TOON_VIDEO_HPP
#define TOON_VIDEO_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "toon/image.hpp"

namespace toon {

struct FrameRate {
  int num = 25;
  int den = 1;

  double value() const { return double(num) / double(den); }
  bool operator==(const FrameRate&) const = default;
};

struct FrameSequence {
  std::vector<Image> frames;
  FrameRate fps;

  /// Throws unless there is at least one frame and all frames share one shape.
  void validate() const;
};

enum class ChromaFormat { c444, c420jpeg };

/// Stream does not start with "YUV4MPEG2 ".
class BadMagic : public UnsupportedFormat {
 public:
  using UnsupportedFormat::UnsupportedFormat;
};

class UnsupportedChroma : public UnsupportedFormat {
 public:
  using UnsupportedFormat::UnsupportedFormat;
};

class TruncatedStream : public CorruptFile {
 public:
  TruncatedStream(int frame_index, const std::string& what)
      : CorruptFile(what), frame_index_(frame_index) {}
  int frame_index() const { return frame_index_; }

 private:
  int frame_index_;
};

/// A frame directory is missing indices between its first and last frame.
class FrameGap : public Error {
 public:
  FrameGap(std::vector<int> missing, const std::string& what)
      : Error(what), missing_(std::move(missing)) {}
  const std::vector<int>& missing() const { return missing_; }

 private:
  std::vector<int> missing_;
};

/*
 * YUV4MPEG2 with 8-bit C444 or C420jpeg planes (a missing C tag means
 * C420jpeg). Samples are treated as full-range BT.601 YCbCr and converted to
 * RGB frames. 4:2:0 chroma is replicated 2x2 on read and box-averaged on
 * write, an idempotent pair.
 */
FrameSequence decode_y4m(std::span<const std::uint8_t> bytes, ChromaFormat* chroma = nullptr);
std::vector<std::uint8_t> encode_y4m(const FrameSequence& seq, ChromaFormat chroma = ChromaFormat::c444);

FrameSequence read_y4m(const std::filesystem::path& path, ChromaFormat* chroma = nullptr);
void write_y4m(const FrameSequence& seq, const std::filesystem::path& path,
               ChromaFormat chroma = ChromaFormat::c444);

/// Pattern with one zero-padded printf index, e.g. "frame_%04d.png".
struct FramePattern {
  std::string prefix;
  std::string suffix;
  int width = 0;

  static FramePattern parse(const std::string& pattern);
  std::string format(int index) const;
  bool match(const std::string& filename, int& index) const;
};

FrameSequence read_frame_dir(const std::filesystem::path& dir, const std::string& pattern,
                             FrameRate fps = {});
/// Frames are numbered from 0. Creates the directory if needed.
void write_frame_dir(const FrameSequence& seq, const std::filesystem::path& dir,
                     const std::string& pattern);

struct Smoothing {
  enum class Kind { none, ema } kind = Kind::none;
  double alpha = 1.0;

  static Smoothing none() { return {}; }
  static Smoothing ema(double alpha) { return {Kind::ema, alpha}; }
};

using FrameOp = std::function<Image(const Image& frame, int index)>;

/// Styles every frame independently; ema gives out[i] = a styled[i] + (1 - a) out[i-1].
FrameSequence stylize_video(const FrameSequence& seq, const FrameOp& op, Smoothing smoothing = {});

/// Mean over consecutive frame pairs of the mean absolute sample difference.
double flicker_index(const FrameSequence& seq);

/// flicker_index(stylized) / flicker_index(source).
double temporal_consistency_ratio(const FrameSequence& stylized, const FrameSequence& source);

}  // namespace toon

#endif  // TOON_VIDEO_HPP

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gazekit/config.hpp"
#include "gazekit/image.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/metrics.hpp"
#include "gazekit/trace.hpp"

namespace gazekit::synth {

/// Identity of the pseudo-random stream; recorded in every ground truth.
inline constexpr std::string_view kGeneratorId = "std::mt19937_64+boxmuller/v1";

struct Gaussian {
  PointF mean{960, 540};
  double sigma_x = 100;
  double sigma_y = 60;
};

/// Gaze placed uniformly inside ROI regions, with the share of valid frames
/// per label given by the weights.
struct RoiMixture {
  std::vector<std::pair<std::string, double>> weights;
};

/// Inclusive frame range forced to have no marker.
struct Gap {
  std::size_t first = 0;
  std::size_t last = 0;
};

struct SynthSpec {
  std::size_t n_frames = 1000;
  std::variant<Gaussian, RoiMixture> distribution = Gaussian{};
  /// Fraction of frames rendered without a marker, allocated by exact count.
  double dropout = 0;
  std::vector<Gap> gaps;
  std::uint64_t seed = 1;
  AnalysisConfig config = default_config();
  int marker_radius = 6;
  Rgb marker_color{0, 255, 0};
  TraceMetadata meta;

  /// Throws DataError on weights not summing to 1, dropout outside [0, 1), a
  /// negative sigma, unknown mixture labels or a marker colour the detector
  /// would not accept.
  void validate() const;
};

struct TruthSample {
  std::uint64_t frame_id = 0;
  bool valid = false;
  double true_x = 0;  // exact generated position
  double true_y = 0;
  int x = 0;  // rendered (rounded) position
  int y = 0;
  std::string label;  // intended region; empty for invalid frames
};

struct GroundTruth {
  std::string generator{kGeneratorId};
  std::uint64_t seed = 0;
  std::vector<TruthSample> samples;
};

/// Split n into integer counts proportional to the weights: floors first,
/// then the remainder one at a time to the largest fractional parts (earlier
/// entries win ties).
std::vector<std::size_t> allocate_counts(const std::vector<double>& weights, std::size_t n);

/// Deterministic in the seed. Gaussian points are resampled until the whole
/// marker disk fits in the scene.
std::pair<GazeTrace, GroundTruth> gen_trace(const SynthSpec& spec);

/// Paint one canvas frame: structured noise (never marker-coloured, includes
/// white) on the game pane, a black gaze pane, and the marker disk when the
/// sample is valid.
void render_frame(const GazeSample& sample, const SynthSpec& spec, RgbImage& canvas);

/// Throws DataError when a valid sample's disk would leave the gaze pane.
void check_renderable(const GazeTrace& trace, const SynthSpec& spec);

/// One PNG per frame named f0000.png, f0001.png, ... (zero-padded to at least
/// four digits). Returns the written paths.
std::vector<std::filesystem::path> render_frames(const GazeTrace& trace, const SynthSpec& spec,
                                                 const std::filesystem::path& out_dir);

/// Renders frames on demand instead of going through files.
class RenderedFrameSource final : public FrameSource {
 public:
  RenderedFrameSource(GazeTrace trace, SynthSpec spec);

  int width() const noexcept override { return spec_.config.layout.canvas_width(); }
  int height() const noexcept override { return spec_.config.layout.canvas_height(); }
  std::optional<double> frame_rate_hint() const override { return spec_.meta.nominal_rate; }
  std::optional<std::size_t> frame_count() const override { return trace_.samples.size(); }
  std::optional<std::size_t> next(RgbImage& buffer) override;

 private:
  GazeTrace trace_;
  SynthSpec spec_;
};

/// Header `frame_id,valid,true_x,true_y,x,y,label`, preceded by one
/// `# generator=...;seed=...` line.
void write_ground_truth_csv(const GroundTruth& truth, std::ostream& out);

std::string frame_filename(std::size_t index, std::size_t n_frames);

}  // namespace gazekit::synth

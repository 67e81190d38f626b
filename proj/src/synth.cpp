#include "gazekit/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <set>

#include "gazekit/error.hpp"

namespace gazekit::synth {

namespace {

// Distribution transforms are written out rather than taken from <random> so
// that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Uniform integer in [0, n).
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

constexpr int kMaxAttempts = 1'000'000;

// Bounds for a marker centre so the disk stays inside the scene.
struct Bounds {
  int x0, x1, y0, y1;  // inclusive
};

Bounds disk_bounds(const SynthSpec& spec) {
  const Rect& pane = spec.config.layout.gaze_pane();
  const int r = spec.marker_radius;
  return {r, pane.w - 1 - r, r, pane.h - 1 - r};
}

std::uint32_t mix(std::uint32_t x) {
  x ^= x >> 16;
  x *= 0x7feb352dU;
  x ^= x >> 15;
  x *= 0x846ca68bU;
  x ^= x >> 16;
  return x;
}

}  // namespace

void SynthSpec::validate() const {
  if (!(dropout >= 0 && dropout < 1)) throw DataError("dropout must lie in [0, 1)");
  if (marker_radius < 1) throw DataError("marker radius must be >= 1");
  if (!config.marker.matches(marker_color)) throw DataError("marker colour is rejected by the marker colour rule");
  const Bounds b = disk_bounds(*this);
  if (b.x0 > b.x1 || b.y0 > b.y1) throw DataError("marker disk does not fit in the gaze pane");
  for (const Gap& g : gaps) {
    if (g.first > g.last || g.last >= n_frames) throw DataError("gap outside the frame range");
  }
  if (const auto* gauss = std::get_if<Gaussian>(&distribution)) {
    if (!(gauss->sigma_x >= 0 && gauss->sigma_y >= 0)) throw DataError("sigma must be non-negative");
  } else {
    const auto& mixture = std::get<RoiMixture>(distribution);
    if (mixture.weights.empty()) throw DataError("ROI mixture has no weights");
    const auto labels = config.roi.labels();
    double total = 0;
    std::set<std::string> seen;
    for (const auto& [label, w] : mixture.weights) {
      if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
        throw DataError("ROI mixture label '" + label + "' is not in the layout");
      }
      if (!seen.insert(label).second) throw DataError("ROI mixture label '" + label + "' repeated");
      if (!(w >= 0)) throw DataError("ROI mixture weight for '" + label + "' is negative");
      total += w;
    }
    if (std::fabs(total - 1.0) > 1e-9) throw DataError("ROI mixture weights must sum to 1");
  }
}

std::vector<std::size_t> allocate_counts(const std::vector<double>& weights, std::size_t n) {
  std::vector<std::size_t> counts(weights.size());
  std::vector<double> remainder(weights.size());
  std::size_t assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = weights[i] * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    remainder[i] = exact - std::floor(exact);
    assigned += counts[i];
  }
  std::vector<std::size_t> order(weights.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t k = 0; assigned < n && k < order.size(); ++k, ++assigned) ++counts[order[k]];
  return counts;
}

std::pair<GazeTrace, GroundTruth> gen_trace(const SynthSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t n = spec.n_frames;
  const RoiLayout& roi = spec.config.roi;

  // Invalid frames: requested gaps plus an exact dropout count drawn from the rest.
  std::vector<bool> invalid(n, false);
  for (const Gap& g : spec.gaps) std::fill(invalid.begin() + static_cast<std::ptrdiff_t>(g.first),
                                           invalid.begin() + static_cast<std::ptrdiff_t>(g.last) + 1, true);
  const std::size_t n_dropped = allocate_counts({1.0 - spec.dropout, spec.dropout}, n)[1];
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    if (!invalid[i]) candidates.push_back(i);
  }
  rng.shuffle(candidates);
  for (std::size_t k = 0; k < std::min(n_dropped, candidates.size()); ++k) invalid[candidates[k]] = true;
  const std::size_t n_valid = static_cast<std::size_t>(std::count(invalid.begin(), invalid.end(), false));

  // For a mixture, fix the label of every valid frame up front.
  std::vector<std::string> planned;
  if (const auto* mixture = std::get_if<RoiMixture>(&spec.distribution)) {
    std::vector<double> w;
    for (const auto& entry : mixture->weights) w.push_back(entry.second);
    const auto counts = allocate_counts(w, n_valid);
    for (std::size_t i = 0; i < counts.size(); ++i) planned.insert(planned.end(), counts[i], mixture->weights[i].first);
    rng.shuffle(planned);
  }

  const Bounds bounds = disk_bounds(spec);
  GazeTrace trace;
  trace.scene_width = roi.scene_width();
  trace.scene_height = roi.scene_height();
  trace.meta = spec.meta;
  GroundTruth truth;
  truth.seed = spec.seed;
  trace.samples.reserve(n);
  truth.samples.reserve(n);

  std::size_t valid_index = 0;
  for (std::size_t i = 0; i < n; ++i) {
    GazeSample s;
    TruthSample t;
    s.frame_id = t.frame_id = i;
    if (!invalid[i]) {
      double px = 0;
      double py = 0;
      int attempts = 0;
      for (;; ++attempts) {
        if (attempts == kMaxAttempts) throw DataError("synthetic sampling cannot place a point inside the scene");
        if (const auto* g = std::get_if<Gaussian>(&spec.distribution)) {
          px = g->mean.x + g->sigma_x * rng.normal();
          py = g->mean.y + g->sigma_y * rng.normal();
          const int ix = round_half_up(px);
          const int iy = round_half_up(py);
          if (ix >= bounds.x0 && ix <= bounds.x1 && iy >= bounds.y0 && iy <= bounds.y1) break;
        } else {
          const std::string& label = planned[valid_index];
          Rect area{0, 0, roi.scene_width(), roi.scene_height()};
          for (const Region& r : roi.regions()) {
            if (r.name == label) area = r.rect;
          }
          const int x0 = std::max(area.x, bounds.x0);
          const int x1 = std::min(area.x + area.w - 1, bounds.x1);
          const int y0 = std::max(area.y, bounds.y0);
          const int y1 = std::min(area.y + area.h - 1, bounds.y1);
          if (x0 > x1 || y0 > y1) throw DataError("region '" + label + "' has no room for the marker disk");
          // Uniform over the pixel squares, so rounding lands on [x0, x1] evenly.
          px = x0 - 0.5 + rng.uniform() * (x1 - x0 + 1);
          py = y0 - 0.5 + rng.uniform() * (y1 - y0 + 1);
          const int ix = std::clamp(round_half_up(px), x0, x1);
          const int iy = std::clamp(round_half_up(py), y0, y1);
          if (roi.classify(ix, iy) == label) break;
        }
      }
      s.valid = t.valid = true;
      t.true_x = px;
      t.true_y = py;
      s.x = t.x = std::clamp(round_half_up(px), bounds.x0, bounds.x1);
      s.y = t.y = std::clamp(round_half_up(py), bounds.y0, bounds.y1);
      t.label = planned.empty() ? roi.classify(s.x, s.y) : planned[valid_index];
      ++valid_index;
    }
    trace.samples.push_back(std::move(s));
    truth.samples.push_back(std::move(t));
  }
  return {std::move(trace), std::move(truth)};
}

void render_frame(const GazeSample& sample, const SynthSpec& spec, RgbImage& canvas) {
  const RecordingLayout& layout = spec.config.layout;
  const MarkerSpec& marker = spec.config.marker;
  canvas.resize(layout.canvas_width(), layout.canvas_height());
  // Everything outside the game pane is black; the pane itself is fully painted below.
  const Rect& g = layout.game_pane();
  canvas.fill(Rect{0, 0, canvas.width(), g.y}, Rgb{});
  canvas.fill(Rect{0, g.y + g.h, canvas.width(), canvas.height() - g.y - g.h}, Rgb{});
  canvas.fill(Rect{0, g.y, g.x, g.h}, Rgb{});
  canvas.fill(Rect{g.x + g.w, g.y, canvas.width() - g.x - g.w, g.h}, Rgb{});

  // Game pane: 8x8 blocks of hashed colour with drifting white diagonal
  // stripes. Anything the detector would call marker-coloured becomes white.
  // A pixel is on a stripe when (x + y + frame % 64) mod 112 < 16.
  const Rect& game = layout.game_pane();
  const auto frame = static_cast<std::uint32_t>(sample.frame_id);
  const std::size_t row_bytes = 3 * static_cast<std::size_t>(game.w);
  std::vector<std::uint8_t> block_row(row_bytes);
  for (int y = 0; y < game.h; ++y) {
    if (y % 8 == 0) {
      for (int bx = 0; bx * 8 < game.w; ++bx) {
        const std::uint32_t h = mix(static_cast<std::uint32_t>(bx) * 73856093U ^
                                    static_cast<std::uint32_t>(y / 8) * 19349663U ^ frame * 83492791U);
        Rgb c{static_cast<std::uint8_t>(h), static_cast<std::uint8_t>(h >> 8), static_cast<std::uint8_t>(h >> 16)};
        if (marker.matches(c)) c = {255, 255, 255};
        for (int x = bx * 8; x < std::min(game.w, bx * 8 + 8); ++x) {
          block_row[3 * x] = c.r;
          block_row[3 * x + 1] = c.g;
          block_row[3 * x + 2] = c.b;
        }
      }
    }
    std::uint8_t* p = canvas.row(game.y + y) + 3 * static_cast<std::size_t>(game.x);
    std::memcpy(p, block_row.data(), row_bytes);
    const int offset = (y + static_cast<int>(frame % 64)) % 112;
    for (int start = (112 - offset) % 112 - 112; start < game.w; start += 112) {
      const int x0 = std::max(start, 0);
      const int x1 = std::min(start + 16, game.w);
      if (x0 < x1) std::memset(p + 3 * static_cast<std::size_t>(x0), 255, 3 * static_cast<std::size_t>(x1 - x0));
    }
  }

  if (!sample.valid) return;
  const Rect& pane = layout.gaze_pane();
  const int r = spec.marker_radius;
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      if (dx * dx + dy * dy <= r * r) canvas.set(pane.x + sample.x + dx, pane.y + sample.y + dy, spec.marker_color);
    }
  }
}

void check_renderable(const GazeTrace& trace, const SynthSpec& spec) {
  const Rect& pane = spec.config.layout.gaze_pane();
  const int r = spec.marker_radius;
  for (const GazeSample& s : trace.samples) {
    if (!s.valid) continue;
    if (s.x - r < 0 || s.y - r < 0 || s.x + r >= pane.w || s.y + r >= pane.h) {
      throw DataError("marker disk at frame " + std::to_string(s.frame_id) + " (" + std::to_string(s.x) + "," +
                      std::to_string(s.y) + ") would leave the gaze pane");
    }
  }
}

std::string frame_filename(std::size_t index, std::size_t n_frames) {
  int digits = 4;
  for (std::size_t limit = 10000; n_frames > limit; limit *= 10) ++digits;
  char buf[48];
  std::snprintf(buf, sizeof buf, "f%0*zu.png", digits, index);
  return buf;
}

std::vector<std::filesystem::path> render_frames(const GazeTrace& trace, const SynthSpec& spec,
                                                 const std::filesystem::path& out_dir) {
  spec.validate();
  check_renderable(trace, spec);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  RgbImage canvas;
  try {
    for (std::size_t i = 0; i < trace.samples.size(); ++i) {
      render_frame(trace.samples[i], spec, canvas);
      auto path = out_dir / frame_filename(i, trace.samples.size());
      write_image(path, canvas);
      written.push_back(std::move(path));
    }
  } catch (...) {
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
  return written;
}

RenderedFrameSource::RenderedFrameSource(GazeTrace trace, SynthSpec spec) : trace_(std::move(trace)), spec_(std::move(spec)) {
  spec_.validate();
  check_renderable(trace_, spec_);
}

std::optional<std::size_t> RenderedFrameSource::next(RgbImage& buffer) {
  if (frames_yielded() >= trace_.samples.size()) return std::nullopt;
  render_frame(trace_.samples[frames_yielded()], spec_, buffer);
  return advance();
}

void write_ground_truth_csv(const GroundTruth& truth, std::ostream& out) {
  out << "# generator=" << truth.generator << ";seed=" << truth.seed << '\n';
  out << "frame_id,valid,true_x,true_y,x,y,label\n";
  char buf[64];
  for (const TruthSample& t : truth.samples) {
    out << t.frame_id << ',' << (t.valid ? 1 : 0) << ',';
    if (t.valid) {
      std::snprintf(buf, sizeof buf, "%.17g", t.true_x);
      out << buf << ',';
      std::snprintf(buf, sizeof buf, "%.17g", t.true_y);
      out << buf << ',' << t.x << ',' << t.y << ',' << t.label;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
}

}  // namespace gazekit::synth

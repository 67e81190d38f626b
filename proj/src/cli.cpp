#include "gazekit/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gazekit/config.hpp"
#include "gazekit/detect.hpp"
#include "gazekit/error.hpp"
#include "gazekit/ingest.hpp"
#include "gazekit/io_csv.hpp"
#include "gazekit/metrics.hpp"
#include "gazekit/report.hpp"
#include "gazekit/roi.hpp"
#include "gazekit/stats.hpp"
#include "gazekit/synth.hpp"

namespace gazekit {

namespace {

namespace fs = std::filesystem;

// Options shared by several subcommands. Empty optionals mean "not given".
struct Common {
  std::string config_path;
  std::optional<int> width;
  std::optional<int> height;
  double alpha = 0.05;
  std::optional<std::uint64_t> seed;
  std::string out;
};

struct MarkerOverrides {
  std::optional<int> r_min, r_max, g_min, g_max, b_min, b_max, min_area, max_area;
};

AnalysisConfig load_run_config(const Common& common) {
  return common.config_path.empty() ? default_config() : load_config_file(common.config_path);
}

void check_alpha(double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw UsageError("--alpha must lie in (0, 1)");
}

std::uint8_t channel(int v, const char* flag) {
  if (v < 0 || v > 255) throw UsageError(std::string(flag) + " must lie in 0..255");
  return static_cast<std::uint8_t>(v);
}

void apply(const MarkerOverrides& o, MarkerSpec& m) {
  if (o.r_min) m.r.min = channel(*o.r_min, "--marker-r-min");
  if (o.r_max) m.r.max = channel(*o.r_max, "--marker-r-max");
  if (o.g_min) m.g.min = channel(*o.g_min, "--marker-g-min");
  if (o.g_max) m.g.max = channel(*o.g_max, "--marker-g-max");
  if (o.b_min) m.b.min = channel(*o.b_min, "--marker-b-min");
  if (o.b_max) m.b.max = channel(*o.b_max, "--marker-b-max");
  if (o.min_area) m.min_blob_area = *o.min_area;
  if (o.max_area) m.max_blob_area = *o.max_area;
  m.validate();
}

void write_text(const fs::path& path, const std::string& text) {
  write_atomically(path, [&](std::ostream& out) { out << text; });
}

// ---- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::string frames_dir;
  bool from_stdin = false;
  std::string participant;
  std::string group = "Unspecified";
  std::string trial;
  double rate = 90.0;
  unsigned threads = 1;
  MarkerOverrides marker;
};

void run_extract(const Common& common, const ExtractArgs& args, std::istream& in, std::ostream& out) {
  if (args.frames_dir.empty() == !args.from_stdin) throw UsageError("extract needs exactly one of --frames or --stdin");
  AnalysisConfig config = load_run_config(common);
  apply(args.marker, config.marker);
  const int width = common.width.value_or(config.layout.canvas_width());
  const int height = common.height.value_or(config.layout.canvas_height());

  TraceMetadata meta;
  meta.participant_id = args.participant;
  meta.group = parse_skill_group(args.group);
  meta.trial_id = args.trial;
  meta.nominal_rate = args.rate;

  std::unique_ptr<FrameSource> source =
      args.from_stdin ? open_raw_stream(in, width, height) : open_image_dir(args.frames_dir, width, height);
  GazeTrace trace = extract_trace(*source, config.layout, config.marker, meta, ExtractOptions{args.threads});
  trace = annotate_trace(std::move(trace), config.roi);
  const fs::path out_path = common.out.empty() ? fs::path("output.csv") : fs::path(common.out);
  write_output_csv(trace, out_path);
  out << "extracted " << trace.samples.size() << " frames (" << trace.n_valid() << " with a marker) -> "
      << out_path.string() << '\n';
}

// ---- metrics ---------------------------------------------------------------

struct MetricsArgs {
  std::vector<std::string> sessions;
  std::string matches;
};

// PATH[:PARTICIPANT[:GROUP[:TRIAL]]]
std::pair<fs::path, TraceMetadata> parse_session(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.empty() || parts.size() > 4 || parts[0].empty()) {
    throw UsageError("--session expects PATH[:PARTICIPANT[:GROUP[:TRIAL]]], got '" + spec + "'");
  }
  TraceMetadata meta;
  const fs::path path = parts[0];
  meta.participant_id = parts.size() > 1 ? parts[1] : path.stem().string();
  if (parts.size() > 2) meta.group = parse_skill_group(parts[2]);
  if (parts.size() > 3) meta.trial_id = parts[3];
  return {path, meta};
}

void run_metrics(const Common& common, const MetricsArgs& args, std::ostream& out) {
  if (args.sessions.empty()) throw UsageError("metrics needs at least one --session");
  if (common.out.empty()) throw UsageError("metrics needs --out");
  const AnalysisConfig config = load_run_config(common);
  std::map<std::pair<std::string, std::string>, MatchStats> matches;
  if (!args.matches.empty()) {
    for (const auto& m : read_match_log(fs::path(args.matches))) {
      if (!matches.emplace(std::pair{m.participant_id, m.trial_id}, m.stats).second) {
        throw DataError("match log repeats " + m.participant_id + "/" + m.trial_id);
      }
    }
  }
  std::vector<SessionRow> rows;
  const auto labels = config.roi.labels();
  for (const auto& spec : args.sessions) {
    auto [path, meta] = parse_session(spec);
    const GazeTrace trace = read_output_csv(path, config.roi.scene_width(), config.roi.scene_height(), meta);
    SessionRow row{meta, session_metrics(trace, labels), std::nullopt};
    if (auto it = matches.find({meta.participant_id, meta.trial_id}); it != matches.end()) row.match = it->second;
    rows.push_back(std::move(row));
  }
  write_metrics_csv(rows, fs::path(common.out), labels);
  out << "wrote metrics for " << rows.size() << " sessions -> " << common.out << '\n';
}

// ---- compare / correlate -----------------------------------------------------

struct TableArgs {
  std::string input;
  std::vector<std::string> variables;
  std::vector<std::string> groups;
  std::vector<std::string> pairs;
};

std::vector<std::string> pick_variables(const ObservationTable& table, const std::vector<std::string>& wanted) {
  if (wanted.empty()) return table.variables;
  for (const auto& v : wanted) {
    if (std::find(table.variables.begin(), table.variables.end(), v) == table.variables.end()) {
      throw DataError("variable '" + v + "' not found in the table");
    }
  }
  return wanted;
}

std::pair<std::string, std::string> pick_groups(const ObservationTable& table, const std::vector<std::string>& wanted) {
  std::set<std::string> present;
  for (const auto& row : table.rows) present.insert(row.group);
  if (!wanted.empty()) {
    if (wanted.size() != 2) throw UsageError("--groups takes exactly two group names");
    for (const auto& g : wanted) {
      if (!present.count(g)) throw DataError("group '" + g + "' not found in the table");
    }
    return {wanted[0], wanted[1]};
  }
  if (present.size() != 2) {
    throw DataError("table has " + std::to_string(present.size()) + " groups; pass --groups to choose two");
  }
  return {*present.begin(), *std::next(present.begin())};
}

void run_compare(const Common& common, const TableArgs& args, std::ostream& out) {
  check_alpha(common.alpha);
  if (args.input.empty() || common.out.empty()) throw UsageError("compare needs --input and --out");
  const ObservationTable table = read_observation_table(fs::path(args.input));
  const auto [group_a, group_b] = pick_groups(table, args.groups);
  std::vector<ComparisonRow> rows;
  for (const auto& variable : pick_variables(table, args.variables)) {
    std::vector<double> a;
    std::vector<double> b;
    for (const auto& row : table.rows) {
      auto it = row.values.find(variable);
      if (it == row.values.end()) continue;
      if (row.group == group_a) a.push_back(it->second);
      if (row.group == group_b) b.push_back(it->second);
    }
    try {
      rows.push_back({variable, stats::auto_compare(a, b, common.alpha)});
    } catch (const DataError& e) {
      throw DataError("variable '" + variable + "': " + e.what());
    }
  }
  write_atomically(fs::path(common.out), [&](std::ostream& os) { write_comparison_csv(rows, os); });
  out << "compared " << group_a << " vs " << group_b << " on " << rows.size() << " variables -> " << common.out << '\n';
}

std::vector<std::pair<std::string, std::string>> pick_pairs(const ObservationTable& table,
                                                            const std::vector<std::string>& wanted) {
  std::vector<std::pair<std::string, std::string>> pairs;
  if (wanted.empty()) {
    for (std::size_t i = 0; i < table.variables.size(); ++i) {
      for (std::size_t j = i + 1; j < table.variables.size(); ++j) pairs.emplace_back(table.variables[i], table.variables[j]);
    }
    return pairs;
  }
  for (const auto& p : wanted) {
    const auto comma = p.find(',');
    if (comma == std::string::npos) throw UsageError("--pair expects X,Y, got '" + p + "'");
    const std::string x = p.substr(0, comma);
    const std::string y = p.substr(comma + 1);
    pick_variables(table, {x, y});
    pairs.emplace_back(x, y);
  }
  return pairs;
}

void paired_values(const ObservationTable& table, const std::string& x, const std::string& y, std::vector<double>& xs,
                   std::vector<double>& ys) {
  for (const auto& row : table.rows) {
    auto ix = row.values.find(x);
    auto iy = row.values.find(y);
    if (ix == row.values.end() || iy == row.values.end()) continue;
    xs.push_back(ix->second);
    ys.push_back(iy->second);
  }
}

void run_correlate(const Common& common, const TableArgs& args, std::ostream& out) {
  check_alpha(common.alpha);
  if (args.input.empty() || common.out.empty()) throw UsageError("correlate needs --input and --out");
  const ObservationTable table = read_observation_table(fs::path(args.input));
  std::vector<CorrelationRow> rows;
  for (const auto& [x, y] : pick_pairs(table, args.pairs)) {
    std::vector<double> xs;
    std::vector<double> ys;
    paired_values(table, x, y, xs, ys);
    try {
      rows.push_back({x, y, stats::auto_correlate(xs, ys, common.alpha)});
    } catch (const DataError& e) {
      throw DataError("pair " + x + "," + y + ": " + e.what());
    }
  }
  write_atomically(fs::path(common.out), [&](std::ostream& os) { write_correlation_csv(rows, os); });
  out << "correlated " << rows.size() << " variable pairs -> " << common.out << '\n';
}

// ---- power -------------------------------------------------------------------

struct PowerArgs {
  double d = 0;
  int n1 = 0;
  int n2 = 0;
};

void run_power(const Common& common, const PowerArgs& args, std::ostream& out) {
  check_alpha(common.alpha);
  if (args.n1 < 2 || args.n2 < 2) throw UsageError("--n1 and --n2 must be >= 2");
  const auto r = stats::power_two_sample_t(args.d, static_cast<std::size_t>(args.n1), static_cast<std::size_t>(args.n2),
                                           common.alpha);
  char buf[256];
  std::snprintf(buf, sizeof buf, "d=%.4f\nalpha=%.4f\ndelta=%.4f\nt_crit=%.4f\ndf=%.0f\npower=%.4f\n", r.d, r.alpha,
                r.delta, r.t_crit, r.df, r.power);
  out << buf;
}

// ---- synth -------------------------------------------------------------------

struct SynthArgs {
  std::size_t frames = 1000;
  double mean_x = 960;
  double mean_y = 540;
  double sigma_x = 100;
  double sigma_y = 60;
  std::string mixture;
  double dropout = 0;
  int radius = 6;
  std::vector<std::string> gaps;
  std::string participant = "synthetic";
  std::string group = "Unspecified";
  std::string trial = "1";
};

synth::RoiMixture parse_mixture(const std::string& text) {
  synth::RoiMixture mixture;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--mixture expects LABEL=WEIGHT,..., got '" + item + "'");
    double w = 0;
    try {
      w = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw UsageError("--mixture weight '" + item.substr(eq + 1) + "' is not a number");
    }
    mixture.weights.emplace_back(item.substr(0, eq), w);
  }
  return mixture;
}

synth::Gap parse_gap(const std::string& text) {
  const auto dash = text.find('-');
  try {
    if (dash == std::string::npos) {
      const auto f = static_cast<std::size_t>(std::stoull(text));
      return {f, f};
    }
    return {static_cast<std::size_t>(std::stoull(text.substr(0, dash))),
            static_cast<std::size_t>(std::stoull(text.substr(dash + 1)))};
  } catch (const std::exception&) {
    throw UsageError("--gap expects FIRST-LAST, got '" + text + "'");
  }
}

void run_synth(const Common& common, const SynthArgs& args, std::ostream& out) {
  if (common.out.empty()) throw UsageError("synth needs --out");
  synth::SynthSpec spec;
  spec.config = load_run_config(common);
  spec.n_frames = args.frames;
  spec.seed = common.seed.value_or(1);
  spec.dropout = args.dropout;
  spec.marker_radius = args.radius;
  if (args.mixture.empty()) {
    spec.distribution = synth::Gaussian{{args.mean_x, args.mean_y}, args.sigma_x, args.sigma_y};
  } else {
    spec.distribution = parse_mixture(args.mixture);
  }
  for (const auto& g : args.gaps) spec.gaps.push_back(parse_gap(g));
  spec.meta.participant_id = args.participant;
  spec.meta.group = parse_skill_group(args.group);
  spec.meta.trial_id = args.trial;

  const auto [trace, truth] = synth::gen_trace(spec);
  const fs::path dir = common.out;
  const bool existed = fs::exists(dir);
  try {
    synth::render_frames(trace, spec, dir / "frames");
    write_atomically(dir / "ground_truth.csv", [&](std::ostream& os) { synth::write_ground_truth_csv(truth, os); });
    write_text(dir / "config.json", to_json_text(spec.config));
  } catch (...) {
    std::error_code ec;
    if (!existed) {
      fs::remove_all(dir, ec);
    } else {
      fs::remove_all(dir / "frames", ec);
      fs::remove(dir / "ground_truth.csv", ec);
    }
    throw;
  }
  out << "rendered " << trace.samples.size() << " frames (" << trace.n_valid() << " with a marker) -> " << dir.string()
      << '\n';
}

// ---- report ------------------------------------------------------------------

void run_report(const Common& common, const TableArgs& args, std::ostream& out) {
  if (args.input.empty() || common.out.empty()) throw UsageError("report needs --input and --out");
  const ObservationTable table = read_observation_table(fs::path(args.input));
  const fs::path dir = common.out;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::string> groups;
  for (const auto& row : table.rows) {
    if (std::find(groups.begin(), groups.end(), row.group) == groups.end()) groups.push_back(row.group);
  }
  std::sort(groups.begin(), groups.end());

  std::vector<fs::path> written;
  try {
    for (const auto& [x, y] : pick_pairs(table, args.pairs)) {
      std::vector<ScatterSeries> series;
      for (const auto& g : groups) {
        ScatterSeries s{g, {}, {}};
        for (const auto& row : table.rows) {
          if (row.group != g) continue;
          auto ix = row.values.find(x);
          auto iy = row.values.find(y);
          if (ix == row.values.end() || iy == row.values.end()) continue;
          s.x.push_back(ix->second);
          s.y.push_back(iy->second);
        }
        if (!s.x.empty()) series.push_back(std::move(s));
      }
      const fs::path path = dir / (x + "__" + y + ".svg");
      write_text(path, scatter_svg(series, x, y));
      written.push_back(path);
    }
  } catch (...) {
    for (const auto& p : written) fs::remove(p, ec);
    throw;
  }
  out << "wrote " << written.size() << " plots -> " << dir.string() << '\n';
}

void add_common(CLI::App* sub, Common& common, bool with_dims, bool with_alpha, bool with_seed) {
  sub->add_option("--config", common.config_path, "Layout/ROI/marker config (JSON)");
  sub->add_option("--out", common.out, "Output path");
  if (with_dims) {
    sub->add_option("--width", common.width, "Canvas width in pixels (defaults to the config)");
    sub->add_option("--height", common.height, "Canvas height in pixels (defaults to the config)");
  }
  if (with_alpha) sub->add_option("--alpha", common.alpha, "Significance level")->capture_default_str();
  if (with_seed) sub->add_option("--seed", common.seed, "Random seed");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaze-marker extraction, ROI metrics and group statistics for screen-recorded gameplay", "gazekit"};
  app.require_subcommand(1);

  Common common;
  ExtractArgs extract_args;
  MetricsArgs metrics_args;
  TableArgs table_args;
  PowerArgs power_args;
  SynthArgs synth_args;

  auto* extract = app.add_subcommand("extract", "Detect the gaze marker in every frame and write output.csv");
  add_common(extract, common, true, false, false);
  extract->add_option("--frames", extract_args.frames_dir, "Directory of PNG/PPM frames");
  extract->add_flag("--stdin", extract_args.from_stdin, "Read packed RGB24 frames from standard input");
  extract->add_option("--participant", extract_args.participant);
  extract->add_option("--group", extract_args.group, "MiddleSkill, HighSkill or Unspecified");
  extract->add_option("--trial", extract_args.trial);
  extract->add_option("--rate", extract_args.rate, "Nominal frame rate (metadata only)");
  extract->add_option("--threads", extract_args.threads, "Detection worker threads")->check(CLI::PositiveNumber);
  extract->add_option("--marker-r-min", extract_args.marker.r_min);
  extract->add_option("--marker-r-max", extract_args.marker.r_max);
  extract->add_option("--marker-g-min", extract_args.marker.g_min);
  extract->add_option("--marker-g-max", extract_args.marker.g_max);
  extract->add_option("--marker-b-min", extract_args.marker.b_min);
  extract->add_option("--marker-b-max", extract_args.marker.b_max);
  extract->add_option("--marker-min-area", extract_args.marker.min_area);
  extract->add_option("--marker-max-area", extract_args.marker.max_area);

  auto* metrics = app.add_subcommand("metrics", "Per-session gaze metrics from output.csv files");
  add_common(metrics, common, false, false, false);
  metrics->add_option("--session", metrics_args.sessions, "PATH[:PARTICIPANT[:GROUP[:TRIAL]]]")->required();
  metrics->add_option("--matches", metrics_args.matches, "Match log CSV (adds KDA columns)");

  auto* compare = app.add_subcommand("compare", "Two-group comparison per variable");
  add_common(compare, common, false, true, false);
  compare->add_option("--input", table_args.input, "Long-format table or metrics CSV")->required();
  compare->add_option("--variable", table_args.variables, "Variable to compare (default: all)");
  compare->add_option("--groups", table_args.groups, "The two groups to compare")->delimiter(',');

  auto* correlate = app.add_subcommand("correlate", "Correlation per variable pair");
  add_common(correlate, common, false, true, false);
  correlate->add_option("--input", table_args.input, "Long-format table or metrics CSV")->required();
  correlate->add_option("--pair", table_args.pairs, "X,Y (default: all pairs)");

  auto* power = app.add_subcommand("power", "Post-hoc power of the two-sample t test");
  add_common(power, common, false, true, false);
  power->add_option("--d", power_args.d, "Cohen's d")->required();
  power->add_option("--n1", power_args.n1)->required();
  power->add_option("--n2", power_args.n2)->required();

  auto* synth_cmd = app.add_subcommand("synth", "Render a synthetic session with known ground truth");
  add_common(synth_cmd, common, false, false, true);
  synth_cmd->add_option("--frames", synth_args.frames)->capture_default_str();
  synth_cmd->add_option("--mean-x", synth_args.mean_x)->capture_default_str();
  synth_cmd->add_option("--mean-y", synth_args.mean_y)->capture_default_str();
  synth_cmd->add_option("--sigma-x", synth_args.sigma_x)->capture_default_str();
  synth_cmd->add_option("--sigma-y", synth_args.sigma_y)->capture_default_str();
  synth_cmd->add_option("--mixture", synth_args.mixture, "LABEL=WEIGHT,... instead of the Gaussian");
  synth_cmd->add_option("--dropout", synth_args.dropout)->capture_default_str();
  synth_cmd->add_option("--radius", synth_args.radius, "Marker disk radius")->capture_default_str();
  synth_cmd->add_option("--gap", synth_args.gaps, "FIRST-LAST frames without a marker");
  synth_cmd->add_option("--participant", synth_args.participant);
  synth_cmd->add_option("--group", synth_args.group);
  synth_cmd->add_option("--trial", synth_args.trial);

  auto* report = app.add_subcommand("report", "SVG scatter plots with least-squares lines");
  add_common(report, common, false, false, false);
  report->add_option("--input", table_args.input, "Long-format table or metrics CSV")->required();
  report->add_option("--pair", table_args.pairs, "X,Y (default: all pairs)");

  std::vector<const char*> argv{"gazekit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "gazekit: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (extract->parsed()) run_extract(common, extract_args, in, out);
    if (metrics->parsed()) run_metrics(common, metrics_args, out);
    if (compare->parsed()) run_compare(common, table_args, out);
    if (correlate->parsed()) run_correlate(common, table_args, out);
    if (power->parsed()) run_power(common, power_args, out);
    if (synth_cmd->parsed()) run_synth(common, synth_args, out);
    if (report->parsed()) run_report(common, table_args, out);
  } catch (const Error& e) {
    err << "gazekit: " << e.what() << '\n';
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    err << "gazekit: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace gazekit

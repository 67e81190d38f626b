#include "gazekit/io_csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "gazekit/error.hpp"

namespace gazekit {

namespace {

constexpr std::string_view kOutputHeader = "frame_id,x,y,roi";
constexpr std::string_view kMatchHeader = "participant_id,trial_id,kills,deaths,assists";
constexpr std::string_view kLongHeader = "participant_id,group,variable,value";

template <typename Int>
std::optional<Int> parse_int(std::string_view s) {
  Int v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

std::optional<double> parse_double(std::string_view s) {
  if (s.empty()) return std::nullopt;
  // from_chars for floating point is not available on every toolchain we target.
  std::string copy(s);
  char* end = nullptr;
  const double v = std::strtod(copy.c_str(), &end);
  if (end != copy.c_str() + copy.size()) return std::nullopt;
  return v;
}

std::string trim_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

std::ifstream open_for_read(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::string opt_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

std::vector<std::string_view> split_csv_line(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  std::filesystem::path tmp = path;
  tmp += ".partial";
  try {
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw IoError("cannot write " + path.string());
      body(out);
      out.flush();
      if (!out) throw IoError("write failed: " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
  } catch (...) {
    std::error_code ignored;
    std::filesystem::remove(tmp, ignored);
    throw;
  }
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.6g", v);
  return buf;
}

void write_output_csv(const GazeTrace& trace, std::ostream& out) {
  out << kOutputHeader << '\n';
  for (const GazeSample& s : trace.samples) {
    out << s.frame_id << ',';
    if (s.valid) {
      if (!s.roi) throw DataError("sample at frame " + std::to_string(s.frame_id) + " is not annotated");
      out << s.x << ',' << s.y << ',' << *s.roi;
    } else {
      out << ",,";
    }
    out << '\n';
  }
}

void write_output_csv(const GazeTrace& trace, const std::filesystem::path& path) {
  write_atomically(path, [&](std::ostream& out) { write_output_csv(trace, out); });
}

GazeTrace read_output_csv(std::istream& in, int scene_width, int scene_height, const TraceMetadata& meta) {
  GazeTrace trace;
  trace.scene_width = scene_width;
  trace.scene_height = scene_height;
  trace.meta = meta;

  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != kOutputHeader) {
    throw DataError("output CSV header must be '" + std::string(kOutputHeader) + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_cr(line).empty()) continue;
    const auto f = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (f.size() != 4) throw DataError(where + ": expected 4 fields, got " + std::to_string(f.size()));
    auto frame = parse_int<std::uint64_t>(f[0]);
    if (!frame) throw DataError(where + ": bad frame_id '" + std::string(f[0]) + "'");
    GazeSample s;
    s.frame_id = *frame;
    const int empties = int(f[1].empty()) + int(f[2].empty()) + int(f[3].empty());
    if (empties != 0 && empties != 3) {
      throw DataError("row " + std::to_string(*frame) + " (" + where + "): x, y and roi must be all empty or all set");
    }
    if (empties == 0) {
      auto x = parse_int<int>(f[1]);
      auto y = parse_int<int>(f[2]);
      if (!x || !y) throw DataError("row " + std::to_string(*frame) + " (" + where + "): non-integer coordinate");
      s.x = *x;
      s.y = *y;
      s.valid = true;
      s.roi = std::string(f[3]);
    }
    trace.samples.push_back(std::move(s));
  }
  trace.validate();
  return trace;
}

GazeTrace read_output_csv(const std::filesystem::path& path, int scene_width, int scene_height,
                          const TraceMetadata& meta) {
  auto in = open_for_read(path);
  try {
    return read_output_csv(in, scene_width, scene_height, meta);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_metrics_csv(const std::vector<SessionRow>& rows, std::ostream& out, const std::vector<std::string>& labels) {
  if (rows.empty()) throw DataError("no sessions to write");
  const bool with_match = std::any_of(rows.begin(), rows.end(), [](const SessionRow& r) { return r.match.has_value(); });
  out << "participant_id,group,trial_id,n_valid,valid_fraction,sd_x,sd_y,mean_x,mean_y,dist_center";
  for (const auto& label : labels) out << ",pct_" << label;
  if (with_match) out << ",kills,deaths,assists,kda";
  out << '\n';
  for (const SessionRow& r : rows) {
    const SessionMetrics& m = r.metrics;
    out << r.meta.participant_id << ',' << to_string(r.meta.group) << ',' << r.meta.trial_id << ',' << m.n_valid << ','
        << format_real(m.valid_fraction) << ',' << format_real(m.sd_x) << ',' << format_real(m.sd_y) << ','
        << format_real(m.mean_x) << ',' << format_real(m.mean_y) << ',' << format_real(m.dist_center);
    for (const auto& label : labels) {
      auto it = m.roi_pct.find(label);
      out << ',' << format_real(it == m.roi_pct.end() ? 0.0 : it->second);
    }
    if (with_match) {
      if (r.match) {
        out << ',' << r.match->kills << ',' << r.match->deaths << ',' << r.match->assists << ','
            << format_real(r.match->kda());
      } else {
        out << ",,,,";
      }
    }
    out << '\n';
  }
}

void write_metrics_csv(const std::vector<SessionRow>& rows, const std::filesystem::path& path,
                       const std::vector<std::string>& labels) {
  write_atomically(path, [&](std::ostream& out) { write_metrics_csv(rows, out, labels); });
}

std::vector<MatchRecord> read_match_log(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim_cr(line) != kMatchHeader) {
    throw DataError("match log header must be '" + std::string(kMatchHeader) + "'");
  }
  std::vector<MatchRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_cr(line).empty()) continue;
    const auto f = split_csv_line(line);
    const std::string where = "match log line " + std::to_string(line_no);
    if (f.size() != 5) throw DataError(where + ": expected 5 fields");
    auto k = parse_int<int>(f[2]);
    auto d = parse_int<int>(f[3]);
    auto a = parse_int<int>(f[4]);
    if (!k || !d || !a || *k < 0 || *d < 0 || *a < 0) throw DataError(where + ": counts must be non-negative integers");
    out.push_back({std::string(f[0]), std::string(f[1]), MatchStats{*k, *d, *a}});
  }
  return out;
}

std::vector<MatchRecord> read_match_log(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  return read_match_log(in);
}

ObservationTable read_observation_table(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw DataError("table is empty");
  header = trim_cr(header);
  const auto columns = split_csv_line(header);

  ObservationTable table;
  std::map<std::string, std::size_t> row_of;
  std::set<std::string> seen_vars;
  auto add_variable = [&](const std::string& v) {
    if (seen_vars.insert(v).second) table.variables.push_back(v);
  };
  auto row_for = [&](const std::string& key, std::string_view group, const std::string& where) -> Observation& {
    auto [it, inserted] = row_of.try_emplace(key, table.rows.size());
    if (inserted) {
      table.rows.push_back(Observation{key, std::string(group), {}});
    } else if (table.rows[it->second].group != group) {
      throw DataError(where + ": '" + key + "' appears in two groups");
    }
    return table.rows[it->second];
  };

  std::string line;
  std::size_t line_no = 1;
  if (header == kLongHeader) {
    while (std::getline(in, line)) {
      ++line_no;
      if (trim_cr(line).empty()) continue;
      const auto f = split_csv_line(line);
      const std::string where = "line " + std::to_string(line_no);
      if (f.size() != 4) throw DataError(where + ": expected 4 fields");
      auto value = parse_double(f[3]);
      if (!value) throw DataError(where + ": value '" + std::string(f[3]) + "' is not a number");
      const std::string variable(f[2]);
      Observation& row = row_for(std::string(f[0]), f[1], where);
      if (!row.values.emplace(variable, *value).second) {
        throw DataError(where + ": duplicate value for " + row.key + "/" + variable);
      }
      add_variable(variable);
    }
    return table;
  }

  if (columns.size() < 4 || columns[0] != "participant_id" || columns[1] != "group" || columns[2] != "trial_id") {
    throw DataError("unrecognised table header '" + header + "' (expected '" + std::string(kLongHeader) +
                    "' or a metrics CSV)");
  }
  for (std::size_t c = 3; c < columns.size(); ++c) add_variable(std::string(columns[c]));
  while (std::getline(in, line)) {
    ++line_no;
    if (trim_cr(line).empty()) continue;
    const auto f = split_csv_line(line);
    const std::string where = "line " + std::to_string(line_no);
    if (f.size() != columns.size()) throw DataError(where + ": expected " + std::to_string(columns.size()) + " fields");
    const std::string key = std::string(f[0]) + "/" + std::string(f[2]);
    if (row_of.contains(key)) throw DataError(where + ": session " + key + " appears twice");
    Observation& row = row_for(key, f[1], where);
    for (std::size_t c = 3; c < columns.size(); ++c) {
      if (f[c].empty()) continue;  // e.g. sessions without a match record
      auto value = parse_double(f[c]);
      if (!value) throw DataError(where + ": column " + std::string(columns[c]) + " is not a number");
      row.values[std::string(columns[c])] = *value;
    }
  }
  return table;
}

ObservationTable read_observation_table(const std::filesystem::path& path) {
  auto in = open_for_read(path);
  try {
    return read_observation_table(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_comparison_csv(const std::vector<ComparisonRow>& rows, std::ostream& out) {
  out << "variable,method,statistic,df,p,effect_size,route\n";
  for (const auto& [variable, r] : rows) {
    out << variable << ',' << stats::to_string(r.method) << ',' << format_real(r.statistic) << ',' << opt_real(r.df)
        << ',' << format_real(r.p_value) << ',' << opt_real(r.effect_size) << ',' << r.route << '\n';
  }
}

void write_correlation_csv(const std::vector<CorrelationRow>& rows, std::ostream& out) {
  out << "x,y,method,coefficient,statistic,df,p,n,route\n";
  for (const auto& [x, y, r] : rows) {
    out << x << ',' << y << ',' << stats::to_string(r.method) << ',' << opt_real(r.estimate) << ','
        << format_real(r.statistic) << ',' << opt_real(r.df) << ',' << format_real(r.p_value) << ','
        << (r.n.empty() ? 0 : r.n.front()) << ',' << r.route << '\n';
  }
}

}  // namespace gazekit

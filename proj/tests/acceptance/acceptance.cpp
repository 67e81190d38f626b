// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "gazekit/detect.hpp"
#include "gazekit/distributions.hpp"
#include "gazekit/io_csv.hpp"
#include "gazekit/metrics.hpp"
#include "gazekit/roi.hpp"
#include "gazekit/stats.hpp"
#include "gazekit/synth.hpp"
#include "test_support.hpp"

using namespace gazekit;
using gazekit::testing::lognormals;
using gazekit::testing::normals;
using gazekit::testing::SplitMix64;
using gazekit::testing::uniforms;
using Vec = std::vector<double>;
using Clock = std::chrono::steady_clock;

namespace {

// Tolerances.
constexpr double kPowerDeltaTol = 0.01;
constexpr double kPowerTcritTol = 0.01;
constexpr double kPowerTol = 0.005;
constexpr double kPowerMaxSeconds = 1.0;
constexpr double kTFromRTol = 0.01;
constexpr double kE2ePixelTol = 1.0;
constexpr double kE2eSdRelTol = 0.02;
constexpr double kE2eRoiTol = 0.01;
constexpr double kE2eDistTol = 5.0;
constexpr double kE2eMaxSeconds = 60.0;
constexpr double kAffineTol = 1e-12;
constexpr double kNoncentralTol = 1e-9;
constexpr double kRoiSumTol = 1e-9;
constexpr double kReferenceTol = 1e-4;
constexpr int kPropertyCases = 1000;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Outcome power_reproduction() {
  const auto t0 = Clock::now();
  const auto p = stats::power_two_sample_t(1.04, 10, 11, 0.05);
  const double secs = seconds_since(t0);
  const bool ok_delta = std::fabs(p.delta - 2.39) <= kPowerDeltaTol;
  const bool ok_tcrit = std::fabs(p.t_crit - 2.09) <= kPowerTcritTol;
  const bool ok_df = p.df == 19;
  const bool ok_power = std::fabs(p.power - 0.624) <= kPowerTol;
  const bool ok_time = secs < kPowerMaxSeconds;
  return {ok_delta && ok_tcrit && ok_df && ok_power && ok_time,
          fmt("delta=%.4f(%s) t_crit=%.4f(%s) df=%g(%s) power=%.4f vs 0.624+-%.3f(%s) time=%.3gs(%s)", p.delta,
              ok_delta ? "ok" : "off", p.t_crit, ok_tcrit ? "ok" : "off", p.df, ok_df ? "ok" : "off", p.power, kPowerTol,
              ok_power ? "ok" : "off", secs, ok_time ? "ok" : "slow")};
}

Outcome t_from_r() {
  // Sample with correlation exactly r: y = r*x' + sqrt(1-r^2)*z' for orthonormal centred x', z'.
  const double r = -0.581;
  const std::size_t n = 21;
  Vec x = normals(71, n), z = normals(72, n);
  auto centre = [](Vec& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    for (auto& e : v) e -= m;
  };
  centre(x);
  centre(z);
  const double proj = std::inner_product(z.begin(), z.end(), x.begin(), 0.0) / std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i] -= proj * x[i];
  const double nx = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0));
  const double nz = std::sqrt(std::inner_product(z.begin(), z.end(), z.begin(), 0.0));
  Vec y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = r * x[i] / nx + std::sqrt(1 - r * r) * z[i] / nz;
  const auto res = stats::pearson_r(x, y);
  const bool ok = std::fabs(res.statistic - (-3.11)) <= kTFromRTol && std::fabs(*res.estimate - r) < 1e-12;
  return {ok, fmt("r=%.6f n=%zu t=%.5f vs -3.11+-%.2f df=%g", *res.estimate, n, res.statistic, kTFromRTol, *res.df)};
}

Outcome end_to_end() {
  const auto t0 = Clock::now();
  synth::SynthSpec spec;
  spec.n_frames = 9000;
  spec.distribution = synth::Gaussian{{960, 540}, 100, 60};
  spec.dropout = 0.02;
  spec.seed = 20240901;
  spec.meta.participant_id = "synthetic";
  auto [trace, truth] = synth::gen_trace(spec);
  synth::RenderedFrameSource source(trace, spec);
  const GazeTrace recovered =
      annotate_trace(extract_trace(source, spec.config.layout, spec.config.marker, spec.meta), spec.config.roi);
  const double secs = seconds_since(t0);

  std::size_t validity_mismatch = 0, position_miss = 0;
  double worst = 0;
  Vec tx, ty;
  std::map<std::string, double> truth_counts;
  for (std::size_t i = 0; i < truth.samples.size(); ++i) {
    const auto& t = truth.samples[i];
    const auto& s = recovered.samples.at(i);
    if (s.valid != t.valid) ++validity_mismatch;
    if (!t.valid || !s.valid) continue;
    const double err = std::max(std::fabs(s.x - t.true_x), std::fabs(s.y - t.true_y));
    worst = std::max(worst, err);
    if (err > kE2ePixelTol) ++position_miss;
    tx.push_back(t.true_x);
    ty.push_back(t.true_y);
    ++truth_counts[t.label];
  }
  auto sd = [](const Vec& v) {
    const double m = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
    double ss = 0;
    for (double e : v) ss += (e - m) * (e - m);
    return std::sqrt(ss / (v.size() - 1));
  };
  const double truth_sdx = sd(tx), truth_sdy = sd(ty);
  const double truth_mx = std::accumulate(tx.begin(), tx.end(), 0.0) / tx.size();
  const double truth_my = std::accumulate(ty.begin(), ty.end(), 0.0) / ty.size();
  const double truth_dist = std::hypot(truth_mx - 960.0, truth_my - 540.0);

  const auto m = session_metrics(recovered);
  const double sdx_rel = std::fabs(m.sd_x - truth_sdx) / truth_sdx;
  const double sdy_rel = std::fabs(m.sd_y - truth_sdy) / truth_sdy;
  double roi_worst = 0;
  for (const auto& label : spec.config.roi.labels()) {
    const double expect = truth_counts[label] / static_cast<double>(tx.size());
    roi_worst = std::max(roi_worst, std::fabs(m.roi_pct.at(label) - expect));
  }
  const double dist_err = std::fabs(m.dist_center - truth_dist);

  const bool ok = recovered.samples.size() == 9000 && validity_mismatch == 0 && position_miss == 0 &&
                  sdx_rel <= kE2eSdRelTol && sdy_rel <= kE2eSdRelTol && roi_worst <= kE2eRoiTol &&
                  dist_err <= kE2eDistTol && secs < kE2eMaxSeconds;
  return {ok, fmt("frames=%zu valid=%zu validity_mismatch=%zu max_err=%.3fpx misses=%zu sd_x=%.3f/%.3f(%.3f%%) "
                  "sd_y=%.3f/%.3f(%.3f%%) roi_max_dev=%.4fpp dist_err=%.3fpx time=%.1fs",
                  recovered.samples.size(), recovered.n_valid(), validity_mismatch, worst, position_miss, m.sd_x,
                  truth_sdx, 100 * sdx_rel, m.sd_y, truth_sdy, 100 * sdy_rel, 100 * roi_worst, dist_err, secs)};
}

Outcome exact_wilcoxon() {
  SplitMix64 g(2718);
  int checked = 0, mismatches = 0;
  for (int instance = 0; instance < 200; ++instance) {
    const std::size_t n = 2 + g.integer(0, 8);
    const std::size_t n1 = 1 + g.integer(0, static_cast<int>(n) - 2);
    Vec pooled(n);
    for (std::size_t i = 0; i < n; ++i) pooled[i] = static_cast<double>(i) + 0.5 * g.uniform();
    for (std::size_t i = n; i > 1; --i) std::swap(pooled[i - 1], pooled[g.next() % i]);
    std::int64_t observed = 0;
    for (std::size_t i = 0; i < n1; ++i)
      observed += 1 + std::count_if(pooled.begin(), pooled.end(), [&](double v) { return v < pooled[i]; });

    std::uint64_t le = 0, ge = 0, total = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) != n1) continue;
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i)
        if (mask & (1u << i)) s += static_cast<std::int64_t>(i + 1);
      ++total, le += s <= observed, ge += s >= observed;
    }
    const auto tail = stats::exact_rank_sum_tail(n1, n - n1, observed);
    const auto res = stats::wilcoxon_rank_sum(Vec(pooled.begin(), pooled.begin() + n1), Vec(pooled.begin() + n1, pooled.end()));
    const double p = std::min(1.0, 2.0 * std::min(static_cast<double>(le) / total, static_cast<double>(ge) / total));
    if (tail.total != total || tail.at_most != le || tail.at_least != ge || res.route != "exact" || res.p_value != p)
      ++mismatches;
    ++checked;
  }
  return {mismatches == 0, fmt("instances=%d count_mismatches=%d", checked, mismatches)};
}

Outcome identities() {
  SplitMix64 g(5050);
  std::map<std::string, int> failures, cases;
  auto check = [&](const char* name, bool ok) {
    ++cases[name];
    if (!ok) ++failures[name];
  };
  for (int c = 0; c < kPropertyCases; ++c) {
    auto a = normals(g.next(), 2 + g.integer(0, 30), g.normal(), 0.1 + 5 * g.uniform());
    auto b = normals(g.next(), 2 + g.integer(0, 30), g.normal(), 0.1 + 5 * g.uniform());
    const auto ab = stats::t_test_unpaired(a, b), ba = stats::t_test_unpaired(b, a);
    check("t_antisymmetry", ab.statistic == -ba.statistic && ab.p_value == ba.p_value);
  }
  for (int c = 0; c < kPropertyCases; ++c) {
    const std::size_t n = 3 + g.integer(0, 50);
    Vec x = normals(g.next(), n), y = normals(g.next(), n), xt(n), yneg(n);
    const double scale = std::exp(2 * g.normal()), shift = 100 * g.normal();
    for (std::size_t i = 0; i < n; ++i) y[i] += 0.5 * x[i], xt[i] = scale * x[i] + shift;
    for (std::size_t i = 0; i < n; ++i) yneg[i] = -y[i];
    const double r = *stats::pearson_r(x, y).estimate;
    check("pearson_affine", std::fabs(*stats::pearson_r(xt, y).estimate - r) <= kAffineTol &&
                                *stats::pearson_r(x, yneg).estimate == -r);
  }
  for (int c = 0; c < kPropertyCases; ++c) {
    const std::size_t n = 3 + g.integer(0, 50);
    Vec x = normals(g.next(), n), y = normals(g.next(), n), fx(n), fy(n);
    for (std::size_t i = 0; i < n; ++i) y[i] += x[i] * g.uniform();
    for (std::size_t i = 0; i < n; ++i) fx[i] = std::exp(0.5 * x[i]), fy[i] = y[i] * y[i] * y[i] + y[i];
    const double rho = *stats::spearman_rho(x, y).estimate;
    check("spearman_monotone",
          *stats::spearman_rho(fx, y).estimate == rho && *stats::spearman_rho(x, fy).estimate == rho);
  }
  for (double df : {1.0, 2.0, 3.0, 5.0, 8.0, 12.0, 19.0, 20.0, 30.0, 50.0, 100.0, 300.0, 1000.0, 1e4, 2.5, 7.5, 15.0,
                    40.0, 75.0, 150.0}) {
    for (int i = -25; i <= 25; ++i) {
      const double t = 0.3 * i;
      const double expect = boost::math::cdf(boost::math::students_t(df), t);
      check("noncentral_t_delta0", std::fabs(dist::noncentral_t_cdf(t, df, 0) - expect) <= kNoncentralTol);
    }
  }
  const auto layout = RoiLayout::valorant_default();
  for (int c = 0; c < kPropertyCases; ++c) {
    GazeTrace t;
    const int n = 1 + g.integer(0, 200);
    for (int i = 0; i < n; ++i)
      t.samples.push_back({static_cast<std::uint64_t>(i), g.integer(0, 1919), g.integer(0, 1079), i == 0 || g.uniform() < 0.8, {}});
    double sum = 0;
    bool in_range = true;
    for (const auto& [label, f] : roi_percentages(annotate_trace(t, layout))) sum += f, in_range &= f >= 0 && f <= 1;
    check("roi_pct_sum", in_range && std::fabs(sum - 1) <= kRoiSumTol);
  }
  for (int c = 0; c < kPropertyCases; ++c) {
    const int k = g.integer(0, 50), d = g.integer(0, 50), a = g.integer(0, 50);
    const double v = kda(k, d, a);
    check("kda", v == static_cast<double>(k + a) / std::max(d, 1) && kda(k, 0, a) == kda(k, 1, a) &&
                     kda(0, d + 1, 0) == 0 && v <= kda(k + 1, d, a) && v <= kda(k, d, a + 1) &&
                     (d == 0 || v >= kda(k, d + 1, a)));
  }
  bool ok = true;
  std::string detail;
  for (const auto& [name, n] : cases) {
    ok &= failures[name] == 0 && n >= kPropertyCases;
    detail += fmt("%s=%d/%d ", name.c_str(), n - failures[name], n);
  }
  return {ok, detail};
}

Outcome reference_values() {
  struct Sw {
    Vec x;
    double w, p;
  };
  const std::vector<Sw> sw{{{148, 154, 158, 160, 161, 162, 166, 170, 182, 195, 236}, 0.7888146949, 0.006703814062},
                           {normals(1, 20), 0.9456413198, 0.30572147},
                           {normals(2, 50, 10.0, 3.0), 0.9843748002, 0.7444284609},
                           {uniforms(3, 500), 0.9480491829, 3.057190376e-12},
                           {lognormals(4, 30), 0.7901115575, 4.352164507e-05},
                           {normals(5, 7), 0.9273652222, 0.5287207293},
                           {normals(8, 5000), 0.9996308290, 0.4997090316},
                           {{1, 2, 4, 8}, 0.9202026789, 0.5380837778}};
  struct Lv {
    Vec a, b;
    double f, p;
  };
  const std::vector<Lv> lv{{{1, 2, 3, 4}, {-10, 0, 10, 20}, 9.623762376, 0.02105676711},
                           {normals(11, 10), normals(12, 11), 0.1251060267, 0.7274557878},
                           {normals(13, 15), normals(14, 20, 0, 3), 9.061764597, 0.004973888315},
                           {uniforms(15, 30), lognormals(16, 25), 39.36187395, 6.616768025e-08},
                           {{1, 1, 2, 2, 3, 5}, {2, 2, 2, 4, 4, 9, 9}, 3.806536386, 0.07698179424}};
  double sw_dev = 0, lv_dev = 0;
  for (const auto& c : sw) {
    const auto r = stats::shapiro_wilk(c.x);
    sw_dev = std::max({sw_dev, std::fabs(r.statistic - c.w), std::fabs(r.p_value - c.p)});
  }
  for (const auto& c : lv) {
    const auto r = stats::levene(c.a, c.b);
    lv_dev = std::max({lv_dev, std::fabs(r.statistic - c.f), std::fabs(r.p_value - c.p)});
  }
  return {sw_dev <= kReferenceTol && lv_dev <= kReferenceTol,
          fmt("shapiro vectors=%zu max_dev=%.2e; levene vectors=%zu max_dev=%.2e; tol=%.0e", sw.size(), sw_dev,
              lv.size(), lv_dev, kReferenceTol)};
}

Outcome csv_determinism() {
  synth::SynthSpec spec;
  spec.n_frames = 300;
  spec.seed = 77;
  spec.dropout = 0.05;
  auto [trace, truth] = synth::gen_trace(spec);
  std::vector<std::string> firsts;
  bool round_trips = true;
  for (unsigned threads : {1u, 2u, 4u, 8u, 1u}) {
    synth::RenderedFrameSource src(trace, spec);
    const auto out =
        annotate_trace(extract_trace(src, spec.config.layout, spec.config.marker, spec.meta, {threads}), spec.config.roi);
    std::ostringstream first;
    write_output_csv(out, first);
    std::istringstream in(first.str());
    std::ostringstream second;
    write_output_csv(read_output_csv(in, 1920, 1080, spec.meta), second);
    round_trips &= second.str() == first.str();
    firsts.push_back(first.str());
  }
  const bool identical = std::all_of(firsts.begin(), firsts.end(), [&](const auto& s) { return s == firsts.front(); });
  return {round_trips && identical,
          fmt("runs=%zu threads={1,2,4,8,1} bytes=%zu write-read-write identical=%s across runs identical=%s",
              firsts.size(), firsts.front().size(), round_trips ? "yes" : "no", identical ? "yes" : "no")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 power analysis", power_reproduction}, {"2 t from r", t_from_r},
      {"3 end-to-end oracle", end_to_end},      {"4 exact Wilcoxon", exact_wilcoxon},
      {"5 statistical identities", identities}, {"6 reference values", reference_values},
      {"7 CSV determinism", csv_determinism}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  criterion %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

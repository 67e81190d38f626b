#include "gazekit/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gazekit/distributions.hpp"
#include "gazekit/error.hpp"

namespace gazekit::stats {

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::ShapiroWilk:
      return "shapiro_wilk";
    case Method::Levene:
      return "levene";
    case Method::TTest:
      return "t_test";
    case Method::Wilcoxon:
      return "wilcoxon";
    case Method::Pearson:
      return "pearson";
    case Method::Spearman:
      return "spearman";
  }
  return "unknown";
}

namespace {

double mean(std::span<const double> x) { return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size()); }

double sum_sq_dev(std::span<const double> x, double m) {
  double ss = 0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss;
}

void require_size(std::span<const double> x, std::size_t at_least, const char* what) {
  if (x.size() < at_least) {
    throw DataError(std::string(what) + " needs at least " + std::to_string(at_least) + " observations per group, got " +
                    std::to_string(x.size()));
  }
}

void require_finite(std::span<const double> x, const char* what) {
  for (double v : x) {
    if (!std::isfinite(v)) throw DataError(std::string(what) + ": non-finite observation");
  }
}

// c[0] + c[1] x + c[2] x^2 + ...
template <std::size_t N>
double poly(const std::array<double, N>& c, double x) {
  double r = 0;
  for (std::size_t i = N; i-- > 0;) r = r * x + c[i];
  return r;
}

// Shapiro-Wilk coefficients a_1..a_{n/2} for the lowest order statistics,
// after Royston (1992, 1995).
std::vector<double> shapiro_coefficients(std::size_t n) {
  constexpr std::array<double, 6> c1{0.0, 0.221157, -0.147981, -2.071190, 4.434685, -2.706056};
  constexpr std::array<double, 6> c2{0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};

  const std::size_t half = n / 2;
  std::vector<double> a(half);
  if (n == 3) {
    a[0] = std::sqrt(0.5);
    return a;
  }
  const double an = static_cast<double>(n);
  std::vector<double> m(half);
  double summ2 = 0;
  for (std::size_t i = 0; i < half; ++i) {
    m[i] = dist::normal_quantile((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
    summ2 += m[i] * m[i];
  }
  summ2 *= 2;
  const double ssumm2 = std::sqrt(summ2);
  const double rsn = 1.0 / std::sqrt(an);
  const double a1 = poly(c1, rsn) - m[0] / ssumm2;

  std::size_t first_scaled;
  double fac;
  if (n > 5) {
    first_scaled = 2;
    const double a2 = -m[1] / ssumm2 + poly(c2, rsn);
    fac = std::sqrt((summ2 - 2 * m[0] * m[0] - 2 * m[1] * m[1]) / (1 - 2 * a1 * a1 - 2 * a2 * a2));
    a[1] = a2;
  } else {
    first_scaled = 1;
    fac = std::sqrt((summ2 - 2 * m[0] * m[0]) / (1 - 2 * a1 * a1));
  }
  a[0] = a1;
  for (std::size_t i = first_scaled; i < half; ++i) a[i] = -m[i] / fac;
  return a;
}

double shapiro_p_value(double w, std::size_t n) {
  constexpr std::array<double, 4> c3{0.5440, -0.39978, 0.025054, -6.714e-4};
  constexpr std::array<double, 4> c4{1.3822, -0.77857, 0.062767, -0.0020322};
  constexpr std::array<double, 4> c5{-1.5861, -0.31082, -0.083751, 0.0038915};
  constexpr std::array<double, 3> c6{-0.4803, -0.082676, 0.0030302};
  constexpr std::array<double, 2> g{-2.273, 0.459};

  if (n == 3) {
    const double p = 6.0 / std::numbers::pi * (std::asin(std::sqrt(w)) - std::numbers::pi / 3.0);
    return std::clamp(p, 0.0, 1.0);
  }
  const double an = static_cast<double>(n);
  double y = std::log1p(-w);
  double m;
  double s;
  if (n <= 11) {
    const double gamma = poly(g, an);
    if (y >= gamma) return 0.0;
    y = -std::log(gamma - y);
    m = poly(c3, an);
    s = std::exp(poly(c4, an));
  } else {
    const double xx = std::log(an);
    m = poly(c5, xx);
    s = std::exp(poly(c6, xx));
  }
  return std::clamp(dist::normal_sf((y - m) / s), 0.0, 1.0);
}

TestResult correlation_from_r(Method method, double r, std::size_t n) {
  TestResult res;
  res.method = method;
  res.n = {n, n};
  res.df = static_cast<double>(n - 2);
  r = std::clamp(r, -1.0, 1.0);
  res.estimate = r;
  if (std::fabs(r) == 1.0) {
    res.degenerate = true;
    res.statistic = r > 0 ? HUGE_VAL : -HUGE_VAL;
    res.p_value = 0.0;
    return res;
  }
  res.statistic = r * std::sqrt(static_cast<double>(n - 2)) / std::sqrt(1.0 - r * r);
  res.p_value = dist::t_two_sided_p(res.statistic, *res.df);
  return res;
}

double pearson_coefficient(std::span<const double> x, std::span<const double> y, const char* what) {
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0;
  double syy = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw DataError(std::string(what) + ": a variable has zero variance");
  return sxy / std::sqrt(sxx * syy);
}

void require_pairs(std::span<const double> x, std::span<const double> y, const char* what) {
  if (x.size() != y.size()) {
    throw DataError(std::string(what) + ": length mismatch (" + std::to_string(x.size()) + " vs " +
                    std::to_string(y.size()) + ")");
  }
  if (x.size() < 3) throw DataError(std::string(what) + " needs at least 3 pairs, got " + std::to_string(x.size()));
  require_finite(x, what);
  require_finite(y, what);
}

double pooled_sd(std::span<const double> a, std::span<const double> b) {
  const double ss = sum_sq_dev(a, mean(a)) + sum_sq_dev(b, mean(b));
  return std::sqrt(ss / static_cast<double>(a.size() + b.size() - 2));
}

std::string format_p(double p) {
  std::ostringstream os;
  os.precision(4);
  os << p;
  return os.str();
}

std::string route_text(const std::vector<Screening>& screening, Method chosen) {
  std::string route;
  for (const auto& s : screening) {
    if (!route.empty()) route += ';';
    route += s.name + "=" + format_p(s.p_value);
  }
  route += "->";
  route += to_string(chosen);
  return route;
}

}  // namespace

TestResult shapiro_wilk(std::span<const double> x) {
  const std::size_t n = x.size();
  if (n < 3 || n > 5000) throw DataError("Shapiro-Wilk needs 3 <= n <= 5000, got n = " + std::to_string(n));
  require_finite(x, "Shapiro-Wilk");
  std::vector<double> sorted(x.begin(), x.end());
  std::sort(sorted.begin(), sorted.end());
  const double range = sorted.back() - sorted.front();
  if (range < 1e-19) throw DataError("Shapiro-Wilk: all observations are identical");

  const std::vector<double> a = shapiro_coefficients(n);
  std::vector<double> coef(n, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    coef[i] = -a[i];
    coef[n - 1 - i] = a[i];
  }
  // W is the squared correlation between the coefficients and the ordered
  // sample; scaling by the range keeps the sums well conditioned.
  double sx = 0;
  for (double v : sorted) sx += v / range;
  sx /= static_cast<double>(n);
  const double sa = std::accumulate(coef.begin(), coef.end(), 0.0) / static_cast<double>(n);
  double ssa = 0;
  double ssx = 0;
  double sax = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = coef[i] - sa;
    const double dx = sorted[i] / range - sx;
    ssa += da * da;
    ssx += dx * dx;
    sax += da * dx;
  }
  const double root = std::sqrt(ssa * ssx);
  const double w = std::clamp(1.0 - (root - sax) * (root + sax) / (ssa * ssx), 0.0, 1.0);

  TestResult res;
  res.method = Method::ShapiroWilk;
  res.statistic = w;
  res.p_value = shapiro_p_value(w, n);
  res.n = {n};
  return res;
}

TestResult levene(std::span<const double> a, std::span<const double> b) {
  require_size(a, 2, "Levene test");
  require_size(b, 2, "Levene test");
  require_finite(a, "Levene test");
  require_finite(b, "Levene test");
  auto abs_dev = [](std::span<const double> x) {
    const double m = mean(x);
    std::vector<double> z(x.size());
    std::transform(x.begin(), x.end(), z.begin(), [m](double v) { return std::fabs(v - m); });
    return z;
  };
  const std::vector<double> za = abs_dev(a);
  const std::vector<double> zb = abs_dev(b);
  const double na = static_cast<double>(za.size());
  const double nb = static_cast<double>(zb.size());
  const double ma = mean(za);
  const double mb = mean(zb);
  const double grand = (na * ma + nb * mb) / (na + nb);
  const double between = na * (ma - grand) * (ma - grand) + nb * (mb - grand) * (mb - grand);
  const double within = sum_sq_dev(za, ma) + sum_sq_dev(zb, mb);
  const double df2 = na + nb - 2;

  TestResult res;
  res.method = Method::Levene;
  res.df = df2;
  res.n = {za.size(), zb.size()};
  if (within == 0) {
    res.statistic = between == 0 ? 0.0 : HUGE_VAL;
    res.p_value = between == 0 ? 1.0 : 0.0;
    return res;
  }
  res.statistic = between / (within / df2);
  res.p_value = dist::f_sf(res.statistic, 1.0, df2);
  return res;
}

double cohens_d(std::span<const double> a, std::span<const double> b) {
  require_size(a, 2, "Cohen's d");
  require_size(b, 2, "Cohen's d");
  const double sd = pooled_sd(a, b);
  if (sd == 0) throw DataError("Cohen's d: pooled standard deviation is zero");
  return (mean(a) - mean(b)) / sd;
}

TestResult t_test_unpaired(std::span<const double> a, std::span<const double> b) {
  require_size(a, 2, "t test");
  require_size(b, 2, "t test");
  require_finite(a, "t test");
  require_finite(b, "t test");
  const double sd = pooled_sd(a, b);
  if (sd == 0) throw DataError("t test: pooled variance is zero");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double diff = mean(a) - mean(b);

  TestResult res;
  res.method = Method::TTest;
  res.df = na + nb - 2;
  res.statistic = diff / (sd * std::sqrt(1.0 / na + 1.0 / nb));
  res.p_value = dist::t_two_sided_p(res.statistic, *res.df);
  res.effect_size = diff / sd;
  res.n = {a.size(), b.size()};
  return res;
}

std::vector<double> midranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return x[i] < x[j]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && x[order[j]] == x[order[i]]) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

RankSumTail exact_rank_sum_tail(std::size_t n1, std::size_t n2, std::int64_t rank_sum) {
  const std::size_t n = n1 + n2;
  if (n > 64) throw DataError("exact rank-sum distribution is limited to 64 observations");
  const std::size_t max_sum = n1 * (2 * n - n1 + 1) / 2;
  // ways[k][s]: number of k-subsets of {1..r} summing to s, built up over r.
  std::vector<std::vector<std::uint64_t>> ways(n1 + 1, std::vector<std::uint64_t>(max_sum + 1, 0));
  ways[0][0] = 1;
  for (std::size_t r = 1; r <= n; ++r) {
    for (std::size_t k = std::min(r, n1); k >= 1; --k) {
      for (std::size_t s = max_sum; s >= r; --s) ways[k][s] += ways[k - 1][s - r];
    }
  }
  RankSumTail tail;
  for (std::size_t s = 0; s <= max_sum; ++s) {
    const std::uint64_t c = ways[n1][s];
    tail.total += c;
    if (static_cast<std::int64_t>(s) <= rank_sum) tail.at_most += c;
    if (static_cast<std::int64_t>(s) >= rank_sum) tail.at_least += c;
  }
  return tail;
}

TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b) {
  require_size(a, 1, "rank-sum test");
  require_size(b, 1, "rank-sum test");
  require_finite(a, "rank-sum test");
  require_finite(b, "rank-sum test");
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = midranks(pooled);
  const double rank_sum_a = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);

  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_term = 0;
  bool has_ties = false;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    if (j - i > 1) has_ties = true;
    tie_term += t * t * t - t;
    i = j;
  }

  TestResult res;
  res.method = Method::Wilcoxon;
  res.statistic = rank_sum_a;
  res.n = {a.size(), b.size()};
  const double n1 = static_cast<double>(a.size());
  const double n2 = static_cast<double>(b.size());
  const double n = n1 + n2;

  if (!has_ties && a.size() + b.size() <= 12) {
    const auto tail = exact_rank_sum_tail(a.size(), b.size(), static_cast<std::int64_t>(std::llround(rank_sum_a)));
    const double lower = static_cast<double>(tail.at_most) / static_cast<double>(tail.total);
    const double upper = static_cast<double>(tail.at_least) / static_cast<double>(tail.total);
    res.p_value = std::min(1.0, 2.0 * std::min(lower, upper));
    res.route = "exact";
    return res;
  }

  const double expected = n1 * (n + 1) / 2.0;
  const double variance = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)));
  res.route = "normal";
  if (variance <= 0) {
    res.p_value = 1.0;
    return res;
  }
  const double diff = rank_sum_a - expected;
  const double correction = diff > 0 ? 0.5 : (diff < 0 ? -0.5 : 0.0);
  const double z = (diff - correction) / std::sqrt(variance);
  res.p_value = std::min(1.0, 2.0 * std::min(dist::normal_cdf(z), dist::normal_sf(z)));
  return res;
}

TestResult pearson_r(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y, "Pearson correlation");
  return correlation_from_r(Method::Pearson, pearson_coefficient(x, y, "Pearson correlation"), x.size());
}

TestResult spearman_rho(std::span<const double> x, std::span<const double> y) {
  require_pairs(x, y, "Spearman correlation");
  const std::vector<double> rx = midranks(x);
  const std::vector<double> ry = midranks(y);
  return correlation_from_r(Method::Spearman, pearson_coefficient(rx, ry, "Spearman correlation"), x.size());
}

PowerResult power_two_sample_t(double d, std::size_t n1, std::size_t n2, double alpha) {
  if (n1 < 2 || n2 < 2) throw DataError("power analysis needs n1, n2 >= 2");
  if (!(alpha > 0 && alpha < 1)) throw DataError("power analysis needs 0 < alpha < 1");
  if (!std::isfinite(d)) throw DataError("power analysis needs a finite effect size");
  PowerResult r;
  r.d = d;
  r.alpha = alpha;
  const double a = static_cast<double>(n1);
  const double b = static_cast<double>(n2);
  r.delta = d * std::sqrt(a * b / (a + b));
  r.df = a + b - 2;
  r.t_crit = dist::t_quantile(1 - alpha / 2, r.df);
  const double upper = 1.0 - dist::noncentral_t_cdf(r.t_crit, r.df, r.delta);
  const double lower = dist::noncentral_t_cdf(-r.t_crit, r.df, r.delta);
  r.power = std::clamp(upper + lower, 0.0, 1.0);
  return r;
}

TestResult auto_compare(std::span<const double> a, std::span<const double> b, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DataError("alpha must lie in (0, 1)");
  require_size(a, 3, "group comparison");
  require_size(b, 3, "group comparison");
  std::vector<Screening> screening{{"shapiro_a", shapiro_wilk(a).p_value},
                                   {"shapiro_b", shapiro_wilk(b).p_value},
                                   {"levene", levene(a, b).p_value}};
  const bool parametric =
      std::all_of(screening.begin(), screening.end(), [alpha](const Screening& s) { return s.p_value > alpha; });
  TestResult res = parametric ? t_test_unpaired(a, b) : wilcoxon_rank_sum(a, b);
  res.route = route_text(screening, res.method);
  res.screening = std::move(screening);
  return res;
}

TestResult auto_correlate(std::span<const double> x, std::span<const double> y, double alpha) {
  if (!(alpha > 0 && alpha < 1)) throw DataError("alpha must lie in (0, 1)");
  require_pairs(x, y, "correlation");
  std::vector<Screening> screening{{"shapiro_x", shapiro_wilk(x).p_value}, {"shapiro_y", shapiro_wilk(y).p_value}};
  const bool parametric =
      std::all_of(screening.begin(), screening.end(), [alpha](const Screening& s) { return s.p_value > alpha; });
  TestResult res = parametric ? pearson_r(x, y) : spearman_rho(x, y);
  res.route = route_text(screening, res.method);
  res.screening = std::move(screening);
  return res;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw DataError("least squares needs >= 2 paired points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxx = 0;
  double sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0) throw DataError("least squares: x has zero variance");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

}  // namespace gazekit::stats

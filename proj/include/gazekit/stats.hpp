#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gazekit::stats {

enum class Method { ShapiroWilk, Levene, TTest, Wilcoxon, Pearson, Spearman };

std::string_view to_string(Method m) noexcept;

/// A screening test run before the final test of an automatic comparison.
struct Screening {
  std::string name;  // e.g. "shapiro_a", "levene"
  double p_value = 0;
};

struct TestResult {
  Method method = Method::ShapiroWilk;
  double statistic = 0;
  double p_value = 1;
  std::optional<double> df;
  std::optional<double> effect_size;
  /// Correlation coefficient (r or rho) for correlation tests.
  std::optional<double> estimate;
  std::vector<std::size_t> n;
  /// Perfect correlation: the t transform diverges and p is reported as 0.
  bool degenerate = false;
  /// Screening p-values and the chosen route, for auto_compare/auto_correlate.
  std::vector<Screening> screening;
  std::string route;
};

struct PowerResult {
  double d = 0;
  double delta = 0;
  double t_crit = 0;
  double df = 0;
  double alpha = 0;
  double power = 0;
};

/// Shapiro-Wilk W and p (Royston's approximation, 3 <= n <= 5000).
TestResult shapiro_wilk(std::span<const double> x);

/// Classic (mean-centred) Levene test for two groups.
TestResult levene(std::span<const double> a, std::span<const double> b);

/// Pooled-variance Student t test, two-sided; effect size is Cohen's d.
TestResult t_test_unpaired(std::span<const double> a, std::span<const double> b);

/// Wilcoxon rank-sum test. The statistic is the rank sum of `a` (midranks for
/// ties). Exact p when n1 + n2 <= 12 and there are no ties, otherwise the
/// normal approximation with tie and continuity corrections.
TestResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b);

/// Exact null distribution tail counts of the rank sum: how many of the
/// C(n1+n2, n1) equally likely rank assignments give a sum <= / >= `rank_sum`.
struct RankSumTail {
  std::uint64_t at_most = 0;
  std::uint64_t at_least = 0;
  std::uint64_t total = 0;
};
RankSumTail exact_rank_sum_tail(std::size_t n1, std::size_t n2, std::int64_t rank_sum);

/// Midranks (1-based, ties share their average rank).
std::vector<double> midranks(std::span<const double> x);

TestResult pearson_r(std::span<const double> x, std::span<const double> y);
TestResult spearman_rho(std::span<const double> x, std::span<const double> y);

/// (mean_a - mean_b) / pooled SD.
double cohens_d(std::span<const double> a, std::span<const double> b);

/// Two-sided power of the pooled two-sample t test at effect size d.
PowerResult power_two_sample_t(double d, std::size_t n1, std::size_t n2, double alpha);

/// Shapiro-Wilk on both groups and Levene across them; all p > alpha selects
/// the t test, anything else the rank-sum test.
TestResult auto_compare(std::span<const double> a, std::span<const double> b, double alpha = 0.05);

/// Shapiro-Wilk on both variables; both p > alpha selects Pearson, otherwise
/// Spearman.
TestResult auto_correlate(std::span<const double> x, std::span<const double> y, double alpha = 0.05);

/// Ordinary least squares line y = intercept + slope * x.
struct LinearFit {
  double slope = 0;
  double intercept = 0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

}  // namespace gazekit::stats

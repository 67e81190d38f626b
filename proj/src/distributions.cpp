#include "gazekit/distributions.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numbers>

#include "gazekit/error.hpp"

namespace gazekit::dist {

double normal_cdf(double z) { return 0.5 * boost::math::erfc(-z / std::numbers::sqrt2); }

double normal_sf(double z) { return 0.5 * boost::math::erfc(z / std::numbers::sqrt2); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DataError("normal quantile needs 0 < p < 1");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double t_cdf(double t, double df) {
  if (!(df > 0)) throw DataError("t distribution needs df > 0");
  if (std::isinf(t)) return t < 0 ? 0.0 : 1.0;
  const double tail = 0.5 * boost::math::ibeta(df / 2, 0.5, df / (df + t * t));
  return t > 0 ? 1.0 - tail : tail;
}

double t_two_sided_p(double t, double df) {
  if (!(df > 0)) throw DataError("t distribution needs df > 0");
  if (std::isinf(t)) return 0.0;
  return boost::math::ibeta(df / 2, 0.5, df / (df + t * t));
}

double t_quantile(double p, double df) {
  if (!(p > 0.0 && p < 1.0)) throw DataError("t quantile needs 0 < p < 1");
  if (!(df > 0)) throw DataError("t distribution needs df > 0");
  return boost::math::quantile(boost::math::students_t_distribution<double>(df), p);
}

double f_sf(double f, double df1, double df2) {
  if (!(df1 > 0 && df2 > 0)) throw DataError("F distribution needs positive df");
  if (f <= 0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return boost::math::ibeta(df2 / 2, df1 / 2, df2 / (df2 + df1 * f));
}

double noncentral_t_cdf(double t, double df, double delta) {
  if (!(df > 0)) throw DataError("noncentral t needs df > 0");
  if (std::isinf(t)) return t < 0 ? 0.0 : 1.0;

  // Work with t >= 0; reflect P(T' <= t | delta) = 1 - P(T' <= -t | -delta).
  const bool reflected = t < 0;
  const double tt = reflected ? -t : t;
  const double del = reflected ? -delta : delta;
  if (reflected && delta > 40) return 0.0;

  if (df > 4e5 || del * del > 2 * std::numbers::ln2 * -DBL_MIN_EXP) {
    // Normal approximation (Abramowitz & Stegun 26.7.10).
    const double s = 1.0 / (4.0 * df);
    const double z = (tt * (1.0 - s) - del) / std::sqrt(1.0 + tt * tt * 2.0 * s);
    return reflected ? normal_sf(z) : normal_cdf(z);
  }

  constexpr int kMaxTerms = 1000;
  constexpr double kSeriesTolerance = 1e-12;

  long double total = 0;
  const double x = tt * tt / (tt * tt + df);
  if (x > 0) {
    const double lambda = del * del;
    long double p = 0.5 * std::exp(-0.5 * lambda);
    if (p == 0) return reflected ? 1.0 : 0.0;  // |delta| far beyond representable mass
    long double q = std::sqrt(2.0 / std::numbers::pi) * p * del;
    long double remaining = 0.5 - p;  // Poisson mass not yet summed
    if (remaining < 1e-7) remaining = -0.5 * std::expm1(-0.5 * lambda);

    double a = 0.5;
    const double b = 0.5 * df;
    const double rxb = std::pow(df / (tt * tt + df), b);  // (1 - x)^b computed without cancellation
    const double log_beta = std::log(std::sqrt(std::numbers::pi)) + boost::math::lgamma(b) - boost::math::lgamma(0.5 + b);
    long double x_odd = boost::math::ibeta(a, b, x);
    long double g_odd = 2.0 * rxb * std::exp(a * std::log(x) - log_beta);
    long double x_even = b * x < DBL_EPSILON ? b * x : 1.0 - rxb;
    long double g_even = b * x * rxb;
    total = p * x_odd + q * x_even;

    for (int it = 1; it <= kMaxTerms; ++it) {
      a += 1.0;
      x_odd -= g_odd;
      x_even -= g_even;
      g_odd *= x * (a + b - 1.0) / a;
      g_even *= x * (a + b - 0.5) / (a + 0.5);
      p *= lambda / (2 * it);
      q *= lambda / (2 * it + 1);
      total += p * x_odd + q * x_even;
      remaining -= p;
      if (remaining < -1e-10) break;  // rounding has exhausted the Poisson mass
      if (remaining <= 0 && it > 1) break;
      if (std::fabs(static_cast<double>(2.0L * remaining * (x_odd - g_odd))) < kSeriesTolerance) break;
    }
  }
  total += normal_cdf(-del);
  const double lower = std::clamp(static_cast<double>(total), 0.0, 1.0);
  return reflected ? 1.0 - lower : lower;
}

}  // namespace gazekit::dist

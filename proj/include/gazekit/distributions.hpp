#pragma once

namespace gazekit::dist {

// Thin wrappers over Boost.Math for the central distributions, plus the
// noncentral t CDF used by the power analysis.

double normal_cdf(double z);
double normal_sf(double z);
double normal_quantile(double p);

double t_cdf(double t, double df);
/// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double t_two_sided_p(double t, double df);
double t_quantile(double p, double df);

/// Upper tail P(F >= f) of the F distribution.
double f_sf(double f, double df1, double df2);

/// CDF of the noncentral t distribution, P(T' <= t), evaluated with the
/// Guenther/Lenth twin Poisson-mixture series (series tolerance 1e-12, far
/// inside the 1e-8 target). There is no shortcut for delta = 0; the series
/// reduces to the central CDF on its own.
double noncentral_t_cdf(double t, double df, double delta);

}  // namespace gazekit::dist

#include <gtest/gtest.h>

#include <boost/math/distributions/non_central_t.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "gazekit/distributions.hpp"

using namespace gazekit;

// With delta = 0 the noncentral series must collapse onto the central CDF.
TEST(NoncentralT, ZeroDeltaMatchesCentral) {
  int cases = 0;
  for (double df : {1.0, 1.5, 2.0, 3.0, 4.0, 5.0, 7.0, 9.0, 12.0, 15.0, 19.0, 20.0, 25.0, 30.0, 40.0, 60.0, 100.0,
                    250.0, 1000.0, 1e4}) {
    for (int i = -30; i <= 30; ++i) {
      const double t = i * 0.25;
      const double expect = boost::math::cdf(boost::math::students_t(df), t);
      ASSERT_NEAR(dist::noncentral_t_cdf(t, df, 0.0), expect, 1e-9) << "t=" << t << " df=" << df;
      ++cases;
    }
  }
  EXPECT_GE(cases, 1000);
}

// Cross-check against Boost's own noncentral t on a grid.
TEST(NoncentralT, MatchesBoostReference) {
  for (double df : {2.0, 5.0, 10.0, 19.0, 40.0, 200.0}) {
    for (double delta : {-3.0, -1.0, 0.5, 1.0, 2.38, 4.0, 8.0}) {
      boost::math::non_central_t ref(df, delta);
      for (double t = -6; t <= 14; t += 0.5) {
        ASSERT_NEAR(dist::noncentral_t_cdf(t, df, delta), boost::math::cdf(ref, t), 1e-8)
            << "t=" << t << " df=" << df << " delta=" << delta;
      }
    }
  }
}

TEST(NoncentralT, MonotoneInT) {
  double prev = 0;
  for (double t = -10; t <= 15; t += 0.1) {
    const double c = dist::noncentral_t_cdf(t, 19, 2.38);
    ASSERT_GE(c, prev - 1e-15);
    ASSERT_GE(c, 0);
    ASSERT_LE(c, 1);
    prev = c;
  }
}

TEST(Central, KnownValues) {
  EXPECT_NEAR(dist::normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(dist::normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(dist::t_quantile(0.975, 19), 2.093024054408263, 1e-10);
  EXPECT_NEAR(dist::t_two_sided_p(2.093024054408263, 19), 0.05, 1e-10);
  EXPECT_NEAR(dist::t_two_sided_p(0, 7), 1.0, 1e-15);
  EXPECT_NEAR(dist::f_sf(4.3807496, 1, 19), 0.05, 1e-6);
}

#include <gtest/gtest.h>

#include <edge34/p34.hpp>

using namespace edge34;

namespace {

const P34Solution& alpha1() {
  static const P34Solution sol = solve_u(1.0, -8.0, 6.0, 0.01, 1e-12);
  return sol;
}

}  // namespace

TEST(Series, LeadingCoefficients) {
  for (double alpha : {0.0, 0.5, 1.0, 2.5}) {
    const auto c = series_coeffs(alpha, 6);
    const double nu = 2.0 * alpha + 0.5;
    EXPECT_EQ(c.b[0], 1.0);
    EXPECT_DOUBLE_EQ(c.b[1], nu / std::sqrt(2.0));
    // order-by-order substitution into PII (sympy)
    EXPECT_NEAR(c.b[2], -0.75 * nu * nu - 0.125, 1e-13);
    EXPECT_NEAR(c.b[3], std::sqrt(2.0) * nu * (16.0 * nu * nu + 11.0) / 16.0, 1e-12 * (1 + nu * nu * nu));
    EXPECT_NEAR(c.a[0], alpha, 1e-15);
  }
}

TEST(Series, AlphaOneMatchesDirectSubstitution) {
  // u = sum a_n s^{-(3n+1)/2} substituted into the alpha = 1 equation (sympy)
  const auto c = series_coeffs(1.0, 6);
  EXPECT_NEAR(c.a[1], -1.0, 1e-14);
  EXPECT_NEAR(c.a[2], 85.0 / 32.0, 1e-13);
  EXPECT_NEAR(c.a[3], -39.0 / 4.0, 1e-12);
  EXPECT_NEAR(c.a[4], 89507.0 / 2048.0, 1e-11);
}

TEST(Series, OptimalTruncationAgainstClosedForm) {
  const auto sv = u_series_optimal(1.0, 8.0);
  const double exact = u_closed_form_alpha1(8.0).u;
  // the closed form cancels in its numerator for large s
  EXPECT_NEAR(exact, 0.339513200685069101120587193106, 2e-12);
  EXPECT_LT(std::abs(sv.u - exact), 10.0 * sv.last_term);
  EXPECT_GT(sv.n_terms, 5);
}

TEST(Series, Preconditions) {
  EXPECT_THROW(series_coeffs(1.0, 1), Error);
  EXPECT_THROW(u_series(1.0, -1.0, 4), Error);
  EXPECT_THROW(solve_u(-0.6, 0.0, 1.0, 0.1, 1e-10), Error);
  EXPECT_THROW(solve_u(1.0, 1.0, 0.0, 0.1, 1e-10), Error);
  EXPECT_THROW(solve_u(1.0, 0.0, 1.0, 0.1, 1e-14), Error);
}

TEST(ClosedForm, AlphaOneReferenceValues) {
  // mpmath, 30 digits, u = d/ds [Ai^2 / (Ai'^2 - s Ai^2)]
  EXPECT_NEAR(u_closed_form_alpha1(0.0).u, 0.797047553295083995957403888827, 1e-14);
  EXPECT_NEAR(u_closed_form_alpha1(-5.0).u, 0.346835627400742054842716951458, 1e-13);
  EXPECT_NEAR(u_closed_form_alpha1(-2.0).u, 0.590315252361028704508228385074, 1e-14);
  EXPECT_NEAR(u_closed_form_alpha1(3.0).u, 0.500760318661143401195523225228, 1e-13);
}

TEST(Solve, AlphaOneAgainstClosedForm) {
  const auto& sol = alpha1();
  double worst = 0.0;
  for (std::size_t i = 0; i < sol.s_grid.size(); ++i) {
    const auto c = u_closed_form_alpha1(sol.s_grid[i]);
    worst = std::max({worst, std::abs(sol.u[i] - c.u), std::abs(sol.u_prime[i] - c.u_prime)});
  }
  EXPECT_LT(worst, 1e-9);
  EXPECT_LE(sol.valid_interval[0], -8.0);
  EXPECT_GE(sol.valid_interval[1], 6.0);
  EXPECT_LT(sol.pin_residual, 1e-8);
}

TEST(Solve, OdeResidual) { EXPECT_LT(p34_residual(alpha1()), 1e-8); }

TEST(Solve, AlphaZeroIsIdenticallyZero) {
  const auto sol = solve_u(0.0, -8.0, 6.0, 0.05, 1e-12);
  for (double u : sol.u) EXPECT_EQ(u, 0.0);
}

TEST(Solve, FractionalAlphaSatisfiesEquation) {
  for (double alpha : {-0.25, 0.5, 1.5}) {
    const auto sol = solve_u(alpha, -8.0, 6.0, 0.01, 1e-12);
    EXPECT_LT(p34_residual(sol), 1e-8) << alpha;
    // large-s series at the right end
    const auto sv = u_series_optimal(alpha, 6.0);
    // within the series' own truncation error
    EXPECT_NEAR(sol.u.back(), sv.u, std::max(1e-6, 2.0 * sv.last_term)) << alpha;
  }
}

TEST(Solve, PointEvaluationMatchesGrid) {
  const auto& sol = alpha1();
  const auto p = sol.at(-3.217);
  const auto c = u_closed_form_alpha1(-3.217);
  EXPECT_NEAR(p.u, c.u, 1e-9);
  EXPECT_NEAR(p.up, c.u_prime, 1e-9);
  EXPECT_THROW(sol.at(7.0), Error);
}

TEST(Solve, SeriesOnlyFlowReportsShortValidity) {
  P34Options o;
  o.method = P34Method::SeriesOnly;
  const auto sol = solve_u(1.0, 3.0, 8.0, 0.05, 1e-10, o);
  EXPECT_GT(sol.valid_interval[0], 3.0);
  for (std::size_t i = 0; i < sol.s_grid.size(); ++i)
    if (sol.contains(sol.s_grid[i])) EXPECT_NEAR(sol.u[i], u_closed_form_alpha1(sol.s_grid[i]).u, 1e-6);
}

TEST(Solve, SeriesOnlyFlowBlowsUpFurtherLeft) {
  P34Options o;
  o.method = P34Method::SeriesOnly;
  try {
    solve_u(1.0, 2.0, 8.0, 0.05, 1e-10, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BlowUp);
  }
}

TEST(Bridge, AlphaZeroThroughPainleveTwo) {
  for (int i = 0; i < 100; ++i) {
    const double s = -10.0 + 20.0 * (i + 0.5) / 100.0;
    EXPECT_LE(std::abs(u_from_pii_airy(s)), 1e-10) << s;
  }
}

TEST(Oscillation, AlphaOneTail) {
  // u - cos((4/3)(-s)^{3/2} - pi)/sqrt(-s) = O(s^{-2})
  const auto& sol = alpha1();
  double C = 0.0;
  for (std::size_t i = 0; i < sol.s_grid.size(); ++i) {
    const double s = sol.s_grid[i];
    if (s < -8.0 || s > -3.0) continue;
    const double lead = std::cos(4.0 / 3.0 * std::pow(-s, 1.5) - std::numbers::pi) / std::sqrt(-s);
    C = std::max(C, std::abs(sol.u[i] - lead) * s * s);
  }
  EXPECT_LT(C, 10.0);
}

TEST(Stokes, AmplitudeVanishesForIntegerAlpha) {
  EXPECT_LT(std::abs(d_plus(1.0)), 1e-15);
  EXPECT_GT(std::abs(d_plus(0.5)), 1e-3);
}

#include <gtest/gtest.h>

#include <edge34/fredholm.hpp>

using namespace edge34;

namespace {

const P34Solution& solution(double alpha) {
  static std::map<double, P34Solution> cache;
  auto it = cache.find(alpha);
  if (it == cache.end()) it = cache.emplace(alpha, solve_u(alpha, -8.0, 6.0, 0.01, 1e-12)).first;
  return it->second;
}

}  // namespace

TEST(Fredholm, PsiKernelMatchesClosedFormKernel) {
  for (double alpha : {0.0, 1.0})
    for (double t : {-4.0, -2.0, 0.0, 2.0}) {
      const auto a = gap_probability(alpha, 0.0, t, 20, solution(alpha));
      const auto b = gap_probability(closed_form_kernel(alpha, 0.0), alpha, 0.0, t, 20);
      EXPECT_NEAR(a.det_value, b.det_value, 1e-7) << alpha << " " << t;
    }
}

TEST(Fredholm, TracyWidomReferenceValues) {
  // independent Nystrom (numpy/scipy airy, 80 nodes on (t, t+16))
  const std::pair<double, double> f2[] = {{-4.0, 0.003544553595510581}, {-2.0, 0.41322414250511447},
                                          {0.0, 0.9693728283552613}, {2.0, 0.9998875536983092}};
  FredholmOptions o;
  o.tol = 1e-10;
  for (auto [t, v] : f2)
    EXPECT_NEAR(gap_probability(closed_form_kernel(0.0, 0.0), 0.0, 0.0, t, 20, o).det_value, v, 1e-9) << t;
  const std::pair<double, double> f1[] = {{-4.0, 0.11319107503550646}, {-2.0, 0.9155735433791057}};
  for (auto [t, v] : f1)
    EXPECT_NEAR(gap_probability(closed_form_kernel(1.0, 0.0), 1.0, 0.0, t, 20, o).det_value, v, 1e-9) << t;
}

TEST(Fredholm, CdfIsMonotoneAndTendsToOne) {
  std::vector<double> ts;
  for (double t = -5.0; t <= 4.0; t += 0.5) ts.push_back(t);
  const auto r = largest_eigenvalue_cdf(0.5, 0.0, ts, 20, solution(0.5));
  for (std::size_t i = 1; i < r.size(); ++i) EXPECT_GE(r[i].det_value, r[i - 1].det_value);
  EXPECT_GT(r.front().det_value, 0.0);
  EXPECT_NEAR(gap_probability(0.5, 0.0, 15.0, 20, solution(0.5)).det_value, 1.0, 1e-10);
}

TEST(Fredholm, OrderDoublingConvergesGeometrically) {
  const auto K = closed_form_kernel(0.0, 0.0);
  double prev = 0.0;
  for (int m : {10, 20, 40}) {
    const double e = std::abs(detail::fredholm_det(K, -2.0, m, 40.0) - detail::fredholm_det(K, -2.0, 2 * m, 40.0));
    if (prev > 0) EXPECT_LT(e, 0.05 * prev) << m;
    prev = e;
  }
}

TEST(Fredholm, ReportsOrderAndEstimate) {
  const auto r = gap_probability(0.0, 0.0, -2.0, 10, solution(0.0));
  EXPECT_GE(r.m, 20);
  EXPECT_LE(r.est_error, 1e-6);
}

TEST(Fredholm, NotConvergedAtCap) {
  FredholmOptions o;
  o.m_cap = 20;
  o.tol = 1e-15;
  try {
    gap_probability(closed_form_kernel(0.0, 0.0), 0.0, 0.0, -4.0, 10, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotConverged);
  }
}

TEST(Fredholm, Preconditions) {
  EXPECT_THROW(gap_probability(closed_form_kernel(0.0, 0.0), 0.0, 0.0, 0.0, 5), Error);
  EXPECT_THROW(largest_eigenvalue_cdf(0.0, 0.0, {1.0, 0.0}, 20, solution(0.0)), Error);
}

#include <gtest/gtest.h>

#include <edge34/psi.hpp>
#include <edge34/rhcheck.hpp>

using namespace edge34;

TEST(RH, JumpMatricesAreUnimodular) {
  for (double alpha : {0.0, 0.3, 1.0})
    for (Ray r : {Ray::Sigma1, Ray::Sigma2, Ray::Sigma3, Ray::Sigma4})
      EXPECT_NEAR(std::abs(jump_matrix(r, alpha).entries.determinant() - 1.0), 0.0, 1e-15);
}

TEST(RH, CyclicRelationAroundOrigin) {
  // Psi_1 = Psi_4 v1 = Psi_2 v2 etc: going once around gives v2 v1^{-1} v4 v3 ~ e^{2 alpha pi i sigma3}
  const double alpha = 0.3;
  auto v = [&](Ray r) { return jump_matrix(r, alpha).entries; };
  const Mat2 m = v(Ray::Sigma2) * v(Ray::Sigma1).inverse() * v(Ray::Sigma4) * v(Ray::Sigma3);
  EXPECT_NEAR(std::abs(m.trace() - 2.0 * std::cos(2.0 * alpha * std::numbers::pi)), 0.0, 1e-14);
}

TEST(RH, Psi0FirstRowInOmega1) {
  using namespace std::complex_literals;
  const cplx z(1.0, 0.8);
  const auto m = psi0_matrix(z, 0.3);
  EXPECT_EQ(m.sector, Sector::Omega1);
  const cplx w = std::exp(-2.0i * std::numbers::pi / 3.0);
  const double c = std::sqrt(2.0 * std::numbers::pi);
  EXPECT_LT(std::abs(m.entries(0, 0) - c * airy(z + 0.3).ai), 1e-14);
  EXPECT_LT(std::abs(m.entries(0, 1) - c * std::exp(1.0i * std::numbers::pi / 3.0) * airy(w * (z + 0.3)).ai), 1e-14);
}

TEST(RH, AdjacentSectorFormsAreJumpProducts) {
  for (cplx z : {cplx(-1.0, 1.5), cplx(1.0, -2.0), cplx(-2.0, 0.3)}) {
    const Mat2 f1 = detail::psi0_omega1(z, 0.5);
    EXPECT_LT((detail::psi0_in(Sector::Omega2, z, 0.5) - f1 * jump_matrix(Ray::Sigma2, 0).entries.inverse())
                  .cwiseAbs().maxCoeff(), 1e-13);
    EXPECT_LT((detail::psi0_in(Sector::Omega4, z, 0.5) - f1 * jump_matrix(Ray::Sigma1, 0).entries.inverse())
                  .cwiseAbs().maxCoeff(), 1e-13);
    const Mat2 v32 = jump_matrix(Ray::Sigma3, 0).entries * jump_matrix(Ray::Sigma2, 0).entries;
    EXPECT_LT((detail::psi0_omega3(z, 0.5) - f1 * v32.inverse()).cwiseAbs().maxCoeff(), 1e-13);
  }
}

TEST(RH, JumpsHoldOnAllRays) {
  for (Builder b : {Builder::Psi0, Builder::Psi1})
    for (double s : {-2.0, 0.0, 2.0}) {
      const auto r = verify_jumps(b, s, 4);
      EXPECT_EQ(r.samples.size(), 16u);
      EXPECT_LE(r.max_residual, 1e-6) << int(b) << " " << s;
      EXPECT_TRUE(r.pass);
    }
  EXPECT_THROW(verify_jumps(Builder::Psi0, 0.0, 2), Error);
}

TEST(RH, DeterminantIsOne) {
  for (Builder b : {Builder::Psi0, Builder::Psi1})
    for (double s : {-2.0, 0.0, 2.0}) EXPECT_LE(det_deviation(b, s), 1e-10);
}

TEST(RH, DecayAtInfinity) {
  for (Builder b : {Builder::Psi0, Builder::Psi1}) {
    const auto f = fit_decay(b, 1.0);
    EXPECT_GE(f.exponent, -0.7);
    EXPECT_LE(f.exponent, -0.3);
  }
  // s = 0: the zeta^{-1/2} coefficient of Psi0 is s^2/4 = 0
  EXPECT_NEAR(fit_decay(Builder::Psi0, 0.0).exponent, -1.5, 0.1);
}

TEST(RH, XMatrixIsRankOne) {
  for (double s : {-3.0, 0.0, 2.5}) {
    const Mat2 X = x_matrix(s);
    EXPECT_LT(std::abs(X.determinant()), 1e-15);
    double a, ap;
    airy_ai(s, a, ap);
    const double d = ap * ap - s * a * a;
    // trace of (Ai, -i Ai')^T (Ai', -i Ai) / d
    EXPECT_LT(std::abs(X.trace() - (a * ap - ap * a) / d), 1e-15);
  }
}

TEST(RH, Psi1FirstColumnVanishesLinearly) {
  for (double r : {1e-2, 1e-3}) {
    const double ratio = psi1_matrix(std::polar(r, 0.5), 0.0).entries.col(0).norm() / r;
    EXPECT_GT(ratio, 0.1);
    EXPECT_LT(ratio, 10.0);
  }
}

TEST(RH, OnContourRejected) {
  try {
    psi0_matrix(cplx(2.0, 0.0), 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::OnContour);
  }
  EXPECT_THROW(psi1_matrix(std::polar(1.5, kRayAngle), 0.0), Error);
  EXPECT_THROW(psi0_matrix(0.0, 0.0), Error);
  EXPECT_NO_THROW(psi0_matrix(cplx(2.0, 1e-6), 0.0));
}

TEST(RH, PsiFunctionsAgreeWithLaxSweep) {
  const std::vector<double> xs{-5.0, -2.5, -0.7, 0.3, 1.5, 4.0};
  for (double alpha : {0.0, 1.0}) {
    const auto sol = solve_u(alpha, -8.0, 6.0, 0.01, 1e-12);
    const Builder b = alpha == 0.0 ? Builder::Psi0 : Builder::Psi1;
    for (double s : {-2.0, 0.0, 2.0}) {
      const auto g = psi_grid(alpha, s, xs, sol);
      // fit the gauge psi2 -> psi2 + eta psi1, then compare
      cplx num = 0.0, den = 0.0;
      std::vector<std::array<cplx, 2>> m;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        m.push_back(psi_from_matrix(b, xs[i], s));
        num += std::conj(g[i].psi1) * (m[i][1] - g[i].psi2);
        den += std::norm(g[i].psi1);
      }
      const cplx eta = num / den;
      if (alpha == 0.0) EXPECT_LT(std::abs(eta), 1e-10);
      for (std::size_t i = 0; i < xs.size(); ++i) {
        EXPECT_LT(std::abs(m[i][0] - g[i].psi1), 1e-7) << alpha << " " << s << " " << xs[i];
        EXPECT_LT(std::abs(m[i][1] - g[i].psi2 - eta * g[i].psi1), 1e-7) << alpha << " " << s << " " << xs[i];
      }
    }
  }
}

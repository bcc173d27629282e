#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "ode.hpp"

namespace edge34 {

using cplx = std::complex<double>;

// Painleve data entering the Lax matrix at fixed s. g is the combination
// ((u')^2 - 4 alpha^2) / (4u), kept separately so that it stays finite at zeros of u.
struct LaxPoint {
  double alpha = 0.0;
  double s = 0.0;
  double u = 0.0;
  double up = 0.0;
  double g = 0.0;
};

struct LaxMatrix {
  cplx m11, m12, m21, m22;
};

inline LaxMatrix lax_matrix(const LaxPoint& p, cplx x) {
  using namespace std::complex_literals;
  const cplx m11 = p.up / (2.0 * x);
  return {m11, 1.0i - 1.0i * p.u / x, -1.0i * (x + p.s + p.u + p.g / x), -m11};
}

// residue of the Lax matrix at x = 0; det = -alpha^2
inline LaxMatrix lax_residue(const LaxPoint& p) {
  using namespace std::complex_literals;
  return {p.up / 2.0, -1.0i * p.u, -1.0i * p.g, -p.up / 2.0};
}

// d/dx (psi1, phi) with psi2 = i phi; real for real x
template <class T>
inline std::array<T, 2> lax_rhs_real(const LaxPoint& p, T x, const std::array<T, 2>& v) {
  const T a = p.up / (2.0 * x);
  return {a * v[0] - (1.0 - p.u / x) * v[1], -(x + p.s + p.u + p.g / x) * v[0] - a * v[1]};
}

inline double theta(double x, double s) { return (2.0 / 3.0) * x * std::sqrt(x) + s * std::sqrt(x); }

// Formal solution at +infinity in the variable t = sqrt(x):
// psi1 = e^{-theta} t^{-1/2} sum a_k t^{-k},  psi2 = e^{-theta} t^{1/2} sum b_k t^{-k}.
struct PsiAsymptotic {
  std::vector<cplx> a, b;

  PsiAsymptotic(const LaxPoint& p, int K = 42) : a(K + 5, 0.0), b(K + 5, 0.0) {
    using namespace std::complex_literals;
    const double s = p.s, u = p.u, up = p.up, g = p.g;
    a[0] = 1.0 / std::sqrt(2.0);
    b[0] = 1.0i / std::sqrt(2.0);
    auto A = [&](int k) { return k >= 0 ? a[k] : cplx(0.0); };
    auto B = [&](int k) { return k >= 0 ? b[k] : cplx(0.0); };
    auto X = [&](int k) {
      return -(s / 2) * A(k - 2) - (0.25 + (k - 3) / 2.0 + up / 2) * A(k - 3) + 1.0i * u * B(k - 2);
    };
    auto Y = [&](int k) {
      return (s + u) * A(k - 2) + g * A(k - 4) - 1.0i * (up / 2) * B(k - 3) +
             1.0i * (s / 2) * B(k - 2) - 0.25i * B(k - 3) + 1.0i * ((k - 3) / 2.0) * B(k - 3);
    };
    // a_j enters X_{j+3} + Y_{j+3} linearly; solve by two trial evaluations
    for (int j = 1; j < K; ++j) {
      cplx c[2];
      for (int trial = 0; trial < 2; ++trial) {
        a[j] = trial;
        b[j] = (-a[j] + X(j)) / 1.0i;
        a[j + 1] = 0.0;
        b[j + 1] = (-a[j + 1] + X(j + 1)) / 1.0i;
        c[trial] = X(j + 3) + Y(j + 3);
      }
      a[j] = -c[0] / (c[1] - c[0]);
      b[j] = (-a[j] + X(j)) / 1.0i;
    }
    a.resize(K);
    b.resize(K);
  }

  // sum_k c_k (flip/t)^k for a and b, truncated before the smallest block of
  // three consecutive terms (the series is essentially one in t^{-3})
  std::array<cplx, 2> sums(cplx t, double flip = 1.0) const {
    const std::size_t n = a.size() - a.size() % 3;
    cplx sa = 0.0, sb = 0.0, w = 1.0;
    double prev = 1e300;
    for (std::size_t k = 0; k < n; k += 3) {
      cplx ba = 0.0, bb = 0.0;
      double m = 0.0;
      for (std::size_t j = k; j < k + 3; ++j) {
        ba += a[j] * w;
        bb += b[j] * w;
        m += std::abs(a[j] * w) + std::abs(b[j] * w);
        w *= flip / t;
      }
      if (!std::isfinite(m) || (k > 0 && m > prev)) break;
      sa += ba;
      sb += bb;
      prev = m;
    }
    return {sa, sb};
  }

  // (e^{theta} psi1, e^{theta} psi2 / i)
  std::array<double, 2> scaled(double x) const {
    const double t = std::sqrt(x);
    const auto [sa, sb] = sums(t);
    return {(sa / std::sqrt(t)).real(), (sb * std::sqrt(t)).imag()};
  }
};

// Recessive solution of the real-form system, integrated inward from x_start
// in the scaled variable e^{theta} psi. Returns unscaled (psi1, phi) at x_end.
inline std::array<double, 2> recessive_real(const LaxPoint& p, double x_end, double x_start = 0.0,
                                            double rtol = 1e-13) {
  if (x_start <= 0.0) x_start = std::max(12.0, x_end + 8.0) + 4.0 * std::max(0.0, -p.s);
  const PsiAsymptotic as(p);
  auto rhs = [&](double x, const std::array<double, 2>& v) {
    auto d = lax_rhs_real<double>(p, x, v);
    const double th1 = std::sqrt(x) + 0.5 * p.s / std::sqrt(x);
    return std::array<double, 2>{d[0] + th1 * v[0], d[1] + th1 * v[1]};
  };
  OdeOptions o;
  o.rtol = rtol;
  o.atol = 1e-300;
  auto st = dopri5(rhs, x_start, as.scaled(x_start), x_end, o);
  const double e = std::exp(-theta(x_end, p.s));
  return {st.y[0] * e, st.y[1] * e};
}

// Frobenius coefficients d_k of the x^{+alpha} solution x^alpha sum d_k x^k of
// the real-form system, |d_0| = 1. Entire in x apart from the power prefactor.
struct Frobenius {
  double alpha = 0.0;
  std::vector<std::array<double, 2>> d;

  // d0 defaults to the kernel of alpha I - B0; it must be given when B0 = 0
  // (alpha = 0, u = 0), where every vector is admissible
  Frobenius(const LaxPoint& p, int K = 200, std::array<double, 2> d0 = {0.0, 0.0}) : alpha(p.alpha) {
    const double al = p.alpha, u = p.u, up = p.up, g = p.g;
    auto nrm = [](const std::array<double, 2>& v) { return std::hypot(v[0], v[1]); };
    if (nrm(d0) == 0.0) {
      // B0 = [[up/2, u], [-g, -up/2]]
      const std::array<double, 2> d0a{u, al - up / 2}, d0b{al + up / 2, -g};
      d0 = nrm(d0a) >= nrm(d0b) ? d0a : d0b;
    }
    const double n0 = nrm(d0);
    if (n0 == 0.0) throw Error(ErrorCode::Precondition, "Frobenius: leading vector is undetermined");
    d.push_back({d0[0] / n0, d0[1] / n0});
    std::array<double, 2> dm2{0, 0};
    for (int k = 1; k < K; ++k) {
      const auto& dm1 = d.back();
      // ((alpha+k) I - B0) d_k = B1 d_{k-1} + B2 d_{k-2}
      const double r1 = -dm1[1];
      const double r2 = -(p.s + u) * dm1[0] - dm2[0];
      const double m11 = al + k - up / 2, m12 = -u, m21 = g, m22 = al + k + up / 2;
      const double det = m11 * m22 - m12 * m21;  // = k (2 alpha + k)
      dm2 = dm1;
      d.push_back({(m22 * r1 - m12 * r2) / det, (m11 * r2 - m21 * r1) / det});
    }
  }

  // series part S(x) = sum d_k x^k and S'(x)
  void series(double x, std::array<double, 2>& S, std::array<double, 2>& dS) const {
    S = {0, 0};
    dS = {0, 0};
    double w = 1.0, wd = 0.0;
    for (std::size_t k = 0; k < d.size(); ++k) {
      for (int c = 0; c < 2; ++c) {
        S[c] += d[k][c] * w;
        dS[c] += d[k][c] * wd;
      }
      wd = (k + 1.0) * w;
      w *= x;
      if (k > 10 && std::abs(w) * (std::abs(d[k][0]) + std::abs(d[k][1])) <
                        1e-18 * (std::abs(S[0]) + std::abs(S[1])))
        break;
    }
  }

  // |x|^alpha S(x)
  std::array<double, 2> operator()(double x) const {
    std::array<double, 2> S, dS;
    series(x, S, dS);
    const double xa = std::pow(std::abs(x), alpha);
    return {xa * S[0], xa * S[1]};
  }
};

inline std::array<double, 2> frobenius_real(const LaxPoint& p, double x, int K = 200) {
  return Frobenius(p, K)(x);
}

// Normalized Wronskian between the recessive solution at +infinity and the
// x^{+alpha} Frobenius solution. Vanishes exactly on the distinguished u.
inline double monodromy_residual(const LaxPoint& p, double x_match = 1.0) {
  const auto r = recessive_real(p, x_match);
  const auto f = frobenius_real(p, x_match);
  return (r[0] * f[1] - r[1] * f[0]) / (std::hypot(r[0], r[1]) * std::hypot(f[0], f[1]));
}

// start radius for inward integration from the asymptotic region; the
// expansion degrades as s becomes negative
inline double asymptotic_radius(double s, double base = 14.0) { return base + 4.0 * std::max(0.0, -s); }

namespace detail {

// column recessive along arg x = ang in (pi/3, pi), normalized by the e^{+theta}
// formal solution, continued inward to |x| = r0 and then along the arc to x = r0
inline std::array<cplx, 2> ray_recessive(const LaxPoint& p, const PsiAsymptotic& as, double ang,
                                         double R, double r0, double rtol) {
  using namespace std::complex_literals;
  using C2 = std::array<cplx, 2>;
  const cplx d = std::exp(1.0i * ang);
  auto formal = [&](cplx x) {
    const cplx t = std::sqrt(x);
    const auto [sa, sb] = as.sums(t, -1.0);
    return C2{1.0i * sa / std::sqrt(t), -1.0i * sb * std::sqrt(t)};
  };
  OdeOptions o;
  o.rtol = rtol;
  o.atol = 1e-300;
  auto ray = [&](double r, const C2& v) {
    const cplx x = r * d;
    const auto M = lax_matrix(p, x);
    const cplx t = std::sqrt(x), th1 = t + 0.5 * p.s / t;
    return C2{d * (M.m11 * v[0] + M.m12 * v[1] - th1 * v[0]), d * (M.m21 * v[0] + M.m22 * v[1] - th1 * v[1])};
  };
  C2 y = dopri5(ray, R, formal(R * d), r0, o).y;
  const cplx x1 = r0 * d, t1 = std::sqrt(x1);
  const cplx e = std::exp((2.0 / 3.0) * x1 * t1 + p.s * t1);
  y = {y[0] * e, y[1] * e};
  auto arc = [&](double a, const C2& v) {
    const cplx x = r0 * std::exp(1.0i * a);
    const auto M = lax_matrix(p, x);
    const cplx dx = 1.0i * x;
    return C2{dx * (M.m11 * v[0] + M.m12 * v[1]), dx * (M.m21 * v[0] + M.m22 * v[1])};
  };
  return dopri5(arc, ang, y, 0.0, o).y;
}

}  // namespace detail

// Stokes multiplier on the positive axis: rho_+ - rho_- = s1 psi with rho_pm the
// solutions recessive along arg x = +-2pi/3. Since W(psi, rho_-) = 1 this is
// W(rho_+, rho_-), evaluated at x = r0 where neither is large. Equal to 1 on the
// distinguished solution.
inline double stokes_multiplier(const LaxPoint& p, double r0 = 1.0, double rtol = 1e-13) {
  constexpr double a = 2.0943951023931955;
  const PsiAsymptotic as(p);
  const double R = asymptotic_radius(p.s);
  const auto rp = detail::ray_recessive(p, as, a, R, r0, rtol);
  const auto rm = detail::ray_recessive(p, as, -a, R, r0, rtol);
  return (rp[0] * rm[1] - rp[1] * rm[0]).real();
}

}  // namespace edge34

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "lax.hpp"
#include "ode.hpp"
#include "p34.hpp"

namespace edge34 {

struct PsiSample {
  double x = 0.0;
  cplx psi1, psi2;
};

struct PsiOptions {
  double r0 = 1.0;        // semicircle radius for x < 0
  double rtol = 1e-13;
  double window = 1e-3;   // excluded neighbourhood of the origin
  double real_tol = 1e-4; // real-structure failure threshold
};

namespace detail {

using C2 = std::array<cplx, 2>;

inline void check_real_structure(const PsiSample& p, double tol) {
  const double e1 = std::abs(p.psi1.imag()) / (1.0 + std::abs(p.psi1));
  const double e2 = std::abs(p.psi2.real()) / (1.0 + std::abs(p.psi2));
  if (e1 > tol || e2 > tol)
    throw Error(ErrorCode::ContinuationFailure, "psi: real structure lost", p.x);
}

// One sweep over a sorted grid. Positive points are reached by inward scaled
// integration from the asymptotic region; negative points by continuing the
// same solution over the upper semicircle |x| = r0 and then along the negative
// axis, followed by the phase e^{-i alpha pi}.
inline std::vector<PsiSample> psi_sweep(const LaxPoint& p, const std::vector<double>& xs,
                                        const PsiOptions& o) {
  using namespace std::complex_literals;
  std::vector<PsiSample> out(xs.size());
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < xs.size(); ++i) (xs[i] > 0 ? pos : neg).push_back(i);
  std::sort(pos.begin(), pos.end(), [&](auto a, auto b) { return xs[a] > xs[b]; });
  const double r0 = o.r0;
  const double x_top = pos.empty() ? r0 : std::max(r0, xs[pos.front()]);
  const double X = std::max(12.0, x_top + 8.0) + 4.0 * std::max(0.0, -p.s);

  const PsiAsymptotic as(p);
  OdeOptions oo;
  oo.rtol = o.rtol;
  oo.atol = 1e-300;
  auto scaled_rhs = [&](double x, const std::array<double, 2>& v) {
    auto d = lax_rhs_real<double>(p, x, v);
    const double th1 = std::sqrt(x) + 0.5 * p.s / std::sqrt(x);
    return std::array<double, 2>{d[0] + th1 * v[0], d[1] + th1 * v[1]};
  };
  auto unscale = [&](double x, const std::array<double, 2>& v) {
    const double e = std::exp(-theta(x, p.s));
    return PsiSample{x, cplx(v[0] * e, 0.0), cplx(0.0, v[1] * e)};
  };

  std::array<double, 2> y = as.scaled(X);
  double x = X, h = 0.0;
  std::array<double, 2> y_r0{};
  bool have_r0 = false;
  auto advance = [&](double to) {
    OdeOptions step = oo;
    step.h_init = h;
    const auto st = dopri5(scaled_rhs, x, y, to, step);
    y = st.y;
    x = to;
    h = st.h;
  };
  for (std::size_t k = 0; k <= pos.size(); ++k) {
    const double target = k < pos.size() ? xs[pos[k]] : 0.0;
    if (!have_r0 && target <= r0 && !neg.empty()) {
      advance(r0);
      y_r0 = y;
      have_r0 = true;
    }
    if (k == pos.size()) break;
    advance(target);
    out[pos[k]] = unscale(target, y);
  }
  if (neg.empty()) return out;
  if (!have_r0) {
    advance(r0);
    y_r0 = y;
  }

  const PsiSample at_r0 = unscale(r0, y_r0);
  C2 z{at_r0.psi1, at_r0.psi2};
  auto arc = [&](double a, const C2& v) {
    const cplx xx = r0 * std::exp(1.0i * a);
    const auto M = lax_matrix(p, xx);
    const cplx dx = 1.0i * xx;
    return C2{dx * (M.m11 * v[0] + M.m12 * v[1]), dx * (M.m21 * v[0] + M.m22 * v[1])};
  };
  z = dopri5(arc, 0.0, z, std::numbers::pi, oo).y;

  auto line = [&](double t, const C2& v) {
    const auto M = lax_matrix(p, cplx(t, 0.0));
    return C2{M.m11 * v[0] + M.m12 * v[1], M.m21 * v[0] + M.m22 * v[1]};
  };
  const cplx phase = std::exp(-1.0i * p.alpha * std::numbers::pi);
  // outward from -r0 for x <= -r0, inward for -r0 < x < 0
  std::vector<std::size_t> outer, inner;
  for (auto i : neg) (xs[i] <= -r0 ? outer : inner).push_back(i);
  std::sort(outer.begin(), outer.end(), [&](auto a, auto b) { return xs[a] > xs[b]; });
  std::sort(inner.begin(), inner.end(), [&](auto a, auto b) { return xs[a] < xs[b]; });
  for (const auto* list : {&outer, &inner}) {
    C2 w = z;
    double t = -r0, hh = 0.0;
    for (auto i : *list) {
      OdeOptions step = oo;
      step.h_init = hh;
      const auto st = dopri5(line, t, w, xs[i], step);
      w = st.y;
      t = xs[i];
      hh = st.h;
      out[i] = PsiSample{xs[i], phase * w[0], phase * w[1]};
    }
  }
  return out;
}

inline LaxPoint psi_lax_point(double alpha, double s, const P34Solution& sol) {
  if (sol.alpha != alpha) throw Error(ErrorCode::Precondition, "psi: alpha does not match the P34 solution");
  if (!sol.contains(s)) throw Error(ErrorCode::OutOfValidity, "psi: s outside the valid interval", s);
  return sol.at(s);
}

}  // namespace detail

inline PsiSample psi_at(double alpha, double s, double x, const P34Solution& sol,
                        const PsiOptions& o = {}) {
  if (x == 0.0 || !std::isfinite(x)) throw Error(ErrorCode::Precondition, "psi_at: x must be finite and nonzero");
  const LaxPoint p = detail::psi_lax_point(alpha, s, sol);
  PsiSample r = detail::psi_sweep(p, {x}, o).front();
  detail::check_real_structure(r, o.real_tol);
  return r;
}

inline std::vector<PsiSample> psi_grid(double alpha, double s, const std::vector<double>& xs,
                                       const P34Solution& sol, const PsiOptions& o = {}) {
  if (!std::is_sorted(xs.begin(), xs.end())) throw Error(ErrorCode::Precondition, "psi_grid: grid not sorted");
  for (double x : xs)
    if (std::abs(x) < o.window) throw Error(ErrorCode::Precondition, "psi_grid: grid enters the origin window", x);
  const LaxPoint p = detail::psi_lax_point(alpha, s, sol);
  auto out = detail::psi_sweep(p, xs, o);
  for (const auto& r : out) detail::check_real_structure(r, o.real_tol);
  return out;
}

// Lax matrix times (psi1, psi2); the x-derivative of the sample
inline std::array<cplx, 2> psi_derivative(const LaxPoint& p, const PsiSample& v) {
  const auto M = lax_matrix(p, cplx(v.x, 0.0));
  return {M.m11 * v.psi1 + M.m12 * v.psi2, M.m21 * v.psi1 + M.m22 * v.psi2};
}

}  // namespace edge34

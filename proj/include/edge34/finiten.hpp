#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "error.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"

namespace edge34 {

// Equilibrium data of a quadratic external field V = c2v x^2 + c1v x + c0 at
// t = 1: support [a, b], density (1/2pi) sqrt((b - x)(x - a)) h(x) with h = 2 c2v.
struct Equilibrium {
  double a = 0.0, b = 0.0;
  double h0 = 0.0;
  double c1 = 0.0, c2 = 0.0;
};

inline Equilibrium equilibrium_constants(const std::vector<double>& v) {
  for (std::size_t k = 3; k < v.size(); ++k)
    if (v[k] != 0.0) throw Error(ErrorCode::UnsupportedPotential, "only quadratic V is supported");
  if (v.size() < 3 || !(v[2] > 0.0)) throw Error(ErrorCode::UnsupportedPotential, "V must be a convex quadratic");
  const double x0 = -v[1] / (2.0 * v[2]);
  const double R = std::sqrt(2.0 / v[2]);
  Equilibrium e;
  e.a = x0 - R;
  e.b = x0 + R;
  if (std::abs(e.b) > 1e-12 * (1.0 + std::abs(x0)))
    throw Error(ErrorCode::UnsupportedPotential, "right endpoint of the support is not at 0", e.b);
  e.b = 0.0;
  e.h0 = 2.0 * v[2];
  e.c1 = 0.5 * std::sqrt(-e.a) * e.h0;
  e.c2 = 2.0 / std::sqrt(-e.a) * std::cbrt(1.0 / e.c1);
  return e;
}

struct EnsembleConfig {
  std::vector<double> v_coeffs;
  int n = 0;
  double N = 0.0;
  double alpha = 0.0;
  double a = 0.0, b = 0.0;
  double c1 = 0.0, c2 = 0.0;
  double L = 0.0;
  double s = 0.0;

  double V(double x) const {
    double r = 0.0;
    for (std::size_t k = v_coeffs.size(); k-- > 0;) r = r * x + v_coeffs[k];
    return r;
  }
  // square root of the weight |x|^{2 alpha} e^{-N V}
  double sqrt_weight(double x) const {
    const double e = std::exp(-0.5 * N * V(x));
    return alpha == 0.0 ? e : std::pow(std::abs(x), alpha) * e;
  }
};

inline EnsembleConfig make_ensemble(std::vector<double> v, int n, double N, double alpha) {
  if (n < 1 || !(N > 0.0)) throw Error(ErrorCode::Precondition, "ensemble: n >= 1 and N > 0");
  if (!(alpha > -0.5)) throw Error(ErrorCode::Precondition, "ensemble: alpha > -1/2");
  const Equilibrium e = equilibrium_constants(v);
  EnsembleConfig c{std::move(v), n, N, alpha, e.a, e.b, e.c1, e.c2};
  c.L = std::pow(double(n), 2.0 / 3.0) * (n / N - 1.0);
  c.s = -c.c2 * c.L;
  return c;
}

// Orthonormal recurrence x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k-1},
// p_0 = mu0^{-1/2}. beta[k] = b_k (beta[0] unused); b_n = kappa_{n-1}/kappa_n.
struct OPRecurrence {
  std::vector<double> alpha_k, beta_k;
  double mu0 = 0.0;
  int j_max = 0;
};

namespace detail {

// composite Gauss-Legendre over [x_min, x_max], split at 0, with panels
// shrinking geometrically towards 0 (ratio 1/4) and width <= h elsewhere
inline Rule edge_panels(double x_min, double x_max, int q, double h = 0.25, int levels = 28) {
  std::vector<double> cuts;
  auto side = [&](double len, double sign) {
    if (len <= 0.0) return;
    const double g = std::min(h, len);
    for (double x = len; x > g * (1.0 + 1e-12);) {
      cuts.push_back(sign * x);
      x = std::max(g, x - h);
      if (x == g) break;
    }
    for (int k = 0; k < levels; ++k) cuts.push_back(sign * g * std::pow(0.25, k));
  };
  side(-x_min, -1.0);
  side(x_max, 1.0);
  cuts.push_back(0.0);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  Rule out;
  const Rule base = gauss_legendre(q);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double c = 0.5 * (cuts[i] + cuts[i + 1]), w = 0.5 * (cuts[i + 1] - cuts[i]);
    for (int j = 0; j < q; ++j) {
      out.x.push_back(c + w * base.x[j]);
      out.w.push_back(w * base.w[j]);
    }
  }
  return out;
}

// integration range: the support widened until e^{-N V} is far below rounding
inline std::pair<double, double> weight_range(const EnsembleConfig& c) {
  const double x0 = 0.5 * (c.a + c.b), R = 0.5 * (c.b - c.a);
  const double T = R + std::max(R, 8.0 / std::sqrt(c.N * c.v_coeffs[2]));
  return {x0 - T, x0 + T};
}

inline OPRecurrence stieltjes(const EnsembleConfig& c, const Rule& r) {
  const std::size_t m = r.x.size();
  std::vector<double> W(m), p(m), pm(m, 0.0), q(m);
  OPRecurrence rec;
  rec.j_max = c.n;
  for (std::size_t i = 0; i < m; ++i) {
    const double sw = c.sqrt_weight(r.x[i]);
    W[i] = r.w[i] * sw * sw;
    rec.mu0 += W[i];
  }
  for (std::size_t i = 0; i < m; ++i) p[i] = 1.0 / std::sqrt(rec.mu0);
  rec.alpha_k.assign(c.n, 0.0);
  rec.beta_k.assign(c.n + 1, 0.0);
  for (int k = 0; k < c.n; ++k) {
    double a = 0.0;
    for (std::size_t i = 0; i < m; ++i) a += W[i] * r.x[i] * p[i] * p[i];
    double b2 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      q[i] = (r.x[i] - a) * p[i] - rec.beta_k[k] * pm[i];
      b2 += W[i] * q[i] * q[i];
    }
    if (!(b2 > 0.0)) throw Error(ErrorCode::QuadratureNotConverged, "stieltjes: vanishing norm", k);
    const double b = std::sqrt(b2);
    rec.alpha_k[k] = a;
    rec.beta_k[k + 1] = b;
    for (std::size_t i = 0; i < m; ++i) {
      pm[i] = p[i];
      p[i] = q[i] / b;
    }
  }
  return rec;
}

}  // namespace detail

// Stieltjes procedure on a composite rule with quad_points nodes per panel,
// checked against the rule with twice as many
inline OPRecurrence build_recurrence(const EnsembleConfig& c, int quad_points = 40, double tol = 1e-10) {
  if (quad_points < 4) throw Error(ErrorCode::Precondition, "build_recurrence: quad_points >= 4");
  const auto [lo, hi] = detail::weight_range(c);
  const OPRecurrence r1 = detail::stieltjes(c, detail::edge_panels(lo, hi, quad_points));
  const OPRecurrence r2 = detail::stieltjes(c, detail::edge_panels(lo, hi, 2 * quad_points));
  double d = std::abs(r1.mu0 - r2.mu0) / r2.mu0;
  for (int k = 0; k < c.n; ++k) {
    d = std::max(d, std::abs(r1.alpha_k[k] - r2.alpha_k[k]) / (1.0 + std::abs(r2.alpha_k[k])));
    d = std::max(d, std::abs(r1.beta_k[k + 1] - r2.beta_k[k + 1]) / r2.beta_k[k + 1]);
  }
  if (d > tol) throw Error(ErrorCode::QuadratureNotConverged, "build_recurrence: doubling changed coefficients", d);
  return r2;
}

// p_0 .. p_n at x
inline std::vector<double> op_values(const OPRecurrence& rec, double x) {
  const int n = rec.j_max;
  std::vector<double> p(n + 1);
  p[0] = 1.0 / std::sqrt(rec.mu0);
  double prev = 0.0;
  for (int k = 0; k < n; ++k) {
    const double next = ((x - rec.alpha_k[k]) * p[k] - rec.beta_k[k] * prev) / rec.beta_k[k + 1];
    prev = p[k];
    p[k + 1] = next;
  }
  return p;
}

inline double cd_kernel(const EnsembleConfig& c, const OPRecurrence& rec, double x, double y) {
  if (rec.j_max < c.n) throw Error(ErrorCode::Precondition, "cd_kernel: recurrence too short");
  const int n = c.n;
  const auto px = op_values(rec, x), py = op_values(rec, y);
  const double w = c.sqrt_weight(x) * c.sqrt_weight(y);
  if (std::abs(x - y) < 1e-6) {
    double sum = 0.0;
    for (int j = 0; j < n; ++j) sum += px[j] * py[j];
    return w * sum;
  }
  return w * rec.beta_k[n] * (px[n] * py[n - 1] - px[n - 1] * py[n]) / (x - y);
}

// int K_n(x, x) dx on a rule laid out differently from the one behind rec
inline double cd_trace(const EnsembleConfig& c, const OPRecurrence& rec, int quad_points = 47) {
  const auto [lo, hi] = detail::weight_range(c);
  const Rule r = detail::edge_panels(lo, hi, quad_points, 0.2);
  double t = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i) t += r.w[i] * cd_kernel(c, rec, r.x[i], r.x[i]);
  return t;
}

struct EdgeCompareReport {
  int n = 0;
  double alpha = 0.0, s = 0.0;
  double scale = 0.0;  // (c1 n)^{2/3}
  std::vector<double> grid;
  std::vector<std::vector<double>> finite, limit;
  double sup_error = 0.0;
};

// (c1 n)^{-2/3} K_n(x/(c1 n)^{2/3}, y/(c1 n)^{2/3}) against the edge kernel at s
// on grid x grid
inline EdgeCompareReport edge_compare(const EnsembleConfig& c, const OPRecurrence& rec, const P34Solution& sol,
                                      const std::vector<double>& grid, const KernelOptions& o = {}) {
  EdgeCompareReport r{c.n, c.alpha, c.s, std::pow(c.c1 * c.n, 2.0 / 3.0), grid, {}, {}, 0.0};
  const KernelGrid lim = kernel_grid(c.alpha, c.s, grid, grid, sol, o);
  r.limit = lim.values;
  r.finite.assign(grid.size(), std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) {
      r.finite[i][j] = cd_kernel(c, rec, grid[i] / r.scale, grid[j] / r.scale) / r.scale;
      r.sup_error = std::max(r.sup_error, std::abs(r.finite[i][j] - r.limit[i][j]));
    }
  return r;
}

}  // namespace edge34

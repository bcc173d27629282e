#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <vector>

#include "error.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"

namespace edge34 {

struct GapResult {
  double alpha = 0.0;
  double s = 0.0;
  double t = 0.0;
  double det_value = 0.0;
  int m = 0;
  double est_error = 0.0;
};

struct FredholmOptions {
  int m_cap = 400;
  double tol = 1e-6;
  double span = 40.0;  // node images capped at t + span
  KernelOptions kernel;
};

// K evaluated on all node pairs at once
using KernelMatrixFn = std::function<Eigen::MatrixXd(const std::vector<double>&)>;

namespace detail {

struct Nodes {
  std::vector<double> x, sw;  // sw = sqrt(weight)
};

// x = t + xi/(1 - xi), xi in (0, 1), nodes beyond t + span dropped
inline void add_mapped(Nodes& n, double a, int m, double cut) {
  const Rule r = gauss_legendre(m, 0.0, 1.0);
  for (int i = 0; i < m; ++i) {
    const double xi = r.x[i];
    const double phi = xi / (1.0 - xi);
    if (a + phi > cut) continue;
    n.x.push_back(a + phi);
    n.sw.push_back(std::sqrt(r.w[i] / ((1.0 - xi) * (1.0 - xi))));
  }
}

inline void add_panel(Nodes& n, double a, double b, int q) {
  const Rule r = gauss_legendre(q, a, b);
  for (int i = 0; i < q; ++i) {
    n.x.push_back(r.x[i]);
    n.sw.push_back(std::sqrt(r.w[i]));
  }
}

// plain map for t >= 0; otherwise panels graded geometrically toward the
// origin on [t, 0] and [0, 1], then the map on (1, inf)
inline Nodes fredholm_nodes(double t, int m, double span, bool graded, int levels = 14) {
  Nodes n;
  if (!graded || t >= 0.0) {
    add_mapped(n, t, m, t + span);
    return n;
  }
  const int q = std::max(4, m / 4);
  double lo = t;
  for (int k = 1; k <= levels; ++k) {
    const double hi = t * std::pow(0.25, k);
    add_panel(n, lo, hi, q);
    lo = hi;
  }
  add_panel(n, lo, 0.0, q);
  double hi = 0.25 * std::pow(0.25, levels - 1);
  add_panel(n, 0.0, hi, q);
  for (int k = levels - 1; k >= 1; --k) {
    const double b = std::pow(0.25, k - 1);
    add_panel(n, hi, b, q);
    hi = b;
  }
  if (1.0 < t + span) add_mapped(n, 1.0, m, t + span);
  return n;
}

// det(I - M) on (t, inf)
inline double fredholm_det(const KernelMatrixFn& K, double t, int m, double span, bool graded = false) {
  const Nodes nd = fredholm_nodes(t, m, span, graded);
  const auto& x = nd.x;
  const auto& sw = nd.sw;
  if (x.empty()) return 1.0;
  const Eigen::MatrixXd k = K(x);
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd A(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) A(i, j) = (i == j ? 1.0 : 0.0) - sw[i] * k(i, j) * sw[j];
  return A.partialPivLu().determinant();
}

inline KernelMatrixFn psi_kernel(double alpha, double s, const P34Solution& sol, const KernelOptions& o) {
  return [=, &sol](const std::vector<double>& x) {
    const KernelGrid g = kernel_grid(alpha, s, x, x, sol, o);
    Eigen::MatrixXd k(x.size(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) k(i, j) = g.values[i][j];
    return k;
  };
}

}  // namespace detail

inline KernelMatrixFn closed_form_kernel(double alpha, double s) {
  return [=](const std::vector<double>& x) {
    Eigen::MatrixXd k(x.size(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j <= i; ++j) k(i, j) = k(j, i) = kernel_closed_form(alpha, s, x[i], x[j]);
    return k;
  };
}

// det_m with est_error = |det_m - det_2m|; m doubles until the estimate is
// below tol, NotConverged once 2m would pass the cap
inline GapResult gap_probability(const KernelMatrixFn& K, double alpha, double s, double t, int m,
                                 const FredholmOptions& o = {}) {
  if (m < 10) throw Error(ErrorCode::Precondition, "gap_probability: m >= 10");
  GapResult g{alpha, s, t, 0.0, m, 0.0};
  // the kernel is only Hoelder at the origin unless alpha = 0
  const bool graded = alpha != 0.0;
  double d = detail::fredholm_det(K, t, m, o.span, graded);
  for (;;) {
    const double d2 = detail::fredholm_det(K, t, 2 * m, o.span, graded);
    g.det_value = d;
    g.m = m;
    g.est_error = std::abs(d - d2);
    if (g.est_error <= o.tol) return g;
    if (4 * m > o.m_cap) throw Error(ErrorCode::NotConverged, "gap_probability: order cap reached", t);
    m *= 2;
    d = d2;
  }
}

inline GapResult gap_probability(double alpha, double s, double t, int m, const P34Solution& sol,
                                 const FredholmOptions& o = {}) {
  return gap_probability(detail::psi_kernel(alpha, s, sol, o.kernel), alpha, s, t, m, o);
}

inline std::vector<GapResult> largest_eigenvalue_cdf(double alpha, double s, const std::vector<double>& t_grid,
                                                     int m, const P34Solution& sol, const FredholmOptions& o = {}) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end()))
    throw Error(ErrorCode::Precondition, "largest_eigenvalue_cdf: t_grid not ascending");
  std::vector<GapResult> out;
  const auto K = detail::psi_kernel(alpha, s, sol, o.kernel);
  for (double t : t_grid) out.push_back(gap_probability(K, alpha, s, t, m, o));
  return out;
}

}  // namespace edge34

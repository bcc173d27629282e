#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include "lax.hpp"
#include "p34.hpp"
#include "psi.hpp"
#include "specfun.hpp"

namespace edge34 {

struct KernelOptions {
  double diag_switch = 1e-4;
  double origin_ref = 0.25;  // matching point for the Frobenius form near x = 0
  PsiOptions psi;
};

struct KernelGrid {
  double alpha = 0.0;
  double s = 0.0;
  std::vector<double> x_grid, y_grid;
  std::vector<std::vector<double>> values;  // values[i][j] = K(x_i, y_j)
};

// Integrable form from two samples (x != y). Real part; the imaginary part is
// rounding noise for samples with the real structure.
inline double kernel_from_psi(const PsiSample& a, const PsiSample& b) {
  using namespace std::complex_literals;
  const cplx num = a.psi2 * b.psi1 - a.psi1 * b.psi2;
  return (num / (2.0 * std::numbers::pi * 1.0i * (a.x - b.x))).real();
}

// l'Hopital limit with derivatives from the Lax matrix
inline double kernel_diag_from_psi(const LaxPoint& p, const PsiSample& v) {
  using namespace std::complex_literals;
  const auto M = lax_matrix(p, cplx(v.x, 0.0));
  const cplx num = M.m21 * v.psi1 * v.psi1 + (M.m22 - M.m11) * v.psi1 * v.psi2 - M.m12 * v.psi2 * v.psi2;
  return (num / (2.0 * std::numbers::pi * 1.0i)).real();
}

namespace detail {

// psi and the kernel diagonal at a set of points from one sweep. Points inside
// the origin window use psi = |x|^alpha (S1, i S2), S a combination of Frobenius
// series matched to the sweep at x = +-origin_ref (one series for alpha != 0,
// two analytic ones for alpha = 0).
class PsiTable {
 public:
  PsiTable(double alpha, double s, std::vector<double> xs, const P34Solution& sol, const KernelOptions& o)
      : p_(detail::psi_lax_point(alpha, s, sol)), window_(o.psi.window) {
    // alpha = 0: u = 0 and both analytic solutions are admissible
    if (alpha == 0.0)
      frob_ = {Frobenius(p_, 200, {1.0, 0.0}), Frobenius(p_, 200, {0.0, 1.0})};
    else
      frob_ = {Frobenius(p_)};
    std::vector<double> far;
    bool near = false;
    for (double x : xs) (std::abs(x) >= window_ ? far.push_back(x) : void(near = true));
    if (near) {
      if (alpha < 0.0) throw Error(ErrorCode::Domain, "kernel: singular at the origin for alpha < 0");
      far.push_back(o.origin_ref);
      far.push_back(-o.origin_ref);
    }
    std::sort(far.begin(), far.end());
    far.erase(std::unique(far.begin(), far.end()), far.end());
    const auto samples = psi_sweep(p_, far, o.psi);
    for (const auto& v : samples) {
      check_real_structure(v, o.psi.real_tol);
      table_[v.x] = v;
    }
    if (near) {
      c_pos_ = match(table_.at(o.origin_ref));
      c_neg_ = match(table_.at(-o.origin_ref));
    }
  }

  const LaxPoint& lax() const { return p_; }

  PsiSample psi(double x) const {
    if (std::abs(x) >= window_) return table_.at(x);
    const auto [S, dS] = combined(x);
    const double xa = std::pow(std::abs(x), p_.alpha);
    return {x, cplx(xa * S[0], 0.0), cplx(0.0, xa * S[1])};
  }

  double diag(double x) const {
    if (std::abs(x) >= window_) return kernel_diag_from_psi(p_, table_.at(x));
    // psi2' psi1 - psi1' psi2 = i |x|^{2 alpha} (S2' S1 - S1' S2); the x^{-1} parts cancel
    const auto [S, dS] = combined(x);
    const double xa = p_.alpha == 0.0 ? 1.0 : std::pow(std::abs(x), 2.0 * p_.alpha);
    return xa * (dS[1] * S[0] - dS[0] * S[1]) / (2.0 * std::numbers::pi);
  }

 private:
  using V2 = std::array<double, 2>;

  // series part of psi (real form) and its derivative: sum_k c_k S_k
  std::pair<V2, V2> combined(double x) const {
    const auto& c = x >= 0 ? c_pos_ : c_neg_;
    V2 S{0, 0}, dS{0, 0};
    for (std::size_t k = 0; k < frob_.size(); ++k) {
      V2 a, b;
      frob_[k].series(x, a, b);
      for (int j = 0; j < 2; ++j) {
        S[j] += c[k] * a[j];
        dS[j] += c[k] * b[j];
      }
    }
    return {S, dS};
  }

  // coefficients of psi in the Frobenius basis, matched at one sample
  std::array<double, 2> match(const PsiSample& v) const {
    const V2 y{v.psi1.real(), v.psi2.imag()};
    const V2 f = frob_[0](v.x);
    if (frob_.size() == 1) return {(y[0] * f[0] + y[1] * f[1]) / (f[0] * f[0] + f[1] * f[1]), 0.0};
    const V2 h = frob_[1](v.x);
    const double det = f[0] * h[1] - f[1] * h[0];
    return {(y[0] * h[1] - y[1] * h[0]) / det, (f[0] * y[1] - f[1] * y[0]) / det};
  }

  LaxPoint p_;
  std::vector<Frobenius> frob_;
  double window_;
  std::map<double, PsiSample> table_;
  std::array<double, 2> c_pos_{}, c_neg_{};
};

inline double kernel_pair(const PsiTable& t, double x, double y, double sw) {
  if (std::abs(x - y) < sw) return t.diag(0.5 * (x + y));
  return kernel_from_psi(t.psi(x), t.psi(y));
}

inline void add_points(std::vector<double>& pts, double x, double y, double sw) {
  if (std::abs(x - y) < sw)
    pts.push_back(0.5 * (x + y));
  else {
    pts.push_back(x);
    pts.push_back(y);
  }
}

}  // namespace detail

// Off the diagonal by more than diag_switch: the integrable form. Closer: the
// diagonal at the midpoint (the kernel is symmetric, so the first-order cross
// term vanishes there).
inline double kernel_eval(double alpha, double s, double x, double y, const P34Solution& sol,
                          const KernelOptions& o = {}) {
  std::vector<double> pts;
  detail::add_points(pts, x, y, o.diag_switch);
  const detail::PsiTable t(alpha, s, pts, sol, o);
  return detail::kernel_pair(t, x, y, o.diag_switch);
}

inline double kernel_diag(double alpha, double s, double x, const P34Solution& sol, const KernelOptions& o = {}) {
  const detail::PsiTable t(alpha, s, {x}, sol, o);
  return t.diag(x);
}

inline KernelGrid kernel_grid(double alpha, double s, const std::vector<double>& xg, const std::vector<double>& yg,
                              const P34Solution& sol, const KernelOptions& o = {}) {
  std::vector<double> pts;
  for (double x : xg)
    for (double y : yg) detail::add_points(pts, x, y, o.diag_switch);
  const detail::PsiTable t(alpha, s, pts, sol, o);
  KernelGrid g{alpha, s, xg, yg, {}};
  g.values.assign(xg.size(), std::vector<double>(yg.size()));
  for (std::size_t i = 0; i < xg.size(); ++i)
    for (std::size_t j = 0; j < yg.size(); ++j) g.values[i][j] = detail::kernel_pair(t, xg[i], yg[j], o.diag_switch);
  return g;
}

namespace detail {

inline double airy_kernel(double x, double y, double s) {
  double a, ap, b, bp;
  airy_ai(x + s, a, ap);
  if (x == y) return ap * ap - (x + s) * a * a;
  airy_ai(y + s, b, bp);
  if (std::abs(x - y) < 1e-6) {
    // symmetric in (x, y): the midpoint diagonal is exact to O((x - y)^2)
    const double m = 0.5 * (x + y) + s;
    double c, cp;
    airy_ai(m, c, cp);
    return cp * cp - m * c * c;
  }
  return (a * bp - ap * b) / (x - y);
}

}  // namespace detail

inline double kernel_closed_form(double alpha, double s, double x, double y) {
  if (alpha == 0.0) return detail::airy_kernel(x, y, s);
  if (alpha == 1.0) {
    const double k00 = detail::airy_kernel(0.0, 0.0, s);
    return detail::airy_kernel(x, y, s) - detail::airy_kernel(x, 0.0, s) * detail::airy_kernel(y, 0.0, s) / k00;
  }
  throw Error(ErrorCode::Precondition, "kernel_closed_form: alpha must be 0 or 1");
}

}  // namespace edge34

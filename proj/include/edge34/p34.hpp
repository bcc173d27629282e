#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <optional>
#include <vector>

#include "error.hpp"
#include "lax.hpp"
#include "ode.hpp"
#include "specfun.hpp"

namespace edge34 {

inline void check_alpha(double alpha) {
  if (!(alpha > -0.5) || !std::isfinite(alpha))
    throw Error(ErrorCode::Precondition, "alpha must be > -1/2");
}

// ---------------------------------------------------------------- series

// b: coefficients of the PII expansion q ~ sqrt(-s/2) sum b_n (-s)^{-3n/2}
// with nu = 2 alpha + 1/2; a[0] = alpha, a[n] the coefficient of s^{-(3n+1)/2}.
struct SeriesCoeffs {
  double nu = 0.0;
  std::vector<double> b;
  std::vector<double> a;
};

inline SeriesCoeffs series_coeffs(double alpha, int n_max) {
  if (n_max < 2) throw Error(ErrorCode::Precondition, "series_coeffs: n_max >= 2");
  SeriesCoeffs c;
  c.nu = 2.0 * alpha + 0.5;
  auto& b = c.b;
  b.assign(n_max + 2, 0.0);
  b[0] = 1.0;
  b[1] = c.nu / std::sqrt(2.0);
  for (int n = 0; n + 2 <= n_max + 1; ++n) {
    double v = (9.0 * n * n - 1.0) / 8.0 * b[n];
    for (int m = 1; m <= n + 1; ++m) v -= b[m] * b[n + 2 - m];
    double tri = 0.0;
    for (int l = 1; l <= n + 1; ++l)
      for (int m = 1; m <= n + 2 - l; ++m) tri += b[l] * b[m] * b[n + 2 - l - m];
    b[n + 2] = v - 0.5 * tri;
  }
  // 2^{(n+1)/2} a_n = b_{n+1} + (3n-1)/(2 sqrt 2) b_n + 1/2 sum_{k+m=n+1, k,m>=1} b_k b_m
  c.a.assign(n_max, 0.0);
  for (int n = 0; n < n_max; ++n) {
    double conv = 0.0;
    for (int k = 1; k <= n; ++k) conv += b[k] * b[n + 1 - k];
    const double rhs = b[n + 1] + (3.0 * n - 1.0) / (2.0 * std::sqrt(2.0)) * b[n] + 0.5 * conv;
    c.a[n] = rhs / std::pow(2.0, (n + 1) / 2.0);
  }
  b.resize(n_max + 1);
  return c;
}

struct SeriesValue {
  double u = 0.0;
  double u_prime = 0.0;
  int n_terms = 0;               // highest n included
  double last_term = 0.0;        // |a_n s^{-(3n+1)/2}| of the smallest included term
  std::vector<double> term_magnitudes;
};

// alpha / sqrt(s) + sum_{n=1}^{n_terms} a_n s^{-(3n+1)/2} and its term-wise derivative
inline SeriesValue u_series(double alpha, double s, int n_terms) {
  if (!(s > 0)) throw Error(ErrorCode::Precondition, "u_series: s > 0");
  SeriesValue out;
  const auto c = series_coeffs(alpha, std::max(2, n_terms + 1));
  for (int n = 0; n <= n_terms; ++n) {
    const double e = (3.0 * n + 1.0) / 2.0;
    const double t = c.a[n] * std::pow(s, -e);
    out.u += t;
    out.u_prime += -e * t / s;
    out.term_magnitudes.push_back(std::abs(t));
  }
  out.n_terms = n_terms;
  out.last_term = out.term_magnitudes.back();
  return out;
}

// truncated just before the terms start to grow
inline SeriesValue u_series_optimal(double alpha, double s, int n_max = 80) {
  if (!(s > 0)) throw Error(ErrorCode::Precondition, "u_series: s > 0");
  SeriesValue out;
  if (alpha == 0.0) return out;
  const auto c = series_coeffs(alpha, n_max + 1);
  double prev = std::numeric_limits<double>::infinity();
  for (int n = 0; n <= n_max; ++n) {
    const double e = (3.0 * n + 1.0) / 2.0;
    const double t = c.a[n] * std::pow(s, -e);
    const double m = std::abs(t);
    if (n > 2 && m > prev && prev > 0) break;
    out.u += t;
    out.u_prime += -e * t / s;
    out.term_magnitudes.push_back(m);
    out.n_terms = n;
    if (m > 0) {
      prev = m;
      out.last_term = m;
    }
  }
  return out;
}

// d_+ and d_-: amplitudes of the exponentially small correction. Data only.
inline std::complex<double> d_plus(double alpha) {
  using namespace std::complex_literals;
  return (std::exp(2.0i * alpha * std::numbers::pi) - 1.0) / std::numbers::pi *
         std::pow(2.0, -6.0 * alpha - 5.0 / 3.0) * gamma(1.0 + 2.0 * alpha);
}
inline std::complex<double> d_minus(double alpha) { return std::conj(d_plus(alpha)); }

// ---------------------------------------------------------------- oracles

struct UValue {
  double u, u_prime;
};

// u = d/ds [Ai^2 / D], D = Ai'^2 - s Ai^2, using D' = -Ai^2
inline UValue u_closed_form_alpha1(double s) {
  double ai, aip;
  airy_ai(s, ai, aip);
  const double D = aip * aip - s * ai * ai;
  const double ai2 = ai * ai;
  const double P = 2.0 * ai * aip * D + ai2 * ai2;
  const double Pp = 2.0 * (aip * aip + s * ai2) * D + 2.0 * ai2 * ai * aip;
  return {P / (D * D), (Pp * D + 2.0 * P * ai2) / (D * D * D)};
}

// Painleve II solution q(sigma) = -2^{-1/3} Ai'(z)/Ai(z), z = -2^{-1/3} sigma, and
// U = q^2 + q' + sigma/2. Here nu = 1/2, so u = 2^{-1/3} U(-2^{1/3} s) vanishes.
struct PIIBridge {
  double nu = 0.5;
  std::function<double(double)> q;
  std::function<double(double)> U;
};

inline PIIBridge pii_airy_bridge() {
  const double c = std::pow(2.0, -1.0 / 3.0);
  auto ratio = [c](double sigma) {
    const double z = -c * sigma;
    double ai, aip;
    airy_ai(z, ai, aip);
    if (std::abs(ai) < 1e-6 * std::abs(aip))
      throw Error(ErrorCode::PoleNearby, "Ai zero near evaluation point", sigma);
    return std::pair<double, double>{z, aip / ai};
  };
  PIIBridge br;
  br.q = [=](double sigma) { return -c * ratio(sigma).second; };
  br.U = [=](double sigma) {
    const auto [z, r] = ratio(sigma);
    const double q = -c * r;
    const double qp = c * c * (z - r * r);
    return q * q + qp + sigma / 2.0;
  };
  return br;
}

inline double u_from_pii_airy(double s) {
  static const PIIBridge br = pii_airy_bridge();
  const double c = std::pow(2.0, 1.0 / 3.0);
  return br.U(-c * s) / c;
}

// ---------------------------------------------------------------- charts

// p = (u' - 2 alpha)/(2u) and r = (u' + 2 alpha)/(2u) turn the equation into
//   u' = 2 u p + 2 alpha,  p' = 2u + s - p^2   (P chart)
//   u' = 2 u r - 2 alpha,  r' = 2u + s - r^2   (R chart)
// which are regular at zeros of u with u' = +2 alpha (P) or u' = -2 alpha (R).
enum class Chart { P, R };

struct ChartState {
  double u = 0.0;
  double v = 0.0;
  Chart chart = Chart::P;
};

inline double chart_sign(Chart c) { return c == Chart::P ? 1.0 : -1.0; }

inline double u_prime_of(double alpha, const ChartState& c) {
  return 2.0 * c.u * c.v + 2.0 * alpha * chart_sign(c.chart);
}

// ((u')^2 - 4 alpha^2)/(4u) = u v^2 + 2 alpha v (P) or u v^2 - 2 alpha v (R)
inline double g_of(double alpha, const ChartState& c) {
  return c.u * c.v * c.v + 2.0 * alpha * chart_sign(c.chart) * c.v;
}

inline ChartState to_chart(double alpha, double u, double up) {
  if (u == 0.0) throw Error(ErrorCode::Precondition, "to_chart: u = 0");
  const double p = (up - 2.0 * alpha) / (2.0 * u);
  const double r = (up + 2.0 * alpha) / (2.0 * u);
  return std::abs(p) <= std::abs(r) ? ChartState{u, p, Chart::P} : ChartState{u, r, Chart::R};
}

inline ChartState switch_chart(double alpha, const ChartState& c) {
  const double d = 2.0 * alpha / c.u;
  return c.chart == Chart::P ? ChartState{c.u, c.v + d, Chart::R} : ChartState{c.u, c.v - d, Chart::P};
}

inline LaxPoint lax_point(double alpha, double s, const ChartState& c) {
  return {alpha, s, c.u, u_prime_of(alpha, c), g_of(alpha, c)};
}

struct ChartFlowOptions {
  double rtol = 1e-13;
  double atol = 1e-15;
  double switch_at = 5.0;
  double blowup = 1e8;
};

// integrate the chart system from s_from to s_to, switching charts when |v| grows
inline ChartState chart_flow(double alpha, double s_from, ChartState c, double s_to,
                             const ChartFlowOptions& fo = {}, double* h_hint = nullptr) {
  OdeOptions o;
  o.rtol = fo.rtol;
  o.atol = fo.atol;
  if (h_hint && *h_hint > 0) o.h_init = *h_hint;
  double s = s_from;
  for (int sw = 0; sw < 100000; ++sw) {
    if (s == s_to) return c;
    const double sg = 2.0 * alpha * chart_sign(c.chart);
    auto rhs = [sg](double t, const std::array<double, 2>& y) {
      return std::array<double, 2>{2.0 * y[0] * y[1] + sg, 2.0 * y[0] + t - y[1] * y[1]};
    };
    const double d = 2.0 * alpha * chart_sign(c.chart);
    auto stop = [&](double, const std::array<double, 2>& y) {
      if (std::abs(y[0]) > fo.blowup) return true;
      return std::abs(y[1]) > fo.switch_at && std::abs(y[1] + d / y[0]) < 0.5 * std::abs(y[1]);
    };
    auto st = dopri5(rhs, s, std::array<double, 2>{c.u, c.v}, s_to, o, stop);
    if (h_hint) *h_hint = st.h;
    o.h_init = st.h;
    s = st.t;
    c.u = st.y[0];
    c.v = st.y[1];
    if (!std::isfinite(c.u) || std::abs(c.u) > fo.blowup)
      throw Error(ErrorCode::BlowUp, "|u| exceeded bound", s);
    if (std::abs(c.u) < 1e-13 && std::abs(u_prime_of(alpha, c)) < 1e-13)
      throw Error(ErrorCode::BlowUp, "u and u' vanish simultaneously", s);
    if (st.stopped) c = switch_chart(alpha, c);
  }
  throw Error(ErrorCode::NotConverged, "chart_flow: too many chart switches", s);
}

// ---------------------------------------------------------------- solver

enum class P34Method { Isomonodromic, SeriesOnly };

struct P34Options {
  double s0_default = 9.0;
  double s_pin = 0.0;          // where the Stokes multiplier is imposed
  P34Method method = P34Method::Isomonodromic;
  double validity_tol = 1e-6;  // absolute error budget for valid_interval
  double monodromy_tol = 1e-8; // accepted pin and monodromy residuals
  double check_spacing = 0.5;  // a posteriori monodromy sampling in s
  // SeriesOnly error model: err(s) = eps0 e^{(4/3)(s0^{3/2} - max(s,0)^{3/2})}, with
  // eps0 = kappa * (smallest series term at s0); kappa from the alpha = 1 closed form.
  double kappa = 3.0;
};

struct P34Solution {
  double alpha = 0.0;
  std::vector<double> s_grid, u, u_prime;
  std::vector<ChartState> states;
  double s0 = 0.0;
  int n_series = 0;
  double series_term = 0.0;
  double tol = 0.0;
  std::array<double, 2> valid_interval{0.0, 0.0};
  P34Method method = P34Method::Isomonodromic;
  int newton_iterations = 0;
  double pin_residual = 0.0;
  // (s, monodromy residual) samples along the trajectory
  std::vector<std::pair<double, double>> monodromy_samples;

  bool contains(double s) const { return s >= valid_interval[0] && s <= valid_interval[1]; }

  // accurate state at s by a short re-integration from the nearest stored node
  LaxPoint at(double s) const {
    if (s < s_grid.front() - 1e-12 || s > s_grid.back() + 1e-12)
      throw Error(ErrorCode::OutOfValidity, "s outside solved range", s);
    if (alpha == 0.0) return {0.0, s, 0.0, 0.0, 0.0};
    auto it = std::lower_bound(s_grid.begin(), s_grid.end(), s);
    std::size_t k = static_cast<std::size_t>(it - s_grid.begin());
    if (k == s_grid.size()) k = s_grid.size() - 1;
    if (k > 0 && std::abs(s_grid[k - 1] - s) < std::abs(s_grid[k] - s)) --k;
    ChartFlowOptions fo;
    fo.rtol = std::min(tol, 1e-12);
    const ChartState c = chart_flow(alpha, s_grid[k], states[k], s, fo);
    return lax_point(alpha, s, c);
  }

  // cubic Hermite on (u, u'), for plotting
  double interp(double s) const {
    if (s <= s_grid.front()) return u.front();
    if (s >= s_grid.back()) return u.back();
    const auto it = std::upper_bound(s_grid.begin(), s_grid.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - s_grid.begin()) - 1;
    const double h = s_grid[k + 1] - s_grid[k], t = (s - s_grid[k]) / h;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * u[k] + h10 * h * u_prime[k] + h01 * u[k + 1] + h11 * h * u_prime[k + 1];
  }
};

namespace detail {

inline std::vector<double> make_grid(double a, double b, double step) {
  std::vector<double> g;
  const long n = std::max(1L, static_cast<long>(std::ceil((b - a) / step - 1e-9)));
  for (long i = 0; i <= n; ++i) g.push_back(i == n ? b : a + (b - a) * static_cast<double>(i) / n);
  return g;
}

// node spacing keeps the local growth factor e^{2 sqrt(s) h} moderate
inline std::vector<double> shooting_nodes(double a, double b) {
  std::vector<double> t{a};
  while (t.back() < b) {
    const double s = t.back();
    const double h = std::min(0.5, 1.5 / (2.0 * std::sqrt(std::max(s, 1.0))));
    t.push_back(std::min(b, s + h));
  }
  return t;
}

struct ShootResult {
  std::vector<double> nodes;
  std::vector<std::array<double, 2>> Y;  // (u, u') at nodes
  int iterations = 0;
  double pin_residual = 0.0;
};

inline std::array<double, 2> node_flow(double alpha, double s1, const std::array<double, 2>& y,
                                       double s2, double rtol) {
  ChartFlowOptions fo;
  fo.rtol = rtol;
  const ChartState c = chart_flow(alpha, s1, to_chart(alpha, y[0], y[1]), s2, fo);
  return {c.u, u_prime_of(alpha, c)};
}

inline double pin_condition(double alpha, double s, const std::array<double, 2>& y) {
  const double up = y[1];
  const double g = (up * up - 4.0 * alpha * alpha) / (4.0 * y[0]);
  return stokes_multiplier({alpha, s, y[0], up, g}) - 1.0;
}

// Two-point problem on [s_pin, s0]: the series fixes u(s0) (the component that
// grows to the right), the Stokes multiplier at s_pin fixes the component that
// grows to the left. Solved by multiple shooting + damped Newton.
inline ShootResult shoot(double alpha, double s_pin, double s0, double rtol) {
  ShootResult r;
  r.nodes = shooting_nodes(s_pin, s0);
  const std::size_t K = r.nodes.size() - 1;
  // initial guess: series where it is usable; below s_guess, continuation from
  // the problem pinned at s_guess
  const double s_guess = std::max(3.0, 2.0 + alpha);
  std::array<double, 2> yg{};
  if (s_pin < s_guess && s_guess < s0) yg = shoot(alpha, s_guess, s0, rtol).Y[0];
  for (double t : r.nodes) {
    if (t >= s_guess) {
      const auto sv = u_series_optimal(alpha, t);
      r.Y.push_back({sv.u, sv.u_prime});
    } else {
      r.Y.push_back(node_flow(alpha, s_guess, yg, t, rtol));
    }
  }
  const double u_end = u_series_optimal(alpha, s0).u;
  const std::size_t n = 2 * (K + 1);
  Eigen::MatrixXd J(n, n);
  Eigen::VectorXd R(n);
  for (int it = 0; it < 40; ++it) {
    J.setZero();
    for (std::size_t k = 0; k < K; ++k) {
      const auto y1 = node_flow(alpha, r.nodes[k], r.Y[k], r.nodes[k + 1], rtol);
      R(2 * k) = y1[0] - r.Y[k + 1][0];
      R(2 * k + 1) = y1[1] - r.Y[k + 1][1];
      for (int j = 0; j < 2; ++j) {
        const double d = 1e-6 * std::max(1e-3, std::abs(r.Y[k][j]));
        auto yp = r.Y[k], ym = r.Y[k];
        yp[j] += d;
        ym[j] -= d;
        const auto fp = node_flow(alpha, r.nodes[k], yp, r.nodes[k + 1], rtol);
        const auto fm = node_flow(alpha, r.nodes[k], ym, r.nodes[k + 1], rtol);
        J(2 * k, 2 * k + j) = (fp[0] - fm[0]) / (2 * d);
        J(2 * k + 1, 2 * k + j) = (fp[1] - fm[1]) / (2 * d);
      }
      J(2 * k, 2 * k + 2) = -1.0;
      J(2 * k + 1, 2 * k + 3) = -1.0;
    }
    R(2 * K) = r.Y[K][0] - u_end;
    J(2 * K, 2 * K) = 1.0;
    const double F0 = pin_condition(alpha, s_pin, r.Y[0]);
    R(2 * K + 1) = F0;
    for (int j = 0; j < 2; ++j) {
      const double d = 1e-7 * std::max(1e-3, std::abs(r.Y[0][j]));
      auto yp = r.Y[0], ym = r.Y[0];
      yp[j] += d;
      ym[j] -= d;
      J(2 * K + 1, j) = (pin_condition(alpha, s_pin, yp) - pin_condition(alpha, s_pin, ym)) / (2 * d);
    }
    const Eigen::VectorXd dY = J.partialPivLu().solve(-R);
    const double big = dY.cwiseAbs().maxCoeff();
    const double lam = std::min(1.0, 0.2 / std::max(big, 1e-300));
    for (std::size_t k = 0; k <= K; ++k) {
      r.Y[k][0] += lam * dY(2 * k);
      r.Y[k][1] += lam * dY(2 * k + 1);
    }
    r.iterations = it + 1;
    r.pin_residual = std::abs(F0);
    if (lam == 1.0 && big < 1e-13) break;
  }
  r.pin_residual = std::abs(pin_condition(alpha, s_pin, r.Y[0]));
  return r;
}

}  // namespace detail

inline P34Solution solve_u(double alpha, double s_min, double s_max, double step, double tol,
                           const P34Options& opt = {}) {
  check_alpha(alpha);
  if (!(s_min < s_max)) throw Error(ErrorCode::Precondition, "solve_u: s_min < s_max");
  if (!(tol >= 1e-12 && tol <= 1e-6)) throw Error(ErrorCode::Precondition, "solve_u: tol in [1e-12, 1e-6]");
  if (!(step > 0)) throw Error(ErrorCode::Precondition, "solve_u: step > 0");
  P34Solution sol;
  sol.alpha = alpha;
  sol.tol = tol;
  sol.method = opt.method;
  sol.s0 = std::max(s_max, opt.s0_default);
  sol.s_grid = detail::make_grid(s_min, s_max, step);
  const std::size_t n = sol.s_grid.size();
  const auto sv = u_series_optimal(alpha, sol.s0);
  sol.n_series = sv.n_terms;
  sol.series_term = sv.last_term;

  if (alpha == 0.0) {
    sol.u.assign(n, 0.0);
    sol.u_prime.assign(n, 0.0);
    sol.states.assign(n, ChartState{});
    sol.valid_interval = {s_min, s_max};
    return sol;
  }

  ChartFlowOptions fo;
  fo.rtol = std::min(tol, 1e-12);
  fo.atol = 1e-15;
  sol.u.resize(n);
  sol.u_prime.resize(n);
  sol.states.resize(n);
  auto store = [&](std::size_t i, const ChartState& c) {
    sol.states[i] = c;
    sol.u[i] = c.u;
    sol.u_prime[i] = u_prime_of(alpha, c);
  };

  if (opt.method == P34Method::SeriesOnly) {
    ChartState c = to_chart(alpha, sv.u, sv.u_prime);
    double s = sol.s0, h = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      c = chart_flow(alpha, s, c, sol.s_grid[i], fo, &h);
      s = sol.s_grid[i];
      store(i, c);
    }
    const double eps0 = opt.kappa * sv.last_term;
    const double e32 = std::pow(sol.s0, 1.5);
    // smallest s where the model stays inside the budget
    double lo = s_max;
    for (std::size_t i = n; i-- > 0;) {
      const double sp = std::max(sol.s_grid[i], 0.0);
      const double err = eps0 * std::exp(4.0 / 3.0 * (e32 - sp * std::sqrt(sp)));
      if (err > opt.validity_tol) break;
      lo = sol.s_grid[i];
    }
    sol.valid_interval = {lo, s_max};
    return sol;
  }

  const double s_pin = std::min(opt.s_pin, sol.s0 - 1.0);
  const auto sh = detail::shoot(alpha, s_pin, sol.s0, fo.rtol);
  sol.newton_iterations = sh.iterations;
  sol.pin_residual = sh.pin_residual;
  if (!(sh.pin_residual < opt.monodromy_tol))
    throw Error(ErrorCode::NotConverged, "Stokes multiplier condition not met", s_pin);

  // left of the pin point: integrate leftward
  {
    ChartState c = to_chart(alpha, sh.Y[0][0], sh.Y[0][1]);
    double s = s_pin, h = 0.0;
    for (std::size_t i = n; i-- > 0;) {
      if (sol.s_grid[i] >= s_pin) continue;
      c = chart_flow(alpha, s, c, sol.s_grid[i], fo, &h);
      s = sol.s_grid[i];
      store(i, c);
    }
  }
  // right of it: short rightward hops from the shooting nodes
  for (std::size_t i = 0; i < n; ++i) {
    const double s = sol.s_grid[i];
    if (s < s_pin) continue;
    auto it = std::upper_bound(sh.nodes.begin(), sh.nodes.end(), s);
    const std::size_t k = static_cast<std::size_t>(it - sh.nodes.begin()) - 1;
    const ChartState c0 = to_chart(alpha, sh.Y[k][0], sh.Y[k][1]);
    store(i, chart_flow(alpha, sh.nodes[k], c0, s, fo));
  }

  // a posteriori: the monodromy residual must vanish along the whole trajectory
  double lo = s_min, hi = s_max;
  {
    std::vector<double> checks;
    for (double t = s_pin; t >= s_min - 1e-12; t -= opt.check_spacing) checks.push_back(t);
    std::reverse(checks.begin(), checks.end());
    for (double t = s_pin + opt.check_spacing; t <= s_max + 1e-12; t += opt.check_spacing) checks.push_back(t);
    if (checks.front() > s_min) checks.insert(checks.begin(), s_min);
    for (double t : checks) {
      double F = 1.0;
      try {
        F = monodromy_residual(sol.at(t));
      } catch (const Error&) {
      }
      sol.monodromy_samples.emplace_back(t, F);
    }
    // widest run of passing samples that contains the pin point
    for (const auto& [t, F] : sol.monodromy_samples)
      if (t <= s_pin && !(std::abs(F) < opt.monodromy_tol)) lo = std::max(lo, t + opt.check_spacing);
    for (const auto& [t, F] : sol.monodromy_samples)
      if (t > s_pin && !(std::abs(F) < opt.monodromy_tol)) hi = std::min(hi, t - opt.check_spacing);
  }
  sol.valid_interval = {std::min(lo, s_max), std::max(hi, std::min(lo, s_max))};
  return sol;
}

// |u'' - rhs| / (1 + |u''|) at interior grid points. u'' comes from a 7-point
// central difference of u' on a local sub-grid of spacing min(step, h_local),
// filled by short integrations from the stored state; near zeros of u the
// solution has features of width ~|u|, too narrow for the output grid.
// Points within about 1e-3 of a zero of u (|u/u'| < 1e-3) are skipped.
inline double p34_residual(const P34Solution& sol, double h_local = 2e-3) {
  const auto& s = sol.s_grid;
  const std::size_t n = s.size();
  double worst = 0.0;
  if (sol.alpha == 0.0 || n < 3) return worst;
  static constexpr double w[7] = {-1.0 / 60, 3.0 / 20, -3.0 / 4, 0.0, 3.0 / 4, -3.0 / 20, 1.0 / 60};
  ChartFlowOptions fo;
  fo.rtol = 1e-13;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double u = sol.u[i], up = sol.u_prime[i];
    if (std::abs(u) < 1e-3 * std::abs(up)) continue;
    const double h = std::min({h_local, s[i + 1] - s[i], s[i] - s[i - 1]}) / 3.0;
    double upp = 0.0;
    for (int j = -3; j <= 3; ++j) {
      if (j == 0) continue;
      const ChartState c = chart_flow(sol.alpha, s[i], sol.states[i], s[i] + j * h, fo);
      upp += w[j + 3] * u_prime_of(sol.alpha, c);
    }
    upp /= h;
    const double g = g_of(sol.alpha, sol.states[i]);
    const double rhs = 4.0 * u * u + 2.0 * s[i] * u + 2.0 * g;
    worst = std::max(worst, std::abs(upp - rhs) / (1.0 + std::abs(upp)));
  }
  return worst;
}

}  // namespace edge34

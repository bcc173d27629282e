// Acceptance checks: one PASS/FAIL line per criterion, tolerances fixed here.
#include <edge34/edge34.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

using namespace edge34;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... v) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, v...);
  return buf;
}

std::vector<double> grid21() {
  std::vector<double> g;
  for (int i = 0; i <= 20; ++i) g.push_back(-6.0 + 0.5 * i);
  return g;
}

Outcome airy_kernel_oracle() {
  constexpr double tol = 1e-6, budget = 30.0;
  const auto t0 = Clock::now();
  const auto sol = solve_u(0.0, -8.0, 6.0, 0.01, 1e-12);
  const auto g = grid21();
  double err = 0.0;
  for (double s : {-2.0, 0.0, 2.0}) {
    const auto K = kernel_grid(0.0, s, g, g, sol);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j)
        err = std::max(err, std::abs(K.values[i][j] - kernel_closed_form(0.0, s, g[i], g[j])));
  }
  const double t = seconds_since(t0);
  return {err <= tol && t < budget, fmt("sup error %.3e (tol %.0e), %.2f s (budget %.0f s)", err, tol, t, budget)};
}

Outcome alpha1_kernel_oracle() {
  constexpr double tol = 1e-6, tol0 = 1e-8;
  const auto sol = solve_u(1.0, -8.0, 6.0, 0.01, 1e-12);
  const auto g = grid21();
  double err = 0.0, err_signed = 0.0, at0 = 0.0;
  for (double s : {-2.0, 0.0, 2.0}) {
    const auto K = kernel_grid(1.0, s, g, g, sol);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double c = kernel_closed_form(1.0, s, g[i], g[j]);
        const double sg = (g[i] < 0) != (g[j] < 0) ? -1.0 : 1.0;
        err = std::max(err, std::abs(K.values[i][j] - c));
        err_signed = std::max(err_signed, std::abs(K.values[i][j] - sg * c));
        if (g[i] == 0.0) at0 = std::max(at0, std::abs(K.values[i][j]));
      }
  }
  return {err <= tol && at0 <= tol0,
          fmt("sup error %.3e (tol %.0e); |K(0,y)| %.1e (tol %.0e); against sign(x)sign(y) K1 closed form %.3e",
              err, tol, at0, tol0, err_signed)};
}

Outcome p34_oracle() {
  constexpr double tol = 1e-6, res_tol = 1e-8, budget = 60.0;
  const auto t0 = Clock::now();
  const auto sol = solve_u(1.0, -8.0, 6.0, 0.01, 1e-12);
  double err = 0.0;
  for (std::size_t i = 0; i < sol.s_grid.size(); ++i)
    err = std::max(err, std::abs(sol.u[i] - u_closed_form_alpha1(sol.s_grid[i]).u));
  const double res = p34_residual(sol);
  const double t = seconds_since(t0);
  return {err <= tol && res <= res_tol && t < budget,
          fmt("sup error %.3e (tol %.0e), residual %.3e (tol %.0e), %.2f s (budget %.0f s)", err, tol, res, res_tol, t,
              budget)};
}

Outcome pii_bridge() {
  constexpr double tol = 1e-10;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double s = -10.0 + 20.0 * i / 99.0;
    worst = std::max(worst, std::abs(u_from_pii_airy(s)));
  }
  return {worst <= tol, fmt("max |u| %.3e at 100 points (tol %.0e)", worst, tol)};
}

Outcome series_engine() {
  const auto c = series_coeffs(1.0, 8);
  const double nu = c.nu;
  const bool b_ok = c.b[0] == 1.0 && c.b[1] == nu / std::sqrt(2.0);
  const bool a_ok = std::abs(c.a[1] + 1.0) <= 1e-14;
  const auto sol = solve_u(1.0, -8.0, 8.0, 0.01, 1e-12);
  const auto sv = u_series_optimal(1.0, 8.0);
  const double d = std::abs(sol.u.back() - sv.u);
  return {b_ok && a_ok && d < 10.0 * sv.last_term,
          fmt("b0=%.17g b1=%.17g (nu/sqrt2=%.17g) a1=%.17g; |u(8)-series| %.3e vs 10x term %.3e", c.b[0], c.b[1],
              nu / std::sqrt(2.0), c.a[1], d, 10.0 * sv.last_term)};
}

Outcome fredholm_oracle() {
  constexpr double tol = 1e-7, tol1 = 1e-10;
  double err = 0.0, far = 0.0;
  bool monotone = true;
  for (double alpha : {0.0, 1.0}) {
    const auto sol = solve_u(alpha, -8.0, 6.0, 0.01, 1e-12);
    double prev = -1.0;
    for (double t : {-4.0, -2.0, 0.0, 2.0}) {
      const auto a = gap_probability(alpha, 0.0, t, 20, sol);
      const auto b = gap_probability(closed_form_kernel(alpha, 0.0), alpha, 0.0, t, 20);
      err = std::max(err, std::abs(a.det_value - b.det_value));
      monotone = monotone && a.det_value > prev;
      prev = a.det_value;
    }
    far = std::max(far, std::abs(gap_probability(alpha, 0.0, 15.0, 20, sol).det_value - 1.0));
  }
  // successive doubling differences shrink by a fixed factor at least
  const auto K = closed_form_kernel(0.0, 0.0);
  std::vector<double> diffs;
  for (int m : {10, 20, 40}) diffs.push_back(std::abs(detail::fredholm_det(K, -2.0, m, 40.0) - detail::fredholm_det(K, -2.0, 2 * m, 40.0)));
  const bool geometric = diffs[1] < 0.05 * diffs[0] && diffs[2] < 0.05 * diffs[1];
  return {err <= tol && monotone && far <= tol1 && geometric,
          fmt("max |det_psi - det_closed| %.3e (tol %.0e); monotone %s; |det(15)-1| %.1e; doubling diffs %.1e %.1e %.1e",
              err, tol, monotone ? "yes" : "no", far, diffs[0], diffs[1], diffs[2])};
}

Outcome rh_verification() {
  constexpr double jump_tol = 1e-6, det_tol = 1e-10, decay_s = 1.0;
  double jump = 0.0, det = 0.0, e0 = 0.0, e1 = 0.0;
  for (Builder b : {Builder::Psi0, Builder::Psi1}) {
    jump = std::max(jump, verify_jumps(b, 0.0, 4).max_residual);
    det = std::max(det, det_deviation(b, 0.0, 100, 0.1, 10.0));
  }
  e0 = fit_decay(Builder::Psi0, decay_s).exponent;
  e1 = fit_decay(Builder::Psi1, decay_s).exponent;
  auto in = [](double e) { return e >= -0.7 && e <= -0.3; };
  return {jump <= jump_tol && det <= det_tol && in(e0) && in(e1),
          fmt("jump residual %.3e (tol %.0e), |det-1| %.3e (tol %.0e), decay exponents %.3f %.3f at s=%g", jump,
              jump_tol, det, det_tol, e0, e1, decay_s)};
}

Outcome finite_n() {
  constexpr double c_tol = 1e-12, trace_tol = 1e-6, n40_tol = 0.05, budget = 300.0;
  const auto t0 = Clock::now();
  const std::vector<double> V{2.0, 4.0, 2.0};
  const auto e = equilibrium_constants(V);
  const double dc = std::max(std::abs(e.c1 - 2.0 * std::sqrt(2.0)), std::abs(e.c2 - 1.0));
  std::vector<double> g;
  for (int i = 0; i <= 12; ++i) g.push_back(-4.0 + 0.5 * i);
  bool decreasing = true;
  double trace = 0.0, err40 = 0.0;
  std::string seq;
  for (double alpha : {0.0, 0.5}) {
    const auto sol = solve_u(alpha, -8.0, 6.0, 0.01, 1e-12);
    double prev = 1e300;
    for (int n : {10, 20, 40}) {
      const auto c = make_ensemble(V, n, n, alpha);
      const auto rec = build_recurrence(c);
      trace = std::max(trace, std::abs(cd_trace(c, rec) - n) / n);
      const double err = edge_compare(c, rec, sol, g).sup_error;
      decreasing = decreasing && err < prev;
      prev = err;
      if (alpha == 0.0 && n == 40) err40 = err;
      seq += fmt(" %.4f", err);
    }
  }
  const double t = seconds_since(t0);
  return {dc <= c_tol && decreasing && err40 < n40_tol && trace <= trace_tol && t < budget,
          fmt("|c1,c2 error| %.1e; sup errors (alpha 0 then 0.5, n=10,20,40):%s; trace rel %.1e; %.2f s", dc, seq.c_str(),
              trace, t)};
}

Outcome gauge_and_real_structure() {
  constexpr double gauge_tol = 1e-12, real_tol = 1e-10;
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> ue(-10.0, 10.0);
  double gauge = 0.0, real = 0.0;
  const std::vector<double> xs{-5.0, -2.2, -0.6, 0.3, 1.4, 3.0};
  for (double alpha : {0.0, 0.5, 1.0}) {
    const auto sol = solve_u(alpha, -8.0, 6.0, 0.01, 1e-12);
    const auto p = psi_grid(alpha, 0.5, xs, sol);
    for (const auto& v : p)
      real = std::max({real, std::abs(v.psi1.imag()) / (1 + std::abs(v.psi1)),
                       std::abs(v.psi2.real()) / (1 + std::abs(v.psi2))});
    double scale = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i)
      for (std::size_t j = i + 1; j < p.size(); ++j) scale = std::max(scale, std::abs(kernel_from_psi(p[i], p[j])));
    for (int k = 0; k < 50; ++k) {
      const cplx eta(0.0, ue(rng));  // [[1,0],[eta,1]] with the i of the real form absorbed
      for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
          PsiSample a = p[i], b = p[j];
          a.psi2 += eta * a.psi1;
          b.psi2 += eta * b.psi1;
          gauge = std::max(gauge, std::abs(kernel_from_psi(a, b) - kernel_from_psi(p[i], p[j])) / scale);
        }
    }
  }
  return {gauge <= gauge_tol && real <= real_tol,
          fmt("kernel change under eta %.2e relative to sup|K| (tol %.0e); real-structure residue %.2e (tol %.0e)",
              gauge, gauge_tol, real, real_tol)};
}

Outcome oscillatory_tail() {
  constexpr double c_max = 10.0;
  const auto sol = solve_u(1.0, -8.0, 6.0, 0.01, 1e-12);
  double C = 0.0;
  for (std::size_t i = 0; i < sol.s_grid.size(); ++i) {
    const double s = sol.s_grid[i];
    if (s < -8.0 - 1e-12 || s > -3.0 + 1e-12) continue;
    const double lead = std::cos(4.0 / 3.0 * std::pow(-s, 1.5) - std::numbers::pi) / std::sqrt(-s);
    C = std::max(C, std::abs(sol.u[i] - lead) * s * s);
  }
  return {C < c_max, fmt("smallest C with |u - lead| <= C/s^2 on [-8,-3]: %.3f (limit %.0f)", C, c_max)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"1 alpha=0 kernel vs Airy kernel", airy_kernel_oracle},
      {"2 alpha=1 kernel vs closed form", alpha1_kernel_oracle},
      {"3 P34 alpha=1 vs closed form", p34_oracle},
      {"4 alpha=0 via PII Airy bridge", pii_bridge},
      {"5 series engine", series_engine},
      {"6 Fredholm determinant oracle", fredholm_oracle},
      {"7 RH conditions for Psi0, Psi1", rh_verification},
      {"8 finite-n convergence", finite_n},
      {"9 eta-gauge and real structure", gauge_and_real_structure},
      {"10 alpha=1 oscillatory tail", oscillatory_tail}};
  int failed = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

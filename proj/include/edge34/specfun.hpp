#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "error.hpp"

namespace edge34 {

using cplx = std::complex<double>;

struct AiryValues {
  cplx ai, ai_prime, bi, bi_prime;
  bool bi_overflow = false;
};

namespace detail {

inline constexpr double kAi0 = 0.35502805388781723926;
inline constexpr double kAip0 = -0.25881940379280679840;
inline constexpr double kMaclaurinRadius = 1.5;
inline constexpr double kAsymptoticRadius = 9.0;
inline constexpr double kTaylorStep = 0.5;

struct AiPair {
  cplx y, yp;
};

inline AiPair ai_maclaurin(cplx z) {
  // Ai = c1 f - c2 g with f, g the two canonical power series of y'' = z y
  const cplx z3 = z * z * z;
  cplx tf = 1.0, tg = z, tfp = z * z / 2.0, tgp = 1.0;
  cplx f = tf, g = tg, fp = tfp, gp = tgp;
  for (int k = 0; k < 200; ++k) {
    const double a = 3.0 * k;
    tf *= z3 / ((a + 2) * (a + 3));
    tg *= z3 / ((a + 3) * (a + 4));
    tgp *= z3 / ((a + 1) * (a + 3));
    if (k > 0) tfp *= z3 / (a * (a + 2));
    f += tf;
    g += tg;
    gp += tgp;
    if (k > 0) fp += tfp;
    const double sc = std::abs(f) + std::abs(g) + std::abs(fp) + std::abs(gp);
    if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < 1e-18 * sc) break;
  }
  return {kAi0 * f + kAip0 * g, kAi0 * fp + kAip0 * gp};
}

// DLMF 9.7.5-9.7.10 coefficients
struct AsymCoeffs {
  static constexpr int N = 64;
  double u[N], v[N];
  AsymCoeffs() {
    u[0] = 1.0;
    v[0] = 1.0;
    for (int k = 1; k < N; ++k) {
      u[k] = u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) /
             ((2.0 * k - 1) * 216.0 * k);
      v[k] = -(6.0 * k + 1) / (6.0 * k - 1) * u[k];
    }
  }
};

inline const AsymCoeffs& asym_coeffs() {
  static const AsymCoeffs c;
  return c;
}

// sum_j (-1)^j c_k / zeta^k over k = parity + stride*j, cut at the smallest term
inline cplx asym_sum(const double* c, cplx zeta, int parity, int stride) {
  const cplx iz = 1.0 / zeta;
  const cplx iz_step = stride == 1 ? iz : iz * iz;
  cplx p = parity ? iz : cplx(1.0);
  cplx sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int k = parity, j = 0; k < AsymCoeffs::N; k += stride, ++j, p *= iz_step) {
    const cplx t = c[k] * p * ((j % 2) ? -1.0 : 1.0);
    const double a = std::abs(t);
    if (a > prev) break;
    sum += t;
    prev = a;
    if (a < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

inline AiPair ai_asym_exp(cplx z) {
  const auto& C = asym_coeffs();
  const cplx sz = std::sqrt(z);
  const cplx zeta = 2.0 / 3.0 * z * sz;
  const cplx q = std::sqrt(sz);
  const cplx e = std::exp(-zeta) / (2.0 * std::sqrt(std::numbers::pi));
  return {e / q * asym_sum(C.u, zeta, 0, 1), -e * q * asym_sum(C.v, zeta, 0, 1)};
}

// Ai(w) for |arg(-w)| < pi/3
inline AiPair ai_asym_osc(cplx w) {
  const auto& C = asym_coeffs();
  const cplx z = -w;
  const cplx sz = std::sqrt(z);
  const cplx zeta = 2.0 / 3.0 * z * sz;
  const cplx q = std::sqrt(sz);
  const cplx ph = zeta - std::numbers::pi / 4.0;
  const cplx c = std::cos(ph), s = std::sin(ph);
  const double rp = 1.0 / std::sqrt(std::numbers::pi);
  const cplx ue = asym_sum(C.u, zeta, 0, 2), uo = asym_sum(C.u, zeta, 1, 2);
  const cplx ve = asym_sum(C.v, zeta, 0, 2), vo = asym_sum(C.v, zeta, 1, 2);
  return {rp / q * (c * ue + s * uo), rp * q * (s * ve - c * vo)};
}

// Taylor step of y'' = z y from z0 to z0 + h
inline AiPair taylor_step(cplx z0, AiPair y0, cplx h) {
  const cplx zh2 = z0 * h * h, h3 = h * h * h;
  cplx bm1 = 0.0, b0 = y0.y, b1 = y0.yp * h;
  cplx y = b0 + b1, yp = b1;
  for (int k = 0; k < 400; ++k) {
    const cplx b2 = (zh2 * b0 + h3 * bm1) / ((k + 1.0) * (k + 2.0));
    y += b2;
    yp += (k + 2.0) * b2;
    bm1 = b0;
    b0 = b1;
    b1 = b2;
    if (k > 4 && std::abs(b2) + std::abs(b0) + std::abs(b1) < 1e-18 * (std::abs(y) + std::abs(yp)))
      break;
  }
  return {y, yp / h};
}

inline AiPair march(cplx from, AiPair y, cplx to) {
  const double len = std::abs(to - from);
  const int n = std::max(1, static_cast<int>(std::ceil(len / kTaylorStep)));
  const cplx h = (to - from) / static_cast<double>(n);
  cplx z = from;
  for (int i = 0; i < n; ++i) {
    y = taylor_step(z, y, h);
    z += h;
  }
  return y;
}

inline AiPair ai_pair(cplx z) {
  const double r = std::abs(z);
  if (r <= kMaclaurinRadius) return ai_maclaurin(z);
  const double th = std::arg(z);
  const double at = std::abs(th);
  constexpr double pi = std::numbers::pi;
  if (r >= kAsymptoticRadius) {
    if (at <= 2.0 * pi / 3.0) return ai_asym_exp(z);
    return ai_asym_osc(z);
  }
  const cplx dir = z / r;
  if (at < pi / 3.0) {
    const cplx za = kAsymptoticRadius * dir;
    return march(za, ai_asym_exp(za), z);
  }
  const cplx zm = kMaclaurinRadius * dir;
  return march(zm, ai_maclaurin(zm), z);
}

}  // namespace detail

inline AiryValues airy(cplx z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw Error(ErrorCode::Domain, "airy: non-finite argument");
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  const cplx w = std::exp(2.0i * pi / 3.0);
  const auto a = detail::ai_pair(z);
  const auto ap = detail::ai_pair(w * z);
  const auto am = detail::ai_pair(std::conj(w) * z);
  AiryValues out;
  out.ai = a.y;
  out.ai_prime = a.yp;
  out.bi = std::exp(1.0i * pi / 6.0) * ap.y + std::exp(-1.0i * pi / 6.0) * am.y;
  out.bi_prime = std::exp(5.0i * pi / 6.0) * ap.yp + std::exp(-5.0i * pi / 6.0) * am.yp;
  if (z.imag() == 0.0) {
    out.ai = out.ai.real();
    out.ai_prime = out.ai_prime.real();
    out.bi = out.bi.real();
    out.bi_prime = out.bi_prime.real();
  }
  if (!std::isfinite(std::abs(out.bi)) || !std::isfinite(std::abs(out.bi_prime))) {
    out.bi_overflow = true;
    out.bi = out.bi_prime = cplx(std::numeric_limits<double>::quiet_NaN(), 0.0);
  }
  return out;
}

// Ai and Ai' only, real argument
inline void airy_ai(double x, double& ai, double& aip) {
  const auto p = detail::ai_pair(cplx(x, 0.0));
  ai = p.y.real();
  aip = p.yp.real();
}

// Lanczos approximation, g = 607/128, 14 terms (Godfrey's coefficients as
// tabulated in Numerical Recipes 3rd ed., gammln)
inline double gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::Domain, "gamma: x must be > 0");
  static constexpr double cof[14] = {
      57.1562356658629235,     -59.5979603554754912,     14.1360979747417471,
      -0.491913816097620199,   .339946499848118887e-4,   .465236289270485756e-4,
      -.983744753048795646e-4, .158088703224912494e-3,   -.210264441724104883e-3,
      .217439618115212643e-3,  -.164318106536763890e-3,  .844182239838527433e-4,
      -.261908384015814087e-4, .368991826595316234e-5};
  if (x < 0.5) return gamma(x + 1.0) / x;
  const double t = x + 5.24218750000000000;
  double ser = 0.999999999999997092;
  for (int j = 0; j < 14; ++j) ser += cof[j] / (x + j + 1.0);
  const double lg = (x + 0.5) * std::log(t) - t + std::log(2.5066282746310005 * ser / x);
  return std::exp(lg);
}

}  // namespace edge34

#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "error.hpp"
#include "specfun.hpp"

namespace edge34 {

using Mat2 = Eigen::Matrix2cd;

enum class Sector { Omega1 = 1, Omega2, Omega3, Omega4 };
enum class Ray { Sigma1 = 1, Sigma2, Sigma3, Sigma4 };
enum class Builder { Psi0, Psi1 };

struct SectorMatrix {
  Sector sector = Sector::Omega1;
  Mat2 entries;
  cplx zeta;
  double s = 0.0;
};

struct JumpMatrix {
  Ray ray = Ray::Sigma1;
  Mat2 entries;
};

inline constexpr double kRayAngle = 2.0 * std::numbers::pi / 3.0;

// phase of the rh problem at infinity; principal branches
inline cplx theta(cplx zeta, double s) {
  const cplx r = std::sqrt(zeta);
  return (2.0 / 3.0) * zeta * r + s * r;
}

inline double contour_distance(cplx z) {
  double d = std::abs(z);
  for (double a : {0.0, kRayAngle, std::numbers::pi, -kRayAngle}) {
    const cplx e = std::polar(1.0, a);
    const double along = (z * std::conj(e)).real();
    if (along > 0.0) d = std::min(d, std::abs((z * std::conj(e)).imag()));
  }
  return d;
}

inline Sector sector_of(cplx z) {
  if (contour_distance(z) <= 1e-8) throw Error(ErrorCode::OnContour, "zeta on the contour", std::abs(z));
  const double a = std::arg(z);
  if (a > 0.0) return a < kRayAngle ? Sector::Omega1 : Sector::Omega2;
  return a > -kRayAngle ? Sector::Omega4 : Sector::Omega3;
}

inline JumpMatrix jump_matrix(Ray r, double alpha) {
  using namespace std::complex_literals;
  const cplx e = std::exp(2.0i * alpha * std::numbers::pi);
  Mat2 v;
  switch (r) {
    case Ray::Sigma1: v << 1.0, 1.0, 0.0, 1.0; break;
    case Ray::Sigma2: v << 1.0, 0.0, e, 1.0; break;
    case Ray::Sigma3: v << 0.0, 1.0, -1.0, 0.0; break;
    case Ray::Sigma4: v << 1.0, 0.0, 1.0 / e, 1.0; break;
  }
  return {r, v};
}

// the two sectors adjacent to a ray, + side first (left of the orientation:
// Sigma1 outward, the other rays towards the origin)
inline std::pair<Sector, Sector> ray_sides(Ray r) {
  switch (r) {
    case Ray::Sigma1: return {Sector::Omega1, Sector::Omega4};
    case Ray::Sigma2: return {Sector::Omega1, Sector::Omega2};
    case Ray::Sigma3: return {Sector::Omega2, Sector::Omega3};
    case Ray::Sigma4: return {Sector::Omega3, Sector::Omega4};
  }
  return {};
}

inline double ray_angle(Ray r) {
  switch (r) {
    case Ray::Sigma1: return 0.0;
    case Ray::Sigma2: return kRayAngle;
    case Ray::Sigma3: return std::numbers::pi;
    case Ray::Sigma4: return -kRayAngle;
  }
  return 0.0;
}

namespace detail {

inline Mat2 psi0_omega1(cplx zeta, double s) {
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  const cplx w = std::exp(-2.0i * pi / 3.0);
  const auto a = ai_pair(zeta + s);
  const auto b = ai_pair(w * (zeta + s));
  const double c = std::sqrt(2.0 * pi);
  Mat2 m;
  m << c * a.y, c * std::exp(1.0i * pi / 3.0) * b.y, -1.0i * c * a.yp, -1.0i * c * std::exp(-1.0i * pi / 3.0) * b.yp;
  return m;
}

inline Mat2 psi0_omega3(cplx zeta, double s) {
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  const auto a = ai_pair(std::exp(-2.0i * pi / 3.0) * (zeta + s));
  const auto b = ai_pair(std::exp(2.0i * pi / 3.0) * (zeta + s));
  const double c = std::sqrt(2.0 * pi);
  const cplx e = std::exp(1.0i * pi / 3.0);
  Mat2 m;
  m << c * e * a.y, -c * std::conj(e) * b.y, -1.0i * c * std::conj(e) * a.yp, 1.0i * c * e * b.yp;
  return m;
}

// Omega1 formula times v2^{-1} (Omega2) or v1^{-1} (Omega4), with the column that
// changes reduced to a single Airy term by Ai(z) + w Ai(wz) + w^2 Ai(w^2 z) = 0.
// The unreduced difference cancels to e^{-|theta|} relative accuracy there.
inline Mat2 psi0_adjacent(Sector sec, cplx zeta, double s) {
  using namespace std::complex_literals;
  constexpr double pi = std::numbers::pi;
  const cplx w = std::exp(2.0i * pi / 3.0);
  const auto a = ai_pair(zeta + s);
  const auto b = ai_pair(w * (zeta + s));
  const auto c = ai_pair(std::conj(w) * (zeta + s));
  const double k = std::sqrt(2.0 * pi);
  Mat2 m;
  if (sec == Sector::Omega2)
    m << -k * w * b.y, k * std::exp(1.0i * pi / 3.0) * c.y, 1.0i * k * std::conj(w) * b.yp,
        -1.0i * k * std::exp(-1.0i * pi / 3.0) * c.yp;
  else
    m << k * a.y, k * w * b.y, -1.0i * k * a.yp, -1.0i * k * std::conj(w) * b.yp;
  return m;
}

// Psi0 in a prescribed sector; zeta may lie on the boundary of that sector
inline Mat2 psi0_in(Sector sec, cplx zeta, double s) {
  switch (sec) {
    case Sector::Omega1: return psi0_omega1(zeta, s);
    case Sector::Omega3: return psi0_omega3(zeta, s);
    default: return psi0_adjacent(sec, zeta, s);
  }
}

inline double airy_denominator(double s) {
  double a, ap;
  airy_ai(s, a, ap);
  const double d = ap * ap - s * a * a;
  if (!(d > 0.0)) throw Error(ErrorCode::Domain, "X(s): nonpositive denominator", s);
  return d;
}

}  // namespace detail

// rank-one matrix making (I - X/zeta) Psi0 bounded by |zeta| in the first column at 0
inline Mat2 x_matrix(double s) {
  using namespace std::complex_literals;
  double a, ap;
  airy_ai(s, a, ap);
  const double d = detail::airy_denominator(s);
  Eigen::Vector2cd l(a, -1.0i * ap);
  Eigen::RowVector2cd r(ap, -1.0i * a);
  return l * r / d;
}

namespace detail {

inline Mat2 psi1_in(Sector sec, cplx zeta, double s) {
  return (Mat2::Identity() - x_matrix(s) / zeta) * psi0_in(sec, zeta, s);
}

}  // namespace detail

inline SectorMatrix psi0_matrix(cplx zeta, double s) {
  const Sector sec = sector_of(zeta);
  return {sec, detail::psi0_in(sec, zeta, s), zeta, s};
}

inline SectorMatrix psi1_matrix(cplx zeta, double s) {
  const Sector sec = sector_of(zeta);
  return {sec, detail::psi1_in(sec, zeta, s), zeta, s};
}

inline SectorMatrix build_psi(Builder b, cplx zeta, double s) {
  return b == Builder::Psi0 ? psi0_matrix(zeta, s) : psi1_matrix(zeta, s);
}

struct RayResidual {
  Ray ray;
  double radius;
  double residual;
};

struct JumpReport {
  Builder builder = Builder::Psi0;
  double s = 0.0;
  double eps = 1e-7;
  std::vector<RayResidual> samples;
  double max_residual = 0.0;
  bool pass = false;
};

// Boundary values at zeta on a ray from the adjacent sectors, at
// zeta(1 +- i eps) and extrapolated linearly to eps = 0 from the offsets eps and
// 2 eps. The extrapolated value carries O(eps^2) analytic variation.
inline JumpReport verify_jumps(Builder b, double s, int samples_per_ray = 4, double eps = 1e-7,
                               double tol = 1e-6) {
  using namespace std::complex_literals;
  if (samples_per_ray < 3) throw Error(ErrorCode::Precondition, "verify_jumps: samples_per_ray >= 3");
  const double alpha = b == Builder::Psi0 ? 0.0 : 1.0;
  auto in = [&](Sector sec, cplx z) {
    return b == Builder::Psi0 ? detail::psi0_in(sec, z, s) : detail::psi1_in(sec, z, s);
  };
  auto side = [&](Sector sec, cplx z, double sign) {
    const Mat2 f1 = in(sec, z * (1.0 + sign * 1.0i * eps));
    const Mat2 f2 = in(sec, z * (1.0 + sign * 2.0i * eps));
    return Mat2(2.0 * f1 - f2);
  };
  JumpReport rep{b, s, eps, {}, 0.0, false};
  std::vector<double> radii{0.5, 1.0, 2.0, 4.0};
  for (int k = 4; k < samples_per_ray; ++k) radii.push_back(0.5 * std::pow(8.0, (k - 3.0) / (samples_per_ray - 3.0)));
  for (Ray r : {Ray::Sigma1, Ray::Sigma2, Ray::Sigma3, Ray::Sigma4}) {
    const auto [plus, minus] = ray_sides(r);
    const Mat2 v = jump_matrix(r, alpha).entries;
    for (double rad : radii) {
      const cplx z = std::polar(rad, ray_angle(r));
      // the + side lies at positive angular offset from each ray
      const Mat2 pp = side(plus, z, 1.0);
      const Mat2 pm = side(minus, z, -1.0);
      const double res = (pp - pm * v).cwiseAbs().maxCoeff();
      rep.samples.push_back({r, rad, res});
      rep.max_residual = std::max(rep.max_residual, res);
    }
  }
  rep.pass = rep.max_residual <= tol;
  return rep;
}

// max |det - 1| at n random points of the annulus r_min <= |zeta| <= r_max
inline double det_deviation(Builder b, double s, int n = 100, double r_min = 0.1, double r_max = 10.0,
                            unsigned seed = 7) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ur(r_min, r_max), ua(-std::numbers::pi, std::numbers::pi);
  double m = 0.0;
  for (int i = 0; i < n;) {
    const cplx z = std::polar(ur(rng), ua(rng));
    if (contour_distance(z) <= 1e-8) continue;
    m = std::max(m, std::abs(build_psi(b, z, s).entries.determinant() - 1.0));
    ++i;
  }
  return m;
}

// || sqrt2 zeta^{sigma3/4} Psi e^{theta sigma3} - [[1,i],[i,1]] ||_max
inline double normalized_residual(Builder b, cplx zeta, double s) {
  using namespace std::complex_literals;
  const Mat2 P = build_psi(b, zeta, s).entries;
  const cplx q = std::pow(zeta, 0.25), th = theta(zeta, s);
  Mat2 D, E, T;
  D << q, 0.0, 0.0, 1.0 / q;
  E << std::exp(th), 0.0, 0.0, std::exp(-th);
  T << 1.0, 1.0i, 1.0i, 1.0;
  return (std::sqrt(2.0) * D * P * E - T).cwiseAbs().maxCoeff();
}

struct DecayFit {
  std::vector<double> radii, residuals;
  double exponent = 0.0;
};

// least-squares slope of log(max residual over the probe directions) against log|zeta|
inline DecayFit fit_decay(Builder b, double s, double r_min = 4.0, double r_max = 64.0, int n = 9) {
  constexpr double pi = std::numbers::pi;
  const std::array<double, 4> dirs{pi / 3.0, 5.0 * pi / 6.0, -5.0 * pi / 6.0, -pi / 3.0};
  DecayFit f;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double r = r_min * std::pow(r_max / r_min, double(i) / (n - 1));
    double m = 0.0;
    for (double a : dirs) m = std::max(m, normalized_residual(b, std::polar(r, a), s));
    f.radii.push_back(r);
    f.residuals.push_back(m);
    const double x = std::log(r), y = std::log(m);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  f.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return f;
}

// (psi1, psi2) from boundary values on the real axis: + side first column for
// x > 0, Psi_+ e^{-alpha pi i sigma3} (1, 1) for x < 0
inline std::array<cplx, 2> psi_from_matrix(Builder b, double x, double s) {
  using namespace std::complex_literals;
  if (x == 0.0) throw Error(ErrorCode::OnContour, "psi_from_matrix: x = 0");
  const double alpha = b == Builder::Psi0 ? 0.0 : 1.0;
  const Sector sec = x > 0 ? Sector::Omega1 : Sector::Omega2;
  const Mat2 P = b == Builder::Psi0 ? detail::psi0_in(sec, cplx(x, 0.0), s) : detail::psi1_in(sec, cplx(x, 0.0), s);
  if (x > 0) return {P(0, 0), P(1, 0)};
  const cplx e = std::exp(-1.0i * alpha * std::numbers::pi);
  return {e * P(0, 0) + P(0, 1) / e, e * P(1, 0) + P(1, 1) / e};
}

}  // namespace edge34

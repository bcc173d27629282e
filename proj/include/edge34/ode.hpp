#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>

#include "error.hpp"

namespace edge34 {

struct OdeOptions {
  double rtol = 1e-12;
  double atol = 1e-14;
  double h_init = 0.0;  // 0: pick from |t1 - t0|
  double h_max = std::numeric_limits<double>::infinity();
  long max_steps = 2'000'000;
};

template <class T, std::size_t N>
struct OdeState {
  double t;
  std::array<T, N> y;
  double h;           // last accepted step size, reusable as the next guess
  bool stopped = false;
  long steps = 0;
};

namespace detail {

template <class T, std::size_t N>
inline std::array<T, N> axpy(const std::array<T, N>& y, double h,
                             std::initializer_list<std::pair<double, const std::array<T, N>*>> ks) {
  std::array<T, N> out = y;
  for (auto [c, k] : ks) {
    if (c == 0.0) continue;
    for (std::size_t i = 0; i < N; ++i) out[i] += (h * c) * (*k)[i];
  }
  return out;
}

}  // namespace detail

// Dormand-Prince 5(4) with FSAL and standard step control. The callback
// stop(t, y) is checked after every accepted step and halts the sweep.
template <class T, std::size_t N, class F, class Stop>
OdeState<T, N> dopri5(F&& f, double t0, std::array<T, N> y, double t1, const OdeOptions& o,
                      Stop&& stop) {
  using V = std::array<T, N>;
  constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  constexpr double a21 = 1.0 / 5;
  constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                   a54 = -212.0 / 729;
  constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                   a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                   b6 = 11.0 / 84;
  constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                   e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  OdeState<T, N> st{t0, y, 0.0};
  const double span = t1 - t0;
  if (span == 0.0) return st;
  const double dir = span > 0 ? 1.0 : -1.0;
  double h = o.h_init > 0 ? o.h_init : std::min(std::abs(span), 0.01 * (1.0 + std::abs(span)));
  h = std::min(h, o.h_max);
  double t = t0;
  V k1 = f(t, y);
  long rejects = 0;
  while (dir * (t1 - t) > 0) {
    if (st.steps >= o.max_steps)
      throw Error(ErrorCode::NotConverged, "ode: step budget exhausted", t);
    const bool last = h >= std::abs(t1 - t) * (1.0 - 1e-12);
    const double hs = last ? (t1 - t) : dir * h;
    const V k2 = f(t + c2 * hs, detail::axpy<T, N>(y, hs, {{a21, &k1}}));
    const V k3 = f(t + c3 * hs, detail::axpy<T, N>(y, hs, {{a31, &k1}, {a32, &k2}}));
    const V k4 = f(t + c4 * hs, detail::axpy<T, N>(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const V k5 = f(t + c5 * hs,
                   detail::axpy<T, N>(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const V k6 = f(t + hs, detail::axpy<T, N>(
                               y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const V yn = detail::axpy<T, N>(y, hs, {{b1, &k1}, {b3, &k3}, {b4, &k4}, {b5, &k5}, {b6, &k6}});
    const V k7 = f(t + hs, yn);
    double err = 0.0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      const T d = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sc = o.atol + o.rtol * std::max(std::abs(y[i]), std::abs(yn[i]));
      const double r = std::abs(d) / sc;
      if (!std::isfinite(r)) finite = false;
      err += r * r;
    }
    err = std::sqrt(err / N);
    if (!finite) err = 1e10;
    if (err <= 1.0) {
      t = last ? t1 : t + hs;
      y = yn;
      k1 = k7;
      ++st.steps;
      st.h = std::abs(hs);
      const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      h = std::min(std::abs(hs) * fac, o.h_max);
      rejects = 0;
      if (stop(t, y)) {
        st.stopped = true;
        break;
      }
    } else {
      h = std::abs(hs) * std::max(0.1, 0.9 * std::pow(err, -0.2));
      if (++rejects > 60 || h < 1e-15 * (1.0 + std::abs(t)))
        throw Error(ErrorCode::NotConverged, "ode: step size underflow", t);
    }
  }
  st.t = t;
  st.y = y;
  if (st.h == 0.0) st.h = h;
  return st;
}

template <class T, std::size_t N, class F>
OdeState<T, N> dopri5(F&& f, double t0, const std::array<T, N>& y, double t1, const OdeOptions& o) {
  return dopri5(std::forward<F>(f), t0, y, t1, o, [](double, const std::array<T, N>&) { return false; });
}

}  // namespace edge34

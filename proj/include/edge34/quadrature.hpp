#pragma once

#include <cmath>
#include <numbers>
#include <vector>

namespace edge34 {

struct Rule {
  std::vector<double> x, w;
};

// Gauss-Legendre on [-1, 1]: Newton on P_m from Tricomi's initial guesses
inline Rule gauss_legendre(int m) {
  Rule r;
  r.x.resize(m);
  r.w.resize(m);
  for (int i = 0; i < (m + 1) / 2; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[i] = -z;
    r.x[m - 1 - i] = z;
    r.w[i] = r.w[m - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

// rule mapped to [a, b]
inline Rule gauss_legendre(int m, double a, double b) {
  Rule r = gauss_legendre(m);
  const double h = 0.5 * (b - a), c = 0.5 * (a + b);
  for (int i = 0; i < m; ++i) {
    r.x[i] = c + h * r.x[i];
    r.w[i] *= h;
  }
  return r;
}

}  // namespace edge34

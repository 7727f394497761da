#pragma once

#include <cmath>
#include <random>

#include "todavolt/linalg.hpp"

namespace support {

using todavolt::Matrix;
using todavolt::Vector;

inline Vector uniform(std::mt19937_64& rng, Eigen::Index n, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Vector v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

/// Random TodaAB coordinates: a in [0.5, 2], b in [-1, 1].
inline Vector toda_ab(std::mt19937_64& rng, int n) {
  Vector x(2 * n - 1);
  x << uniform(rng, n - 1, 0.5, 2.0), uniform(rng, n, -1.0, 1.0);
  return x;
}

inline double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }
inline double max_diff(const Vector& a, const Vector& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace support

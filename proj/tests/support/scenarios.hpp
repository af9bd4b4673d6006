#pragma once

#include <cstdint>
#include <random>

#include "actuation/system_model.hpp"

namespace actuation::testing {

inline Matrix slow_transitions() {
  Matrix p(4, 4);
  p << 0.8, 0.2, 0.0, 0.0,
       0.1, 0.8, 0.1, 0.0,
       0.0, 0.1, 0.8, 0.1,
       0.0, 0.0, 0.2, 0.8;
  return p;
}

inline Matrix fast_transitions() {
  Matrix p(4, 4);
  p << 0.2, 0.8, 0.0, 0.0,
       0.4, 0.2, 0.4, 0.0,
       0.0, 0.4, 0.2, 0.4,
       0.0, 0.0, 0.8, 0.2;
  return p;
}

inline Matrix scenario_costs() {
  Matrix c(4, 4);
  c << 0, 10, 50, 30,
       10, 0, 40, 20,
       20, 10, 0, 10,
       30, 20, 40, 0;
  return c;
}

inline Model make_model(const Matrix& p, double ps, double c = 1.0, double c_max = 0.2,
                        const Matrix& costs = scenario_costs()) {
  return Model(SourceModel::validate(p), CostMatrix::validate(costs), ChannelModel::validate(ps),
               ResourceConfig::validate(c, c_max));
}

inline Model slow_model(double ps, double c_max = 0.2) {
  return make_model(slow_transitions(), ps, 1.0, c_max);
}

inline Model fast_model(double ps, double c_max = 0.2) {
  return make_model(fast_transitions(), ps, 1.0, c_max);
}

/// Random irreducible source with n states (every entry strictly positive on a
/// ring plus random extra mass) and zero-diagonal random costs.
inline Model random_model(int n, std::uint64_t seed, double ps, double c_max) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix p = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
      const bool ring = k == (i + 1) % n;
      p(i, k) = ring ? 0.1 + u(gen) : (u(gen) < 0.5 ? u(gen) : 0.0);
      total += p(i, k);
    }
    p.row(i) /= total;
    // Make the row sum exactly representable.
    double rest = 1.0;
    for (int k = 0; k < n - 1; ++k) rest -= p(i, k);
    p(i, n - 1) = rest;
    if (p(i, n - 1) < 0.0) p(i, n - 1) = 0.0;
  }
  Matrix c = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) c(i, j) = i == j ? 0.0 : std::floor(1.0 + 49.0 * u(gen));
  }
  return Model(SourceModel::validate(p), CostMatrix::validate(c), ChannelModel::validate(ps),
               ResourceConfig::validate(1.0, c_max));
}

}  // namespace actuation::testing

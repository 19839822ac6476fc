#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "lipframe/fixtures.hpp"
#include "lipframe/frame.hpp"
#include "oracles.hpp"

namespace support {

using namespace lipframe;

inline Eigen::MatrixXcd matrix(int rows, int cols, std::initializer_list<double> entries) {
  Eigen::MatrixXcd m(rows, cols);
  auto it = entries.begin();
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  }
  return m;
}

/// f₁(x) = 2x, τ₁ = 1: S = 2·identity on ℝ.
inline Frame doubling_frame() { return fixtures::linear_frame(matrix(1, 1, {2.0}), matrix(1, 1, {1.0})); }

/// f₁(x) = 2x, f₂ ≡ 0, τ = (1, 0): S = 2·identity on ℝ with N = 2.
inline Frame doubling_frame_n2() {
  return fixtures::linear_frame(matrix(2, 1, {2.0, 0.0}), matrix(1, 2, {1.0, 0.0}));
}

inline SolverCfg damping(double lambda) {
  SolverCfg cfg;
  cfg.damping = lambda;
  return cfg;
}

/// Damping 2/(λ_min + λ_max) for a frame map with eigenvalues in [λ_min, λ_max] ⊂ (0, ∞).
inline SolverCfg optimal_damping(double lo, double hi) { return damping(2.0 / (lo + hi)); }

struct RandomLinear {
  Eigen::MatrixXcd u;
  Eigen::MatrixXcd v;
  SolverCfg cfg;
};

/// Random real frame with S = V Vᵀ positive definite and condition number at most 25.
inline RandomLinear random_linear(oracle::Gen& gen) {
  for (;;) {
    const int dim = gen.integer(1, 3);
    const int n = dim + gen.integer(0, 2);
    const auto entries = gen.matrix(dim, n, 1.5);
    Eigen::MatrixXcd v(dim, n);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < n; ++j) v(i, j) = entries[static_cast<std::size_t>(i * n + j)];
    }
    const Eigen::MatrixXcd u = v.adjoint();
    const auto sigma = Eigen::JacobiSVD<Eigen::MatrixXcd>(v).singularValues();
    const double hi = sigma(0) * sigma(0);
    const double lo = sigma(sigma.size() - 1) * sigma(sigma.size() - 1);
    if (lo <= 0.0 || hi / lo > 25.0) continue;
    return {u, v, optimal_damping(lo, hi)};
  }
}

inline double max_map_gap(const Frame& f, const Frame& g, std::size_t samples, std::uint64_t seed) {
  double gap = 0.0;
  for (const Point& x : sample_points(f.subset(), samples, seed)) {
    for (std::size_t n = 0; n < f.size(); ++n) gap = std::max(gap, std::abs(f.map(n)(x) - g.map(n)(x)));
  }
  return gap;
}

inline double max_vector_gap(const Frame& f, const Frame& g) {
  double gap = 0.0;
  for (std::size_t n = 0; n < f.size(); ++n) gap = std::max(gap, f.subset().distance(f.vector(n), g.vector(n)));
  return gap;
}

}  // namespace support

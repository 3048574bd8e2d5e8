#pragma once

// Shared helpers for the test suites: seeded random states and a few
// small independent oracles (kept separate from the library paths they
// are used to check).

#include <cmath>
#include <complex>
#include <vector>

#include "qkd/linalg.hpp"
#include "qkd/quantum.hpp"
#include "qkd/rng.hpp"

namespace qkd::test {

inline double gaussian(Rng& rng) {
  // Box-Muller; both draws consumed to keep the stream simple.
  const double u1 = std::max(rng.uniform01(), 1e-300);
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline Matrix ginibre(std::size_t n, Rng& rng) {
  Matrix g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = complexd(gaussian(rng), gaussian(rng));
  return g;
}

// G G† / Tr(G G†), full rank almost surely.
inline DensityMatrix random_density(std::size_t n, Rng& rng) {
  const Matrix g = ginibre(n, rng);
  Matrix m = g * g.adjoint();
  const double tr = m.trace().real();
  m *= complexd(1.0 / tr, 0.0);
  return DensityMatrix::from_matrix(std::move(m));
}

inline DensityMatrix random_subnormalized_density(std::size_t n, Rng& rng) {
  const DensityMatrix rho = random_density(n, rng);
  const double scale = 0.05 + 0.95 * rng.uniform01();
  Matrix m = rho.matrix();
  m *= complexd(scale, 0.0);
  return DensityMatrix::from_matrix(std::move(m));
}

inline PureState random_pure(std::size_t n, Rng& rng) {
  PureState s;
  s.amplitudes.resize(n);
  double norm = 0.0;
  for (auto& a : s.amplitudes) {
    a = complexd(gaussian(rng), gaussian(rng));
    norm += std::norm(a);
  }
  const double inv = 1.0 / std::sqrt(norm);
  for (auto& a : s.amplitudes) a *= inv;
  return s;
}

// Gram-Schmidt of a Ginibre matrix: Haar-ish unitary, good enough for
// invariance checks.
inline Matrix random_unitary(std::size_t n, Rng& rng) {
  Matrix g = ginibre(n, rng);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t prev = 0; prev < c; ++prev) {
      complexd dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(g(i, prev)) * g(i, c);
      for (std::size_t i = 0; i < n; ++i) g(i, c) -= dot * g(i, prev);
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += std::norm(g(i, c));
    const double inv = 1.0 / std::sqrt(norm);
    for (std::size_t i = 0; i < n; ++i) g(i, c) *= inv;
  }
  return g;
}

// Independent oracle: naive partial trace over the first subsystem of a
// pure state on dim_r ⊗ dim_a.
inline Matrix pure_partial_trace_ref(const PureState& psi, std::size_t dim_r, std::size_t dim_a) {
  Matrix out(dim_a, dim_a);
  for (std::size_t r = 0; r < dim_r; ++r)
    for (std::size_t i = 0; i < dim_a; ++i)
      for (std::size_t j = 0; j < dim_a; ++j)
        out(i, j) += psi.amplitudes[r * dim_a + i] * std::conj(psi.amplitudes[r * dim_a + j]);
  return out;
}

inline double binary_entropy_ref(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

}  // namespace qkd::test

#pragma once

#include <random>

#include "ewb/qla.hpp"
#include "ewb/random.hpp"

namespace ewb::test {

// G + G^dagger with complex Gaussian G.
inline HermitianOperator random_hermitian(std::size_t n, std::uint64_t seed) {
  auto gen = make_stream(seed, 0xA11CE);
  ComplexMatrix g(n, n);
  for (auto& z : g.data()) z = complex_gaussian(gen);
  return HermitianOperator(g + g.adjoint());
}

// G G^dagger / tr, full rank with probability one.
inline DensityOperator random_density(const SubsystemDims& dims, std::uint64_t seed) {
  auto gen = make_stream(seed, 0xDE115);
  const std::size_t n = dims.total();
  ComplexMatrix g(n, n);
  for (auto& z : g.data()) z = complex_gaussian(gen);
  ComplexMatrix r = g * g.adjoint();
  double tr = 0;
  for (std::size_t i = 0; i < n; ++i) tr += r(i, i).real();
  r *= 1.0 / tr;
  return DensityOperator(dims, HermitianOperator(r));
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

inline ComplexMatrix pauli_x() { return ComplexMatrix(2, 2, {0.0, 1.0, 1.0, 0.0}); }
inline ComplexMatrix pauli_z() { return ComplexMatrix(2, 2, {1.0, 0.0, 0.0, -1.0}); }

}  // namespace ewb::test

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace ewb {

/// Independent generator for (seed, stream). Every randomized kernel draws
/// from a stream keyed on its work-item index, so results do not depend on
/// scheduling.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5eedu};
  return std::mt19937_64(seq);
}

/// Standard complex Gaussian, E|z|^2 = 1.
inline std::complex<double> complex_gaussian(std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, std::sqrt(0.5));
  double re = n(gen);
  double im = n(gen);
  return {re, im};
}

}  // namespace ewb

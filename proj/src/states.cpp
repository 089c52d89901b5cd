#include "ewb/states.hpp"

#include <bit>
#include <cmath>

namespace ewb::states {

PureState w(std::size_t parties) {
  if (parties < 2) throw DimensionError("W state needs at least two parties");
  auto dims = SubsystemDims::qubits(parties);
  std::vector<cplx> a(dims.total(), 0.0);
  for (std::size_t k = 0; k < parties; ++k) a[std::size_t{1} << k] = 1.0;
  return PureState::normalized(dims, std::move(a));
}

PureState ghz(std::size_t parties) {
  if (parties < 2) throw DimensionError("GHZ state needs at least two parties");
  auto dims = SubsystemDims::qubits(parties);
  // i^k - (-i)^k: 0, 2i, 0, -2i for k mod 4 = 0..3
  const cplx table[4] = {0.0, cplx(0.0, 2.0), 0.0, cplx(0.0, -2.0)};
  std::vector<cplx> a(dims.total());
  for (std::size_t x = 0; x < a.size(); ++x) a[x] = table[std::popcount(x) % 4];
  return PureState::normalized(dims, std::move(a));
}

PureState bell() { return PureState::normalized(SubsystemDims::qubits(2), {1.0, 0.0, 0.0, 1.0}); }

PureState product(const std::vector<std::vector<cplx>>& factors) {
  std::vector<std::size_t> d;
  std::vector<cplx> amp{1.0};
  for (const auto& f : factors) {
    const double n = norm(f);
    if (!(n > 0)) throw DimensionError("product factor must be nonzero");
    d.push_back(f.size());
    std::vector<cplx> next;
    next.reserve(amp.size() * f.size());
    for (const cplx& x : amp)
      for (const cplx& y : f) next.push_back(x * y / n);
    amp = std::move(next);
  }
  return PureState::normalized(SubsystemDims(std::move(d)), std::move(amp));
}

}  // namespace ewb::states

#pragma once

#include "ewb/qla.hpp"

namespace ewb::states {

/// (|0..01> + |0..10> + ... + |10..0>) / sqrt(n)
PureState w(std::size_t parties);

/// (|y+>^n - |y->^n) / sqrt(2) with |y+-> = (|0> +- i|1>)/sqrt(2).
/// For three parties this is i(sqrt(3)|W> - |111>)/2.
PureState ghz(std::size_t parties);

/// (|00> + |11>) / sqrt(2)
PureState bell();

/// Product of the given single-party vectors (each normalized first).
PureState product(const std::vector<std::vector<cplx>>& factors);

}  // namespace ewb::states

#include <cmath>

#include "doctest.h"
#include "ewb/measures.hpp"
#include "ewb/states.hpp"
#include "support.hpp"

using namespace ewb;

TEST_CASE("entropy examples") {
  CHECK(entropy(DensityOperator::pure(states::w(3))) == doctest::Approx(0.0));
  const auto half = DensityOperator(SubsystemDims({2}), HermitianOperator(ComplexMatrix::identity(2) * cplx(0.5)));
  CHECK(entropy(half) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
  CHECK(entropy(half, LogBase::two) == doctest::Approx(1.0).epsilon(1e-15));
  // -(2/3) ln(2/3) - (1/3) ln(1/3), evaluated by hand: 0.636514...
  const std::vector<double> d{2.0 / 3.0, 1.0 / 3.0};
  const auto rho = DensityOperator(SubsystemDims({2}), HermitianOperator(ComplexMatrix::diagonal(d)));
  CHECK(entropy(rho) == doctest::Approx(0.636514168294813).epsilon(1e-14));
  CHECK(std::abs(entropy(rho) - 0.636514) < 5e-7);
}

TEST_CASE("entropy is concave on random pairs") {
  const SubsystemDims dims({2, 2});
  for (std::uint64_t s = 0; s < 200; ++s) {
    const auto a = test::random_density(dims, 2 * s);
    const auto b = test::random_density(dims, 2 * s + 1);
    const auto mid = DensityOperator(dims, HermitianOperator((a.matrix() + b.matrix()) * cplx(0.5)));
    CHECK(entropy(mid) >= 0.5 * (entropy(a) + entropy(b)) - 1e-10);
  }
}

TEST_CASE("eof_pure examples") {
  const BipartitionSpec a_bc{{0}};
  CHECK(eof_pure(states::product({{1.0, 2.0}, {0.5, cplx(0, 1)}, {1.0, 0.0}}), a_bc) == doctest::Approx(0.0));
  CHECK(eof_pure(states::bell(), {{0}}) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(eof_pure(states::w(3), a_bc) == doctest::Approx(0.636514168294813).epsilon(1e-14));
  CHECK(eof_pure(states::w(3), a_bc, LogBase::two) == doctest::Approx(0.918295834054490).epsilon(1e-14));
}

TEST_CASE("eof_pure is invariant under local unitaries") {
  const SubsystemDims dims({2, 4});
  for (std::uint64_t s = 0; s < 100; ++s) {
    const auto psi = random_pure(dims, s);
    const auto u = tensor(random_unitary(2, s, 1), random_unitary(4, s, 2));
    const auto moved = PureState::normalized(dims, apply(u, psi.amplitudes()));
    CHECK(std::abs(eof_pure(moved, {{0}}) - eof_pure(psi, {{0}})) <= 1e-9);
  }
}

TEST_CASE("closest_product examples") {
  const auto prod = states::product({{1.0, 2.0}, {cplx(0, 1), 1.0}, {3.0, -1.0}});
  CHECK(closest_product(prod).overlap2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(closest_product(states::w(3)).overlap2 == doctest::Approx(4.0 / 9.0).epsilon(1e-10));
  CHECK(closest_product(states::ghz(3)).overlap2 == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("geometric_pure examples") {
  CHECK(geometric_pure(PureState::basis(SubsystemDims::qubits(3), 0)) == doctest::Approx(0.0));
  CHECK(std::abs(geometric_pure(states::w(3)) - 5.0 / 9.0) < 1e-9);
  CHECK(std::abs(geometric_pure(states::ghz(3)) - 0.5) < 1e-9);
  CHECK_THROWS_AS(geometric_pure(PureState::basis(SubsystemDims({4}), 0)), DimensionError);
}

TEST_CASE("closest_product ascent is monotone at every single-party update") {
  const SubsystemDims dims({2, 3, 2});
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto psi = random_pure(dims, s);
    std::vector<double> trace;
    ascend_product(psi, random_product(dims, s, 99), 1e-12, 10000, &trace);
    for (std::size_t k = 1; k < trace.size(); ++k) REQUIRE(trace[k] >= trace[k - 1] - 1e-12);
  }
}

TEST_CASE("bipartite geometric measure equals one minus the largest squared Schmidt coefficient") {
  const std::vector<SubsystemDims> dims{SubsystemDims({2, 2}), SubsystemDims({2, 3}), SubsystemDims({3, 4})};
  for (std::uint64_t s = 0; s < 60; ++s) {
    const auto psi = random_pure(dims[s % 3], s);
    const double smax = schmidt(psi, {0}).coefficients.front();
    CHECK(std::abs(geometric_pure(psi) - (1.0 - smax * smax)) <= 1e-8);
  }
}

TEST_CASE("measure variant dispatch") {
  const PureMeasure eof = EofMeasure{{{0}}, LogBase::two};
  const PureMeasure geo = GeometricMeasure{};
  const PureMeasure zero = CustomMeasure{"zero", [](const PureState&) { return 0.0; }};
  CHECK(evaluate(eof, states::bell()) == doctest::Approx(1.0));
  CHECK(evaluate(geo, states::bell()) == doctest::Approx(0.5));
  CHECK(evaluate(zero, states::bell()) == 0.0);
  CHECK(describe(geo) == "geometric measure");
  CHECK(parse_log_base("two") == LogBase::two);
  CHECK_THROWS(parse_log_base("ten"));
}

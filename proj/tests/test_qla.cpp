#include <cmath>

#include "doctest.h"
#include "ewb/qla.hpp"
#include "ewb/states.hpp"
#include "support.hpp"

using namespace ewb;
using ewb::test::max_abs_diff;

namespace {

ComplexMatrix reconstruct(const EigenSystem& es) {
  ComplexMatrix lam = ComplexMatrix::diagonal(es.values);
  return es.vectors * lam * es.vectors.adjoint();
}

double unitarity_defect(const ComplexMatrix& v) {
  return max_abs_diff(v.adjoint() * v, ComplexMatrix::identity(v.cols()));
}

}  // namespace

TEST_CASE("tensor follows the slow-first index convention") {
  CHECK(tensor(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));

  const std::vector<double> d10{1.0, 0.0};
  const std::vector<double> d1100{1.0, 1.0, 0.0, 0.0};
  CHECK(tensor(ComplexMatrix::diagonal(d10), ComplexMatrix::identity(2)) == ComplexMatrix::diagonal(d1100));

  const auto xx = tensor(test::pauli_x(), test::pauli_x());
  const std::vector<cplx> ket00{1.0, 0.0, 0.0, 0.0};
  const auto out = apply(xx, ket00);
  CHECK(out == std::vector<cplx>{0.0, 0.0, 0.0, 1.0});
}

TEST_CASE("tensor is associative") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto a = test::random_hermitian(2, s).matrix();
    const auto b = test::random_hermitian(3, s + 100).matrix();
    const auto c = test::random_hermitian(2, s + 200).matrix();
    const auto l = tensor(tensor(a, b), c);
    const auto r = tensor(a, tensor(b, c));
    // Each entry is the same triple product; only the multiplication order differs.
    CHECK(max_abs_diff(l, r) <= 1e-14 * (1 + l.max_abs()));
  }
}

TEST_CASE("partial trace examples") {
  const auto q2 = SubsystemDims::qubits(2);
  const auto r00 = partial_trace(DensityOperator::pure(PureState::basis(q2, 0)), {0});
  const std::vector<double> p0{1.0, 0.0};
  CHECK(max_abs_diff(r00.matrix(), ComplexMatrix::diagonal(p0)) == 0.0);

  const auto rb = partial_trace(DensityOperator::pure(states::bell()), {0});
  CHECK(max_abs_diff(rb.matrix(), ComplexMatrix::identity(2) * cplx(0.5)) < 1e-15);

  // W amplitudes 1/sqrt(3) on |001>,|010>,|100>: party 0 is |1> only in |100>.
  const auto rw = partial_trace(DensityOperator::pure(states::w(3)), {0});
  const std::vector<double> w0{2.0 / 3.0, 1.0 / 3.0};
  CHECK(max_abs_diff(rw.matrix(), ComplexMatrix::diagonal(w0)) < 1e-15);

  CHECK_THROWS_AS(partial_trace(DensityOperator::pure(states::w(3)), {3}), DimensionError);
  CHECK_THROWS_AS(partial_trace(DensityOperator::pure(states::w(3)), {0, 1, 2}), DimensionError);
  CHECK_THROWS_AS(partial_trace(DensityOperator::pure(states::w(3)), {}), DimensionError);
}

TEST_CASE("partial trace contracts on random density operators") {
  const SubsystemDims dims({2, 3, 2});
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto rho = test::random_density(dims, s);
    const PartySet keep = (s % 3 == 0) ? PartySet{1} : (s % 3 == 1) ? PartySet{0, 2} : PartySet{2};
    const auto red = partial_trace(rho, keep);
    double tr = 0;
    for (std::size_t i = 0; i < red.op().dim(); ++i) tr += red.matrix()(i, i).real();
    REQUIRE(std::abs(tr - 1.0) < 1e-12);
    REQUIRE(eigenvalues(red.op()).front() >= -1e-10);
  }
}

TEST_CASE("reduced_density agrees with partial_trace") {
  const SubsystemDims dims({2, 2, 3});
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto psi = random_pure(dims, s);
    const auto a = reduced_density(psi, {0, 2});
    const auto b = partial_trace(DensityOperator::pure(psi), {0, 2});
    CHECK(max_abs_diff(a.matrix(), b.matrix()) < 1e-14);
  }
}

TEST_CASE("eig_hermitian examples") {
  const std::vector<double> d{3.0, 1.0, 2.0};
  const auto es = eig_hermitian(HermitianOperator(ComplexMatrix::diagonal(d)));
  CHECK(es.values == std::vector<double>{1.0, 2.0, 3.0});

  const auto ex = eig_hermitian(HermitianOperator(test::pauli_x()));
  CHECK(ex.values[0] == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(ex.values[1] == doctest::Approx(1.0).epsilon(1e-15));
  const double r = 1.0 / std::sqrt(2.0);
  // Eigenvectors up to phase.
  CHECK(std::abs(std::abs(ex.vectors(0, 0)) - r) < 1e-15);
  CHECK(std::abs(ex.vectors(0, 0) + ex.vectors(1, 0)) < 1e-15);
  CHECK(std::abs(ex.vectors(0, 1) - ex.vectors(1, 1)) < 1e-15);
}

TEST_CASE("eigendecomposition residuals on 1000 random Hermitian matrices") {
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const std::size_t n = 1 + s % 16;
    const auto h = test::random_hermitian(n, s);
    const auto es = eig_hermitian(h);
    REQUIRE(max_abs_diff(reconstruct(es), h.matrix()) <= 1e-10 * (1 + h.matrix().max_abs()));
    REQUIRE(unitarity_defect(es.vectors) <= 1e-10);
    for (std::size_t k = 1; k < n; ++k) REQUIRE(es.values[k - 1] <= es.values[k]);
  }
}

TEST_CASE("eig_hermitian handles degenerate and zero matrices") {
  const auto z = eig_hermitian(HermitianOperator::zero(5));
  CHECK(z.values == std::vector<double>(5, 0.0));
  CHECK(unitarity_defect(z.vectors) == 0.0);

  const auto proj = HermitianOperator(states::w(3).projector());
  const auto es = eig_hermitian(proj);
  CHECK(max_abs_diff(reconstruct(es), proj.matrix()) < 1e-14);
  CHECK(es.values.back() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(es.values[6]) < 1e-14);
}

TEST_CASE("top_eigenpair examples") {
  const std::vector<double> d{0.0, 5.0, 2.0};
  const auto top = top_eigenpair(HermitianOperator(ComplexMatrix::diagonal(d)));
  CHECK(top.value == 5.0);
  CHECK(std::abs(std::abs(top.vector[1]) - 1.0) < 1e-15);

  const auto w = states::w(3);
  const auto neg = top_eigenpair(-1.0 * HermitianOperator(w.projector()), w.dims());
  CHECK(std::abs(neg.value) < 1e-14);
  CHECK(std::abs(inner(w.amplitudes(), neg.vector.amplitudes())) < 1e-14);

  // W1 = 2/3 - |W><W| has eigenvalue 2/3 on the complement of |W>.
  const auto witness = (2.0 / 3.0) * HermitianOperator::identity(8) - HermitianOperator(w.projector());
  const auto tw = top_eigenpair(witness, w.dims());
  CHECK(tw.value == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(inner(w.amplitudes(), tw.vector.amplitudes())) < 1e-14);
}

TEST_CASE("schmidt examples") {
  const auto s00 = schmidt(PureState::basis(SubsystemDims::qubits(2), 0), {0});
  CHECK(s00.coefficients[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(s00.coefficients[1] == 0.0);

  const auto sb = schmidt(states::bell(), {0});
  CHECK(sb.coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(sb.coefficients[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

  const auto sw = schmidt(states::w(3), {0});
  REQUIRE(sw.coefficients.size() == 2);
  CHECK(sw.coefficients[0] == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-14));
  CHECK(sw.coefficients[1] == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-14));
}

TEST_CASE("schmidt invariants on random states") {
  const std::vector<std::pair<SubsystemDims, PartySet>> cases = {
      {SubsystemDims({2, 2}), {0}},       {SubsystemDims({2, 4}), {1}},    {SubsystemDims({3, 2, 2}), {0}},
      {SubsystemDims({2, 2, 2, 2}), {1, 3}}, {SubsystemDims({4, 2}), {0}}, {SubsystemDims({2, 2, 2}), {0, 1}}};
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const auto& [dims, left] = cases[s % cases.size()];
    auto psi = random_pure(dims, s);
    if (s % 7 == 0) psi = states::product({{1.0, cplx(0.3, 0.1)}, {0.2, 1.0}, {1.0, 1.0}});  // rank one
    const auto& d = psi.dims();
    const PartySet l = (s % 7 == 0) ? PartySet{0} : left;
    const auto sd = schmidt(psi, l);

    double sum = 0;
    for (double c : sd.coefficients) sum += c * c;
    REQUIRE(std::abs(sum - 1.0) <= 1e-10);
    for (std::size_t k = 1; k < sd.coefficients.size(); ++k) REQUIRE(sd.coefficients[k - 1] >= sd.coefficients[k]);

    for (std::size_t i = 0; i < sd.left.size(); ++i)
      for (std::size_t j = 0; j < sd.left.size(); ++j) {
        const double want = i == j ? 1.0 : 0.0;
        REQUIRE(std::abs(inner(sd.left[i], sd.left[j]) - want) <= 1e-10);
        REQUIRE(std::abs(inner(sd.right[i], sd.right[j]) - want) <= 1e-10);
      }

    // Reassemble in the (left, right) ordering and compare against psi reindexed.
    const PartySet r = complement(d, l);
    const auto strides = d.strides();
    const auto ls = sd.left_dims.strides();
    const auto rs = sd.right_dims.strides();
    double err = 0;
    for (std::size_t x = 0; x < d.total(); ++x) {
      std::size_t a = 0, b = 0;
      for (std::size_t k = 0; k < l.size(); ++k) a += ((x / strides[l[k]]) % d[l[k]]) * ls[k];
      for (std::size_t k = 0; k < r.size(); ++k) b += ((x / strides[r[k]]) % d[r[k]]) * rs[k];
      cplx v = 0;
      for (std::size_t i = 0; i < sd.coefficients.size(); ++i) v += sd.coefficients[i] * sd.left[i][a] * sd.right[i][b];
      err = std::max(err, std::abs(v - psi[x]));
    }
    REQUIRE(err <= 1e-10);

    // Squared coefficients are the spectrum of the reduced state.
    auto ev = eigenvalues(reduced_density(psi, l).op());
    std::sort(ev.rbegin(), ev.rend());
    for (std::size_t k = 0; k < sd.coefficients.size(); ++k)
      REQUIRE(std::abs(sd.coefficients[k] * sd.coefficients[k] - ev[k]) <= 1e-10);
  }
}

TEST_CASE("log_psd examples") {
  const auto half = HermitianOperator(ComplexMatrix::identity(2) * cplx(0.5));
  CHECK(max_abs_diff(log_psd(half).matrix(), ComplexMatrix::identity(2) * cplx(-std::log(2.0))) < 1e-15);

  const std::vector<double> d{2.0 / 3.0, 1.0 / 3.0};
  const std::vector<double> ld{std::log(2.0 / 3.0), std::log(1.0 / 3.0)};
  CHECK(max_abs_diff(log_psd(HermitianOperator(ComplexMatrix::diagonal(d))).matrix(), ComplexMatrix::diagonal(ld)) < 1e-15);

  const auto w = states::w(3);
  const auto lp = log_psd(DensityOperator::pure(w), 1e-300);
  const auto es = eig_hermitian(lp);
  CHECK(es.values.back() == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(std::abs(es.values.back()) < 1e-12);
  for (std::size_t k = 0; k + 1 < es.values.size(); ++k) CHECK(es.values[k] == doctest::Approx(std::log(1e-300)));
  CHECK(std::abs(lp.expectation(w.amplitudes())) < 1e-12);
}

TEST_CASE("random_pure is normalized, deterministic and Haar on average") {
  const SubsystemDims d({2, 2, 2});
  const auto a = random_pure(d, 42, 7);
  const auto b = random_pure(d, 42, 7);
  CHECK(std::abs(norm(a.amplitudes()) - 1.0) < 1e-12);
  CHECK(std::equal(a.amplitudes().begin(), a.amplitudes().end(), b.amplitudes().begin()));
  const auto c = random_pure(d, 42, 8);
  CHECK(!std::equal(a.amplitudes().begin(), a.amplitudes().end(), c.amplitudes().begin()));

  // |<e0|psi>|^2 ~ Beta(1, 7): mean 1/8, variance 7/(64*9).
  const int n = 10000;
  double mean = 0;
  for (int k = 0; k < n; ++k) mean += std::norm(random_pure(d, 1, k)[0]);
  mean /= n;
  const double sigma = std::sqrt(7.0 / (64.0 * 9.0) / n);
  CHECK(std::abs(mean - 0.125) <= 3 * sigma);
}

TEST_CASE("random_unitary is unitary") {
  for (std::uint64_t s = 0; s < 20; ++s) CHECK(unitarity_defect(random_unitary(1 + s % 6, s)) < 1e-13);
}

TEST_CASE("type invariants reject bad input") {
  CHECK_THROWS_AS(ComplexMatrix(2, 2, {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(ComplexMatrix(1, 1, {cplx(std::nan(""), 0.0)}), DimensionError);
  CHECK_THROWS_AS(HermitianOperator(ComplexMatrix(2, 2, {0.0, 1.0, 0.0, 0.0})), DimensionError);
  CHECK_THROWS_AS(PureState(SubsystemDims({2}), {1.0, 1.0}), DimensionError);
  CHECK_THROWS_AS(SubsystemDims({2, 1}), DimensionError);
  CHECK_THROWS_AS(DensityOperator(SubsystemDims({2}), HermitianOperator::identity(2)), DimensionError);
  const std::vector<double> neg{1.5, -0.5};
  CHECK_THROWS_AS(DensityOperator(SubsystemDims({2}), HermitianOperator(ComplexMatrix::diagonal(neg))), DimensionError);
}

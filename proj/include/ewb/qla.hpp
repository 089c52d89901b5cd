#pragma once

// Dense complex linear algebra for small multipartite Hilbert spaces.
//
// Index convention: party 0 is the slowest-varying tensor index. A basis
// state |i_0 i_1 ... i_{n-1}> has flat index
//   ((i_0 * d_1 + i_1) * d_2 + i_2) ...
// which is also the ordering produced by tensor(A, B).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ewb {

using cplx = std::complex<double>;

/// Thrown on shape mismatch or invalid party indices.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative kernel fails to converge.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

  static ComplexMatrix identity(std::size_t n);
  static ComplexMatrix diagonal(std::span<const double> d);
  /// |v><v|
  static ComplexMatrix outer(std::span<const cplx> v);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> data() const { return data_; }
  std::span<cplx> data() { return data_; }

  ComplexMatrix adjoint() const;
  double max_abs() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cplx s);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
  friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
  friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

std::vector<cplx> apply(const ComplexMatrix& m, std::span<const cplx> v);
/// <u|v>, conjugate-linear in u.
cplx inner(std::span<const cplx> u, std::span<const cplx> v);
double norm(std::span<const cplx> v);

/// Hermitian within 1e-12 * (1 + max|M|); throws DimensionError otherwise.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(ComplexMatrix m);

  static HermitianOperator zero(std::size_t dim);
  static HermitianOperator identity(std::size_t dim);

  std::size_t dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }

  /// <v|H|v>, real part.
  double expectation(std::span<const cplx> v) const;

  friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b);
  friend HermitianOperator operator*(double s, const HermitianOperator& a);

 private:
  struct Trusted {};
  HermitianOperator(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

class SubsystemDims {
 public:
  SubsystemDims() = default;
  SubsystemDims(std::initializer_list<std::size_t> dims) : SubsystemDims(std::vector<std::size_t>(dims)) {}
  explicit SubsystemDims(std::vector<std::size_t> dims);

  static SubsystemDims qubits(std::size_t n) { return SubsystemDims(std::vector<std::size_t>(n, 2)); }

  std::size_t parties() const { return dims_.size(); }
  std::size_t operator[](std::size_t k) const { return dims_[k]; }
  std::size_t total() const { return total_; }
  const std::vector<std::size_t>& list() const { return dims_; }

  /// Strides for flat indexing: stride(k) = prod_{j>k} d_j.
  std::vector<std::size_t> strides() const;

  friend bool operator==(const SubsystemDims&, const SubsystemDims&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Ascending, duplicate-free party indices.
using PartySet = std::vector<std::size_t>;

/// Validates a nonempty proper subset of parties; returns it sorted.
PartySet checked_parties(const SubsystemDims& dims, PartySet set);
PartySet complement(const SubsystemDims& dims, const PartySet& set);
/// Flat-index offsets of every multi-index over `parties`, lexicographic.
/// For disjoint complementary sets L, R: flat = offsets(L)[a] + offsets(R)[b].
std::vector<std::size_t> party_offsets(const SubsystemDims& dims, const PartySet& parties);
/// H acting on `parties` (ascending order), identity elsewhere.
HermitianOperator embed(const HermitianOperator& h, const SubsystemDims& dims, const PartySet& parties);

class PureState {
 public:
  PureState() = default;
  /// Requires unit norm within 1e-12.
  PureState(SubsystemDims dims, std::vector<cplx> amplitudes);
  /// Normalizes the input; throws on a zero vector.
  static PureState normalized(SubsystemDims dims, std::vector<cplx> amplitudes);
  static PureState basis(SubsystemDims dims, std::size_t index);

  const SubsystemDims& dims() const { return dims_; }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::size_t size() const { return amp_.size(); }
  cplx operator[](std::size_t i) const { return amp_[i]; }

  ComplexMatrix projector() const { return ComplexMatrix::outer(amp_); }

 private:
  SubsystemDims dims_;
  std::vector<cplx> amp_;
};

/// Trace 1 within 1e-12 and smallest eigenvalue >= -1e-10.
class DensityOperator {
 public:
  DensityOperator() = default;
  DensityOperator(SubsystemDims dims, HermitianOperator m);
  static DensityOperator pure(const PureState& psi);

  const SubsystemDims& dims() const { return dims_; }
  const HermitianOperator& op() const { return m_; }
  const ComplexMatrix& matrix() const { return m_.matrix(); }

 private:
  struct Trusted {};
  DensityOperator(SubsystemDims dims, HermitianOperator m, Trusted) : dims_(std::move(dims)), m_(std::move(m)) {}
  friend DensityOperator partial_trace(const DensityOperator&, const PartySet&);
  friend DensityOperator reduced_density(const PureState&, const PartySet&);
  SubsystemDims dims_;
  HermitianOperator m_;
};

struct EigenSystem {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // column k belongs to values[k]
  int sweeps = 0;
};

struct SchmidtDecomposition {
  std::vector<double> coefficients;        // descending, length min(dL, dR)
  std::vector<std::vector<cplx>> left;     // over the bipartition's parties, ascending order
  std::vector<std::vector<cplx>> right;    // over the complement
  SubsystemDims left_dims;
  SubsystemDims right_dims;
};

struct TopEigenpair {
  double value;
  PureState vector;
};

/// Kronecker product; first factor is the slow index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);

DensityOperator partial_trace(const DensityOperator& rho, const PartySet& keep);
/// Same as partial_trace(DensityOperator::pure(psi), keep) without forming |psi><psi|.
DensityOperator reduced_density(const PureState& psi, const PartySet& keep);

/// Cyclic complex Jacobi. Throws NumericError if the off-diagonal norm is
/// still above 1e-12 * ||H||_F after 100 sweeps.
EigenSystem eig_hermitian(const HermitianOperator& h);
/// Same, starting the rotations from a unitary `basis` (e.g. the eigenvectors
/// of a nearby operator); fewer sweeps when basis^dagger H basis is close to diagonal.
EigenSystem eig_hermitian(const HermitianOperator& h, const ComplexMatrix& basis);
std::vector<double> eigenvalues(const HermitianOperator& h);
/// Any unit vector of the top eigenspace; `dims` annotates the result.
TopEigenpair top_eigenpair(const HermitianOperator& h, const SubsystemDims& dims);
TopEigenpair top_eigenpair(const HermitianOperator& h);

SchmidtDecomposition schmidt(const PureState& psi, const PartySet& left);

/// V ln(max(lambda, floor)) V^dagger.
HermitianOperator log_psd(const DensityOperator& rho, double floor = 1e-15);
HermitianOperator log_psd(const HermitianOperator& rho, double floor = 1e-15);

/// Haar-random pure state. The stream is keyed on (seed, stream) so that
/// independent workers can draw reproducible samples in any order.
PureState random_pure(const SubsystemDims& dims, std::uint64_t seed, std::uint64_t stream = 0);
/// Haar-random unitary (QR of a Ginibre matrix, phase-fixed).
ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace ewb

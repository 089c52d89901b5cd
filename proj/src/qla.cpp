#include "ewb/qla.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ewb/random.hpp"

namespace ewb {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// 2x2 unitary G with G^H [[a, h], [conj(h), b]] G diagonal; columns (p, q).
struct Rotation {
  cplx g00, g01, g10, g11;
};

Rotation jacobi_rotation(double a, double b, cplx h) {
  const double ah = std::abs(h);
  const double theta = (b - a) / (2.0 * ah);
  double t;
  if (std::abs(theta) > 1e150) {
    t = 0.5 / theta;
  } else {
    t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  }
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const cplx e = std::conj(h) / ah;
  return {c, s, -s * e, c * e};
}

void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& g) {
  for (std::size_t k = 0; k < m.rows(); ++k) {
    const cplx mp = m(k, p);
    const cplx mq = m(k, q);
    m(k, p) = mp * g.g00 + mq * g.g10;
    m(k, q) = mp * g.g01 + mq * g.g11;
  }
}

void rotate_rows(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& g) {
  for (std::size_t k = 0; k < m.cols(); ++k) {
    const cplx mp = m(p, k);
    const cplx mq = m(q, k);
    m(p, k) = std::conj(g.g00) * mp + std::conj(g.g10) * mq;
    m(q, k) = std::conj(g.g01) * mp + std::conj(g.g11) * mq;
  }
}

double frobenius(const ComplexMatrix& m) {
  double s = 0;
  for (const cplx& z : m.data()) s += std::norm(z);
  return std::sqrt(s);
}

double off_diagonal(const ComplexMatrix& m) {
  double s = 0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (i != j) s += std::norm(m(i, j));
  return std::sqrt(s);
}

}  // namespace

std::vector<std::size_t> party_offsets(const SubsystemDims& dims, const PartySet& parties) {
  const auto strides = dims.strides();
  std::vector<std::size_t> out{0};
  for (std::size_t party : parties) {
    std::vector<std::size_t> next;
    next.reserve(out.size() * dims[party]);
    for (std::size_t base : out)
      for (std::size_t i = 0; i < dims[party]; ++i) next.push_back(base + i * strides[party]);
    out = std::move(next);
  }
  return out;
}

namespace {

std::vector<std::size_t> offsets(const SubsystemDims& dims, const PartySet& parties) {
  return party_offsets(dims, parties);
}

SubsystemDims sub_dims(const SubsystemDims& dims, const PartySet& parties) {
  std::vector<std::size_t> d;
  for (std::size_t p : parties) d.push_back(dims[p]);
  return SubsystemDims(std::move(d));
}

// Gram-Schmidt completion of an orthonormal list up to `dim` vectors.
void complete_basis(std::vector<std::vector<cplx>>& basis, std::size_t dim, std::size_t want) {
  for (std::size_t e = 0; e < dim && basis.size() < want; ++e) {
    std::vector<cplx> v(dim, 0.0);
    v[e] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis) {
        const cplx c = inner(b, v);
        for (std::size_t k = 0; k < dim; ++k) v[k] -= c * b[k];
      }
    const double n = norm(v);
    if (n < 0.5) continue;
    for (auto& z : v) z /= n;
    basis.push_back(std::move(v));
  }
}

struct Svd {
  std::vector<std::vector<cplx>> u;  // left singular vectors (columns of U)
  std::vector<double> s;
  std::vector<std::vector<cplx>> v;  // right singular vectors (columns of V)
};

// One-sided (Hestenes) Jacobi SVD of an m x n matrix with n <= m:
// A = sum_i s_i u_i v_i^dagger, singular values descending.
Svd hestenes(const ComplexMatrix& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  std::vector<std::vector<cplx>> col(n, std::vector<cplx>(m));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < m; ++i) col[j][i] = a(i, j);
  ComplexMatrix v = ComplexMatrix::identity(n);

  for (int sweep = 0; sweep < 100; ++sweep) {
    bool rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0, beta = 0;
        cplx gamma = 0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += std::norm(col[p][k]);
          beta += std::norm(col[q][k]);
          gamma += std::conj(col[p][k]) * col[q][k];
        }
        if (std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta) || std::abs(gamma) == 0.0) continue;
        rotated = true;
        const Rotation g = jacobi_rotation(alpha, beta, gamma);
        for (std::size_t k = 0; k < m; ++k) {
          const cplx cp = col[p][k];
          const cplx cq = col[q][k];
          col[p][k] = cp * g.g00 + cq * g.g10;
          col[q][k] = cp * g.g01 + cq * g.g11;
        }
        rotate_columns(v, p, q, g);
      }
    }
    if (!rotated) break;
  }

  std::vector<double> s(n);
  for (std::size_t j = 0; j < n; ++j) s[j] = norm(col[j]);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return s[x] > s[y]; });

  Svd out;
  const double smax = n ? s[order[0]] : 0.0;
  for (std::size_t j : order) {
    std::vector<cplx> vj(n);
    for (std::size_t k = 0; k < n; ++k) vj[k] = v(k, j);
    out.v.push_back(std::move(vj));
    if (s[j] > 1e-13 * smax && s[j] > 0) {
      std::vector<cplx> uj = col[j];
      for (auto& z : uj) z /= s[j];
      out.u.push_back(std::move(uj));
      out.s.push_back(s[j]);
    }
  }
  // Numerically null directions: coefficient 0, left vector completed.
  out.s.resize(n, 0.0);
  complete_basis(out.u, m, n);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols)
    throw DimensionError("matrix entry count " + std::to_string(data_.size()) + " != " +
                         std::to_string(rows) + "x" + std::to_string(cols));
  for (const cplx& z : data_)
    if (!finite(z)) throw DimensionError("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
  ComplexMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> d) {
  ComplexMatrix m(d.size(), d.size());
  for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

ComplexMatrix ComplexMatrix::outer(std::span<const cplx> v) {
  ComplexMatrix m(v.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) m(i, j) = v[i] * std::conj(v[j]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

double ComplexMatrix::max_abs() const {
  double m = 0;
  for (const cplx& z : data_) m = std::max(m, std::abs(z));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix sum: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  if (rows_ != o.rows_ || cols_ != o.cols_) throw DimensionError("matrix difference: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx s) {
  for (auto& z : data_) z *= s;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionError("matrix product: shape mismatch");
  ComplexMatrix c(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{}) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

std::vector<cplx> apply(const ComplexMatrix& m, std::span<const cplx> v) {
  if (m.cols() != v.size()) throw DimensionError("apply: shape mismatch");
  std::vector<cplx> out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    cplx s = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
  if (u.size() != v.size()) throw DimensionError("inner: length mismatch");
  cplx s = 0;
  for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
  return s;
}

double norm(std::span<const cplx> v) {
  double s = 0;
  for (const cplx& z : v) s += std::norm(z);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// HermitianOperator

HermitianOperator::HermitianOperator(ComplexMatrix m) {
  if (m.rows() != m.cols()) throw DimensionError("Hermitian operator must be square");
  const double scale = 1.0 + m.max_abs();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) {
      const cplx d = m(i, j) - std::conj(m(j, i));
      if (std::abs(d) > 1e-12 * scale) {
        std::ostringstream os;
        os << "matrix is not Hermitian at (" << i << "," << j << "): deviation " << std::abs(d);
        throw DimensionError(os.str());
      }
      const cplx avg = 0.5 * (m(i, j) + std::conj(m(j, i)));
      m(i, j) = avg;
      m(j, i) = std::conj(avg);
    }
  m_ = std::move(m);
}

HermitianOperator HermitianOperator::zero(std::size_t dim) { return HermitianOperator(ComplexMatrix(dim, dim), Trusted{}); }

HermitianOperator HermitianOperator::identity(std::size_t dim) {
  return HermitianOperator(ComplexMatrix::identity(dim), Trusted{});
}

double HermitianOperator::expectation(std::span<const cplx> v) const {
  if (v.size() != dim()) throw DimensionError("expectation: dimension mismatch");
  double s = 0;
  for (std::size_t i = 0; i < dim(); ++i) {
    cplx row = 0;
    for (std::size_t j = 0; j < dim(); ++j) row += m_(i, j) * v[j];
    s += (std::conj(v[i]) * row).real();
  }
  return s;
}

HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.m_ + b.m_, HermitianOperator::Trusted{});
}

HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(a.m_ - b.m_, HermitianOperator::Trusted{});
}

HermitianOperator operator*(double s, const HermitianOperator& a) {
  return HermitianOperator(a.m_ * cplx(s), HermitianOperator::Trusted{});
}

// ---------------------------------------------------------------------------
// SubsystemDims, parties

SubsystemDims::SubsystemDims(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("at least one party is required");
  total_ = 1;
  for (std::size_t d : dims_) {
    if (d < 2) throw DimensionError("party dimension must be >= 2, got " + std::to_string(d));
    total_ *= d;
  }
}

std::vector<std::size_t> SubsystemDims::strides() const {
  std::vector<std::size_t> s(dims_.size(), 1);
  for (std::size_t k = dims_.size(); k-- > 1;) s[k - 1] = s[k] * dims_[k];
  return s;
}

PartySet checked_parties(const SubsystemDims& dims, PartySet set) {
  std::sort(set.begin(), set.end());
  if (std::adjacent_find(set.begin(), set.end()) != set.end()) throw DimensionError("duplicate party index");
  for (std::size_t p : set)
    if (p >= dims.parties()) throw DimensionError("party index " + std::to_string(p) + " out of range");
  if (set.empty() || set.size() >= dims.parties())
    throw DimensionError("party set must be a nonempty proper subset");
  return set;
}

PartySet complement(const SubsystemDims& dims, const PartySet& set) {
  PartySet out;
  for (std::size_t p = 0; p < dims.parties(); ++p)
    if (!std::binary_search(set.begin(), set.end(), p)) out.push_back(p);
  return out;
}

// ---------------------------------------------------------------------------
// States

PureState::PureState(SubsystemDims dims, std::vector<cplx> amplitudes) : dims_(std::move(dims)), amp_(std::move(amplitudes)) {
  if (amp_.size() != dims_.total())
    throw DimensionError("state has " + std::to_string(amp_.size()) + " amplitudes, dims require " +
                         std::to_string(dims_.total()));
  for (const cplx& z : amp_)
    if (!finite(z)) throw DimensionError("state amplitudes must be finite");
  if (std::abs(norm(amp_) - 1.0) > 1e-12) throw DimensionError("state is not normalized");
}

PureState PureState::normalized(SubsystemDims dims, std::vector<cplx> amplitudes) {
  const double n = norm(amplitudes);
  if (!(n > 0) || !std::isfinite(n)) throw DimensionError("cannot normalize a zero or non-finite vector");
  for (auto& z : amplitudes) z /= n;
  return PureState(std::move(dims), std::move(amplitudes));
}

PureState PureState::basis(SubsystemDims dims, std::size_t index) {
  std::vector<cplx> a(dims.total(), 0.0);
  if (index >= a.size()) throw DimensionError("basis index out of range");
  a[index] = 1.0;
  return PureState(std::move(dims), std::move(a));
}

DensityOperator::DensityOperator(SubsystemDims dims, HermitianOperator m) : dims_(std::move(dims)), m_(std::move(m)) {
  if (dims_.total() != m_.dim()) throw DimensionError("density operator dimension does not match dims");
  double tr = 0;
  for (std::size_t i = 0; i < m_.dim(); ++i) tr += m_.matrix()(i, i).real();
  if (std::abs(tr - 1.0) > 1e-12) throw DimensionError("density operator trace is not 1");
  if (eigenvalues(m_).front() < -1e-10) throw DimensionError("density operator is not positive semidefinite");
}

DensityOperator DensityOperator::pure(const PureState& psi) {
  return DensityOperator(psi.dims(), HermitianOperator(psi.projector()), Trusted{});
}

// ---------------------------------------------------------------------------
// Operations

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const cplx aij = a(i, j);
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return c;
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(tensor(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator& rho, const PartySet& keep_in) {
  const auto& dims = rho.dims();
  const PartySet keep = checked_parties(dims, keep_in);
  const auto kept = offsets(dims, keep);
  const auto traced = offsets(dims, complement(dims, keep));
  const auto& m = rho.matrix();
  ComplexMatrix r(kept.size(), kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = 0; b < kept.size(); ++b) {
      cplx s = 0;
      for (std::size_t t : traced) s += m(kept[a] + t, kept[b] + t);
      r(a, b) = s;
    }
  return DensityOperator(sub_dims(dims, keep), HermitianOperator(std::move(r)), DensityOperator::Trusted{});
}

DensityOperator reduced_density(const PureState& psi, const PartySet& keep_in) {
  const auto& dims = psi.dims();
  const PartySet keep = checked_parties(dims, keep_in);
  const auto kept = offsets(dims, keep);
  const auto traced = offsets(dims, complement(dims, keep));
  const auto amp = psi.amplitudes();
  ComplexMatrix r(kept.size(), kept.size());
  for (std::size_t a = 0; a < kept.size(); ++a)
    for (std::size_t b = a; b < kept.size(); ++b) {
      cplx s = 0;
      for (std::size_t t : traced) s += amp[kept[a] + t] * std::conj(amp[kept[b] + t]);
      r(a, b) = s;
      r(b, a) = std::conj(s);
    }
  for (std::size_t a = 0; a < kept.size(); ++a) r(a, a) = r(a, a).real();
  return DensityOperator(sub_dims(dims, keep), HermitianOperator(std::move(r)), DensityOperator::Trusted{});
}

namespace {

// Diagonalizes a in place, accumulating the rotations into v.
EigenSystem jacobi(ComplexMatrix a, ComplexMatrix v) {
  const std::size_t n = a.rows();
  const double fro = frobenius(a);

  int sweep = 0;
  double off = off_diagonal(a);
  for (bool rotated = true; rotated && sweep < 100 && off > 1e-15 * fro; ++sweep) {
    rotated = false;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        if (apq == cplx{}) continue;
        // Below rounding level of both diagonal entries.
        const double tiny = 100.0 * std::abs(apq);
        const double dp = std::abs(a(p, p).real());
        const double dq = std::abs(a(q, q).real());
        if (dp + tiny == dp && dq + tiny == dq) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        rotated = true;
        const Rotation g = jacobi_rotation(a(p, p).real(), a(q, q).real(), apq);
        rotate_columns(a, p, q, g);
        rotate_rows(a, p, q, g);
        a(p, q) = a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        rotate_columns(v, p, q, g);
      }
    }
    off = off_diagonal(a);
  }
  if (off > 1e-12 * fro) {
    std::ostringstream os;
    os << "Jacobi eigensolver did not converge: off-diagonal norm " << off << " vs Frobenius norm " << fro
       << " after " << sweep << " sweeps (dim " << n << ")";
    throw NumericError(os.str());
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
  EigenSystem out{std::vector<double>(n), ComplexMatrix(n, n), sweep};
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
  }
  return out;
}

}  // namespace

EigenSystem eig_hermitian(const HermitianOperator& h) {
  return jacobi(h.matrix(), ComplexMatrix::identity(h.dim()));
}

EigenSystem eig_hermitian(const HermitianOperator& h, const ComplexMatrix& basis) {
  if (basis.rows() != h.dim() || basis.cols() != h.dim()) throw DimensionError("eig_hermitian: basis shape mismatch");
  ComplexMatrix a = basis.adjoint() * h.matrix() * basis;
  // Restore exact Hermiticity lost to rounding in the product.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    a(i, i) = a(i, i).real();
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const cplx m = 0.5 * (a(i, j) + std::conj(a(j, i)));
      a(i, j) = m;
      a(j, i) = std::conj(m);
    }
  }
  return jacobi(std::move(a), basis);
}

std::vector<double> eigenvalues(const HermitianOperator& h) { return eig_hermitian(h).values; }

TopEigenpair top_eigenpair(const HermitianOperator& h, const SubsystemDims& dims) {
  if (dims.total() != h.dim()) throw DimensionError("top_eigenpair: dims do not match operator");
  const EigenSystem es = eig_hermitian(h);
  const std::size_t n = h.dim();
  std::vector<cplx> vec(n);
  for (std::size_t i = 0; i < n; ++i) vec[i] = es.vectors(i, n - 1);
  return {es.values.back(), PureState::normalized(dims, std::move(vec))};
}

TopEigenpair top_eigenpair(const HermitianOperator& h) { return top_eigenpair(h, SubsystemDims({h.dim()})); }

SchmidtDecomposition schmidt(const PureState& psi, const PartySet& left_in) {
  const auto& dims = psi.dims();
  const PartySet left = checked_parties(dims, left_in);
  const PartySet right = complement(dims, left);
  const auto lo = offsets(dims, left);
  const auto ro = offsets(dims, right);
  const auto amp = psi.amplitudes();

  SchmidtDecomposition out;
  out.left_dims = sub_dims(dims, left);
  out.right_dims = sub_dims(dims, right);

  // psi_ab = sum_i s_i l_i[a] r_i[b]
  const bool transpose = ro.size() > lo.size();
  ComplexMatrix m(transpose ? ro.size() : lo.size(), transpose ? lo.size() : ro.size());
  for (std::size_t a = 0; a < lo.size(); ++a)
    for (std::size_t b = 0; b < ro.size(); ++b) (transpose ? m(b, a) : m(a, b)) = amp[lo[a] + ro[b]];

  Svd svd = hestenes(m);
  out.coefficients = svd.s;
  for (std::size_t i = 0; i < svd.s.size(); ++i) {
    std::vector<cplx> vconj = svd.v[i];
    for (auto& z : vconj) z = std::conj(z);
    if (transpose) {
      out.left.push_back(std::move(vconj));
      out.right.push_back(std::move(svd.u[i]));
    } else {
      out.left.push_back(std::move(svd.u[i]));
      out.right.push_back(std::move(vconj));
    }
  }
  return out;
}

HermitianOperator embed(const HermitianOperator& h, const SubsystemDims& dims, const PartySet& parties_in) {
  const PartySet parties = checked_parties(dims, parties_in);
  const auto in = offsets(dims, parties);
  const auto out = offsets(dims, complement(dims, parties));
  if (in.size() != h.dim()) throw DimensionError("embed: operator does not match the selected parties");
  ComplexMatrix m(dims.total(), dims.total());
  for (std::size_t a = 0; a < in.size(); ++a)
    for (std::size_t c = 0; c < in.size(); ++c) {
      const cplx v = h.matrix()(a, c);
      if (v == cplx{}) continue;
      for (std::size_t b : out) m(in[a] + b, in[c] + b) = v;
    }
  return HermitianOperator(std::move(m));
}

HermitianOperator log_psd(const HermitianOperator& rho, double floor) {
  const EigenSystem es = eig_hermitian(rho);
  const std::size_t n = rho.dim();
  std::vector<double> logs(n);
  for (std::size_t k = 0; k < n; ++k) logs[k] = std::log(std::max(es.values[k], floor));
  ComplexMatrix out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cplx s = 0;
      for (std::size_t k = 0; k < n; ++k) s += es.vectors(i, k) * logs[k] * std::conj(es.vectors(j, k));
      out(i, j) = s;
      out(j, i) = std::conj(s);
    }
  for (std::size_t i = 0; i < n; ++i) out(i, i) = out(i, i).real();
  return HermitianOperator(std::move(out));
}

HermitianOperator log_psd(const DensityOperator& rho, double floor) { return log_psd(rho.op(), floor); }

PureState random_pure(const SubsystemDims& dims, std::uint64_t seed, std::uint64_t stream) {
  auto gen = make_stream(seed, stream);
  std::vector<cplx> a(dims.total());
  for (auto& z : a) z = complex_gaussian(gen);
  return PureState::normalized(dims, std::move(a));
}

ComplexMatrix random_unitary(std::size_t n, std::uint64_t seed, std::uint64_t stream) {
  auto gen = make_stream(seed, stream);
  std::vector<std::vector<cplx>> cols(n, std::vector<cplx>(n));
  for (auto& c : cols)
    for (auto& z : c) z = complex_gaussian(gen);
  // Modified Gram-Schmidt leaves R with a positive diagonal, so Q is Haar.
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      const cplx c = inner(cols[k], cols[j]);
      for (std::size_t i = 0; i < n; ++i) cols[j][i] -= c * cols[k][i];
    }
    const double nj = norm(cols[j]);
    for (auto& z : cols[j]) z /= nj;
  }
  ComplexMatrix u(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) u(i, j) = cols[j][i];
  return u;
}

}  // namespace ewb

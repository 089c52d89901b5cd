#include "ewb/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ewb/random.hpp"

namespace ewb {

std::string to_string(LogBase b) { return b == LogBase::two ? "two" : "natural"; }

LogBase parse_log_base(const std::string& s) {
  if (s == "natural" || s == "e" || s == "nat") return LogBase::natural;
  if (s == "two" || s == "2" || s == "bit") return LogBase::two;
  throw std::invalid_argument("unknown log base '" + s + "' (expected natural or two)");
}

double log_scale(LogBase b) { return b == LogBase::two ? std::numbers::ln2 : 1.0; }

BipartitionSpec checked(const SubsystemDims& dims, BipartitionSpec bip) {
  bip.left = checked_parties(dims, std::move(bip.left));
  return bip;
}

ProductState::ProductState(std::vector<std::vector<cplx>> factors) : factors_(std::move(factors)) {
  for (const auto& f : factors_)
    if (std::abs(norm(f) - 1.0) > 1e-12) throw DimensionError("product factor is not normalized");
}

SubsystemDims ProductState::dims() const {
  std::vector<std::size_t> d;
  for (const auto& f : factors_) d.push_back(f.size());
  return SubsystemDims(std::move(d));
}

PureState ProductState::state() const {
  std::vector<cplx> amp{1.0};
  for (const auto& f : factors_) {
    std::vector<cplx> next;
    next.reserve(amp.size() * f.size());
    for (const cplx& x : amp)
      for (const cplx& y : f) next.push_back(x * y);
    amp = std::move(next);
  }
  return PureState::normalized(dims(), std::move(amp));
}

double entropy_of_spectrum(std::span<const double> lambda, LogBase base) {
  double s = 0;
  for (double l : lambda)
    if (l > 0) s -= l * std::log(l);
  return s / log_scale(base);
}

double entropy(const DensityOperator& rho, LogBase base) { return entropy_of_spectrum(eigenvalues(rho.op()), base); }

double eof_pure(const PureState& psi, const BipartitionSpec& bip, LogBase base) {
  return entropy(reduced_density(psi, bip.left), base);
}

namespace {

// Contraction of psi with conj(phi_j) for every j != k.
std::vector<cplx> contract_except(const PureState& psi, const ProductState& phi, std::size_t k) {
  const auto& dims = psi.dims();
  const std::size_t n = dims.parties();
  const auto amp = psi.amplitudes();
  std::vector<cplx> out(dims[k], 0.0);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t x = 0; x < amp.size(); ++x) {
    cplx w = amp[x];
    for (std::size_t j = 0; j < n; ++j)
      if (j != k) w *= std::conj(phi.factor(j)[digit[j]]);
    out[digit[k]] += w;
    for (std::size_t j = n; j-- > 0;) {
      if (++digit[j] < dims[j]) break;
      digit[j] = 0;
    }
  }
  return out;
}

}  // namespace

double overlap2(const PureState& psi, const ProductState& phi) {
  const auto a = contract_except(psi, phi, 0);
  return std::norm(inner(phi.factor(0), a));
}

double product_cycle(const PureState& psi, ProductState& phi, std::vector<double>* trace) {
  if (phi.dims() != psi.dims()) throw DimensionError("product state does not match state dims");
  double ov = 0;
  for (std::size_t k = 0; k < phi.parties(); ++k) {
    auto a = contract_except(psi, phi, k);
    const double n = norm(a);
    if (n > 0) {
      for (auto& z : a) z /= n;
      phi.set_factor(k, std::move(a));
    }
    // Zero contraction: every choice of factor k gives overlap 0; keep the old one.
    ov = n * n;
    if (trace) trace->push_back(ov);
  }
  return ov;
}

ClosestProduct ascend_product(const PureState& psi, ProductState start, double tol, std::size_t max_cycles,
                              std::vector<double>* trace) {
  ClosestProduct out{std::move(start), 0.0, 0};
  double prev = overlap2(psi, out.state);
  if (trace) trace->push_back(prev);
  for (out.cycles = 0; out.cycles < max_cycles;) {
    const double ov = product_cycle(psi, out.state, trace);
    ++out.cycles;
    const bool done = ov - prev < tol;
    prev = std::max(prev, ov);
    if (done) break;
  }
  out.overlap2 = std::min(1.0, prev);
  return out;
}

ProductState reduced_state_start(const PureState& psi) {
  const auto& dims = psi.dims();
  std::vector<std::vector<cplx>> f;
  for (std::size_t k = 0; k < dims.parties(); ++k) {
    const auto top = top_eigenpair(reduced_density(psi, {k}).op());
    f.emplace_back(top.vector.amplitudes().begin(), top.vector.amplitudes().end());
  }
  return ProductState(std::move(f));
}

ProductState random_product(const SubsystemDims& dims, std::uint64_t seed, std::uint64_t stream) {
  auto gen = make_stream(seed, stream);
  std::vector<std::vector<cplx>> f;
  for (std::size_t k = 0; k < dims.parties(); ++k) {
    std::vector<cplx> v(dims[k]);
    for (auto& z : v) z = complex_gaussian(gen);
    const double n = norm(v);
    for (auto& z : v) z /= n;
    f.push_back(std::move(v));
  }
  return ProductState(std::move(f));
}

ClosestProduct closest_product(const PureState& psi, const ClosestProductOptions& opts) {
  if (psi.dims().parties() < 2) throw DimensionError("closest_product needs at least two parties");
  const std::size_t starts = opts.restarts + 1;
  std::vector<ClosestProduct> results(starts);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t r = 0; r < starts; ++r) {
    ProductState start = r == 0 ? reduced_state_start(psi) : random_product(psi.dims(), opts.seed, r);
    results[r] = ascend_product(psi, std::move(start), opts.tol, opts.max_cycles);
  }
  std::size_t best = 0;
  for (std::size_t r = 1; r < starts; ++r)
    if (results[r].overlap2 > results[best].overlap2) best = r;
  return std::move(results[best]);
}

double geometric_pure(const PureState& psi, const ClosestProductOptions& opts) {
  return std::clamp(1.0 - closest_product(psi, opts).overlap2, 0.0, 1.0);
}

double evaluate(const PureMeasure& m, const PureState& psi) {
  struct Visitor {
    const PureState& psi;
    double operator()(const EofMeasure& e) const { return eof_pure(psi, e.bipartition, e.base); }
    double operator()(const GeometricMeasure& g) const { return geometric_pure(psi, g.options); }
    double operator()(const CustomMeasure& c) const { return c.evaluate(psi); }
  };
  return std::visit(Visitor{psi}, m);
}

std::string describe(const PureMeasure& m) {
  struct Visitor {
    std::string operator()(const EofMeasure& e) const {
      std::ostringstream os;
      os << "entanglement of formation, left block {";
      for (std::size_t i = 0; i < e.bipartition.left.size(); ++i) os << (i ? "," : "") << e.bipartition.left[i];
      os << "}, log base " << to_string(e.base);
      return os.str();
    }
    std::string operator()(const GeometricMeasure&) const { return "geometric measure"; }
    std::string operator()(const CustomMeasure& c) const { return c.name; }
  };
  return std::visit(Visitor{}, m);
}

}  // namespace ewb

#include "ewb/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ewb::oracle {

namespace {

constexpr double kAuditTol = 1e-9;

std::string describe_state(const PureState& psi, std::size_t index, std::uint64_t seed) {
  std::ostringstream os;
  os << "sample " << index << " (seed " << seed << "): [";
  os << std::setprecision(4);
  for (std::size_t i = 0; i < psi.size(); ++i) {
    const cplx z = psi[i];
    os << (i ? ", " : "") << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
  }
  os << "]";
  return os.str();
}

void check_audit_args(const HermitianOperator& w, const SubsystemDims& dims, std::size_t samples) {
  if (samples < 1) throw std::invalid_argument("audit needs at least one sample");
  if (w.dim() != dims.total()) throw DimensionError("audit: operator does not match dims");
}

AuditReport finish(std::string target, std::size_t samples, double claimed, double best, std::size_t worst,
                   const SubsystemDims& dims, std::uint64_t seed) {
  AuditReport rep;
  rep.target = std::move(target);
  rep.samples = samples;
  rep.claimed = claimed;
  rep.sampled_max = best;
  rep.gap = claimed - best;
  rep.max_violation = std::max(0.0, best - claimed);
  rep.tolerance = kAuditTol;
  rep.worst_index = worst;
  rep.worst_case = random_pure(dims, seed, worst);
  rep.worst_description = describe_state(rep.worst_case, worst, seed);
  rep.passed = rep.max_violation <= kAuditTol;
  return rep;
}

// Max with lowest-index tie-break, independent of evaluation order.
void take(double v, std::size_t i, double& best, std::size_t& at) {
  if (v > best || (v == best && i < at)) {
    best = v;
    at = i;
  }
}

// Upper bound on the product overlap: no product state beats the largest
// eigenvalue of any single-party reduced state.
double overlap_ceiling(const PureState& psi) {
  double c = 1.0;
  for (std::size_t k = 0; k < psi.dims().parties(); ++k) c = std::min(c, eigenvalues(reduced_density(psi, {k}).op()).back());
  return c;
}

// Product qubit factor (cos t, e^{ip} sin t).
struct QubitGrid {
  std::vector<std::array<cplx, 2>> points;
  explicit QubitGrid(std::size_t steps) {
    for (std::size_t j = 0; j <= steps; ++j) {
      const double t = static_cast<double>(j) / static_cast<double>(steps) * (std::numbers::pi / 2);
      for (std::size_t l = 0; l < steps; ++l) {
        const double p = static_cast<double>(l) / static_cast<double>(steps) * (2 * std::numbers::pi);
        points.push_back({cplx(std::cos(t), 0.0), std::polar(std::sin(t), p)});
      }
    }
  }
};

void check_grid_args(const PureState& psi, std::size_t steps) {
  if (psi.dims() != SubsystemDims::qubits(3)) throw DimensionError("grid_geometric needs exactly three qubits");
  if (steps < 12) throw std::invalid_argument("grid_geometric needs at least 12 steps per angle");
}

// max over c of |<a b c|psi>|^2 = || sum_{ij} conj(a_i b_j) psi_{ij.} ||^2
double best_over_third(const std::array<cplx, 2>& a, const std::array<cplx, 2>& b, std::span<const cplx> amp) {
  cplx v0 = 0, v1 = 0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      const cplx ab = std::conj(a[i] * b[j]);
      v0 += ab * amp[4 * i + 2 * j];
      v1 += ab * amp[4 * i + 2 * j + 1];
    }
  return std::norm(v0) + std::norm(v1);
}

}  // namespace

std::size_t default_samples(const SubsystemDims& dims) { return dims.total() <= 8 ? 100000 : 10000; }

AuditReport audit_legendre(const HermitianOperator& w, const SubsystemDims& dims, const PureMeasure& measure,
                           double claimed, std::size_t samples, std::uint64_t seed, std::string target) {
  check_audit_args(w, dims, samples);
  const long n = static_cast<long>(samples);
  const auto* geo = std::get_if<GeometricMeasure>(&measure);
  std::vector<double> value(samples), ceiling(samples);
  std::vector<char> exact(samples, geo ? 0 : 1);

  // Pass 1: exact values for cheap measures; for the geometric measure a
  // single ascent gives a lower value and the reduced-state ceiling an upper one.
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    const PureState psi = random_pure(dims, seed, static_cast<std::uint64_t>(i));
    const double ew = w.expectation(psi.amplitudes());
    if (geo) {
      const auto& o = geo->options;
      const double low = ascend_product(psi, reduced_state_start(psi), o.tol, o.max_cycles).overlap2;
      value[i] = ew - std::clamp(1.0 - low, 0.0, 1.0);
      ceiling[i] = ew - std::clamp(1.0 - overlap_ceiling(psi), 0.0, 1.0);
    } else {
      value[i] = ew - evaluate(measure, psi);
    }
  }

  if (geo) {
    double floor = -std::numeric_limits<double>::infinity();
    for (double v : value) floor = std::max(floor, v);
    // Pass 2: full closest-product search wherever the sample could still be the maximum.
#pragma omp parallel for schedule(dynamic, 16)
    for (long i = 0; i < n; ++i) {
      if (ceiling[i] + 1e-12 < floor) continue;
      const PureState psi = random_pure(dims, seed, static_cast<std::uint64_t>(i));
      value[i] = w.expectation(psi.amplitudes()) - geometric_pure(psi, geo->options);
      exact[i] = 1;
    }
  }

  double best = -std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  for (std::size_t i = 0; i < samples; ++i)
    if (exact[i]) take(value[i], i, best, at);
  return finish(std::move(target), samples, claimed, best, at, dims, seed);
}

double grid_geometric(const PureState& psi, std::size_t steps) {
  check_grid_args(psi, steps);
  const QubitGrid grid(steps);
  const auto amp = psi.amplitudes();
  const long m = static_cast<long>(grid.points.size());
  double best = 0;
#pragma omp parallel for schedule(static) reduction(max : best)
  for (long ia = 0; ia < m; ++ia)
    for (const auto& b : grid.points) best = std::max(best, best_over_third(grid.points[ia], b, amp));
  return std::clamp(1.0 - best, 0.0, 1.0);
}

std::vector<double> default_r_grid() {
  std::vector<double> rs;
  for (int k = -20; k <= 2; ++k) rs.push_back(0.5 * k);
  return rs;
}

TransformScan scan_projector_transform(const ProjectorWitness& pw_in, const std::vector<double>& rs,
                                       const SolverOptions& opts) {
  const ProjectorWitness pw = pw_in.eg_chi ? pw_in : pw_in.with_geometric(opts.product);
  const HermitianOperator w = pw.op();
  const SubsystemDims& dims = pw.chi.dims();
  TransformScan scan;
  for (double r : rs) {
    TransformRow row{r, projector_transform_geometric(pw, r), 0.0, 0.0};
    if (r != 0.0) row.iterative = legendre_geometric(r * w, dims, opts).value;
    row.delta = std::abs(row.analytic - row.iterative);
    scan.max_delta = std::max(scan.max_delta, row.delta);
    scan.rows.push_back(row);
  }
  return scan;
}

namespace serial {

AuditReport audit_legendre(const HermitianOperator& w, const SubsystemDims& dims, const PureMeasure& measure,
                           double claimed, std::size_t samples, std::uint64_t seed, std::string target) {
  check_audit_args(w, dims, samples);
  double best = -std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const PureState psi = random_pure(dims, seed, i);
    take(w.expectation(psi.amplitudes()) - evaluate(measure, psi), i, best, at);
  }
  return finish(std::move(target), samples, claimed, best, at, dims, seed);
}

double grid_geometric(const PureState& psi, std::size_t steps) {
  check_grid_args(psi, steps);
  const QubitGrid grid(steps);
  double best = 0;
  for (const auto& a : grid.points)
    for (const auto& b : grid.points) best = std::max(best, best_over_third(a, b, psi.amplitudes()));
  return std::clamp(1.0 - best, 0.0, 1.0);
}

}  // namespace serial

}  // namespace ewb::oracle

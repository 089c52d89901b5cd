#pragma once

// Lower bounds on an entanglement measure from measured witness expectation
// values: eps(w) = sup_r { r.w - Ehat(sum_k r_k W_k) }.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ewb/legendre.hpp"
#include "ewb/search.hpp"

namespace ewb {

struct WitnessRecord {
  HermitianOperator op;
  double measured = 0;   // w_k
  double std_error = 0;  // Delta w_k
  std::string label;
  /// Set when op = alpha 1 - |chi><chi|; enables the closed-form transform.
  std::optional<ProjectorWitness> projector;
};

WitnessRecord projector_record(const ProjectorWitness& pw, double measured, double std_error, std::string label);

struct EofSpec {
  BipartitionSpec bipartition;
  LogBase base = LogBase::natural;
};
struct GeometricSpec {};

struct MeasureSpec {
  std::variant<EofSpec, GeometricSpec> kind = GeometricSpec{};
  SolverOptions solver{};

  bool geometric() const { return std::holds_alternative<GeometricSpec>(kind); }
};

std::string describe(const MeasureSpec& spec);
/// The pure-state measure selected by spec (for audits and sampling).
PureMeasure pure_measure(const MeasureSpec& spec);

/// One evaluation of Ehat during the search.
struct InnerSummary {
  std::vector<double> r;
  double value = 0;
  bool converged = true;
  std::size_t iterations = 0;
  bool analytic = false;
};

struct BoundResult {
  double epsilon = 0;
  std::vector<double> r_star;
  double c_star = 0;
  double uncertainty = 0;
  bool certificate_valid = true;  // every inner solve converged
  bool analytic = false;          // closed-form transform used
  bool at_boundary = false;       // optimum still on the box edge after widening
  bool ray_extended = false;      // boundary optimum followed outward
  double box = 0;                 // final half-width of the search box
  std::size_t evaluations = 0;    // calls of g, memo hits included
  std::vector<InnerSummary> inner_results;  // sorted by r
};

struct AffineCertificate {
  std::vector<double> r;
  double c = 0;
  double bound = 0;  // r.w - c
  bool converged = true;
  LegendreResult inner;
};

/// Throws std::invalid_argument on 0 or more than 4 records, DimensionError
/// on operators that do not match dims.
BoundResult epsilon_bound(const SubsystemDims& dims, const std::vector<WitnessRecord>& records,
                          const MeasureSpec& spec, const SearchOptions& search = {});

/// (r, c = Ehat(sum r_k W_k)); E(rho) >= r.tr(rho W) - c holds for every state.
AffineCertificate affine_certificate(const SubsystemDims& dims, const std::vector<WitnessRecord>& records,
                                     const MeasureSpec& spec, const std::vector<double>& r);

/// sqrt(sum_k (r*_k Delta w_k)^2)
double propagate_uncertainty(const BoundResult& result, const std::vector<WitnessRecord>& records);

/// sum_k r_k W_k
HermitianOperator combine(const std::vector<WitnessRecord>& records, const std::vector<double>& r);

/// Ehat(sum r_k W_k) by the iterative solver selected by spec.
LegendreResult inner_transform(const SubsystemDims& dims, const HermitianOperator& w, const MeasureSpec& spec);

}  // namespace ewb

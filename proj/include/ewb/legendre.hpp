#pragma once

// Legendre transforms of convex-roof entanglement measures:
//   Ehat(W) = sup_psi { <psi|W|psi> - E(psi) }
// over pure states. Every value returned here is attained by an explicit
// state, so it can only under-estimate the true supremum.

#include <optional>
#include <vector>

#include "ewb/measures.hpp"
#include "ewb/qla.hpp"

namespace ewb {

struct SolverOptions {
  std::size_t restarts = 20;  // random starts on top of the deterministic one
  double tol = 1e-10;         // objective gain per iteration, relative to max(1, |objective|)
  std::size_t max_iters = 500;
  std::uint64_t seed = 0;
  double log_floor = 1e-15;
  LogBase base = LogBase::natural;
  ClosestProductOptions product{};  // inner closest-product searches (geometric measure)
};

/// Throws std::invalid_argument unless tol > 0 and max_iters >= 1.
void validate(const SolverOptions& opts);

struct LegendreResult {
  double value = 0;
  PureState maximizer;
  std::size_t iterations = 0;  // of the restart that produced `value`
  std::vector<double> restart_values;
  bool converged = true;  // the restart that produced `value` met the tolerance
  std::size_t restarts_converged = 0;
  /// Objective after each iteration, per restart. Nondecreasing up to rounding.
  std::vector<std::vector<double>> traces;
};

/// alpha * 1 - |chi><chi|
struct ProjectorWitness {
  double alpha = 0;
  PureState chi;
  std::optional<double> eg_chi;  // E_G(chi), computed on demand when absent

  HermitianOperator op() const;
  /// Fills eg_chi with geometric_pure(chi).
  ProjectorWitness with_geometric(const ClosestProductOptions& opts = {}) const;
};

/// -log tr exp(-H) in the given base (base two: -log2 tr 2^{-H}).
double free_energy(const HermitianOperator& h, LogBase base = LogBase::natural);

/// Alternating ascent over (psi, H): psi <- top eigenvector of W - H (x) 1,
/// H <- -log of psi's reduced state on the left block.
LegendreResult legendre_eof(const HermitianOperator& w, const SubsystemDims& dims, const BipartitionSpec& bip,
                            const SolverOptions& opts = {});

/// Alternating ascent over (psi, phi): psi <- top eigenvector of W + |phi><phi|,
/// phi <- one closest-product cycle against psi.
LegendreResult legendre_geometric(const HermitianOperator& w, const SubsystemDims& dims, const SolverOptions& opts = {});

/// Dispatches to the specialized solvers; CustomMeasure runs a multistart
/// projected-gradient ascent on the unit sphere with finite-difference gradients.
LegendreResult legendre_roof(const HermitianOperator& w, const SubsystemDims& dims, const PureMeasure& measure,
                             const SolverOptions& opts = {});

/// Closed form of Ehat_G(r W) for W = alpha 1 - |chi><chi|.
double projector_transform_geometric(const ProjectorWitness& pw, double r);

}  // namespace ewb

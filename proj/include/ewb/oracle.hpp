#pragma once

// Brute-force checks that do not go through the alternating solvers.

#include <cstdint>
#include <string>
#include <vector>

#include "ewb/legendre.hpp"

namespace ewb::oracle {

struct AuditReport {
  std::string target;
  std::size_t samples = 0;
  double claimed = 0;
  double sampled_max = 0;    // max over samples of <psi|W|psi> - E(psi)
  double max_violation = 0;  // max(0, sampled_max - claimed)
  double gap = 0;            // claimed - sampled_max
  double tolerance = 1e-9;
  std::size_t worst_index = 0;
  PureState worst_case;
  std::string worst_description;
  bool passed = false;  // max_violation <= tolerance
};

/// 1e5 samples for total dimension <= 8, 1e4 above.
std::size_t default_samples(const SubsystemDims& dims);

/// Samples psi_i = random_pure(dims, seed, i) for i < samples and checks
/// sup <psi|W|psi> - E(psi) <= claimed + 1e-9.
AuditReport audit_legendre(const HermitianOperator& w, const SubsystemDims& dims, const PureMeasure& measure,
                           double claimed, std::size_t samples, std::uint64_t seed, std::string target = {});

/// 1 - max overlap^2 with product states whose first two factors run over the
/// grid (cos t, e^{ip} sin t), t = (pi/2) j/steps (j <= steps), p = 2 pi j/steps
/// (j < steps); the third factor is optimized exactly for each grid pair.
/// Three qubits only; steps >= 12.
double grid_geometric(const PureState& psi, std::size_t steps);

struct TransformRow {
  double r = 0;
  double analytic = 0;
  double iterative = 0;
  double delta = 0;
};

struct TransformScan {
  std::vector<TransformRow> rows;
  double max_delta = 0;
};

/// -10, -9.5, ..., 1
std::vector<double> default_r_grid();

TransformScan scan_projector_transform(const ProjectorWitness& pw, const std::vector<double>& rs,
                                       const SolverOptions& opts = {});

/// Single-threaded reference versions; results are bit-identical to the above.
namespace serial {
AuditReport audit_legendre(const HermitianOperator& w, const SubsystemDims& dims, const PureMeasure& measure,
                           double claimed, std::size_t samples, std::uint64_t seed, std::string target = {});
double grid_geometric(const PureState& psi, std::size_t steps);
}  // namespace serial

}  // namespace ewb::oracle

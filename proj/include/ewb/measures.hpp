#pragma once

// Pure-state entanglement measures.

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "ewb/qla.hpp"

namespace ewb {

enum class LogBase { natural, two };

std::string to_string(LogBase b);
LogBase parse_log_base(const std::string& s);
/// ln(2) for base two, 1 for natural.
double log_scale(LogBase b);

struct BipartitionSpec {
  PartySet left;  // complement is the right block
};

/// Validates `bip` against `dims` and returns the normalized form.
BipartitionSpec checked(const SubsystemDims& dims, BipartitionSpec bip);

/// One unit vector per party.
class ProductState {
 public:
  ProductState() = default;
  explicit ProductState(std::vector<std::vector<cplx>> factors);

  std::size_t parties() const { return factors_.size(); }
  const std::vector<cplx>& factor(std::size_t k) const { return factors_[k]; }
  /// Sets factor k; `v` must already be normalized.
  void set_factor(std::size_t k, std::vector<cplx> v) { factors_[k] = std::move(v); }
  SubsystemDims dims() const;
  PureState state() const;

 private:
  std::vector<std::vector<cplx>> factors_;
};

/// -sum lambda log lambda, with 0 log 0 = 0.
double entropy(const DensityOperator& rho, LogBase base = LogBase::natural);
double entropy_of_spectrum(std::span<const double> lambda, LogBase base = LogBase::natural);

/// Entropy of the reduced state on bip.left.
double eof_pure(const PureState& psi, const BipartitionSpec& bip, LogBase base = LogBase::natural);

struct ClosestProductOptions {
  std::size_t restarts = 20;  // Haar-random product starts, on top of the reduced-state start
  double tol = 1e-12;         // minimum overlap^2 gain per full cycle
  std::size_t max_cycles = 10000;
  std::uint64_t seed = 0;
};

struct ClosestProduct {
  ProductState state;
  double overlap2 = 0;
  std::size_t cycles = 0;
};

/// |<phi|psi>|^2.
double overlap2(const PureState& psi, const ProductState& phi);

/// One sweep of single-party updates over all parties in order: each factor
/// becomes the normalized contraction of psi with the other factors.
/// Returns overlap^2 after the sweep. `trace` (if given) receives overlap^2
/// after every single-party update.
double product_cycle(const PureState& psi, ProductState& phi, std::vector<double>* trace = nullptr);

/// Runs product_cycle from `start` until the gain over a cycle drops below tol.
ClosestProduct ascend_product(const PureState& psi, ProductState start, double tol, std::size_t max_cycles,
                              std::vector<double>* trace = nullptr);

/// Top eigenvector of every single-party reduced state.
ProductState reduced_state_start(const PureState& psi);
ProductState random_product(const SubsystemDims& dims, std::uint64_t seed, std::uint64_t stream);

/// Best product state over the reduced-state start plus `restarts` random starts.
ClosestProduct closest_product(const PureState& psi, const ClosestProductOptions& opts = {});

/// 1 - max |<a b c ...|psi>|^2.
double geometric_pure(const PureState& psi, const ClosestProductOptions& opts = {});

// Pure-state measure selection for the Legendre machinery and the audits.
struct EofMeasure {
  BipartitionSpec bipartition;
  LogBase base = LogBase::natural;
};
struct GeometricMeasure {
  ClosestProductOptions options;
};
struct CustomMeasure {
  std::string name;
  std::function<double(const PureState&)> evaluate;
};
using PureMeasure = std::variant<EofMeasure, GeometricMeasure, CustomMeasure>;

double evaluate(const PureMeasure& m, const PureState& psi);
std::string describe(const PureMeasure& m);

}  // namespace ewb

#include "ewb/bounds.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>

namespace ewb {

WitnessRecord projector_record(const ProjectorWitness& pw, double measured, double std_error, std::string label) {
  return WitnessRecord{pw.op(), measured, std_error, std::move(label), pw};
}

PureMeasure pure_measure(const MeasureSpec& spec) {
  if (const auto* e = std::get_if<EofSpec>(&spec.kind)) return EofMeasure{e->bipartition, e->base};
  return GeometricMeasure{spec.solver.product};
}

std::string describe(const MeasureSpec& spec) { return describe(pure_measure(spec)); }

namespace {

void check_records(const SubsystemDims& dims, const std::vector<WitnessRecord>& records, const MeasureSpec& spec) {
  if (records.empty()) throw std::invalid_argument("at least one witness record is required");
  if (records.size() > 4) throw std::invalid_argument("at most 4 witness records are supported");
  for (const auto& rec : records) {
    if (rec.op.dim() != dims.total())
      throw DimensionError("witness '" + rec.label + "' has dimension " + std::to_string(rec.op.dim()) +
                           ", expected " + std::to_string(dims.total()));
    if (!std::isfinite(rec.measured)) throw std::invalid_argument("witness '" + rec.label + "': measured value is not finite");
    if (!(rec.std_error >= 0)) throw std::invalid_argument("witness '" + rec.label + "': stderr must be >= 0");
  }
  if (const auto* e = std::get_if<EofSpec>(&spec.kind)) checked(dims, e->bipartition);
  validate(spec.solver);
}

// No state reproduces w_k outside the spectrum of W_k, and the supremum is then +inf.
void check_spectra(const std::vector<WitnessRecord>& records) {
  for (const auto& rec : records) {
    const auto ev = eigenvalues(rec.op);
    const double tol = 1e-9 * std::max({1.0, std::abs(ev.front()), std::abs(ev.back())});
    if (rec.measured < ev.front() - tol || rec.measured > ev.back() + tol)
      throw std::invalid_argument("witness '" + rec.label + "': measured value " + std::to_string(rec.measured) +
                                  " lies outside the spectrum [" + std::to_string(ev.front()) + ", " +
                                  std::to_string(ev.back()) + "]; no state is consistent with it");
  }
}

double dot(const std::vector<double>& r, const std::vector<WitnessRecord>& records) {
  double s = 0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r[k] * records[k].measured;
  return s;
}

// Memoized Ehat on the coefficient lattice of spacing `quantum`.
class Evaluator {
 public:
  Evaluator(const SubsystemDims& dims, const std::vector<WitnessRecord>& records, const MeasureSpec& spec,
            double quantum)
      : dims_(dims), records_(records), spec_(spec), quantum_(quantum) {
    if (records.size() == 1 && spec.geometric() && records[0].projector) {
      pw_ = records[0].projector->eg_chi ? *records[0].projector : records[0].projector->with_geometric(spec.solver.product);
    }
  }

  bool analytic() const { return pw_.has_value(); }

  std::vector<double> snap(const std::vector<double>& r) const {
    std::vector<double> s(r.size());
    for (std::size_t k = 0; k < r.size(); ++k) s[k] = std::round(r[k] / quantum_) * quantum_ + 0.0;
    return s;
  }

  /// Ehat at snap(r); r must already be snapped.
  InnerSummary at(const std::vector<double>& r) {
    const auto key = keyof(r);
    {
      std::lock_guard lock(mu_);
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    InnerSummary s{r, 0.0, true, 0, false};
    if (std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; })) {
      s.analytic = true;  // Ehat(0) = 0 is attained by any product state.
    } else if (pw_) {
      s.value = projector_transform_geometric(*pw_, r[0]);
      s.analytic = true;
    } else {
      const auto res = inner_transform(dims_, combine(records_, r), spec_);
      s.value = res.value;
      s.converged = res.converged;
      s.iterations = res.iterations;
    }
    std::lock_guard lock(mu_);
    memo_.insert_or_assign(key, s);
    return s;
  }

  double g(const std::vector<double>& r_in) {
    ++calls_;
    const auto r = snap(r_in);
    return dot(r, records_) - at(r).value;
  }

  std::size_t calls() const { return calls_; }

  std::vector<InnerSummary> summaries() {
    std::lock_guard lock(mu_);
    std::vector<InnerSummary> out;
    for (const auto& [k, s] : memo_) out.push_back(s);
    return out;
  }

 private:
  std::vector<long long> keyof(const std::vector<double>& r) const {
    std::vector<long long> k(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) k[i] = std::llround(r[i] / quantum_);
    return k;
  }

  const SubsystemDims& dims_;
  const std::vector<WitnessRecord>& records_;
  const MeasureSpec& spec_;
  double quantum_;
  std::optional<ProjectorWitness> pw_;
  std::mutex mu_;
  std::map<std::vector<long long>, InnerSummary> memo_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace

HermitianOperator combine(const std::vector<WitnessRecord>& records, const std::vector<double>& r) {
  if (records.empty() || r.size() != records.size())
    throw std::invalid_argument("coefficient vector length must match the number of witnesses");
  HermitianOperator w = r[0] * records[0].op;
  for (std::size_t k = 1; k < records.size(); ++k) w = w + r[k] * records[k].op;
  return w;
}

LegendreResult inner_transform(const SubsystemDims& dims, const HermitianOperator& w, const MeasureSpec& spec) {
  if (const auto* e = std::get_if<EofSpec>(&spec.kind)) {
    SolverOptions o = spec.solver;
    o.base = e->base;
    return legendre_eof(w, dims, e->bipartition, o);
  }
  return legendre_geometric(w, dims, spec.solver);
}

BoundResult epsilon_bound(const SubsystemDims& dims, const std::vector<WitnessRecord>& records,
                          const MeasureSpec& spec, const SearchOptions& search) {
  check_records(dims, records, spec);
  check_spectra(records);
  if (!(search.box > 0) || !(search.quantum > 0)) throw std::invalid_argument("search box and quantum must be > 0");
  const std::size_t n = records.size();
  Evaluator ev(dims, records, spec, search.quantum);
  auto g = [&ev](const std::vector<double>& r) { return ev.g(r); };

  BoundResult out;
  out.analytic = ev.analytic();
  double box = search.box;
  SearchNd best;
  for (std::size_t widen = 0;; ++widen) {
    best = search_nd(g, std::vector<double>(n, -box), std::vector<double>(n, box), search);
    const bool edge = std::any_of(best.at_boundary.begin(), best.at_boundary.end(), [](bool b) { return b; });
    if (!edge || widen == search.max_widenings) break;
    box *= 2.0;
  }
  out.box = box;
  std::vector<double> r = ev.snap(best.r);
  double gr = best.g;
  out.at_boundary = std::any_of(best.at_boundary.begin(), best.at_boundary.end(), [](bool b) { return b; });

  if (out.at_boundary && search.extend_rays) {
    // The supremum lies beyond the box: double the boundary coordinates while that still pays.
    for (;;) {
      std::vector<double> next = r;
      bool over = false;
      for (std::size_t k = 0; k < n; ++k)
        if (best.at_boundary[k]) {
          next[k] *= 2.0;
          over = over || std::abs(next[k]) > search.ray_limit;
        }
      if (over) break;
      next = ev.snap(next);
      const double gn = g(next);
      const double gain = gn - gr;
      if (gain > 0) {
        r = next;
        gr = gn;
        out.ray_extended = true;
      }
      if (gain < search.ray_gain) break;
    }
  }

  const auto inner = ev.at(r);
  out.r_star = r;
  out.c_star = inner.value;
  out.epsilon = dot(r, records) - inner.value;
  out.evaluations = ev.calls();
  out.inner_results = ev.summaries();
  out.certificate_valid = std::all_of(out.inner_results.begin(), out.inner_results.end(),
                                      [](const InnerSummary& s) { return s.converged; });
  out.uncertainty = propagate_uncertainty(out, records);
  return out;
}

AffineCertificate affine_certificate(const SubsystemDims& dims, const std::vector<WitnessRecord>& records,
                                     const MeasureSpec& spec, const std::vector<double>& r) {
  check_records(dims, records, spec);
  AffineCertificate out;
  out.r = r;
  const HermitianOperator w = combine(records, r);
  if (std::all_of(r.begin(), r.end(), [](double x) { return x == 0.0; })) {
    out.c = 0.0;
  } else {
    out.inner = inner_transform(dims, w, spec);
    out.c = out.inner.value;
    out.converged = out.inner.converged;
  }
  out.bound = dot(r, records) - out.c;
  return out;
}

double propagate_uncertainty(const BoundResult& result, const std::vector<WitnessRecord>& records) {
  if (result.r_star.size() != records.size())
    throw std::invalid_argument("result and records have different lengths");
  double s = 0;
  for (std::size_t k = 0; k < records.size(); ++k) {
    const double t = result.r_star[k] * records[k].std_error;
    s += t * t;
  }
  return std::sqrt(s);
}

}  // namespace ewb

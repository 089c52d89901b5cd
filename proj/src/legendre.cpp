#include "ewb/legendre.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace ewb {

namespace {

struct RestartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  PureState psi;
  std::size_t iterations = 0;
  bool converged = false;
  std::vector<double> trace;
};

bool small_gain(double obj, double prev, double tol) { return obj - prev <= tol * std::max(1.0, std::abs(obj)); }

// Top eigenpair, reusing the previous eigenbasis as the Jacobi starting point.
struct WarmTop {
  ComplexMatrix basis;

  TopEigenpair operator()(const HermitianOperator& h, const SubsystemDims& dims) {
    const EigenSystem es = basis.rows() == h.dim() ? eig_hermitian(h, basis) : eig_hermitian(h);
    const std::size_t n = h.dim();
    std::vector<cplx> vec(n);
    for (std::size_t i = 0; i < n; ++i) vec[i] = es.vectors(i, n - 1);
    basis = es.vectors;
    return {es.values.back(), PureState::normalized(dims, std::move(vec))};
  }
};

// Max over restarts; ties go to the lower restart index.
LegendreResult merge(std::vector<RestartOutcome> outcomes) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < outcomes.size(); ++r)
    if (outcomes[r].value > outcomes[best].value) best = r;
  LegendreResult out;
  out.value = outcomes[best].value;
  out.iterations = outcomes[best].iterations;
  out.converged = outcomes[best].converged;
  out.restarts_converged = 0;
  for (auto& o : outcomes) {
    out.restart_values.push_back(o.value);
    out.restarts_converged += o.converged ? 1 : 0;
    out.traces.push_back(std::move(o.trace));
  }
  out.maximizer = std::move(outcomes[best].psi);
  return out;
}

void check_dims(const HermitianOperator& w, const SubsystemDims& dims) {
  if (w.dim() != dims.total())
    throw DimensionError("operator dimension " + std::to_string(w.dim()) + " does not match dims total " +
                         std::to_string(dims.total()));
}

PureState start_state(const HermitianOperator& w, const SubsystemDims& dims, const SolverOptions& opts, std::size_t r) {
  return r == 0 ? top_eigenpair(w, dims).vector : random_pure(dims, opts.seed, r);
}

RestartOutcome eof_restart(const HermitianOperator& ws, const SubsystemDims& dims, const BipartitionSpec& bip,
                           double scale, const SolverOptions& opts, std::size_t r) {
  RestartOutcome o;
  o.psi = start_state(ws, dims, opts, r);
  double prev = -std::numeric_limits<double>::infinity();
  WarmTop top_of;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    const HermitianOperator h = -1.0 * log_psd(reduced_density(o.psi, bip.left), opts.log_floor);
    const auto top = top_of(ws - embed(h, dims, bip.left), dims);
    o.psi = top.vector;
    const double obj = top.value + free_energy(h);
    o.trace.push_back(obj / scale);
    o.iterations = it + 1;
    if (small_gain(obj, prev, opts.tol)) {
      o.converged = true;
      break;
    }
    prev = obj;
  }
  // Gibbs: <W> - S(rho) is the supremum over H at this psi, never below the last objective.
  o.value = (ws.expectation(o.psi.amplitudes()) - eof_pure(o.psi, bip, LogBase::natural)) / scale;
  return o;
}

RestartOutcome geometric_restart(const HermitianOperator& w, const SubsystemDims& dims, const SolverOptions& opts,
                                 std::size_t r) {
  RestartOutcome o;
  o.psi = start_state(w, dims, opts, r);
  ClosestProductOptions popts = opts.product;
  popts.seed = opts.product.seed + 7919 * r;
  ProductState phi = closest_product(o.psi, popts).state;
  double prev = -std::numeric_limits<double>::infinity();
  WarmTop top_of;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    const auto top = top_of(w + HermitianOperator(phi.state().projector()), dims);
    o.psi = top.vector;
    const double ov = product_cycle(o.psi, phi);
    const double obj = w.expectation(o.psi.amplitudes()) + ov - 1.0;
    o.trace.push_back(obj);
    o.iterations = it + 1;
    if (small_gain(obj, prev, opts.tol)) {
      o.converged = true;
      break;
    }
    prev = obj;
  }
  const double local = ascend_product(o.psi, phi, popts.tol, popts.max_cycles).overlap2;
  const double global = closest_product(o.psi, popts).overlap2;
  o.value = w.expectation(o.psi.amplitudes()) - 1.0 + std::max(local, global);
  return o;
}

RestartOutcome sphere_restart(const HermitianOperator& w, const SubsystemDims& dims, const CustomMeasure& m,
                              const SolverOptions& opts, std::size_t r) {
  auto f = [&](const std::vector<cplx>& x) {
    PureState psi = PureState::normalized(dims, x);
    return w.expectation(psi.amplitudes()) - m.evaluate(psi);
  };
  RestartOutcome o;
  const PureState start = start_state(w, dims, opts, r);
  std::vector<cplx> x(start.amplitudes().begin(), start.amplitudes().end());
  double fx = f(x);
  o.trace.push_back(fx);
  const std::size_t n = x.size();
  const double h = 1e-6;
  double step = 0.1;
  for (std::size_t it = 0; it < opts.max_iters; ++it) {
    o.iterations = it + 1;
    std::vector<cplx> g(n);
    for (std::size_t j = 0; j < n; ++j)
      for (const cplx dir : {cplx(1, 0), cplx(0, 1)}) {
        auto xp = x, xm = x;
        xp[j] += h * dir;
        xm[j] -= h * dir;
        g[j] += dir * ((f(xp) - f(xm)) / (2 * h));
      }
    // Tangent projection at x.
    const double radial = inner(x, g).real();
    for (std::size_t j = 0; j < n; ++j) g[j] -= radial * x[j];
    if (norm(g) < 1e-10) {
      o.converged = true;
      break;
    }
    bool moved = false;
    while (step > 1e-12) {
      std::vector<cplx> y(n);
      for (std::size_t j = 0; j < n; ++j) y[j] = x[j] + step * g[j];
      const double ny = norm(y);
      for (auto& z : y) z /= ny;
      const double fy = f(y);
      if (fy > fx) {
        const double prev = fx;
        x = std::move(y);
        fx = fy;
        step *= 1.5;
        moved = true;
        o.trace.push_back(fx);
        if (small_gain(fx, prev, opts.tol)) o.converged = true;
        break;
      }
      step *= 0.5;
    }
    if (!moved) o.converged = true;
    if (o.converged) break;
  }
  o.psi = PureState::normalized(dims, x);
  o.value = fx;
  return o;
}

template <class Fn>
LegendreResult run_restarts(const SolverOptions& opts, Fn&& restart) {
  const std::size_t starts = opts.restarts + 1;
  std::vector<RestartOutcome> outcomes(starts);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t r = 0; r < starts; ++r) outcomes[r] = restart(r);
  return merge(std::move(outcomes));
}

}  // namespace

void validate(const SolverOptions& opts) {
  if (!(opts.tol > 0)) throw std::invalid_argument("solver tol must be > 0");
  if (opts.max_iters < 1) throw std::invalid_argument("solver max_iters must be >= 1");
  if (!(opts.log_floor > 0)) throw std::invalid_argument("solver log_floor must be > 0");
}

HermitianOperator ProjectorWitness::op() const {
  return alpha * HermitianOperator::identity(chi.size()) - HermitianOperator(chi.projector());
}

ProjectorWitness ProjectorWitness::with_geometric(const ClosestProductOptions& opts) const {
  ProjectorWitness out = *this;
  out.eg_chi = geometric_pure(chi, opts);
  return out;
}

double free_energy(const HermitianOperator& h, LogBase base) {
  const auto ev = eigenvalues(h);
  const double c = log_scale(base);
  const double m = ev.front();
  double s = 0;
  for (double x : ev) s += std::exp(-(x - m) * c);
  return m - std::log(s) / c;
}

LegendreResult legendre_eof(const HermitianOperator& w, const SubsystemDims& dims, const BipartitionSpec& bip_in,
                            const SolverOptions& opts) {
  validate(opts);
  check_dims(w, dims);
  const BipartitionSpec bip = checked(dims, bip_in);
  // Base two: Ehat_2(W) = Ehat_e(W ln 2) / ln 2.
  const double scale = log_scale(opts.base);
  const HermitianOperator ws = scale * w;
  return run_restarts(opts, [&](std::size_t r) { return eof_restart(ws, dims, bip, scale, opts, r); });
}

LegendreResult legendre_geometric(const HermitianOperator& w, const SubsystemDims& dims, const SolverOptions& opts) {
  validate(opts);
  check_dims(w, dims);
  if (dims.parties() < 2) throw DimensionError("geometric measure needs at least two parties");
  return run_restarts(opts, [&](std::size_t r) { return geometric_restart(w, dims, opts, r); });
}

LegendreResult legendre_roof(const HermitianOperator& w, const SubsystemDims& dims, const PureMeasure& measure,
                             const SolverOptions& opts) {
  struct Visitor {
    const HermitianOperator& w;
    const SubsystemDims& dims;
    const SolverOptions& opts;
    LegendreResult operator()(const EofMeasure& e) const {
      SolverOptions o = opts;
      o.base = e.base;
      return legendre_eof(w, dims, e.bipartition, o);
    }
    LegendreResult operator()(const GeometricMeasure& g) const {
      SolverOptions o = opts;
      o.product = g.options;
      return legendre_geometric(w, dims, o);
    }
    LegendreResult operator()(const CustomMeasure& c) const {
      validate(opts);
      check_dims(w, dims);
      return run_restarts(opts, [&](std::size_t r) { return sphere_restart(w, dims, c, opts, r); });
    }
  };
  return std::visit(Visitor{w, dims, opts}, measure);
}

double projector_transform_geometric(const ProjectorWitness& pw, double r) {
  if (r == 0.0) return 0.0;
  if (r > 0.0) return r * pw.alpha;
  const double eg = pw.eg_chi ? *pw.eg_chi : geometric_pure(pw.chi);
  const double a = 1.0 - r;
  const double disc = std::max(0.0, a * a + 4.0 * r * eg);
  return a / 2.0 + 0.5 * std::sqrt(disc) + r * pw.alpha - 1.0;
}

}  // namespace ewb

#include "ewb/search.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ewb {

namespace {

constexpr double kTie = 1e-10;
// Refinement ties: a coarse tie would cost sqrt(kTie) in r on a quadratic peak.
constexpr double kFineTie = 1e-13;

double tie_tol(double g, double rel = kTie) { return rel * std::max(1.0, std::abs(g)); }

bool better(double ga, double ra, double gb, double rb, double rel = kTie) {
  const double tol = tie_tol(gb, rel);
  if (ga > gb + tol) return true;
  if (ga < gb - tol) return false;
  return std::abs(ra) < std::abs(rb);
}

void check_options(const SearchOptions& o) {
  if (o.grid < 3 || o.local_grid < 3) throw std::invalid_argument("search grid needs at least 3 points");
  if (!(o.width > 0)) throw std::invalid_argument("search width must be > 0");
}

Search1d search_1d_impl(const Objective1d& g, double lo, double hi, std::size_t points, const SearchOptions& opts) {
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi))
    throw std::invalid_argument("search_1d needs a finite interval with lo < hi");
  check_options(opts);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> xs(points), gs(points);
  for (std::size_t i = 0; i < points; ++i) xs[i] = i + 1 == points ? hi : lo + step * static_cast<double>(i);
  const long n = static_cast<long>(points);
#pragma omp parallel for schedule(dynamic) if (opts.parallel)
  for (long i = 0; i < n; ++i) gs[i] = g(xs[i]);

  std::size_t best = 0;
  for (std::size_t i = 1; i < points; ++i)
    if (better(gs[i], xs[i], gs[best], xs[best])) best = i;

  Search1d out{xs[best], gs[best], false, points};
  auto consider = [&](double x, double gx) {
    if (better(gx, x, out.g, out.r, kFineTie)) {
      out.r = x;
      out.g = gx;
    }
  };

  // Golden section on the bracket around the best grid point.
  double a = xs[best > 0 ? best - 1 : 0];
  double b = xs[std::min(best + 1, points - 1)];
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double gc = g(c), gd = g(d);
  out.evaluations += 2;
  consider(c, gc);
  consider(d, gd);
  while (b - a > opts.width) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - inv_phi * (b - a);
      gc = g(c);
      consider(c, gc);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + inv_phi * (b - a);
      gd = g(d);
      consider(d, gd);
    }
    ++out.evaluations;
  }
  // The end points of the final bracket matter when the optimum sits on an edge.
  for (double x : {a, b}) {
    if (x == lo || x == hi) {
      const auto it = std::find(xs.begin(), xs.end(), x);
      consider(x, it != xs.end() ? gs[it - xs.begin()] : g(x));
    }
  }
  // An edge whose value ties the optimum means the supremum may lie beyond it.
  out.at_boundary = gs.front() >= out.g - tie_tol(out.g) || gs.back() >= out.g - tie_tol(out.g);
  return out;
}

}  // namespace

Search1d search_1d(const Objective1d& g, double lo, double hi, const SearchOptions& opts) {
  return search_1d_impl(g, lo, hi, opts.grid, opts);
}

SearchNd search_nd(const ObjectiveNd& g, const std::vector<double>& lo, const std::vector<double>& hi,
                   const SearchOptions& opts) {
  const std::size_t n = lo.size();
  if (n == 0 || hi.size() != n) throw std::invalid_argument("search_nd needs matching, nonempty bounds");
  for (std::size_t k = 0; k < n; ++k)
    if (!(lo[k] < hi[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k]))
      throw std::invalid_argument("search_nd needs a finite box with lo < hi");

  SearchNd out;
  out.r.resize(n);
  for (std::size_t k = 0; k < n; ++k) out.r[k] = std::clamp(0.0, lo[k], hi[k]);
  out.g = g(out.r);
  out.evaluations = 1;
  std::vector<double> moved(n, 0.0);

  for (out.passes = 0; out.passes < opts.max_passes;) {
    const double start = out.g;
    for (std::size_t k = 0; k < n; ++k) {
      auto line = [&, k](double x) {
        std::vector<double> r = out.r;
        r[k] = x;
        return g(r);
      };
      Search1d best;
      if (out.passes == 0) {
        best = search_1d_impl(line, lo[k], hi[k], opts.grid, opts);
        out.evaluations += best.evaluations;
      } else {
        double half = std::max(4.0 * std::abs(moved[k]), 1e-3);
        for (;;) {
          const double a = std::max(lo[k], out.r[k] - half), b = std::min(hi[k], out.r[k] + half);
          best = search_1d_impl(line, a, b, opts.local_grid, opts);
          out.evaluations += best.evaluations;
          const bool edge = (best.r - a <= opts.width && a > lo[k]) || (b - best.r <= opts.width && b < hi[k]);
          if (!edge) break;
          half *= 4.0;
        }
      }
      if (best.g > out.g) {
        moved[k] = best.r - out.r[k];
        out.r[k] = best.r;
        out.g = best.g;
      } else {
        moved[k] = 0.0;
      }
    }
    ++out.passes;
    if (n == 1 || out.g - start < opts.nd_gain) break;
  }
  out.at_boundary.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (const double edge : {lo[k], hi[k]}) {
      std::vector<double> r = out.r;
      r[k] = edge;
      const double ge = r == out.r ? out.g : g(r);
      ++out.evaluations;
      if (ge >= out.g - tie_tol(out.g)) out.at_boundary[k] = true;
    }
  }
  return out;
}

}  // namespace ewb

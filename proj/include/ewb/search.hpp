#pragma once

// Maximization of concave functions of the witness coefficients r.

#include <cstddef>
#include <functional>
#include <vector>

namespace ewb {

struct SearchOptions {
  std::size_t grid = 101;        // coarse grid points per 1-D search
  double width = 1e-6;           // golden-section bracket width
  double nd_gain = 1e-8;         // coordinate-ascent stop: gain over a full pass
  std::size_t max_passes = 50;
  std::size_t local_grid = 11;   // grid points for the local 1-D searches after the first pass
  double box = 50.0;             // initial box [-box, box]^n
  std::size_t max_widenings = 3; // box doubles up to 2^max_widenings times
  bool extend_rays = true;       // follow boundary optima outward after the last widening
  double ray_gain = 1e-9;
  double ray_limit = 1e8;
  double quantum = 1e-9;         // coefficient rounding for memoization
  bool parallel = true;          // evaluate grid points concurrently
};

struct Search1d {
  double r = 0;
  double g = 0;
  bool at_boundary = false;
  std::size_t evaluations = 0;
};

struct SearchNd {
  std::vector<double> r;
  double g = 0;
  std::vector<bool> at_boundary;
  std::size_t passes = 0;
  std::size_t evaluations = 0;
};

using Objective1d = std::function<double(double)>;
using ObjectiveNd = std::function<double(const std::vector<double>&)>;

/// Coarse grid over [lo, hi], then golden-section refinement around the best
/// grid point. Values within 1e-10 relative count as ties and resolve toward
/// the smaller |r|. `g` must be safe to call concurrently when opts.parallel.
Search1d search_1d(const Objective1d& g, double lo, double hi, const SearchOptions& opts = {});

/// Coordinate ascent from the origin: the first pass scans every coordinate
/// over the full box, later passes search a local window around the current
/// point (widened whenever the optimum lands on its edge).
SearchNd search_nd(const ObjectiveNd& g, const std::vector<double>& lo, const std::vector<double>& hi,
                   const SearchOptions& opts = {});

}  // namespace ewb

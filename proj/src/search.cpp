#include "search.hpp"

#include <cmath>
#include <limits>

namespace posext::detail {
namespace {

void normalize_in_place(RealVector& x) {
  const double n = x.norm();
  if (n > 0) x /= n;
}

}  // namespace

SearchResult pattern_search(const std::function<double(const RealVector&)>& f, RealVector x0,
                            const SearchOptions& options, Rng& rng) {
  const Index dim = x0.size();
  SearchResult best;
  if (options.normalize) normalize_in_place(x0);
  best.x = x0;
  best.value = f(x0);
  best.evaluations = 1;
  if (!std::isfinite(best.value)) best.value = std::numeric_limits<double>::infinity();
  if (dim == 0) return best;

  const int n_random = options.random_directions < 0 ? static_cast<int>(dim)
                                                     : options.random_directions;
  double step = options.initial_step;
  std::vector<RealVector> directions;
  while (step > options.min_step && best.evaluations < options.max_evaluations) {
    directions.clear();
    for (Index k = 0; k < dim; ++k) directions.push_back(RealVector::Unit(dim, k));
    for (int r = 0; r < n_random; ++r) {
      RealVector d = random_real_vector(dim, rng);
      normalize_in_place(d);
      directions.push_back(d);
    }

    bool improved = false;
    for (const RealVector& d : directions) {
      for (const double sign : {1.0, -1.0}) {
        double t = sign * step;
        RealVector trial = best.x + t * d;
        if (options.normalize) normalize_in_place(trial);
        double value = f(trial);
        ++best.evaluations;
        if (!(value < best.value)) continue;
        // Expand along a successful direction while it keeps paying off.
        for (int grow = 0; grow < 8; ++grow) {
          RealVector further = best.x + 2.0 * t * d;
          if (options.normalize) normalize_in_place(further);
          const double v2 = f(further);
          ++best.evaluations;
          if (!(v2 < value)) break;
          t *= 2.0;
          trial = std::move(further);
          value = v2;
        }
        best.x = std::move(trial);
        best.value = value;
        improved = true;
        break;
      }
      if (best.evaluations >= options.max_evaluations) break;
    }
    if (!improved) step *= 0.5;
  }
  return best;
}

}  // namespace posext::detail

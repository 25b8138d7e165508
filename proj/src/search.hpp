#pragma once

#include <functional>

#include "posext/matrix.hpp"
#include "posext/random.hpp"

namespace posext::detail {

struct SearchOptions {
  double initial_step = 0.5;
  double min_step = 1e-9;
  int max_evaluations = 20000;
  int random_directions = -1;  // -1: as many as coordinates
  bool normalize = false;      // objective is scale invariant; keep |x| = 1
};

struct SearchResult {
  RealVector x;
  double value = 0.0;
  int evaluations = 0;
};

// Derivative-free compass search minimizing f, sweeping the coordinate axes
// plus fresh random directions each sweep (so kinks of nonsmooth objectives
// do not pin the iterate), halving the step when a sweep fails.
SearchResult pattern_search(const std::function<double(const RealVector&)>& f, RealVector x0,
                            const SearchOptions& options, Rng& rng);

}  // namespace posext::detail

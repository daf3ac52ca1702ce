#pragma once

#include <string>

#include "sympass/functional.hpp"
#include "sympass/rearrange.hpp"

namespace sympass {

struct RefineTolerances {
  double slope = 1e-8;
  /// Seeds whose slope exceeds this are rejected without iterating.
  double seed_slope = 1.0;
  int max_iterations = 60;
  /// Relative central-difference step for the Hessian columns.
  double fd_step = 1e-6;
  /// Factor by which a full Newton step may raise the slope and still be taken; 1 gives a monotone line search.
  double growth = 1.0;
};

struct CriticalPointRecord {
  double lambda = 0.0;
  GridFunction u;
  double energy = 0.0;
  double slope = 0.0;
  double asymmetry = 0.0;  ///< ||u - schwarz(u)||_V
  bool converged = false;
  int iterations = 0;
  std::string failure;     ///< empty on success
};

/**
 * @brief Damped Newton iteration on df(lambda; .) = 0 started from u_seed.
 *
 * The Hessian is assembled from central differences of the analytic gradient, one column group per colour of a
 * period-3 colouring of the grid (3 colours in 1D, 9 in 2D), and factored with a sparse LU. A full step is taken
 * unless it raises the slope by more than `growth`; otherwise steps are halved until the slope decreases. Divergence, a singular Hessian or a seed above the threshold yield a record with `failure` set.
 */
[[nodiscard]] CriticalPointRecord refine_to_critical(const Functional& f, double lambda, const GridFunction& u_seed,
                                                     const VNorm& norm, const RefineTolerances& tol = {});

}  // namespace sympass

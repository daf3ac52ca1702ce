#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sympass/functional.hpp"
#include "sympass/path.hpp"

/**
 * \file minimax.hpp
 *
 * @brief Mountain-pass minimax over discretised paths.
 *
 * A sweep computes every node energy and gives each interior node whose energy lies within the band of the current
 * path maximum one backtracking step along the X-Riesz gradient with its tangential component removed (Jacobi style,
 * from the pre-sweep snapshot). The moved path is redistributed by arc length; if that raises the path maximum the
 * whole batch of steps is shrunk and retried, so the sequence of sweep maxima is nonincreasing and the nodes stay
 * evenly spaced along the path.
 */

namespace sympass {

struct MinimaxConfig {
  int nodes = 65;
  int max_sweeps = 4000;
  double initial_step = 1.0;
  double shrink = 0.5;
  double armijo = 1e-4;
  double stall_tolerance = 1e-9;
  /// Consecutive sub-tolerance sweeps required to declare a stall.
  int patience = 25;
  /// Amplitude of the asymmetric interior perturbation of initial paths, relative to the endpoint maximum.
  double perturbation = 0.1;
  int restarts = 1;

  void validate() const;
};

/// Harness-level controls layered over MinimaxConfig for one descent run.
struct DescentControls {
  /// Energy band below the path maximum whose nodes move; defaults to stall_tolerance.
  std::optional<double> band;
  /// Max X-norm displacement of a node per sweep.
  std::optional<double> displacement_cap;
  /// Stop as soon as the path maximum is <= this value.
  std::optional<double> stop_at_value;
  /// Stop as soon as the argmax node has slope <= slope_target and energy in [energy_lo, energy_hi].
  std::optional<double> slope_target;
  double energy_lo = -std::numeric_limits<double>::infinity();
  double energy_hi = std::numeric_limits<double>::infinity();
};

struct MPEstimate {
  double value = 0.0;             ///< max over nodes of f(lambda; node)
  std::size_t argmax_index = 0;   ///< first node attaining the maximum
  Path path;
  bool converged = false;         ///< stalled, or a stop criterion was met, before max_sweeps
  int sweeps = 0;
  std::vector<double> trace;      ///< path maximum before the first sweep and after every sweep
  std::vector<double> restart_values;
  int restart_id = 0;
};

/// Thrown when a descent run observes an invariant it guarantees being broken.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/**
 * @brief Straight path 0 -> v with a seeded asymmetric perturbation of the interior nodes.
 *
 * v = t * profile() with t grown geometrically until f(lo; v) < 0 at the lower end of the interval, so the same v is
 * an admissible endpoint for every lambda in it. Throws std::runtime_error if no such t is found.
 */
[[nodiscard]] Path make_initial_path(const Functional& f, double lambda, const MinimaxConfig& cfg, std::uint64_t seed);

/// Mountain-pass endpoint t * profile() with f(lo; v) < 0.
[[nodiscard]] GridFunction mountain_pass_endpoint(const Functional& f);

/// Exact max over nodes and the first index attaining it.
[[nodiscard]] std::pair<double, std::size_t> path_max(const Functional& f, double lambda, const Path& path);

/// Throws std::invalid_argument unless the endpoints satisfy the family constraint at lambda.
void validate_path(const Functional& f, double lambda, const Path& path);

/// Piecewise-linear arc-length redistribution in the X norm with endpoints fixed.
[[nodiscard]] Path redistribute(const Functional& f, const Path& path);

[[nodiscard]] MPEstimate descend_path(const Functional& f, double lambda, Path path, const MinimaxConfig& cfg,
                                      const DescentControls& controls = {});

/// Best of `restarts` descents from independently seeded initial paths.
[[nodiscard]] MPEstimate mountain_pass_value(const Functional& f, double lambda, const MinimaxConfig& cfg, int restarts,
                                             std::uint64_t seed);

/**
 * @brief Endpoint-collapsing reparametrisation t -> theta(t): 0 on [0, 1/4], linear on [1/4, 3/4], 1 on [3/4, 1].
 *
 * Returns 2m - 1 nodes: floor((m - 1) / 2) leading copies of gamma(0), the m original nodes (the ramp), then the
 * remaining trailing copies of gamma(1). The ramp visits every original node, so the image and the node maximum are
 * unchanged while the outer quarters of the parameter interval collapse onto the endpoints.
 */
[[nodiscard]] Path reparametrize_collapse(const Path& path);

/// Deterministic per-stream seed derivation.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

}  // namespace sympass

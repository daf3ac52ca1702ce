#pragma once

#include <cstdint>
#include <vector>

#include "sympass/grid.hpp"
#include "sympass/path.hpp"
#include "sympass/polarizer.hpp"

/**
 * \file rearrange.hpp
 *
 * @brief Polarization, discrete Schwarz symmetrization and the greedy iterated-polarization schemes.
 *
 * Sign-changing inputs always pass through theta(u) = |u| first. Polarization is an exact permutation of node values
 * (a two-point rearrangement), so every inequality it satisfies holds to rounding. The discrete Schwarz rearrangement
 * sorts |u| in decreasing order and fills shells of equal radius from the centre outward, giving each shell the mean of
 * the values it receives.
 */

namespace sympass {

struct SymmetrizationConfig {
  int candidates = 32;        ///< random polarizers tried per greedy step
  double tolerance = 1e-3;    ///< target V-distance to the symmetric rearrangement
  int max_iterations = 500;   ///< greedy steps before giving up
  VNorm norm{};               ///< V = L^p ∩ L^pstar

  /// Throws std::invalid_argument on nonpositive fields.
  void validate() const;
};

/// Pointwise |u|: the Lipschitz retraction onto nonnegative functions (Lipschitz constant 1).
[[nodiscard]] GridFunction theta(const GridFunction& u);

/// Two-point rearrangement of |u| across the boundary of H.
[[nodiscard]] GridFunction polarize(const GridFunction& u, const Polarizer& H);

/// Apply a word H_1 H_2 ... left to right.
[[nodiscard]] GridFunction polarize(const GridFunction& u, const PolarizerWord& word);

/// Discrete radially nonincreasing rearrangement of |u| (shell-mean rule).
[[nodiscard]] GridFunction schwarz(const GridFunction& u);

struct SymmetrizationResult {
  GridFunction result;
  PolarizerWord word;
  std::vector<double> distance_trace;  ///< entry 0 is the distance of |u|, then one entry per accepted polarizer
  bool reached = false;                ///< final distance <= tolerance
};

/**
 * @brief Greedy iterated polarization towards schwarz(u).
 *
 * Each step draws `candidates` compatible polarizers and accepts the one with the largest strict decrease of the
 * V-distance to schwarz(u). When no draw improves, the whole compatible pool is scanned in order. The scheme stops when
 * the tolerance is met, no polarizer in the pool improves, or after `max_iterations` steps. The trace is nonincreasing
 * by construction.
 */
[[nodiscard]] SymmetrizationResult approximate_symmetrization(const GridFunction& u, const SymmetrizationConfig& cfg,
                                                              std::uint64_t seed);

struct CurveApproximation {
  Path path;
  PolarizerWord word;           ///< shared word; word[0] is H0
  double max_distance = 0.0;    ///< max over the marked nodes of ||tilde gamma(t) - gamma(t)*||_V
};

/**
 * @brief Shared-word symmetric approximation of a curve of nonnegative functions.
 *
 * Endpoints receive H0 only. Interior nodes receive H0 followed by one greedy word, built with the same draw-then-scan
 * rule as approximate_symmetrization, chosen to bring every node listed in `marked` within `delta` of its Schwarz
 * rearrangement. If that target is not met within the iteration budget the
 * returned path has approximation_failed set.
 *
 * Throws std::invalid_argument if a node is negative somewhere, `marked` contains an endpoint index, or an index is
 * out of range.
 */
[[nodiscard]] CurveApproximation approximate_curve(const Path& path, const std::vector<std::size_t>& marked,
                                                   const Polarizer& H0, double delta, const SymmetrizationConfig& cfg,
                                                   std::uint64_t seed);

}  // namespace sympass

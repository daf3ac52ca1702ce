#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sympass/energy.hpp"
#include "sympass/minimax.hpp"
#include "sympass/rearrange.hpp"
#include "sympass/refine.hpp"

/**
 * \file trick.hpp
 *
 * @brief The monotonicity-trick harness.
 *
 * scan_c tabulates the minimax value over a lambda grid; select_denjoy_points keeps the grid points whose left
 * difference quotients stay below a cap; extract_sbps runs the constructive delta = 1/j loop at one such point and
 * harvests an almost-symmetric bounded Palais-Smale sequence; corollary_sequence refines harvested points into
 * symmetric critical points along an increasing lambda sequence.
 */

namespace sympass {

struct ScanConfig {
  std::vector<double> lambda_grid;
  /// Number w of ladder points below lambda0 whose difference quotients are checked.
  int quotient_window = 3;
  double q_cap = 25.0;
  int j_max = 16;
  std::vector<double> lambda0{1.0};
  std::uint64_t seed = 0;
  MinimaxConfig minimax{};
  SymmetrizationConfig symmetrization{};

  /// Throws std::invalid_argument on an empty or non-increasing grid, points outside the interval, w < 2 or j_max < 1.
  void validate(const Functional& f) const;
};

struct ScanRow {
  double lambda = 0.0;
  double c = 0.0;            ///< NaN when the minimax run failed
  bool converged = false;
  double dispersion = 0.0;   ///< (max - min) / |min| over restart values
  int sweeps = 0;
  std::size_t argmax_index = 0;
  int restart_id = 0;
  std::string failure;
};

struct QuotientRow {
  double lambda_h = 0.0;
  double lambda0 = 0.0;
  double quotient = 0.0;     ///< (c(lambda_h) - c(lambda0)) / (lambda0 - lambda_h)
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::vector<QuotientRow> quotients;
  bool monotone = true;      ///< c(lambda_{k+1}) <= c(lambda_k) + stall_tolerance over successful rows
  double tolerance = 0.0;
};

/// One minimax estimate per grid point, parallel over points with `jobs` workers; failures are recorded per row.
[[nodiscard]] ScanResult scan_c(const Functional& f, const ScanConfig& cfg, int jobs = 1);

struct DenjoyPoint {
  double lambda0 = 0.0;
  double q_witness = 0.0;    ///< max observed quotient, clipped below at 0
};

/// Grid points with `quotient_window` successful left neighbours whose quotients are all <= q_cap.
[[nodiscard]] std::vector<DenjoyPoint> select_denjoy_points(const ScanResult& scan, const ScanConfig& cfg);

/// lambda0 - 2^-h for h = 1, 2, ... up to `count` points inside [lo, lambda0).
[[nodiscard]] std::vector<double> lambda_ladder(double lambda0, int count, double lo);

struct SbpsRecord {
  int j = 0;
  int h = 0;                 ///< ladder index used (1-based); 0 if none qualified
  double lambda_h = 0.0;
  std::string hash;          ///< FNV-1a of the node values
  double energy = 0.0;
  double slope = 0.0;
  double xnorm = 0.0;
  double asymmetry = 0.0;    ///< ||u_j - schwarz(u_j)||_V
  bool stalled = false;      ///< descent stopped before the sweep budget
  bool approximation_failed = false;
  bool accepted = false;     ///< stalled and slope <= 10 / sqrt(j); the energy band is checked by the verdicts
  int sweeps = 0;
  std::string failure;
};

struct PSVerdicts {
  bool energies_in_band = false;
  bool bounded = false;
  std::optional<bool> asymmetry_decay;  ///< nullopt when the fit has insufficient data
  bool final_slope = false;
};

struct PSReport {
  double lambda0 = 0.0;
  double c_estimate = 0.0;
  double a0 = 0.0;           ///< max(f(lambda0; 0), f(lambda0; v))
  double omega = 0.0;        ///< (c_estimate - a0) / 4
  bool denjoy_ok = false;
  std::vector<QuotientRow> quotients;
  std::vector<double> ladder;
  std::vector<double> ladder_c;
  std::vector<SbpsRecord> sequence;
  std::optional<double> decay_exponent;
  int decay_points = 0;
  double norm_bound = 0.0;   ///< M(lambda0) witnessed by check_h3
  double bound_constant = 0.0;
  double slope_tolerance = 0.0;
  PSVerdicts verdicts;
  std::vector<GridFunction> harvested;  ///< u_j for every record that produced one, in sequence order
};

/// Least-squares slope of log y against log x over points with y > 0; nullopt with fewer than three points.
[[nodiscard]] std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

/// FNV-1a hash of the raw bytes of the node values, as 16 hex digits.
[[nodiscard]] std::string function_hash(const GridFunction& u);

/**
 * @brief The delta = 1/j loop at lambda0 on the ladder `lambda_h` (strictly increasing, below lambda0).
 *
 * Per j: the first ladder point with lambda0 - lambda_h <= 1/j; a fresh seeded path descended at lambda_h until its
 * maximum is within lambda0 - lambda_h of c(lambda_h); theta and the collapse reparametrisation; the shared-word curve
 * approximation with delta = lambda0 - lambda_h on the band set; descent at lambda0 with band 1/j, displacement cap
 * sqrt(1/j) and stop at slope 2 sqrt(1/j) inside the 2/j energy band; harvest of the path argmax.
 *
 * Throws std::invalid_argument if the ladder is not strictly increasing below lambda0.
 */
[[nodiscard]] PSReport extract_sbps(const Functional& f, double lambda0, const std::vector<double>& lambda_h,
                                    const ScanConfig& cfg);

struct CorollaryConfig {
  bool enabled = true;
  double sigma = 0.5;
  int points = 6;
  int j_max = 4;
  RefineTolerances refine{};
  double symmetry_tolerance = 1e-3;
};

struct ChainCheck {
  double asymmetry = 0.0;      ///< ||u - u*||_V of the final refined point
  double distance = 0.0;       ///< ||u - u_j||_V
  double seed_asymmetry = 0.0; ///< ||u_j - u_j*||_V
  bool holds = false;          ///< asymmetry <= 2 distance + seed_asymmetry
};

struct CorollaryReport {
  std::vector<double> lambdas;
  std::vector<CriticalPointRecord> records;
  std::vector<PSReport> reports;
  double sup_norm = 0.0;       ///< sup over records of ||u||_X
  std::vector<ChainCheck> chain;
  bool all_refined = false;
  bool all_symmetric = false;
};

/**
 * @brief Increasing lambda sequence in [1 - sigma, 1]: extract_sbps and refine_to_critical at each point.
 *
 * Throws std::invalid_argument if fewer than two points are requested or the interval does not contain [1 - sigma, 1].
 */
[[nodiscard]] CorollaryReport corollary_sequence(const Functional& f, const CorollaryConfig& cc, const ScanConfig& cfg,
                                                 int jobs = 1);

/// Same with an explicit lambda sequence; throws std::invalid_argument("lambda sequence not increasing") otherwise.
[[nodiscard]] CorollaryReport corollary_sequence(const Functional& f, const std::vector<double>& lambdas,
                                                 const CorollaryConfig& cc, const ScanConfig& cfg, int jobs = 1);

/// Runs fn(0..count-1) on up to `jobs` threads; results are stored by index, the first exception by index is rethrown.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn);

}  // namespace sympass

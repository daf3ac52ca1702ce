#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sympass/energy.hpp"
#include "sympass/grid.hpp"
#include "sympass/minimax.hpp"
#include "sympass/rearrange.hpp"
#include "sympass/trick.hpp"

namespace sympass {

/// Malformed or invalid configuration document.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::uint64_t seed = 0x5eed;
  std::string output_dir = "sympass-out";
  Domain domain{1, 8.0, 129};
  EnergySpec energy{};
  MinimaxConfig minimax{};
  SymmetrizationConfig symmetrization{};
  ScanConfig scan{};            ///< scan.minimax, scan.symmetrization and scan.seed mirror the fields above
  CorollaryConfig corollary{};
};

/// Defaults: 1D domain of half-width 8 with 129 nodes, the cubic model on [0.25, 1], eight scan points in [0.5, 1].
[[nodiscard]] RunConfig default_config();

/**
 * @brief Parse a JSON document over the defaults.
 *
 * Every section is optional; unknown keys, wrong types and values failing validation raise ConfigError.
 * Top-level keys: seed, output_dir, domain, energy, minimax, symmetrization, scan, corollary.
 */
[[nodiscard]] RunConfig parse_config(const std::string& json_text);

[[nodiscard]] RunConfig load_config(const std::string& path);

/// Canonical JSON echo of a configuration (sorted keys), used in report headers.
[[nodiscard]] std::string to_json(const RunConfig& cfg);

}  // namespace sympass

#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "sympass/grid.hpp"

namespace sympass {

/**
 * @brief A closed half-space H = {x : alpha . x <= beta} with 0 in H, restricted to grid-compatible hyperplanes.
 *
 * Stored exactly in index units: an integer normal `a` with components in {-1, 0, 1} and a non-negative integer
 * `twice_offset` k, so that H = {c : 2 a.c <= k} for centred node offsets c. Axis normals allow every k (node- and
 * midpoint-aligned boundaries); diagonal normals (2D only) need k even so that the mirror of a node is a node.
 */
class Polarizer {
 public:
  /// Throws std::invalid_argument for a zero normal, components outside {-1,0,1}, k < 0, or odd k on a diagonal.
  Polarizer(Offset normal, int twice_offset);

  /// 1D half-line {x <= k h / 2} (sign = +1) or {x >= -k h / 2} (sign = -1).
  static Polarizer half_line(int sign, int twice_offset) { return Polarizer({sign, 0}, twice_offset); }

  [[nodiscard]] const Offset& normal() const noexcept { return normal_; }
  [[nodiscard]] int twice_offset() const noexcept { return k_; }
  [[nodiscard]] bool is_diagonal() const noexcept { return normal_[0] != 0 && normal_[1] != 0; }

  /// Unit normal alpha.
  [[nodiscard]] std::array<double, 2> unit_normal() const noexcept;
  /// Physical offset beta >= 0 on a grid with the given spacing.
  [[nodiscard]] double offset(double spacing) const noexcept;

  [[nodiscard]] bool contains(Offset c) const noexcept { return 2 * side(c) <= k_; }
  [[nodiscard]] bool on_boundary(Offset c) const noexcept { return 2 * side(c) == k_; }
  [[nodiscard]] Offset reflect(Offset c) const noexcept;

  /// True if every node mirror is a node (1D domains also need a vanishing second normal component).
  [[nodiscard]] bool compatible_with(const Domain& domain) const noexcept;

  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const Polarizer&, const Polarizer&) = default;

 private:
  [[nodiscard]] int side(Offset c) const noexcept { return normal_[0] * c[0] + normal_[1] * c[1]; }

  Offset normal_;
  int k_;
};

using PolarizerWord = std::vector<Polarizer>;

/// Every compatible polarizer whose boundary meets the cube, in a fixed order.
[[nodiscard]] std::vector<Polarizer> compatible_polarizers(const Domain& domain);

/// Uniform draw from compatible_polarizers(domain).
[[nodiscard]] Polarizer random_polarizer(const std::vector<Polarizer>& pool, std::mt19937_64& rng);

}  // namespace sympass

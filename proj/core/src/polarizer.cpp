#include "sympass/polarizer.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include <fmt/core.h>

namespace sympass {

Polarizer::Polarizer(Offset normal, int twice_offset) : normal_(normal), k_(twice_offset) {
  if (normal[0] == 0 && normal[1] == 0) {
    throw std::invalid_argument("polarizer normal must be nonzero");
  }
  if (std::abs(normal[0]) > 1 || std::abs(normal[1]) > 1) {
    throw std::invalid_argument("polarizer normal components must lie in {-1, 0, 1}");
  }
  if (twice_offset < 0) {
    throw std::invalid_argument("polarizer must contain the origin (offset >= 0)");
  }
  if (is_diagonal() && twice_offset % 2 != 0) {
    throw std::invalid_argument("incompatible polarizer");
  }
}

std::array<double, 2> Polarizer::unit_normal() const noexcept {
  const double len = is_diagonal() ? std::sqrt(2.0) : 1.0;
  return {normal_[0] / len, normal_[1] / len};
}

double Polarizer::offset(double spacing) const noexcept {
  const double len = is_diagonal() ? std::sqrt(2.0) : 1.0;
  return 0.5 * k_ * spacing / len;
}

Offset Polarizer::reflect(Offset c) const noexcept {
  // c' = c - 2 (a.c - k/2) a / |a|^2, exact in integers for compatible polarizers.
  const int s = side(c);
  if (is_diagonal()) {
    const int t = s - k_ / 2;
    return {c[0] - t * normal_[0], c[1] - t * normal_[1]};
  }
  const int t = 2 * s - k_;
  return {c[0] - t * normal_[0], c[1] - t * normal_[1]};
}

bool Polarizer::compatible_with(const Domain& domain) const noexcept {
  if (domain.dimension() == 1 && normal_[1] != 0) {
    return false;
  }
  return !is_diagonal() || k_ % 2 == 0;
}

std::string Polarizer::to_string() const { return fmt::format("{} {} {}", normal_[0], normal_[1], k_); }

std::vector<Polarizer> compatible_polarizers(const Domain& domain) {
  const int reach = domain.points_per_axis() - 1;  // max of a.c over the cube for axis normals, times 2
  std::vector<Polarizer> pool;
  if (domain.dimension() == 1) {
    for (int sign : {1, -1}) {
      for (int k = 0; k <= reach; ++k) {
        pool.emplace_back(Offset{sign, 0}, k);
      }
    }
    return pool;
  }
  const Offset axes[] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}};
  for (const auto& a : axes) {
    for (int k = 0; k <= reach; ++k) {
      pool.emplace_back(a, k);
    }
  }
  const Offset diagonals[] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (const auto& a : diagonals) {
    for (int k = 0; k <= 2 * reach; k += 2) {
      pool.emplace_back(a, k);
    }
  }
  return pool;
}

Polarizer random_polarizer(const std::vector<Polarizer>& pool, std::mt19937_64& rng) {
  if (pool.empty()) {
    throw std::invalid_argument("empty polarizer pool");
  }
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  return pool[pick(rng)];
}

}  // namespace sympass

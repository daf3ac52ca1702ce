#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

/**
 * \file grid.hpp
 *
 * @brief Symmetric Cartesian grids, sampled functions and the discrete norms used throughout.
 *
 * A Domain is the centred cube [-L, L]^N (N = 1 or 2) sampled with an odd number of points per axis, so that the origin is
 * a node and every reflection through a coordinate hyperplane containing the origin maps nodes onto nodes. Functions are
 * extended by zero outside the cube, which is how the zero-trace (Dirichlet) convention enters the difference operators.
 */

namespace sympass {

class Polarizer;

/// Integer node coordinates measured from the centre node, in units of the spacing.
using Offset = std::array<int, 2>;

class Domain {
 public:
  /// Throws std::invalid_argument unless dimension is 1 or 2, half_width > 0, and points_per_axis is odd and >= 3.
  Domain(int dimension, double half_width, int points_per_axis);

  [[nodiscard]] int dimension() const noexcept { return dim_; }
  [[nodiscard]] double half_width() const noexcept { return half_width_; }
  [[nodiscard]] int points_per_axis() const noexcept { return n_; }
  [[nodiscard]] double spacing() const noexcept { return h_; }
  /// h^N, the weight of every node in the midpoint quadrature.
  [[nodiscard]] double cell_volume() const noexcept { return cell_; }
  [[nodiscard]] std::size_t size() const noexcept { return size_; }
  /// Index of the centre node along one axis, (n - 1) / 2.
  [[nodiscard]] int centre() const noexcept { return (n_ - 1) / 2; }

  [[nodiscard]] Offset offset(std::size_t node) const noexcept;
  /// Node at the given centred offset, or nullopt if it lies outside the cube.
  [[nodiscard]] std::optional<std::size_t> node_at(Offset c) const noexcept;
  [[nodiscard]] std::size_t centre_node() const noexcept;
  /// Squared distance from the origin in index units (exact).
  [[nodiscard]] long radius_sq_index(std::size_t node) const noexcept;
  /// Euclidean distance of the node from the origin.
  [[nodiscard]] double radius(std::size_t node) const noexcept;
  /// Physical coordinate of the node along `axis`.
  [[nodiscard]] double coordinate(std::size_t node, int axis) const noexcept;

  friend bool operator==(const Domain&, const Domain&) = default;

 private:
  int dim_;
  double half_width_;
  int n_;
  double h_;
  double cell_;
  std::size_t size_;
};

/// A real function sampled at the nodes of a Domain (zero outside the cube).
class GridFunction {
 public:
  explicit GridFunction(Domain domain);
  GridFunction(Domain domain, std::vector<double> values);

  [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
  [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] std::span<double> values() noexcept { return values_; }

  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  /// Value at a centred offset, zero outside the cube.
  [[nodiscard]] double at(Offset c) const noexcept;

  [[nodiscard]] bool all_finite() const noexcept;
  [[nodiscard]] bool is_zero() const noexcept;
  [[nodiscard]] double max_abs() const noexcept;

  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  GridFunction& operator*=(double s) noexcept;
  /// this += s * x
  GridFunction& axpy(double s, const GridFunction& x);

  friend GridFunction operator+(GridFunction a, const GridFunction& b) { return a += b; }
  friend GridFunction operator-(GridFunction a, const GridFunction& b) { return a -= b; }
  friend GridFunction operator*(double s, GridFunction a) { return a *= s; }
  friend bool operator==(const GridFunction&, const GridFunction&) = default;

 private:
  Domain domain_;
  std::vector<double> values_;
};

/// Plain Euclidean pairing sum_i a_i b_i (no quadrature weight); pairs a covector with a vector.
[[nodiscard]] double dot(const GridFunction& a, const GridFunction& b);

/// Exponents of the intersection space V = L^p ∩ L^pstar.
struct VNorm {
  double p = 2.0;
  double pstar = 4.0;
};

/// (sum |u_i|^p h^N)^(1/p). Throws std::domain_error("non-finite input") on NaN/inf values.
[[nodiscard]] double lp_norm(const GridFunction& u, double p);

/// max(||u||_p, ||u||_pstar).
[[nodiscard]] double v_norm(const GridFunction& u, double p, double pstar);
[[nodiscard]] inline double v_norm(const GridFunction& u, VNorm v) { return v_norm(u, v.p, v.pstar); }
[[nodiscard]] double v_distance(const GridFunction& u, const GridFunction& v, VNorm norm);

/// (sum |grad_h u|^p h^N)^(1/p) with forward differences and zero ghost nodes on both sides of every axis.
[[nodiscard]] double sobolev_seminorm(const GridFunction& u, double p);

/// (|u|_{1,p}^p + ||u||_p^p)^(1/p), the norm of X = W^{1,p}_0.
[[nodiscard]] double sobolev_norm(const GridFunction& u, double p);

/// Mirror image of `node` across the boundary of H, or nullopt when the image falls outside the cube (where the
/// function is zero). Throws std::invalid_argument("incompatible polarizer") if H does not map nodes to nodes.
[[nodiscard]] std::optional<std::size_t> reflect(const Domain& domain, std::size_t node, const Polarizer& H);

/**
 * @brief Estimate K with ||u||_V <= K ||u||_X on the grid.
 *
 * Maximises the ratio over unit coordinate vectors, a family of centred and shifted Gaussians, and `trials` random
 * functions, then doubles the maximum.
 */
[[nodiscard]] double embed_constant(const Domain& domain, double p, double pstar, std::uint64_t seed = 0x5eed,
                                    int trials = 1000);

/// Forward-difference stencil over the zero-extended grid: one entry per extended node m in {-1, ..., n-1}^N.
struct StencilPoint {
  std::ptrdiff_t self;                 ///< node index of m, or -1 for a ghost
  std::array<std::ptrdiff_t, 2> next;  ///< node index of m + e_d, or -1 for a ghost (unused axes are -1)
};

[[nodiscard]] std::vector<StencilPoint> forward_stencil(const Domain& domain);

}  // namespace sympass

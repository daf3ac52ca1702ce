#include "sympass/grid.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "sympass/polarizer.hpp"

namespace sympass {

Domain::Domain(int dimension, double half_width, int points_per_axis)
    : dim_(dimension), half_width_(half_width), n_(points_per_axis) {
  if (dimension != 1 && dimension != 2) {
    throw std::invalid_argument("domain dimension must be 1 or 2");
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw std::invalid_argument("domain half_width must be positive");
  }
  if (points_per_axis < 3 || points_per_axis % 2 == 0) {
    throw std::invalid_argument("points_per_axis must be odd and >= 3");
  }
  h_ = 2.0 * half_width / (points_per_axis - 1);
  cell_ = dim_ == 1 ? h_ : h_ * h_;
  size_ = dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
}

Offset Domain::offset(std::size_t node) const noexcept {
  const int c = centre();
  if (dim_ == 1) {
    return {static_cast<int>(node) - c, 0};
  }
  const auto i = static_cast<int>(node / static_cast<std::size_t>(n_));
  const auto j = static_cast<int>(node % static_cast<std::size_t>(n_));
  return {i - c, j - c};
}

std::optional<std::size_t> Domain::node_at(Offset c) const noexcept {
  const int m = centre();
  if (c[0] < -m || c[0] > m) {
    return std::nullopt;
  }
  if (dim_ == 1) {
    if (c[1] != 0) {
      return std::nullopt;
    }
    return static_cast<std::size_t>(c[0] + m);
  }
  if (c[1] < -m || c[1] > m) {
    return std::nullopt;
  }
  return static_cast<std::size_t>(c[0] + m) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(c[1] + m);
}

std::size_t Domain::centre_node() const noexcept { return *node_at({0, 0}); }

long Domain::radius_sq_index(std::size_t node) const noexcept {
  const auto c = offset(node);
  return static_cast<long>(c[0]) * c[0] + static_cast<long>(c[1]) * c[1];
}

double Domain::radius(std::size_t node) const noexcept {
  return h_ * std::sqrt(static_cast<double>(radius_sq_index(node)));
}

double Domain::coordinate(std::size_t node, int axis) const noexcept {
  return h_ * offset(node)[static_cast<std::size_t>(axis)];
}

// ---------------------------------------------------------------------------------------------------------------------

GridFunction::GridFunction(Domain domain) : domain_(domain), values_(domain.size(), 0.0) {}

GridFunction::GridFunction(Domain domain, std::vector<double> values) : domain_(domain), values_(std::move(values)) {
  if (values_.size() != domain_.size()) {
    throw std::invalid_argument("grid function length does not match its domain");
  }
}

double GridFunction::at(Offset c) const noexcept {
  const auto node = domain_.node_at(c);
  return node ? values_[*node] : 0.0;
}

bool GridFunction::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool GridFunction::is_zero() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return v == 0.0; });
}

double GridFunction::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) {
    m = std::max(m, std::abs(v));
  }
  return m;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) { return axpy(1.0, other); }

GridFunction& GridFunction::operator-=(const GridFunction& other) { return axpy(-1.0, other); }

GridFunction& GridFunction::operator*=(double s) noexcept {
  for (double& v : values_) {
    v *= s;
  }
  return *this;
}

GridFunction& GridFunction::axpy(double s, const GridFunction& x) {
  if (!(x.domain_ == domain_)) {
    throw std::invalid_argument("grid functions live on different domains");
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    values_[i] += s * x.values_[i];
  }
  return *this;
}

double dot(const GridFunction& a, const GridFunction& b) {
  if (!(a.domain() == b.domain())) {
    throw std::invalid_argument("grid functions live on different domains");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * b[i];
  }
  return s;
}

// ---------------------------------------------------------------------------------------------------------------------

namespace {

void require_finite(const GridFunction& u) {
  if (!u.all_finite()) {
    throw std::domain_error("non-finite input");
  }
}

void require_exponent(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw std::invalid_argument("norm exponent must satisfy p >= 1");
  }
}

double power_sum(std::span<const double> values, double p) {
  double s = 0.0;
  if (p == 2.0) {
    for (double v : values) {
      s += v * v;
    }
  } else {
    for (double v : values) {
      s += std::pow(std::abs(v), p);
    }
  }
  return s;
}

// sum over extended nodes of |grad_h u|^p, without the h^N weight
double gradient_power_sum(const GridFunction& u, double p) {
  const Domain& d = u.domain();
  const double inv_h = 1.0 / d.spacing();
  const auto value = [&u](std::ptrdiff_t i) { return i < 0 ? 0.0 : u[static_cast<std::size_t>(i)]; };
  double s = 0.0;
  for (const auto& sp : forward_stencil(d)) {
    const double self = value(sp.self);
    double g2 = 0.0;
    for (int axis = 0; axis < d.dimension(); ++axis) {
      const double g = (value(sp.next[static_cast<std::size_t>(axis)]) - self) * inv_h;
      g2 += g * g;
    }
    s += p == 2.0 ? g2 : std::pow(g2, 0.5 * p);
  }
  return s;
}

}  // namespace

double lp_norm(const GridFunction& u, double p) {
  require_exponent(p);
  require_finite(u);
  const double s = power_sum(u.values(), p) * u.domain().cell_volume();
  return std::pow(s, 1.0 / p);
}

double v_norm(const GridFunction& u, double p, double pstar) {
  if (!(pstar > p)) {
    throw std::invalid_argument("V norm needs pstar > p");
  }
  return std::max(lp_norm(u, p), lp_norm(u, pstar));
}

double v_distance(const GridFunction& u, const GridFunction& v, VNorm norm) { return v_norm(u - v, norm); }

double sobolev_seminorm(const GridFunction& u, double p) {
  require_exponent(p);
  require_finite(u);
  return std::pow(gradient_power_sum(u, p) * u.domain().cell_volume(), 1.0 / p);
}

double sobolev_norm(const GridFunction& u, double p) {
  require_exponent(p);
  require_finite(u);
  const double s = (gradient_power_sum(u, p) + power_sum(u.values(), p)) * u.domain().cell_volume();
  return std::pow(s, 1.0 / p);
}

std::optional<std::size_t> reflect(const Domain& domain, std::size_t node, const Polarizer& H) {
  if (!H.compatible_with(domain)) {
    throw std::invalid_argument("incompatible polarizer");
  }
  return domain.node_at(H.reflect(domain.offset(node)));
}

std::vector<StencilPoint> forward_stencil(const Domain& domain) {
  const int n = domain.points_per_axis();
  const int m = domain.centre();
  std::vector<StencilPoint> out;
  const auto idx = [&](Offset c) -> std::ptrdiff_t {
    const auto node = domain.node_at(c);
    return node ? static_cast<std::ptrdiff_t>(*node) : -1;
  };
  if (domain.dimension() == 1) {
    out.reserve(static_cast<std::size_t>(n + 1));
    for (int i = -1; i < n; ++i) {
      out.push_back({idx({i - m, 0}), {idx({i + 1 - m, 0}), -1}});
    }
    return out;
  }
  out.reserve(static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1));
  for (int i = -1; i < n; ++i) {
    for (int j = -1; j < n; ++j) {
      const Offset c{i - m, j - m};
      out.push_back({idx(c), {idx({c[0] + 1, c[1]}), idx({c[0], c[1] + 1})}});
    }
  }
  return out;
}

double embed_constant(const Domain& domain, double p, double pstar, std::uint64_t seed, int trials) {
  double best = 0.0;
  const auto consider = [&](const GridFunction& u) {
    if (u.is_zero()) {
      return;
    }
    const double x = sobolev_norm(u, p);
    if (x > 0.0) {
      best = std::max(best, v_norm(u, p, pstar) / x);
    }
  };

  for (std::size_t i = 0; i < domain.size(); ++i) {
    GridFunction e(domain);
    e[i] = 1.0;
    consider(e);
  }

  const double L = domain.half_width();
  for (double width : {0.05, 0.1, 0.2, 0.4, 0.8}) {
    for (double shift : {0.0, 0.25, 0.5}) {
      GridFunction g(domain);
      const double s = width * L;
      for (std::size_t i = 0; i < domain.size(); ++i) {
        double r2 = 0.0;
        for (int a = 0; a < domain.dimension(); ++a) {
          const double x = domain.coordinate(i, a) - (a == 0 ? shift * L : 0.0);
          r2 += x * x;
        }
        g[i] = std::exp(-r2 / (2.0 * s * s));
      }
      consider(g);
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    GridFunction u(domain);
    for (double& v : u.values()) {
      v = unif(rng);
    }
    consider(u);
  }
  return 2.0 * best;
}

}  // namespace sympass

#include "sympass/energy.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "sympass/rearrange.hpp"

namespace sympass {

double EnergySpec::critical_exponent(int dimension) const noexcept {
  if (dimension > p) {
    return dimension * p / (dimension - p);
  }
  return std::numeric_limits<double>::infinity();
}

double EnergySpec::omega(double s) const noexcept {
  if (kinetic == KineticKind::pure_power) {
    return 1.0;
  }
  const double s2 = s * s;
  return 1.0 + kinetic_gain * s2 / (1.0 + s2);
}

double EnergySpec::omega_derivative(double s) const noexcept {
  if (kinetic == KineticKind::pure_power) {
    return 0.0;
  }
  const double d = 1.0 + s * s;
  return kinetic_gain * 2.0 * s / (d * d);
}

double EnergySpec::kappa(double r) const noexcept { return kappa_rate == 0.0 ? 1.0 : std::exp(-kappa_rate * r); }

void EnergySpec::validate(int dimension) const {
  if (!(p >= 2.0) || !std::isfinite(p)) {
    throw std::invalid_argument("energy p must be >= 2");
  }
  if (!(q > p) || !(q < critical_exponent(dimension))) {
    throw std::invalid_argument("energy q must satisfy p < q < p*");
  }
  if (!(lambda_interval.lo > 0.0) || !(lambda_interval.hi > lambda_interval.lo)) {
    throw std::invalid_argument("lambda interval must satisfy 0 < lo < hi");
  }
  if (!(kinetic_gain >= 0.0)) {
    throw std::invalid_argument("kinetic gain must be >= 0");
  }
  if (!(kappa_rate >= 0.0)) {
    throw std::invalid_argument("kappa must be nonincreasing (kappa_rate >= 0)");
  }
}

VNorm v_exponents(const EnergySpec& spec, int dimension) noexcept {
  const double pstar = spec.critical_exponent(dimension);
  return {spec.p, std::isfinite(pstar) ? pstar : 2.0 * spec.p};
}

// ---------------------------------------------------------------------------------------------------------------------

struct LambdaFamily::Solver {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

LambdaFamily::LambdaFamily(EnergySpec spec, Domain domain) : LambdaFamily(spec, domain, Tag{}) {
  spec.validate(domain.dimension());
}

LambdaFamily LambdaFamily::unchecked(EnergySpec spec, Domain domain) { return LambdaFamily(spec, domain, Tag{}); }

LambdaFamily::LambdaFamily(EnergySpec spec, Domain domain, Tag)
    : Functional(domain, spec.lambda_interval), spec_(spec), stencil_(forward_stencil(domain)) {
  kappa_.resize(domain.size());
  for (std::size_t i = 0; i < domain.size(); ++i) {
    kappa_[i] = spec_.kappa(domain.radius(i));
  }

  // Gram matrix of the W^{1,2} inner product: h^N (D^T D / h^2 + I), ghost edges contribute to the diagonal only.
  const auto n = static_cast<Eigen::Index>(domain.size());
  const double cell = domain.cell_volume();
  const double w = cell / (domain.spacing() * domain.spacing());
  std::vector<Eigen::Triplet<double>> triplets;
  for (Eigen::Index i = 0; i < n; ++i) {
    triplets.emplace_back(i, i, cell);
  }
  for (const auto& sp : stencil_) {
    for (int axis = 0; axis < domain.dimension(); ++axis) {
      const auto a = sp.self;
      const auto b = sp.next[static_cast<std::size_t>(axis)];
      if (a >= 0) {
        triplets.emplace_back(a, a, w);
      }
      if (b >= 0) {
        triplets.emplace_back(b, b, w);
      }
      if (a >= 0 && b >= 0) {
        triplets.emplace_back(a, b, -w);
        triplets.emplace_back(b, a, -w);
      }
    }
  }
  Eigen::SparseMatrix<double> gram(n, n);
  gram.setFromTriplets(triplets.begin(), triplets.end());
  auto solver = std::make_shared<Solver>();
  solver->ldlt.compute(gram);
  if (solver->ldlt.info() != Eigen::Success) {
    throw std::runtime_error("failed to factor the W^{1,2} Gram matrix");
  }
  solver_ = std::move(solver);
}

namespace {

inline double value_at(const GridFunction& u, std::ptrdiff_t i) { return i < 0 ? 0.0 : u[static_cast<std::size_t>(i)]; }

inline double abs_pow(double v, double p) { return p == 2.0 ? v * v : std::pow(std::abs(v), p); }

}  // namespace

double LambdaFamily::lambda_free(const GridFunction& u) const {
  const Domain& d = domain();
  const double inv_h = 1.0 / d.spacing();
  const double p = spec_.p;
  double kinetic = 0.0;
  for (const auto& sp : stencil_) {
    const double self = value_at(u, sp.self);
    double g2 = 0.0;
    for (int axis = 0; axis < d.dimension(); ++axis) {
      const double g = (value_at(u, sp.next[static_cast<std::size_t>(axis)]) - self) * inv_h;
      g2 += g * g;
    }
    kinetic += spec_.omega(self) * (p == 2.0 ? g2 : std::pow(g2, 0.5 * p));
  }
  double mass = 0.0;
  for (double v : u.values()) {
    mass += abs_pow(v, p);
  }
  return (kinetic + mass) / p * d.cell_volume();
}

double LambdaFamily::lambda_weight(const GridFunction& u) const {
  const double q = spec_.q;
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    s += kappa_[i] * abs_pow(u[i], q);
  }
  return s / q * domain().cell_volume();
}

GridFunction LambdaFamily::lambda_free_gradient(const GridFunction& u) const {
  const Domain& d = domain();
  const double inv_h = 1.0 / d.spacing();
  const double p = spec_.p;
  GridFunction grad(d);
  for (const auto& sp : stencil_) {
    const double self = value_at(u, sp.self);
    std::array<double, 2> g{0.0, 0.0};
    double g2 = 0.0;
    for (int axis = 0; axis < d.dimension(); ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      g[a] = (value_at(u, sp.next[a]) - self) * inv_h;
      g2 += g[a] * g[a];
    }
    const double w = spec_.omega(self);
    const double gp2 = p == 2.0 ? 1.0 : std::pow(g2, 0.5 * (p - 2.0));
    for (int axis = 0; axis < d.dimension(); ++axis) {
      const auto a = static_cast<std::size_t>(axis);
      const double coef = w * gp2 * g[a] * inv_h;
      if (sp.next[a] >= 0) {
        grad[static_cast<std::size_t>(sp.next[a])] += coef;
      }
      if (sp.self >= 0) {
        grad[static_cast<std::size_t>(sp.self)] -= coef;
      }
    }
    if (sp.self >= 0 && spec_.kinetic != KineticKind::pure_power) {
      grad[static_cast<std::size_t>(sp.self)] += spec_.omega_derivative(self) * gp2 * g2 / p;
    }
  }
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = u[i];
    grad[i] += p == 2.0 ? v : std::pow(std::abs(v), p - 2.0) * v;
  }
  grad *= d.cell_volume();
  return grad;
}

GridFunction LambdaFamily::lambda_weight_gradient(const GridFunction& u) const {
  const double q = spec_.q;
  GridFunction grad(domain());
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = u[i];
    grad[i] = kappa_[i] * (q == 4.0 ? v * v * v : std::pow(std::abs(v), q - 2.0) * v) * domain().cell_volume();
  }
  return grad;
}

GridFunction LambdaFamily::riesz(const GridFunction& covector) const {
  const auto n = static_cast<Eigen::Index>(covector.size());
  Eigen::Map<const Eigen::VectorXd> rhs(covector.values().data(), n);
  Eigen::VectorXd x = solver_->ldlt.solve(rhs);
  return GridFunction(domain(), std::vector<double>(x.data(), x.data() + n));
}

double LambdaFamily::dual_norm(const GridFunction& covector) const {
  if (spec_.p == 2.0) {
    return Functional::dual_norm(covector);
  }
  return std::sqrt(dot(covector, covector) / domain().cell_volume());
}

double LambdaFamily::xnorm(const GridFunction& u) const { return sobolev_norm(u, spec_.p); }

std::string LambdaFamily::metric() const { return spec_.p == 2.0 ? "W1,2 dual (Riesz)" : "L2 representative"; }

GridFunction LambdaFamily::profile() const {
  GridFunction out(domain());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double r = domain().radius(i);
    out[i] = std::exp(-r * r);
  }
  return out;
}

double LambdaFamily::coercivity() const {
  // omega >= 1 for both kinetic kinds, so A(u) >= ||u||_X^p / p.
  return 1.0 / spec_.p;
}

// ---------------------------------------------------------------------------------------------------------------------

H4Report check_h4(const Functional& f, int trials, std::uint64_t seed, double tolerance) {
  H4Report report;
  report.trials = trials;
  report.tolerance = tolerance;
  const Domain& d = f.domain();
  const auto pool = compatible_polarizers(d);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> lam(f.interval().lo, f.interval().hi);

  const auto note = [&](const char* kind, double lambda, std::string H, double excess) {
    report.worst_excess = std::max(report.worst_excess, excess);
    if (excess > tolerance) {
      report.violations.push_back({kind, lambda, std::move(H), excess});
    }
  };

  for (int t = 0; t < trials; ++t) {
    const double amplitude = 0.5 + 2.0 * unit(rng);
    GridFunction u(d);
    for (double& v : u.values()) {
      v = amplitude * unit(rng);
    }
    const Polarizer H = random_polarizer(pool, rng);
    const double lambda = lam(rng);
    note("polarization", lambda, H.to_string(), f.value(lambda, polarize(u, H)) - f.value(lambda, u));

    GridFunction w(d);
    for (double& v : w.values()) {
      v = amplitude * (2.0 * unit(rng) - 1.0);
    }
    note("absolute value", lambda, "", f.value(lambda, theta(w)) - f.value(lambda, w));
  }
  return report;
}

H3Report check_h3(const Functional& f, double lambda, const std::vector<std::pair<double, GridFunction>>& sequence) {
  f.require_lambda(lambda);
  H3Report report;
  report.lambda = lambda;
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& [lh, u] : sequence) {
    if (!(lh > prev) || !(lh < lambda)) {
      throw std::invalid_argument("lambda_h must increase strictly towards lambda");
    }
    prev = lh;
  }

  double C = 0.0;
  for (const auto& [lh, u] : sequence) {
    const double upper = f.value(lh, u);
    const double lower = -f.value(lambda, u);
    const double quotient = (upper - f.value(lambda, u)) / (lambda - lh);
    const double weight = f.lambda_weight(u);
    report.quotients.push_back(quotient);
    if (std::abs(quotient - weight) > 1e-9 * std::max(1.0, std::abs(weight)) + 1e-12 * std::abs(upper) / (lambda - lh)) {
      report.identity_holds = false;
    }
    C = std::max({C, upper, lower, quotient});
  }
  report.bound_constant = C;
  report.norm_bound = std::pow(C * (1.0 + lambda) / f.coercivity(), 1.0 / f.power());
  for (const auto& [lh, u] : sequence) {
    const double x = f.xnorm(u);
    report.norms.push_back(x);
    if (x > report.norm_bound * (1.0 + 1e-12)) {
      report.bounded = false;
    }
  }
  return report;
}

}  // namespace sympass

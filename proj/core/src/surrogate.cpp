#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sympass/functional.hpp"

namespace sympass {

Functional::Functional(Domain domain, LambdaInterval interval) : domain_(domain), interval_(interval) {
  if (!(interval.lo > 0.0) || !(interval.hi > interval.lo)) {
    throw std::invalid_argument("lambda interval must satisfy 0 < lo < hi");
  }
}

double Functional::dual_norm(const GridFunction& covector) const {
  return std::sqrt(std::max(0.0, dot(covector, riesz(covector))));
}

void Functional::require_lambda(double lambda) const {
  if (!interval_.contains(lambda)) {
    throw std::out_of_range("lambda out of range");
  }
}

double Functional::value(double lambda, const GridFunction& u) const {
  require_lambda(lambda);
  return lambda_free(u) - lambda * lambda_weight(u);
}

GridFunction Functional::gradient(double lambda, const GridFunction& u) const {
  require_lambda(lambda);
  GridFunction g = lambda_free_gradient(u);
  g.axpy(-lambda, lambda_weight_gradient(u));
  return g;
}

double Functional::slope(double lambda, const GridFunction& u) const { return dual_norm(gradient(lambda, u)); }

// ---------------------------------------------------------------------------------------------------------------------

SurrogateFunctional::SurrogateFunctional(LambdaInterval interval) : Functional(Domain(1, 1.0, 3), interval) {}

double SurrogateFunctional::lambda_free(const GridFunction& u) const {
  double s = 0.0;
  for (double v : u.values()) {
    s += 0.5 * v * v;
  }
  return s;
}

double SurrogateFunctional::lambda_weight(const GridFunction& u) const {
  const double x = coordinate(u);
  return 0.25 * x * x * x * x;
}

GridFunction SurrogateFunctional::lambda_free_gradient(const GridFunction& u) const { return u; }

GridFunction SurrogateFunctional::lambda_weight_gradient(const GridFunction& u) const {
  GridFunction g(domain());
  const double x = coordinate(u);
  g[domain().centre_node()] = x * x * x;
  return g;
}

double SurrogateFunctional::xnorm(const GridFunction& u) const { return std::sqrt(dot(u, u)); }

GridFunction SurrogateFunctional::profile() const { return state(1.0); }

GridFunction SurrogateFunctional::state(double x) const {
  GridFunction u(domain());
  u[domain().centre_node()] = x;
  return u;
}

}  // namespace sympass

#pragma once

#include <string>

#include "sympass/grid.hpp"

namespace sympass {

/// Compact parameter interval [lo, hi] with 0 < lo < hi.
struct LambdaInterval {
  double lo = 0.25;
  double hi = 1.0;

  [[nodiscard]] bool contains(double lambda) const noexcept { return lambda >= lo && lambda <= hi; }
};

/**
 * @brief A lambda-family f(lambda; u) = A(u) - lambda B(u) with B >= 0, on grid functions.
 *
 * Everything the minimax engine, the deformation engine and the harness need goes through this interface: values,
 * Euclidean partial derivatives (a covector), the Riesz map of the X inner product used both as preconditioner and to
 * evaluate the weak slope, and the norm of X.
 */
class Functional {
 public:
  Functional(Domain domain, LambdaInterval interval);
  virtual ~Functional() = default;

  [[nodiscard]] const Domain& domain() const noexcept { return domain_; }
  [[nodiscard]] const LambdaInterval& interval() const noexcept { return interval_; }

  /// A(u), the lambda-independent part.
  [[nodiscard]] virtual double lambda_free(const GridFunction& u) const = 0;
  /// B(u) >= 0, the part multiplied by -lambda.
  [[nodiscard]] virtual double lambda_weight(const GridFunction& u) const = 0;
  [[nodiscard]] virtual GridFunction lambda_free_gradient(const GridFunction& u) const = 0;
  [[nodiscard]] virtual GridFunction lambda_weight_gradient(const GridFunction& u) const = 0;

  /// X-Riesz representative of a covector (symmetric positive definite map).
  [[nodiscard]] virtual GridFunction riesz(const GridFunction& covector) const = 0;
  /// Norm of a covector in X'. Defaults to sqrt(<g, riesz(g)>).
  [[nodiscard]] virtual double dual_norm(const GridFunction& covector) const;
  /// Norm of X.
  [[nodiscard]] virtual double xnorm(const GridFunction& u) const = 0;
  /// Name of the metric in which dual_norm and xnorm are measured, echoed into reports.
  [[nodiscard]] virtual std::string metric() const = 0;

  /// Nonnegative radially nonincreasing bump used to build mountain-pass endpoints.
  [[nodiscard]] virtual GridFunction profile() const = 0;
  /// Constants (alpha, p) with A(u) >= alpha ||u||_X^p.
  [[nodiscard]] virtual double coercivity() const = 0;
  [[nodiscard]] virtual double power() const = 0;

  /// Throws std::out_of_range("lambda out of range") outside the interval.
  void require_lambda(double lambda) const;

  [[nodiscard]] double value(double lambda, const GridFunction& u) const;
  [[nodiscard]] GridFunction gradient(double lambda, const GridFunction& u) const;
  /// Weak slope |df(lambda; .)|(u) = ||df(u)||_{X'} for this C^1 discretisation.
  [[nodiscard]] double slope(double lambda, const GridFunction& u) const;

 private:
  Domain domain_;
  LambdaInterval interval_;
};

/**
 * @brief Finite-dimensional toy f(lambda; x) = x^2/2 - lambda x^4/4 carried by the centre node.
 *
 * Lives on a three-node 1D grid; the two outer nodes are inert (they only contribute u^2/2) so every path from 0 to an
 * endpoint supported on the centre crosses the saddle x = 1/sqrt(lambda) at level 1/(4 lambda). Uses the Euclidean
 * metric without quadrature weights.
 */
class SurrogateFunctional final : public Functional {
 public:
  explicit SurrogateFunctional(LambdaInterval interval);

  [[nodiscard]] double lambda_free(const GridFunction& u) const override;
  [[nodiscard]] double lambda_weight(const GridFunction& u) const override;
  [[nodiscard]] GridFunction lambda_free_gradient(const GridFunction& u) const override;
  [[nodiscard]] GridFunction lambda_weight_gradient(const GridFunction& u) const override;
  [[nodiscard]] GridFunction riesz(const GridFunction& covector) const override { return covector; }
  [[nodiscard]] double xnorm(const GridFunction& u) const override;
  [[nodiscard]] std::string metric() const override { return "euclidean"; }
  [[nodiscard]] GridFunction profile() const override;
  [[nodiscard]] double coercivity() const override { return 0.5; }
  [[nodiscard]] double power() const override { return 2.0; }

  /// The active coordinate x of a state.
  [[nodiscard]] double coordinate(const GridFunction& u) const { return u[domain().centre_node()]; }
  [[nodiscard]] GridFunction state(double x) const;
};

}  // namespace sympass

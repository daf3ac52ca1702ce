#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sympass/functional.hpp"
#include "sympass/polarizer.hpp"

/**
 * \file energy.hpp
 *
 * @brief The semilinear energy family
 *
 *     f(lambda; u) = sum_m j(u_m, |grad_h u|_m) h^N + (1/p) sum_i |u_i|^p h^N - lambda sum_i kappa(|x_i|) |u_i|^q / q h^N
 *
 * with j(s, t) = omega(s) t^p / p, and the runtime validators for the structural hypotheses the harness relies on.
 */

namespace sympass {

enum class KineticKind {
  pure_power,      ///< omega = 1
  weighted_power,  ///< omega(s) = 1 + gain s^2 / (1 + s^2), even and bounded in [1, 1 + gain]
};

struct EnergySpec {
  double p = 2.0;
  double q = 4.0;
  LambdaInterval lambda_interval{};
  KineticKind kinetic = KineticKind::pure_power;
  double kinetic_gain = 0.0;
  /// kappa(r) = exp(-kappa_rate r); rate >= 0 keeps kappa nonincreasing.
  double kappa_rate = 0.0;

  /// Critical Sobolev exponent Np/(N-p), or +inf when N <= p.
  [[nodiscard]] double critical_exponent(int dimension) const noexcept;
  [[nodiscard]] double omega(double s) const noexcept;
  [[nodiscard]] double omega_derivative(double s) const noexcept;
  [[nodiscard]] double kappa(double r) const noexcept;

  /// Throws std::invalid_argument unless p >= 2, p < q < p*, 0 < lo < hi, gain >= 0 and kappa_rate >= 0.
  void validate(int dimension) const;
};

/// Exponents of V paired with a spec: (p, p*) when p* is finite, else (p, 2p).
[[nodiscard]] VNorm v_exponents(const EnergySpec& spec, int dimension) noexcept;

class LambdaFamily final : public Functional {
 public:
  /// Validates the spec against the domain.
  LambdaFamily(EnergySpec spec, Domain domain);

  /// Skips validation; used to build deliberately invalid families for validator tests.
  [[nodiscard]] static LambdaFamily unchecked(EnergySpec spec, Domain domain);

  [[nodiscard]] const EnergySpec& spec() const noexcept { return spec_; }

  [[nodiscard]] double lambda_free(const GridFunction& u) const override;
  [[nodiscard]] double lambda_weight(const GridFunction& u) const override;
  [[nodiscard]] GridFunction lambda_free_gradient(const GridFunction& u) const override;
  [[nodiscard]] GridFunction lambda_weight_gradient(const GridFunction& u) const override;

  /// Solves h^N (-Delta_h + I) r = g with the zero-trace Laplacian.
  [[nodiscard]] GridFunction riesz(const GridFunction& covector) const override;
  /// W^{1,2} dual norm when p = 2; otherwise the L^2 norm of the L^2 representative, sqrt(sum g^2 / h^N).
  [[nodiscard]] double dual_norm(const GridFunction& covector) const override;
  [[nodiscard]] double xnorm(const GridFunction& u) const override;
  [[nodiscard]] std::string metric() const override;

  /// exp(-|x|^2), nonnegative and radially decreasing.
  [[nodiscard]] GridFunction profile() const override;
  [[nodiscard]] double coercivity() const override;
  [[nodiscard]] double power() const override { return spec_.p; }

 private:
  struct Tag {};
  LambdaFamily(EnergySpec spec, Domain domain, Tag);

  struct Solver;
  EnergySpec spec_;
  std::vector<StencilPoint> stencil_;
  std::vector<double> kappa_;
  std::shared_ptr<const Solver> solver_;
};

/// Slope of a family: the weak slope at u (the C^1 identification |df|(u) = ||df(u)||).
[[nodiscard]] inline double weak_slope(const Functional& f, double lambda, const GridFunction& u) {
  return f.slope(lambda, u);
}

// ---------------------------------------------------------------------------------------------------------------------

struct H4Violation {
  std::string kind;  ///< "polarization" or "absolute value"
  double lambda = 0.0;
  std::string polarizer;
  double excess = 0.0;  ///< f(after) - f(before)
};

struct H4Report {
  int trials = 0;
  double tolerance = 0.0;
  double worst_excess = -std::numeric_limits<double>::infinity();
  std::vector<H4Violation> violations;

  [[nodiscard]] bool passed() const noexcept { return violations.empty(); }
};

/**
 * @brief Probe f(lambda; u^H) <= f(lambda; u) over random u >= 0, compatible H and lambda, and
 * f(lambda; |u|) <= f(lambda; u) over random sign-changing u.
 */
[[nodiscard]] H4Report check_h4(const Functional& f, int trials, std::uint64_t seed, double tolerance = 1e-9);

struct H3Report {
  double lambda = 0.0;
  double bound_constant = 0.0;  ///< the C of the hypothesis, witnessed as a max over the sequence
  double norm_bound = 0.0;      ///< M(C) = (C (1 + lambda) / alpha)^(1/p)
  std::vector<double> quotients;
  std::vector<double> norms;
  bool identity_holds = true;   ///< quotient == B(u_h) for the affine family
  bool bounded = true;          ///< every ||u_h||_X <= M

  [[nodiscard]] bool passed() const noexcept { return identity_holds && bounded; }
};

/**
 * @brief Witness the boundedness hypothesis on a sequence (lambda_h, u_h) with lambda_h strictly increasing to lambda.
 *
 * Throws std::invalid_argument if the lambdas are not strictly increasing or not below `lambda`.
 */
[[nodiscard]] H3Report check_h3(const Functional& f, double lambda,
                                const std::vector<std::pair<double, GridFunction>>& sequence);

}  // namespace sympass

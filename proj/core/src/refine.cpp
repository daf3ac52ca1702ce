#include "sympass/refine.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace sympass {

namespace {

int colour_of(const Domain& d, std::size_t node) {
  const Offset c = d.offset(node);
  const auto mod3 = [](int v) { return ((v % 3) + 3) % 3; };
  return d.dimension() == 1 ? mod3(c[0]) : 3 * mod3(c[0]) + mod3(c[1]);
}

// Nodes coupled by the Hessian differ by at most one in every axis, so each colour meets a row at most once.
std::optional<std::size_t> coupled_node(const Domain& d, std::size_t row, int colour) {
  const Offset c = d.offset(row);
  const int reach = d.dimension() == 2 ? 1 : 0;
  for (int dx = -1; dx <= 1; ++dx) {
    for (int dy = -reach; dy <= reach; ++dy) {
      const auto node = d.node_at({c[0] + dx, c[1] + dy});
      if (node && colour_of(d, *node) == colour) {
        return node;
      }
    }
  }
  return std::nullopt;
}

Eigen::SparseMatrix<double> fd_hessian(const Functional& f, double lambda, const GridFunction& u, double rel_step) {
  const Domain& d = f.domain();
  const int colours = d.dimension() == 1 ? 3 : 9;
  const double eps = rel_step * std::max(1.0, u.max_abs());
  std::vector<Eigen::Triplet<double>> triplets;
  for (int c = 0; c < colours; ++c) {
    GridFunction plus = u;
    GridFunction minus = u;
    bool any = false;
    for (std::size_t i = 0; i < d.size(); ++i) {
      if (colour_of(d, i) == c) {
        plus[i] += eps;
        minus[i] -= eps;
        any = true;
      }
    }
    if (!any) {
      continue;
    }
    const GridFunction gp = f.gradient(lambda, plus);
    const GridFunction gm = f.gradient(lambda, minus);
    for (std::size_t row = 0; row < d.size(); ++row) {
      const double entry = (gp[row] - gm[row]) / (2.0 * eps);
      if (entry == 0.0) {
        continue;
      }
      if (const auto col = coupled_node(d, row, c)) {
        triplets.emplace_back(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(*col), entry);
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::SparseMatrix<double> H(n, n);
  H.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseMatrix<double> Ht = H.transpose();
  return 0.5 * (H + Ht);
}

}  // namespace

CriticalPointRecord refine_to_critical(const Functional& f, double lambda, const GridFunction& u_seed,
                                       const VNorm& norm, const RefineTolerances& tol) {
  f.require_lambda(lambda);
  GridFunction u = u_seed;
  int iterations = 0;
  double slope = f.slope(lambda, u);

  const auto finish = [&](std::string failure) {
    const double asymmetry = v_distance(u, schwarz(u), norm);
    const bool converged = failure.empty();
    return CriticalPointRecord{lambda, u, f.value(lambda, u), slope, asymmetry, converged, iterations,
                               std::move(failure)};
  };

  if (slope <= tol.slope) {
    return finish("");
  }
  if (!(slope <= tol.seed_slope)) {
    return finish("seed slope above threshold");
  }
  const auto n = static_cast<Eigen::Index>(u.size());
  for (int it = 1; it <= tol.max_iterations; ++it) {
    iterations = it;
    const GridFunction g = f.gradient(lambda, u);
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(fd_hessian(f, lambda, u, tol.fd_step));
    if (lu.info() != Eigen::Success) {
      return finish("singular Hessian");
    }
    Eigen::Map<const Eigen::VectorXd> rhs(g.values().data(), n);
    const Eigen::VectorXd step = lu.solve(rhs);
    if (lu.info() != Eigen::Success || !step.allFinite()) {
      return finish("Newton solve failed");
    }
    const GridFunction dir(f.domain(), std::vector<double>(step.data(), step.data() + n));
    // Nonmonotone acceptance: a full step may raise the slope by a bounded factor, which lets the iteration follow
    // soft nonlinear modes (near-translations on large domains) that a monotone line search would freeze.
    bool accepted = false;
    for (double t = 1.0; t > 1e-6; t *= 0.5) {
      GridFunction trial = u;
      trial.axpy(-t, dir);
      const double s = f.slope(lambda, trial);
      if (std::isfinite(s) && s < (t == 1.0 ? tol.growth : 1.0) * slope) {
        u = std::move(trial);
        slope = s;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      return finish("line search stalled");
    }
    if (slope <= tol.slope) {
      return finish("");
    }
  }
  return finish("iteration budget exhausted");
}

}  // namespace sympass

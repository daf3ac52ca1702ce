#include "sympass/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace sympass {

void MinimaxConfig::validate() const {
  if (nodes < 3) {
    throw std::invalid_argument("minimax nodes must be >= 3");
  }
  if (max_sweeps < 1 || patience < 1 || restarts < 1) {
    throw std::invalid_argument("minimax max_sweeps, patience and restarts must be >= 1");
  }
  if (!(initial_step > 0.0) || !(stall_tolerance > 0.0)) {
    throw std::invalid_argument("minimax initial_step and stall_tolerance must be positive");
  }
  if (!(shrink > 0.0 && shrink < 1.0) || !(armijo > 0.0 && armijo < 1.0)) {
    throw std::invalid_argument("minimax shrink and armijo must lie in (0, 1)");
  }
  if (!(perturbation >= 0.0)) {
    throw std::invalid_argument("minimax perturbation must be >= 0");
  }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

GridFunction mountain_pass_endpoint(const Functional& f) {
  const GridFunction bump = f.profile();
  const double lo = f.interval().lo;
  double t = 1.0;
  for (int i = 0; i < 120; ++i, t *= 1.5) {
    GridFunction v = t * bump;
    if (f.value(lo, v) < 0.0) {
      return v;
    }
  }
  throw std::runtime_error("no negative-energy endpoint found within the scaling budget");
}

Path make_initial_path(const Functional& f, double lambda, const MinimaxConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  f.require_lambda(lambda);
  const GridFunction v = mountain_pass_endpoint(f);
  if (!(f.value(lambda, v) < 0.0)) {
    throw std::runtime_error("endpoint energy is not negative");
  }

  const Domain& d = f.domain();
  std::mt19937_64 rng(seed);
  const int reach = std::max(1, d.points_per_axis() / 16);
  std::uniform_int_distribution<int> shift(-reach, reach);
  Offset s{shift(rng), d.dimension() == 2 ? shift(rng) : 0};
  if (s[0] == 0 && s[1] == 0) {
    s[0] = reach;
  }
  const GridFunction bump = f.profile();
  GridFunction psi(d);
  for (std::size_t i = 0; i < d.size(); ++i) {
    const Offset c = d.offset(i);
    psi[i] = bump.at({c[0] - s[0], c[1] - s[1]});
  }
  const double amplitude = cfg.perturbation * v.max_abs();

  Path path;
  path.family = PathFamily::fixed_endpoint;
  path.endpoint = v;
  const int m = cfg.nodes;
  path.nodes.reserve(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k) {
    const double t = static_cast<double>(k) / (m - 1);
    if (k == 0) {
      path.nodes.emplace_back(d);
    } else if (k == m - 1) {
      path.nodes.push_back(v);
    } else {
      GridFunction node = t * v;
      node.axpy(4.0 * t * (1.0 - t) * amplitude, psi);
      path.nodes.push_back(std::move(node));
    }
  }
  return path;
}

std::pair<double, std::size_t> path_max(const Functional& f, double lambda, const Path& path) {
  if (path.nodes.empty()) {
    throw std::invalid_argument("empty path");
  }
  double best = f.value(lambda, path.nodes[0]);
  std::size_t idx = 0;
  for (std::size_t k = 1; k < path.size(); ++k) {
    const double e = f.value(lambda, path.nodes[k]);
    if (e > best) {
      best = e;
      idx = k;
    }
  }
  return {best, idx};
}

void validate_path(const Functional& f, double lambda, const Path& path) {
  if (path.size() < 2) {
    throw std::invalid_argument("path needs at least two nodes");
  }
  if (!path.front().is_zero()) {
    throw std::invalid_argument("path must start at 0");
  }
  if (path.family == PathFamily::fixed_endpoint && path.endpoint && !(path.back() == *path.endpoint)) {
    throw std::invalid_argument("path does not end at its fixed endpoint");
  }
  if (!(f.value(lambda, path.back()) < 0.0)) {
    throw std::invalid_argument("path endpoint must have negative energy");
  }
}

Path redistribute(const Functional& f, const Path& path) {
  const std::size_t m = path.size();
  if (m < 3) {
    return path;
  }
  std::vector<double> cumulative(m, 0.0);
  for (std::size_t k = 1; k < m; ++k) {
    cumulative[k] = cumulative[k - 1] + f.xnorm(path.nodes[k] - path.nodes[k - 1]);
  }
  const double total = cumulative.back();
  if (!(total > 0.0)) {
    return path;
  }
  Path out = path;
  std::size_t seg = 0;
  for (std::size_t k = 1; k + 1 < m; ++k) {
    const double target = total * static_cast<double>(k) / static_cast<double>(m - 1);
    while (seg + 1 < m - 1 && cumulative[seg + 1] < target) {
      ++seg;
    }
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double w = len > 0.0 ? std::clamp((target - cumulative[seg]) / len, 0.0, 1.0) : 0.0;
    GridFunction node = (1.0 - w) * path.nodes[seg];
    node.axpy(w, path.nodes[seg + 1]);
    out.nodes[k] = std::move(node);
  }
  return out;
}

namespace {

struct Move {
  GridFunction direction;
  double step = 0.0;
};

// Backtracking step along the Riesz gradient with its component along the path tangent removed.
std::optional<Move> backtracking_step(const Functional& f, double lambda, const GridFunction& u,
                                      const GridFunction& tangent, double energy, const MinimaxConfig& cfg,
                                      const DescentControls& controls) {
  const GridFunction g = f.gradient(lambda, u);
  GridFunction dir = f.riesz(g);
  const double tt = std::pow(f.xnorm(tangent), 2);
  if (tt > 0.0) {
    dir.axpy(-dot(g, tangent) / tt, tangent);
  }
  const double gd = dot(g, dir);
  if (!(gd > 0.0)) {
    return std::nullopt;
  }
  double step = cfg.initial_step;
  if (controls.displacement_cap) {
    const double len = f.xnorm(dir);
    if (len > 0.0) {
      step = std::min(step, *controls.displacement_cap / len);
    }
  }
  for (int i = 0; i < 80; ++i, step *= cfg.shrink) {
    GridFunction trial = u;
    trial.axpy(-step, dir);
    const double e = f.value(lambda, trial);
    if (e <= energy - cfg.armijo * step * gd && e < energy) {
      return Move{std::move(dir), step};
    }
  }
  return std::nullopt;
}

bool stop_requested(const Functional& f, double lambda, const Path& path, double value, std::size_t idx,
                    const DescentControls& controls) {
  if (controls.stop_at_value && value <= *controls.stop_at_value) {
    return true;
  }
  if (controls.slope_target && value >= controls.energy_lo && value <= controls.energy_hi) {
    return f.slope(lambda, path.nodes[idx]) <= *controls.slope_target;
  }
  return false;
}

}  // namespace

MPEstimate descend_path(const Functional& f, double lambda, Path path, const MinimaxConfig& cfg,
                        const DescentControls& controls) {
  cfg.validate();
  validate_path(f, lambda, path);
  const GridFunction start = path.front();
  const GridFunction finish = path.back();
  const double band = controls.band.value_or(cfg.stall_tolerance);

  auto [value, idx] = path_max(f, lambda, path);
  MPEstimate est;
  est.trace.push_back(value);

  if (stop_requested(f, lambda, path, value, idx, controls)) {
    est.converged = true;
  } else {
    int quiet = 0;
    for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
      std::vector<double> energy(path.size());
      for (std::size_t k = 0; k < path.size(); ++k) {
        energy[k] = f.value(lambda, path.nodes[k]);
      }
      std::vector<std::pair<std::size_t, Move>> moves;
      for (std::size_t k = 1; k + 1 < path.size(); ++k) {
        if (energy[k] < value - band) {
          continue;
        }
        const GridFunction tangent = path.nodes[k + 1] - path.nodes[k - 1];
        if (auto mv = backtracking_step(f, lambda, path.nodes[k], tangent, energy[k], cfg, controls)) {
          moves.emplace_back(k, std::move(*mv));
        }
      }
      // Shrink the whole batch until the redistributed path does not raise the maximum.
      std::pair<double, std::size_t> accepted{value, idx};
      double scale = 1.0;
      for (int attempt = 0; attempt < 40 && !moves.empty(); ++attempt, scale *= cfg.shrink) {
        Path moved = path;
        for (const auto& [k, mv] : moves) {
          GridFunction trial = path.nodes[k];
          trial.axpy(-scale * mv.step, mv.direction);
          if (f.value(lambda, trial) < energy[k]) {
            moved.nodes[k] = std::move(trial);
          }
        }
        Path candidate = redistribute(f, moved);
        const auto cand_max = path_max(f, lambda, candidate);
        if (cand_max.first <= value) {
          path = std::move(candidate);
          accepted = cand_max;
          break;
        }
      }
      if (!(path.front() == start) || !(path.back() == finish)) {
        throw InvariantViolation("path endpoints moved during descent");
      }
      const double decrease = value - accepted.first;
      if (decrease < -1e-12 * std::max(1.0, std::abs(value))) {
        throw InvariantViolation("path maximum increased during descent");
      }
      value = accepted.first;
      idx = accepted.second;
      est.trace.push_back(value);
      est.sweeps = sweep;

      if (stop_requested(f, lambda, path, value, idx, controls)) {
        est.converged = true;
        break;
      }
      quiet = decrease < cfg.stall_tolerance ? quiet + 1 : 0;
      if (quiet >= cfg.patience) {
        est.converged = true;
        break;
      }
    }
  }
  est.value = value;
  est.argmax_index = idx;
  est.path = std::move(path);
  return est;
}

MPEstimate mountain_pass_value(const Functional& f, double lambda, const MinimaxConfig& cfg, int restarts,
                               std::uint64_t seed) {
  if (restarts < 1) {
    throw std::invalid_argument("restarts must be >= 1");
  }
  std::optional<MPEstimate> best;
  std::vector<double> values;
  for (int r = 0; r < restarts; ++r) {
    Path start = make_initial_path(f, lambda, cfg, mix_seed(seed, static_cast<std::uint64_t>(r)));
    MPEstimate est = descend_path(f, lambda, std::move(start), cfg);
    est.restart_id = r;
    values.push_back(est.value);
    if (!best || est.value < best->value) {
      best = std::move(est);
    }
  }
  best->restart_values = std::move(values);
  return std::move(*best);
}

Path reparametrize_collapse(const Path& path) {
  const std::size_t m = path.size();
  if (m < 2) {
    throw std::invalid_argument("path needs at least two nodes");
  }
  const std::size_t lead = (m - 1) / 2;
  const std::size_t trail = (m - 1) - lead;
  Path out = path;
  out.nodes.clear();
  out.nodes.reserve(2 * m - 1);
  out.nodes.insert(out.nodes.end(), lead, path.front());
  out.nodes.insert(out.nodes.end(), path.nodes.begin(), path.nodes.end());
  out.nodes.insert(out.nodes.end(), trail, path.back());
  return out;
}

}  // namespace sympass

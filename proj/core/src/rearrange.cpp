#include "sympass/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

namespace sympass {

void SymmetrizationConfig::validate() const {
  if (candidates < 1) {
    throw std::invalid_argument("symmetrization candidates must be >= 1");
  }
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("symmetrization tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw std::invalid_argument("symmetrization max_iterations must be >= 1");
  }
  if (!(norm.p >= 1.0) || !(norm.pstar > norm.p)) {
    throw std::invalid_argument("symmetrization norm needs 1 <= p < pstar");
  }
}

GridFunction theta(const GridFunction& u) {
  GridFunction out = u;
  for (double& v : out.values()) {
    v = std::abs(v);
  }
  return out;
}

GridFunction polarize(const GridFunction& u, const Polarizer& H) {
  const Domain& d = u.domain();
  if (!H.compatible_with(d)) {
    throw std::invalid_argument("incompatible polarizer");
  }
  GridFunction out(d);
  for (std::size_t x = 0; x < d.size(); ++x) {
    const Offset c = d.offset(x);
    const auto mirror = d.node_at(H.reflect(c));
    const double here = std::abs(u[x]);
    const double there = mirror ? std::abs(u[*mirror]) : 0.0;
    out[x] = H.contains(c) ? std::max(here, there) : std::min(here, there);
  }
  return out;
}

GridFunction polarize(const GridFunction& u, const PolarizerWord& word) {
  GridFunction out = theta(u);
  for (const auto& H : word) {
    out = polarize(out, H);
  }
  return out;
}

GridFunction schwarz(const GridFunction& u) {
  const Domain& d = u.domain();
  // Shells keyed by exact squared index radius, visited from the centre outward.
  std::map<long, std::vector<std::size_t>> shells;
  for (std::size_t i = 0; i < d.size(); ++i) {
    shells[d.radius_sq_index(i)].push_back(i);
  }
  std::vector<double> sorted(u.size());
  std::transform(u.values().begin(), u.values().end(), sorted.begin(), [](double v) { return std::abs(v); });
  std::sort(sorted.begin(), sorted.end(), std::greater<>());

  GridFunction out(d);
  std::size_t next = 0;
  for (const auto& [r2, nodes] : shells) {
    double sum = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      sum += sorted[next + k];
    }
    next += nodes.size();
    const double mean = sum / static_cast<double>(nodes.size());
    for (std::size_t node : nodes) {
      out[node] = mean;
    }
  }
  return out;
}

SymmetrizationResult approximate_symmetrization(const GridFunction& u, const SymmetrizationConfig& cfg,
                                                std::uint64_t seed) {
  cfg.validate();
  const GridFunction target = schwarz(u);
  const auto pool = compatible_polarizers(u.domain());
  std::mt19937_64 rng(seed);

  SymmetrizationResult res{theta(u), {}, {}, false};
  double dist = v_distance(res.result, target, cfg.norm);
  res.distance_trace.push_back(dist);

  for (int it = 0; it < cfg.max_iterations && dist > cfg.tolerance; ++it) {
    double best = dist;
    std::optional<Polarizer> best_H;
    std::optional<GridFunction> best_u;
    const auto consider = [&](const Polarizer& H) {
      GridFunction trial = polarize(res.result, H);
      const double td = v_distance(trial, target, cfg.norm);
      if (td < best) {
        best = td;
        best_H = H;
        best_u = std::move(trial);
      }
    };
    for (int c = 0; c < cfg.candidates; ++c) {
      consider(random_polarizer(pool, rng));
    }
    if (!best_H) {
      for (const auto& H : pool) {
        consider(H);
      }
    }
    if (!best_H) {
      break;
    }
    res.result = std::move(*best_u);
    res.word.push_back(*best_H);
    dist = best;
    res.distance_trace.push_back(dist);
  }
  res.reached = dist <= cfg.tolerance;
  return res;
}

CurveApproximation approximate_curve(const Path& path, const std::vector<std::size_t>& marked, const Polarizer& H0,
                                     double delta, const SymmetrizationConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (path.size() < 2) {
    throw std::invalid_argument("path needs at least two nodes");
  }
  if (!(delta > 0.0)) {
    throw std::invalid_argument("curve approximation needs delta > 0");
  }
  const std::size_t last = path.size() - 1;
  for (std::size_t t : marked) {
    if (t == 0 || t >= last) {
      throw std::invalid_argument("marked set must be disjoint from the endpoints");
    }
  }
  for (const auto& node : path.nodes) {
    for (double v : node.values()) {
      if (v < 0.0) {
        throw std::invalid_argument("curve approximation needs nonnegative nodes");
      }
    }
  }

  CurveApproximation out{path, {H0}, 0.0};
  for (auto& node : out.path.nodes) {
    node = polarize(node, H0);
  }

  std::vector<GridFunction> targets;
  targets.reserve(marked.size());
  for (std::size_t t : marked) {
    targets.push_back(schwarz(path.nodes[t]));
  }
  std::vector<GridFunction> current;
  current.reserve(marked.size());
  for (std::size_t t : marked) {
    current.push_back(out.path.nodes[t]);
  }

  const auto objective = [&](const std::vector<GridFunction>& nodes) {
    double worst = 0.0;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      worst = std::max(worst, v_distance(nodes[k], targets[k], cfg.norm));
    }
    return worst;
  };

  const auto pool = compatible_polarizers(path.front().domain());
  std::mt19937_64 rng(seed);
  double dist = objective(current);
  PolarizerWord tail;

  for (int it = 0; it < cfg.max_iterations && dist > delta; ++it) {
    double best = dist;
    std::optional<Polarizer> best_H;
    std::vector<GridFunction> best_nodes;
    const auto consider = [&](const Polarizer& H) {
      std::vector<GridFunction> trial;
      trial.reserve(current.size());
      for (const auto& node : current) {
        trial.push_back(polarize(node, H));
      }
      const double td = objective(trial);
      if (td < best) {
        best = td;
        best_H = H;
        best_nodes = std::move(trial);
      }
    };
    for (int c = 0; c < cfg.candidates; ++c) {
      consider(random_polarizer(pool, rng));
    }
    if (!best_H) {
      for (const auto& H : pool) {
        consider(H);
      }
    }
    if (!best_H) {
      break;
    }
    tail.push_back(*best_H);
    current = std::move(best_nodes);
    dist = best;
  }

  for (std::size_t t = 1; t < last; ++t) {
    for (const auto& H : tail) {
      out.path.nodes[t] = polarize(out.path.nodes[t], H);
    }
  }
  out.word.insert(out.word.end(), tail.begin(), tail.end());
  out.max_distance = dist;
  out.path.approximation_failed = dist > delta;
  return out;
}

}  // namespace sympass

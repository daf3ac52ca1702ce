#include "sympass/trick.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

namespace sympass {

void ScanConfig::validate(const Functional& f) const {
  if (lambda_grid.empty()) {
    throw std::invalid_argument("empty lambda grid");
  }
  for (std::size_t k = 0; k < lambda_grid.size(); ++k) {
    if (!f.interval().contains(lambda_grid[k])) {
      throw std::invalid_argument("lambda grid point outside the interval");
    }
    if (k > 0 && !(lambda_grid[k] > lambda_grid[k - 1])) {
      throw std::invalid_argument("grid not strictly increasing");
    }
  }
  for (double l0 : lambda0) {
    if (!f.interval().contains(l0)) {
      throw std::invalid_argument("lambda0 outside the interval");
    }
  }
  if (quotient_window < 2) {
    throw std::invalid_argument("quotient_window must be >= 2");
  }
  if (j_max < 1) {
    throw std::invalid_argument("j_max must be >= 1");
  }
  if (!(q_cap > 0.0)) {
    throw std::invalid_argument("q_cap must be positive");
  }
  minimax.validate();
  symmetrization.validate();
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  for (const auto& e : errors) {
    if (e) {
      std::rethrow_exception(e);
    }
  }
}

// ---------------------------------------------------------------------------------------------------------------------

ScanResult scan_c(const Functional& f, const ScanConfig& cfg, int jobs) {
  cfg.validate(f);
  const auto& grid = cfg.lambda_grid;
  ScanResult out;
  out.tolerance = cfg.minimax.stall_tolerance;
  out.rows.resize(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t k) {
    ScanRow row;
    row.lambda = grid[k];
    try {
      const MPEstimate est =
          mountain_pass_value(f, grid[k], cfg.minimax, cfg.minimax.restarts, mix_seed(cfg.seed, k));
      row.c = est.value;
      row.converged = est.converged;
      row.sweeps = est.sweeps;
      row.argmax_index = est.argmax_index;
      row.restart_id = est.restart_id;
      const auto [lo, hi] = std::minmax_element(est.restart_values.begin(), est.restart_values.end());
      row.dispersion = (*hi - *lo) / std::max(std::abs(*lo), std::numeric_limits<double>::min());
    } catch (const std::runtime_error& e) {
      row.c = std::numeric_limits<double>::quiet_NaN();
      row.failure = e.what();
    }
    out.rows[k] = row;
  });

  const ScanRow* prev = nullptr;
  for (const auto& row : out.rows) {
    if (!std::isfinite(row.c)) {
      continue;
    }
    if (prev != nullptr) {
      if (row.c > prev->c + out.tolerance) {
        out.monotone = false;
      }
      out.quotients.push_back({prev->lambda, row.lambda, (prev->c - row.c) / (row.lambda - prev->lambda)});
    }
    prev = &row;
  }
  return out;
}

std::vector<DenjoyPoint> select_denjoy_points(const ScanResult& scan, const ScanConfig& cfg) {
  std::vector<const ScanRow*> ok;
  for (const auto& row : scan.rows) {
    if (std::isfinite(row.c)) {
      ok.push_back(&row);
    }
  }
  const auto w = static_cast<std::size_t>(cfg.quotient_window);
  std::vector<DenjoyPoint> out;
  for (std::size_t k = w; k < ok.size(); ++k) {
    double witness = 0.0;
    bool bounded = true;
    for (std::size_t h = k - w; h < k; ++h) {
      const double q = (ok[h]->c - ok[k]->c) / (ok[k]->lambda - ok[h]->lambda);
      witness = std::max(witness, q);
      bounded = bounded && q <= cfg.q_cap;
    }
    if (bounded) {
      out.push_back({ok[k]->lambda, witness});
    }
  }
  return out;
}

std::vector<double> lambda_ladder(double lambda0, int count, double lo) {
  std::vector<double> out;
  for (int h = 1; static_cast<int>(out.size()) < count && h < 60; ++h) {
    const double l = lambda0 - std::ldexp(1.0, -h);
    if (l >= lo) {
      out.push_back(l);
    }
  }
  return out;
}

std::optional<double> loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < std::min(x.size(), y.size()); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0) {
      pts.emplace_back(std::log(x[i]), std::log(y[i]));
    }
  }
  if (pts.size() < 3) {
    return std::nullopt;
  }
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [a, b] : pts) {
    mx += a;
    my += b;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [a, b] : pts) {
    sxx += (a - mx) * (a - mx);
    sxy += (a - mx) * (b - my);
  }
  if (!(sxx > 0.0)) {
    return std::nullopt;
  }
  return sxy / sxx;
}

std::string function_hash(const GridFunction& u) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (double v : u.values()) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &v, sizeof(double));
    for (unsigned char b : bytes) {
      hash = (hash ^ b) * 0x100000001b3ULL;
    }
  }
  return fmt::format("{:016x}", hash);
}

// ---------------------------------------------------------------------------------------------------------------------

PSReport extract_sbps(const Functional& f, double lambda0, const std::vector<double>& lambda_h, const ScanConfig& cfg) {
  f.require_lambda(lambda0);
  for (std::size_t h = 0; h < lambda_h.size(); ++h) {
    f.require_lambda(lambda_h[h]);
    if (!(lambda_h[h] < lambda0) || (h > 0 && !(lambda_h[h] > lambda_h[h - 1]))) {
      throw std::invalid_argument("lambda_h must increase strictly towards lambda0");
    }
  }
  const MinimaxConfig& mm = cfg.minimax;
  const VNorm norm = cfg.symmetrization.norm;

  PSReport rep;
  rep.lambda0 = lambda0;
  rep.ladder = lambda_h;
  rep.c_estimate = mountain_pass_value(f, lambda0, mm, mm.restarts, mix_seed(cfg.seed, 0)).value;
  const GridFunction v = mountain_pass_endpoint(f);
  rep.a0 = std::max(f.value(lambda0, GridFunction(f.domain())), f.value(lambda0, v));
  rep.omega = (rep.c_estimate - rep.a0) / 4.0;
  const double c0 = rep.c_estimate;

  for (std::size_t h = 0; h < lambda_h.size(); ++h) {
    rep.ladder_c.push_back(mountain_pass_value(f, lambda_h[h], mm, mm.restarts, mix_seed(cfg.seed, 100 + h)).value);
  }
  const std::size_t w = std::min(lambda_h.size(), static_cast<std::size_t>(cfg.quotient_window));
  rep.denjoy_ok = w > 0;
  for (std::size_t h = lambda_h.size() - w; h < lambda_h.size(); ++h) {
    const double q = (rep.ladder_c[h] - c0) / (lambda0 - lambda_h[h]);
    rep.quotients.push_back({lambda_h[h], lambda0, q});
    rep.denjoy_ok = rep.denjoy_ok && q <= cfg.q_cap;
  }
  rep.slope_tolerance = 10.0 / std::sqrt(static_cast<double>(cfg.j_max));
  if (!rep.denjoy_ok) {
    return rep;
  }

  // Near-optimal paths at lambda_h, built once per ladder point.
  std::map<std::size_t, Path> near_optimal;
  const auto path_at = [&](std::size_t h) -> const Path& {
    auto it = near_optimal.find(h);
    if (it == near_optimal.end()) {
      DescentControls stop;
      stop.stop_at_value = rep.ladder_c[h] + (lambda0 - lambda_h[h]);
      Path start = make_initial_path(f, lambda_h[h], mm, mix_seed(cfg.seed, 200 + h));
      it = near_optimal.emplace(h, descend_path(f, lambda_h[h], std::move(start), mm, stop).path).first;
    }
    return it->second;
  };

  const Polarizer H0 = Polarizer::half_line(+1, 0);
  for (int j = 1; j <= cfg.j_max; ++j) {
    const double delta_j = 1.0 / j;
    SbpsRecord rec;
    rec.j = j;
    std::size_t h = 0;
    while (h < lambda_h.size() && lambda0 - lambda_h[h] > delta_j) {
      ++h;
    }
    if (h == lambda_h.size()) {
      rec.failure = "no ladder point within 1/j";
      rep.sequence.push_back(rec);
      continue;
    }
    rec.h = static_cast<int>(h) + 1;
    rec.lambda_h = lambda_h[h];
    try {
      Path gamma = path_at(h);
      for (auto& node : gamma.nodes) {
        node = theta(node);
      }
      gamma = reparametrize_collapse(gamma);
      std::vector<std::size_t> marked;
      for (std::size_t k = 1; k + 1 < gamma.size(); ++k) {
        const double e = f.value(lambda0, gamma.nodes[k]);
        if (e >= c0 - 3.0 * rep.omega && e <= c0 + rep.omega) {
          marked.push_back(k);
        }
      }
      const double delta = lambda0 - lambda_h[h];
      CurveApproximation approx =
          approximate_curve(gamma, marked, H0, delta, cfg.symmetrization, mix_seed(cfg.seed, 300 + j));
      rec.approximation_failed = approx.path.approximation_failed;

      DescentControls controls;
      controls.band = delta_j;
      controls.displacement_cap = std::sqrt(delta_j);
      controls.slope_target = 2.0 * std::sqrt(delta_j);
      controls.energy_lo = c0 - 2.0 * delta_j;
      controls.energy_hi = c0 + 2.0 * delta_j;
      const MPEstimate est = descend_path(f, lambda0, std::move(approx.path), mm, controls);
      const GridFunction& u = est.path.nodes[est.argmax_index];
      rec.sweeps = est.sweeps;
      rec.stalled = est.converged;
      rec.hash = function_hash(u);
      rec.energy = f.value(lambda0, u);
      rec.slope = f.slope(lambda0, u);
      rec.xnorm = f.xnorm(u);
      rec.asymmetry = v_distance(u, schwarz(u), norm);
      rec.accepted = rec.stalled && rec.slope <= 10.0 * std::sqrt(delta_j);
      if (!rec.stalled) {
        rec.failure = "no stall within the sweep budget";
      }
      rep.harvested.push_back(u);
    } catch (const std::runtime_error& e) {
      rec.failure = e.what();
    }
    rep.sequence.push_back(rec);
  }

  // Witnessed bound M(lambda0) from the near-optimal path maxima.
  std::vector<std::pair<double, GridFunction>> witnesses;
  for (const auto& [h, path] : near_optimal) {
    const auto [value, idx] = path_max(f, lambda_h[h], path);
    witnesses.emplace_back(lambda_h[h], path.nodes[idx]);
  }
  if (!witnesses.empty()) {
    const H3Report h3 = check_h3(f, lambda0, witnesses);
    rep.norm_bound = h3.norm_bound;
    rep.bound_constant = h3.bound_constant;
  } else {
    rep.norm_bound = std::numeric_limits<double>::quiet_NaN();
  }

  std::vector<double> js;
  std::vector<double> asym;
  bool any_accepted = false;
  bool in_band = true;
  bool bounded = !witnesses.empty();
  const SbpsRecord* last = nullptr;
  for (const auto& rec : rep.sequence) {
    if (rec.hash.empty()) {
      continue;
    }
    bounded = bounded && rec.xnorm <= rep.norm_bound + 2.0;
    if (rec.accepted) {
      any_accepted = true;
      in_band = in_band && std::abs(rec.energy - c0) <= 2.0 / rec.j;
      js.push_back(rec.j);
      asym.push_back(rec.asymmetry);
      last = &rec;
    }
  }
  rep.decay_exponent = loglog_slope(js, asym);
  rep.decay_points = static_cast<int>(js.size());
  rep.verdicts.energies_in_band = any_accepted && in_band;
  rep.verdicts.bounded = bounded;
  if (rep.decay_exponent) {
    rep.verdicts.asymmetry_decay = *rep.decay_exponent <= -0.4;
  }
  rep.verdicts.final_slope = last != nullptr && last->slope <= rep.slope_tolerance;
  return rep;
}

// ---------------------------------------------------------------------------------------------------------------------

CorollaryReport corollary_sequence(const Functional& f, const CorollaryConfig& cc, const ScanConfig& cfg, int jobs) {
  if (cc.points < 2) {
    throw std::invalid_argument("corollary needs at least two lambda points");
  }
  if (!(cc.sigma > 0.0) || !f.interval().contains(1.0) || !f.interval().contains(1.0 - cc.sigma)) {
    throw std::invalid_argument("interval must contain [1 - sigma, 1]");
  }
  std::vector<double> lambdas;
  for (int k = 0; k < cc.points; ++k) {
    lambdas.push_back(1.0 - cc.sigma + cc.sigma * k / (cc.points - 1));
  }
  return corollary_sequence(f, lambdas, cc, cfg, jobs);
}

CorollaryReport corollary_sequence(const Functional& f, const std::vector<double>& lambdas, const CorollaryConfig& cc,
                                   const ScanConfig& cfg, int jobs) {
  for (std::size_t k = 0; k < lambdas.size(); ++k) {
    f.require_lambda(lambdas[k]);
    if (k > 0 && !(lambdas[k] > lambdas[k - 1])) {
      throw std::invalid_argument("lambda sequence not increasing");
    }
  }
  if (lambdas.empty()) {
    throw std::invalid_argument("lambda sequence not increasing");
  }
  ScanConfig local = cfg;
  local.j_max = cc.j_max;
  const int rungs = std::max(cfg.quotient_window, static_cast<int>(std::ceil(std::log2(std::max(1, cc.j_max)))));

  CorollaryReport out;
  out.lambdas = lambdas;
  out.reports.resize(lambdas.size());
  std::vector<std::optional<CriticalPointRecord>> records(lambdas.size());
  parallel_for(lambdas.size(), jobs, [&](std::size_t k) {
    ScanConfig mine = local;
    mine.seed = mix_seed(cfg.seed, 7000 + k);
    PSReport rep = extract_sbps(f, lambdas[k], lambda_ladder(lambdas[k], rungs, f.interval().lo), mine);
    // Seed the refinement with the rearrangement of the harvested point of least slope; Newton keeps even iterates even,
    // which removes the nearly flat translation mode of a large domain.
    const GridFunction* seed = nullptr;
    double best = std::numeric_limits<double>::infinity();
    std::size_t u_index = 0;
    for (const auto& rec : rep.sequence) {
      if (rec.hash.empty()) {
        continue;
      }
      if (rec.slope < best) {
        best = rec.slope;
        seed = &rep.harvested[u_index];
      }
      ++u_index;
    }
    if (seed != nullptr) {
      records[k] = refine_to_critical(f, lambdas[k], schwarz(*seed), mine.symmetrization.norm, cc.refine);
    } else {
      GridFunction zero(f.domain());
      records[k] = CriticalPointRecord{lambdas[k], zero, 0.0, 0.0, 0.0, false, 0, "no harvested point"};
    }
    out.reports[k] = std::move(rep);
  });

  out.all_refined = true;
  out.all_symmetric = true;
  for (auto& r : records) {
    out.sup_norm = std::max(out.sup_norm, f.xnorm(r->u));
    out.all_refined = out.all_refined && r->converged;
    out.all_symmetric = out.all_symmetric && r->asymmetry <= cc.symmetry_tolerance;
    out.records.push_back(std::move(*r));
  }

  const CriticalPointRecord& limit = out.records.back();
  const VNorm norm = cfg.symmetrization.norm;
  for (const auto& uj : out.reports.back().harvested) {
    ChainCheck c;
    c.asymmetry = limit.asymmetry;
    c.distance = v_distance(limit.u, uj, norm);
    c.seed_asymmetry = v_distance(uj, schwarz(uj), norm);
    c.holds = c.asymmetry <= 2.0 * c.distance + c.seed_asymmetry + 1e-12;
    out.chain.push_back(c);
  }
  return out;
}

}  // namespace sympass

#include "sympass/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string_view>

#include "json.hpp"

namespace sympass {

using json = nlohmann::json;

namespace {

std::string fmt_section(std::string_view section) {
  return section.empty() ? std::string("top level") : "section '" + std::string(section) + "'";
}

void only_keys(const json& obj, std::string_view section, std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) {
    throw ConfigError(fmt_section(section) + " must be an object");
  }
  for (const auto& item : obj.items()) {
    bool known = false;
    for (auto k : keys) {
      known = known || item.key() == k;
    }
    if (!known) {
      throw ConfigError("unknown key '" + item.key() + "' in " + fmt_section(section));
    }
  }
}

template <class T>
void read(const json& obj, const char* key, T& out) {
  if (obj.contains(key)) {
    out = obj.at(key).get<T>();
  }
}

RunConfig parse_tree(const json& root) {
  RunConfig cfg = default_config();
  only_keys(root, "", {"seed", "output_dir", "domain", "energy", "minimax", "symmetrization", "scan", "corollary"});
  read(root, "seed", cfg.seed);
  read(root, "output_dir", cfg.output_dir);

  if (root.contains("domain")) {
    const json& d = root.at("domain");
    only_keys(d, "domain", {"dimension", "half_width", "points_per_axis"});
    int dim = cfg.domain.dimension();
    double half = cfg.domain.half_width();
    int n = cfg.domain.points_per_axis();
    read(d, "dimension", dim);
    read(d, "half_width", half);
    read(d, "points_per_axis", n);
    cfg.domain = Domain(dim, half, n);
  }

  if (root.contains("energy")) {
    const json& e = root.at("energy");
    only_keys(e, "energy", {"p", "q", "lambda_interval", "j", "kappa"});
    read(e, "p", cfg.energy.p);
    read(e, "q", cfg.energy.q);
    if (e.contains("lambda_interval")) {
      const auto li = e.at("lambda_interval").get<std::vector<double>>();
      if (li.size() != 2) {
        throw ConfigError("energy.lambda_interval must be [lo, hi]");
      }
      cfg.energy.lambda_interval = {li[0], li[1]};
    }
    if (e.contains("j")) {
      const json& j = e.at("j");
      only_keys(j, "energy.j", {"kind", "gain"});
      std::string kind = "pure_power";
      read(j, "kind", kind);
      if (kind == "pure_power") {
        cfg.energy.kinetic = KineticKind::pure_power;
      } else if (kind == "weighted_power") {
        cfg.energy.kinetic = KineticKind::weighted_power;
      } else {
        throw ConfigError("energy.j.kind must be pure_power or weighted_power");
      }
      read(j, "gain", cfg.energy.kinetic_gain);
    }
    if (e.contains("kappa")) {
      const json& k = e.at("kappa");
      only_keys(k, "energy.kappa", {"kind", "rate"});
      std::string kind = "constant";
      read(k, "kind", kind);
      if (kind == "constant") {
        cfg.energy.kappa_rate = 0.0;
      } else if (kind == "exponential") {
        cfg.energy.kappa_rate = 1.0;
        read(k, "rate", cfg.energy.kappa_rate);
      } else {
        throw ConfigError("energy.kappa.kind must be constant or exponential");
      }
    }
  }

  if (root.contains("minimax")) {
    const json& m = root.at("minimax");
    only_keys(m, "minimax", {"nodes", "max_sweeps", "initial_step", "shrink", "armijo", "stall_tolerance", "patience",
                             "perturbation", "restarts"});
    read(m, "nodes", cfg.minimax.nodes);
    read(m, "max_sweeps", cfg.minimax.max_sweeps);
    read(m, "initial_step", cfg.minimax.initial_step);
    read(m, "shrink", cfg.minimax.shrink);
    read(m, "armijo", cfg.minimax.armijo);
    read(m, "stall_tolerance", cfg.minimax.stall_tolerance);
    read(m, "patience", cfg.minimax.patience);
    read(m, "perturbation", cfg.minimax.perturbation);
    read(m, "restarts", cfg.minimax.restarts);
  }

  cfg.symmetrization.norm = v_exponents(cfg.energy, cfg.domain.dimension());
  if (root.contains("symmetrization")) {
    const json& s = root.at("symmetrization");
    only_keys(s, "symmetrization", {"candidates", "tolerance", "max_iterations", "p", "pstar"});
    read(s, "candidates", cfg.symmetrization.candidates);
    read(s, "tolerance", cfg.symmetrization.tolerance);
    read(s, "max_iterations", cfg.symmetrization.max_iterations);
    read(s, "p", cfg.symmetrization.norm.p);
    read(s, "pstar", cfg.symmetrization.norm.pstar);
  }

  if (root.contains("scan")) {
    const json& s = root.at("scan");
    only_keys(s, "scan", {"lambda_grid", "quotient_window", "q_cap", "j_max", "lambda0"});
    read(s, "lambda_grid", cfg.scan.lambda_grid);
    read(s, "quotient_window", cfg.scan.quotient_window);
    read(s, "q_cap", cfg.scan.q_cap);
    read(s, "j_max", cfg.scan.j_max);
    read(s, "lambda0", cfg.scan.lambda0);
  }

  if (root.contains("corollary")) {
    const json& c = root.at("corollary");
    only_keys(c, "corollary", {"enabled", "sigma", "points", "j_max", "refine", "symmetry_tolerance"});
    read(c, "enabled", cfg.corollary.enabled);
    read(c, "sigma", cfg.corollary.sigma);
    read(c, "points", cfg.corollary.points);
    read(c, "j_max", cfg.corollary.j_max);
    read(c, "symmetry_tolerance", cfg.corollary.symmetry_tolerance);
    if (c.contains("refine")) {
      const json& r = c.at("refine");
      only_keys(r, "corollary.refine", {"slope", "seed_slope", "max_iterations"});
      read(r, "slope", cfg.corollary.refine.slope);
      read(r, "seed_slope", cfg.corollary.refine.seed_slope);
      read(r, "max_iterations", cfg.corollary.refine.max_iterations);
    }
  }
  return cfg;
}

void validate(RunConfig& cfg) {
  cfg.energy.validate(cfg.domain.dimension());
  cfg.minimax.validate();
  cfg.symmetrization.validate();
  cfg.scan.seed = cfg.seed;
  cfg.scan.minimax = cfg.minimax;
  cfg.scan.symmetrization = cfg.symmetrization;
  const LambdaInterval& li = cfg.energy.lambda_interval;
  const SurrogateFunctional interval_only(li);
  cfg.scan.validate(interval_only);
  const CorollaryConfig& c = cfg.corollary;
  if (c.enabled) {
    if (!(c.sigma > 0.0 && c.sigma < 1.0) || c.points < 2 || c.j_max < 1) {
      throw ConfigError("corollary needs 0 < sigma < 1, points >= 2 and j_max >= 1");
    }
    if (!li.contains(1.0) || !li.contains(1.0 - c.sigma)) {
      throw ConfigError("energy.lambda_interval must contain [1 - sigma, 1]");
    }
  }
  if (!(c.refine.slope > 0.0) || c.refine.max_iterations < 1) {
    throw ConfigError("corollary.refine needs slope > 0 and max_iterations >= 1");
  }
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  for (int k = 0; k < 8; ++k) {
    cfg.scan.lambda_grid.push_back(0.5 + 0.5 * k / 7.0);
  }
  cfg.symmetrization.norm = v_exponents(cfg.energy, cfg.domain.dimension());
  cfg.scan.seed = cfg.seed;
  cfg.scan.minimax = cfg.minimax;
  cfg.scan.symmetrization = cfg.symmetrization;
  return cfg;
}

RunConfig parse_config(const std::string& json_text) {
  try {
    RunConfig cfg = parse_tree(json::parse(json_text));
    validate(cfg);
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file " + path);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_json(const RunConfig& cfg) {
  json j;
  j["seed"] = cfg.seed;
  j["output_dir"] = cfg.output_dir;
  j["domain"] = {{"dimension", cfg.domain.dimension()},
                 {"half_width", cfg.domain.half_width()},
                 {"points_per_axis", cfg.domain.points_per_axis()}};
  const EnergySpec& e = cfg.energy;
  j["energy"] = {
      {"p", e.p},
      {"q", e.q},
      {"lambda_interval", {e.lambda_interval.lo, e.lambda_interval.hi}},
      {"j", {{"kind", e.kinetic == KineticKind::pure_power ? "pure_power" : "weighted_power"}, {"gain", e.kinetic_gain}}},
      {"kappa", {{"kind", e.kappa_rate == 0.0 ? "constant" : "exponential"}, {"rate", e.kappa_rate}}}};
  const MinimaxConfig& m = cfg.minimax;
  j["minimax"] = {{"nodes", m.nodes},
                  {"max_sweeps", m.max_sweeps},
                  {"initial_step", m.initial_step},
                  {"shrink", m.shrink},
                  {"armijo", m.armijo},
                  {"stall_tolerance", m.stall_tolerance},
                  {"patience", m.patience},
                  {"perturbation", m.perturbation},
                  {"restarts", m.restarts}};
  const SymmetrizationConfig& s = cfg.symmetrization;
  j["symmetrization"] = {{"candidates", s.candidates},
                         {"tolerance", s.tolerance},
                         {"max_iterations", s.max_iterations},
                         {"p", s.norm.p},
                         {"pstar", s.norm.pstar}};
  j["scan"] = {{"lambda_grid", cfg.scan.lambda_grid},
               {"quotient_window", cfg.scan.quotient_window},
               {"q_cap", cfg.scan.q_cap},
               {"j_max", cfg.scan.j_max},
               {"lambda0", cfg.scan.lambda0}};
  const CorollaryConfig& c = cfg.corollary;
  j["corollary"] = {{"enabled", c.enabled},
                    {"sigma", c.sigma},
                    {"points", c.points},
                    {"j_max", c.j_max},
                    {"symmetry_tolerance", c.symmetry_tolerance},
                    {"refine",
                     {{"slope", c.refine.slope},
                      {"seed_slope", c.refine.seed_slope},
                      {"max_iterations", c.refine.max_iterations}}}};
  return j.dump(2);
}

}  // namespace sympass

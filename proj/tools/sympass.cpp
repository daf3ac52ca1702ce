// sympass: symmetric mountain-pass experiments from the command line.
//
// Exit codes: 0 success (per-lambda failures are recorded in the outputs), 1 failed checks or unexpected error,
// 2 configuration or input error, 3 internal invariant violation.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "sympass/config.hpp"
#include "sympass/energy.hpp"
#include "sympass/minimax.hpp"
#include "sympass/rearrange.hpp"
#include "sympass/refine.hpp"
#include "sympass/report_io.hpp"
#include "sympass/trick.hpp"

namespace fs = std::filesystem;
using namespace sympass;

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 1;
  bool surrogate = false;
  std::string input;
};

RunConfig resolve(const Options& opt) {
  RunConfig cfg = opt.config_path.empty() ? parse_config("{}") : load_config(opt.config_path);
  if (opt.seed) {
    cfg.seed = *opt.seed;
    cfg.scan.seed = *opt.seed;
  }
  if (const char* env = std::getenv("SYMPASS_OUTPUT"); env != nullptr && *env != '\0') {
    cfg.output_dir = env;
  }
  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec || !fs::is_directory(cfg.output_dir)) {
    throw ConfigError("output_dir is not writable: " + cfg.output_dir);
  }
  return cfg;
}

std::unique_ptr<Functional> make_family(const RunConfig& cfg, bool surrogate) {
  if (surrogate) {
    return std::make_unique<SurrogateFunctional>(cfg.energy.lambda_interval);
  }
  return std::make_unique<LambdaFamily>(cfg.energy, cfg.domain);
}

std::ofstream open_out(const RunConfig& cfg, const std::string& name) {
  std::ofstream out(fs::path(cfg.output_dir) / name, std::ios::binary);
  if (!out) {
    throw ConfigError("cannot write " + name + " in " + cfg.output_dir);
  }
  return out;
}

int cmd_symmetrize(const Options& opt) {
  const RunConfig cfg = resolve(opt);
  std::ifstream in(opt.input);
  if (!in) {
    throw ParseError("cannot open input " + opt.input);
  }
  const GridFunction u = read_grid_function(in);
  const SymmetrizationResult res = approximate_symmetrization(u, cfg.symmetrization, cfg.seed);
  auto star = open_out(cfg, "u_star.csv");
  write_grid_function(star, schwarz(u));
  auto polarized = open_out(cfg, "u_word.csv");
  write_grid_function(polarized, res.result);
  auto word = open_out(cfg, "word.csv");
  write_word(word, res.word);
  auto trace = open_out(cfg, "distance_trace.csv");
  write_distance_trace(trace, res.distance_trace);
  fmt::print("symmetrize: {} polarizers, distance {} ({})\n", res.word.size(),
             format_real(res.distance_trace.back()), res.reached ? "tolerance reached" : "tolerance not reached");
  return 0;
}

int cmd_scan(const Options& opt) {
  const RunConfig cfg = resolve(opt);
  const auto f = make_family(cfg, opt.surrogate);
  const ScanResult scan = scan_c(*f, cfg.scan, opt.jobs);
  auto csv = open_out(cfg, "c_of_lambda.csv");
  write_scan_csv(csv, scan);
  auto dat = open_out(cfg, "c_of_lambda.dat");
  write_scan_dat(dat, scan);
  auto quotients = open_out(cfg, "quotients.csv");
  write_quotients_csv(quotients, scan);
  auto denjoy = open_out(cfg, "denjoy_points.csv");
  denjoy << "lambda0,q_witness\n";
  for (const auto& p : select_denjoy_points(scan, cfg.scan)) {
    denjoy << format_real(p.lambda0) << ',' << format_real(p.q_witness) << '\n';
  }
  fmt::print("scan: {} points, monotone {}\n", scan.rows.size(), scan.monotone ? "yes" : "no");
  return 0;
}

int cmd_trick(const Options& opt) {
  const RunConfig cfg = resolve(opt);
  const auto f = make_family(cfg, opt.surrogate);
  const auto& l0s = cfg.scan.lambda0;
  const int rungs = std::max(cfg.scan.quotient_window,
                             static_cast<int>(std::ceil(std::log2(static_cast<double>(cfg.scan.j_max)))));
  std::vector<PSReport> reports(l0s.size());
  parallel_for(l0s.size(), opt.jobs, [&](std::size_t k) {
    ScanConfig local = cfg.scan;
    local.seed = mix_seed(cfg.seed, 9000 + k);
    reports[k] = extract_sbps(*f, l0s[k], lambda_ladder(l0s[k], rungs, f->interval().lo), local);
  });

  std::optional<CorollaryReport> corollary;
  std::vector<CriticalPointRecord> critical;
  if (cfg.corollary.enabled) {
    corollary = corollary_sequence(*f, cfg.corollary, cfg.scan, opt.jobs);
    critical = corollary->records;
  } else {
    for (const auto& rep : reports) {
      if (!rep.harvested.empty()) {
        critical.push_back(
            refine_to_critical(*f, rep.lambda0, schwarz(rep.harvested.back()), cfg.symmetrization.norm,
                               cfg.corollary.refine));
      }
    }
  }

  auto sbps = open_out(cfg, "sbps.csv");
  write_sbps_header(sbps);
  for (std::size_t k = 0; k < reports.size(); ++k) {
    write_sbps_rows(sbps, reports[k]);
    auto json = open_out(cfg, fmt::format("ps_report_{}.json", k));
    json << ps_report_json(reports[k]);
  }
  auto cps = open_out(cfg, "critical_points.csv");
  write_critical_points_csv(cps, critical);
  for (std::size_t k = 0; k < critical.size(); ++k) {
    auto u = open_out(cfg, fmt::format("critical_point_{}.csv", k));
    write_grid_function(u, critical[k].u);
  }
  auto summary = open_out(cfg, "summary.txt");
  write_summary(summary, reports, corollary ? &*corollary : nullptr);
  write_summary(std::cout, reports, corollary ? &*corollary : nullptr);
  return 0;
}

int cmd_check(const Options& opt) {
  const RunConfig cfg = resolve(opt);
  const auto f = make_family(cfg, opt.surrogate);
  bool ok = true;
  auto report = open_out(cfg, "check.txt");
  const auto line = [&](const std::string& name, bool pass, const std::string& detail) {
    ok = ok && pass;
    const std::string text = fmt::format("{} {}: {}\n", pass ? "PASS" : "FAIL", name, detail);
    report << text;
    std::cout << text;
  };

  // Structural hypotheses on the integrand and the weight.
  bool structural = true;
  std::string why = "p >= 2, p < q < p*, omega in [1, 1 + gain], kappa nonincreasing";
  try {
    cfg.energy.validate(cfg.domain.dimension());
  } catch (const std::invalid_argument& e) {
    structural = false;
    why = e.what();
  }
  line("structure", structural, why);

  // Mountain-pass geometry along the initial path at the top of the interval.
  const double top = f->interval().hi;
  const Path path = make_initial_path(*f, top, cfg.minimax, cfg.seed);
  const auto [pmax, idx] = path_max(*f, top, path);
  const double a = std::max(f->value(top, path.front()), f->value(top, path.back()));
  line("geometry", pmax > a, fmt::format("path max {} above endpoint level {}", format_real(pmax), format_real(a)));

  // Boundedness witness on a short ladder below the top of the interval.
  std::vector<std::pair<double, GridFunction>> seq;
  for (double lh : lambda_ladder(top, 3, f->interval().lo)) {
    const Path p = make_initial_path(*f, lh, cfg.minimax, cfg.seed);
    seq.emplace_back(lh, p.nodes[path_max(*f, lh, p).second]);
  }
  const H3Report h3 = check_h3(*f, top, seq);
  line("boundedness", h3.passed(), fmt::format("M = {}", format_real(h3.norm_bound)));

  const H4Report h4 = check_h4(*f, 2000, cfg.seed);
  line("polarization decreases energy", h4.passed(),
       fmt::format("{} trials, worst excess {}", h4.trials, format_real(h4.worst_excess)));

  // Property suites on random data.
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const auto pool = compatible_polarizers(f->domain());
  const VNorm norm = cfg.symmetrization.norm;
  bool contractive = true;
  bool multiset = true;
  bool idempotent = true;
  for (int t = 0; t < 500; ++t) {
    GridFunction u(f->domain());
    GridFunction v(f->domain());
    for (std::size_t i = 0; i < u.size(); ++i) {
      u[i] = unit(rng);
      v[i] = unit(rng);
    }
    const Polarizer& H = random_polarizer(pool, rng);
    const GridFunction uh = polarize(u, H);
    contractive = contractive && lp_norm(uh - polarize(v, H), norm.p) <= lp_norm(u - v, norm.p) + 1e-12;
    const GridFunction tu = theta(u);
    auto a1 = std::vector<double>(uh.values().begin(), uh.values().end());
    auto a2 = std::vector<double>(tu.values().begin(), tu.values().end());
    std::sort(a1.begin(), a1.end());
    std::sort(a2.begin(), a2.end());
    multiset = multiset && a1 == a2;
    idempotent = idempotent && polarize(uh, H) == uh && schwarz(uh) == schwarz(u);
  }
  line("polarization contractive", contractive, "500 random pairs");
  line("polarization rearranges values", multiset, "500 random functions");
  line("polarization idempotent and invisible to schwarz", idempotent, "500 random functions");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric mountain-pass experiments"};
  app.require_subcommand(1);
  Options opt;
  const auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opt.seed, "Override the configured seed");
    sub->add_option("--jobs", opt.jobs, "Worker threads for per-lambda runs")->check(CLI::PositiveNumber);
    sub->add_flag("--surrogate", opt.surrogate, "Use the finite-dimensional toy family");
  };
  auto* symmetrize = app.add_subcommand("symmetrize", "Greedy polarization towards the Schwarz rearrangement");
  common(symmetrize);
  symmetrize->add_option("input", opt.input, "Grid-function CSV")->required();
  auto* scan = app.add_subcommand("scan", "Tabulate the minimax value over the lambda grid");
  common(scan);
  auto* trick = app.add_subcommand("trick", "Run the monotonicity-trick harness");
  common(trick);
  auto* check = app.add_subcommand("check", "Run the hypothesis validators and property suites");
  common(check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (symmetrize->parsed()) {
      return cmd_symmetrize(opt);
    }
    if (scan->parsed()) {
      return cmd_scan(opt);
    }
    if (trick->parsed()) {
      return cmd_trick(opt);
    }
    return cmd_check(opt);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

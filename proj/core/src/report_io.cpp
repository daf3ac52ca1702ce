#include "sympass/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "json.hpp"

namespace sympass {

std::string format_real(double x) {
  if (std::isnan(x)) {
    return "nan";
  }
  if (std::isinf(x)) {
    return x > 0 ? "inf" : "-inf";
  }
  return fmt::format("{:.17g}", x);
}

void write_grid_function(std::ostream& out, const GridFunction& u) {
  const Domain& d = u.domain();
  out << "dimension=" << d.dimension() << '\n'
      << "n=" << d.points_per_axis() << '\n'
      << "L=" << format_real(d.half_width()) << '\n';
  for (double v : u.values()) {
    out << format_real(v) << '\n';
  }
}

namespace {

std::string header_value(std::istream& in, const std::string& key) {
  std::string line;
  if (!std::getline(in, line)) {
    throw ParseError("missing header line " + key + "=");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line.rfind(key + "=", 0) != 0) {
    throw ParseError("expected header line " + key + "=, got '" + line + "'");
  }
  return line.substr(key.size() + 1);
}

double parse_real(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + text + "'");
  }
  if (used != text.size()) {
    throw ParseError("trailing characters in '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ParseError("not an integer: '" + text + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

GridFunction read_grid_function(std::istream& in) {
  const int dim = parse_int(header_value(in, "dimension"));
  const int n = parse_int(header_value(in, "n"));
  const double L = parse_real(header_value(in, "L"));
  std::optional<Domain> domain;
  try {
    domain.emplace(dim, L, n);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid grid header: ") + e.what());
  }
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const double v = parse_real(line);
    if (!std::isfinite(v)) {
      throw ParseError("non-finite value in grid function");
    }
    values.push_back(v);
  }
  if (values.size() != domain->size()) {
    throw ParseError(fmt::format("expected {} values, found {}", domain->size(), values.size()));
  }
  return GridFunction(*domain, std::move(values));
}

void write_mp_estimate_header(std::ostream& out) { out << "lambda,value,argmax_index,sweeps,converged,restart_id\n"; }

void write_mp_estimate_row(std::ostream& out, double lambda, const MPEstimate& est) {
  out << format_real(lambda) << ',' << format_real(est.value) << ',' << est.argmax_index << ',' << est.sweeps << ','
      << (est.converged ? 1 : 0) << ',' << est.restart_id << '\n';
}

void write_distance_trace(std::ostream& out, const std::vector<double>& trace) {
  out << "iteration,distance\n";
  for (std::size_t k = 0; k < trace.size(); ++k) {
    out << k << ',' << format_real(trace[k]) << '\n';
  }
}

void write_word(std::ostream& out, const PolarizerWord& word) {
  out << "step,a0,a1,twice_offset\n";
  for (std::size_t k = 0; k < word.size(); ++k) {
    const auto& H = word[k];
    out << k << ',' << H.normal()[0] << ',' << H.normal()[1] << ',' << H.twice_offset() << '\n';
  }
}

void write_scan_csv(std::ostream& out, const ScanResult& scan) {
  out << "lambda,c,converged,restarts_dispersion\n";
  for (const auto& row : scan.rows) {
    out << format_real(row.lambda) << ',' << format_real(row.c) << ',' << (row.converged ? 1 : 0) << ','
        << format_real(row.dispersion) << '\n';
  }
}

void write_scan_dat(std::ostream& out, const ScanResult& scan) {
  out << "# lambda c\n";
  for (const auto& row : scan.rows) {
    if (!std::isfinite(row.c)) {
      out << "# " << format_real(row.lambda) << " failed: " << row.failure << '\n';
      continue;
    }
    out << format_real(row.lambda) << ' ' << format_real(row.c) << '\n';
  }
}

void write_quotients_csv(std::ostream& out, const ScanResult& scan) {
  out << "lambda_h,lambda0,quotient\n";
  for (const auto& q : scan.quotients) {
    out << format_real(q.lambda_h) << ',' << format_real(q.lambda0) << ',' << format_real(q.quotient) << '\n';
  }
}

void write_sbps_header(std::ostream& out) { out << "lambda0,j,energy,slope,xnorm,asymmetry,accepted\n"; }

void write_sbps_rows(std::ostream& out, const PSReport& report) {
  for (const auto& r : report.sequence) {
    if (r.hash.empty()) {
      continue;
    }
    out << format_real(report.lambda0) << ',' << r.j << ',' << format_real(r.energy) << ',' << format_real(r.slope)
        << ',' << format_real(r.xnorm) << ',' << format_real(r.asymmetry) << ',' << (r.accepted ? 1 : 0) << '\n';
  }
}

std::string ps_report_json(const PSReport& report) {
  using nlohmann::json;
  const auto real = [](double x) -> json { return std::isfinite(x) ? json(x) : json(format_real(x)); };
  json j;
  j["lambda0"] = real(report.lambda0);
  j["c_estimate"] = real(report.c_estimate);
  j["a0"] = real(report.a0);
  j["omega"] = real(report.omega);
  j["denjoy_ok"] = report.denjoy_ok;
  json quotients = json::array();
  for (const auto& q : report.quotients) {
    quotients.push_back({{"lambda_h", real(q.lambda_h)}, {"quotient", real(q.quotient)}});
  }
  j["quotients"] = quotients;
  json ladder = json::array();
  for (std::size_t h = 0; h < report.ladder.size(); ++h) {
    ladder.push_back({{"lambda_h", real(report.ladder[h])},
                      {"c", h < report.ladder_c.size() ? real(report.ladder_c[h]) : json(nullptr)}});
  }
  j["ladder"] = ladder;
  json seq = json::array();
  for (const auto& r : report.sequence) {
    seq.push_back({{"j", r.j},
                   {"h", r.h},
                   {"lambda_h", real(r.lambda_h)},
                   {"hash", r.hash},
                   {"energy", real(r.energy)},
                   {"slope", real(r.slope)},
                   {"xnorm", real(r.xnorm)},
                   {"asymmetry", real(r.asymmetry)},
                   {"stalled", r.stalled},
                   {"approximation_failed", r.approximation_failed},
                   {"accepted", r.accepted},
                   {"sweeps", r.sweeps},
                   {"failure", r.failure}});
  }
  j["sequence"] = seq;
  j["decay_exponent"] = report.decay_exponent ? real(*report.decay_exponent) : json("insufficient data");
  j["decay_points"] = report.decay_points;
  j["norm_bound"] = real(report.norm_bound);
  j["bound_constant"] = real(report.bound_constant);
  j["slope_tolerance"] = real(report.slope_tolerance);
  const auto& v = report.verdicts;
  j["verdicts"] = {{"energies_in_band", v.energies_in_band},
                   {"bounded", v.bounded},
                   {"asymmetry_decay", v.asymmetry_decay ? json(*v.asymmetry_decay) : json("insufficient data")},
                   {"final_slope", v.final_slope}};
  return j.dump(2) + "\n";
}

void write_critical_points_csv(std::ostream& out, const std::vector<CriticalPointRecord>& records) {
  out << "lambda,energy,slope,asymmetry,converged,iterations,failure\n";
  for (const auto& r : records) {
    out << format_real(r.lambda) << ',' << format_real(r.energy) << ',' << format_real(r.slope) << ','
        << format_real(r.asymmetry) << ',' << (r.converged ? 1 : 0) << ',' << r.iterations << ',' << r.failure << '\n';
  }
}

void write_summary(std::ostream& out, const std::vector<PSReport>& reports, const CorollaryReport* corollary) {
  const auto verdict = [](bool ok) { return ok ? "PASS" : "FAIL"; };
  for (const auto& r : reports) {
    const std::string at = "lambda0=" + format_real(r.lambda0);
    out << at << " c_estimate=" << format_real(r.c_estimate) << '\n';
    double witness = 0.0;
    for (const auto& q : r.quotients) {
      witness = std::max(witness, q.quotient);
    }
    out << at << " bounded difference quotients (Q=" << format_real(witness) << "): " << verdict(r.denjoy_ok) << '\n';
    if (!r.denjoy_ok) {
      continue;
    }
    out << at << " energies within 2/j of c: " << verdict(r.verdicts.energies_in_band) << '\n';
    out << at << " norms within M+2 (M=" << format_real(r.norm_bound) << "): " << verdict(r.verdicts.bounded) << '\n';
    if (r.decay_exponent) {
      out << at << " asymmetry decay exponent=" << format_real(*r.decay_exponent)
          << " (<= -0.4): " << verdict(*r.verdicts.asymmetry_decay) << '\n';
    } else {
      out << at << " asymmetry decay: insufficient data\n";
    }
    out << at << " final slope <= " << format_real(r.slope_tolerance) << ": " << verdict(r.verdicts.final_slope)
        << '\n';
  }
  if (corollary != nullptr) {
    bool chain = !corollary->chain.empty();
    for (const auto& c : corollary->chain) {
      chain = chain && c.holds;
    }
    out << "corollary points=" << corollary->records.size() << " sup_norm=" << format_real(corollary->sup_norm)
        << '\n';
    out << "corollary refined to critical points: " << verdict(corollary->all_refined) << '\n';
    out << "corollary refined points symmetric: " << verdict(corollary->all_symmetric) << '\n';
    out << "corollary asymmetry chain bound: " << verdict(chain) << '\n';
  }
}

}  // namespace sympass

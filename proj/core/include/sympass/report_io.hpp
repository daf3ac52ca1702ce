#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sympass/grid.hpp"
#include "sympass/minimax.hpp"
#include "sympass/rearrange.hpp"
#include "sympass/trick.hpp"

// Every CSV starts with a header row. Reals use 17 significant digits so they round-trip exactly.

namespace sympass {

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 17 significant digits; "nan", "inf" and "-inf" for non-finite values.
[[nodiscard]] std::string format_real(double x);

/// Header lines dimension=, n=, L= followed by one value per line in node order.
void write_grid_function(std::ostream& out, const GridFunction& u);
/// Throws ParseError on a malformed header, a bad number, a wrong count or a non-finite value.
[[nodiscard]] GridFunction read_grid_function(std::istream& in);

void write_mp_estimate_header(std::ostream& out);
void write_mp_estimate_row(std::ostream& out, double lambda, const MPEstimate& est);

void write_distance_trace(std::ostream& out, const std::vector<double>& trace);
void write_word(std::ostream& out, const PolarizerWord& word);

void write_scan_csv(std::ostream& out, const ScanResult& scan);
/// Whitespace-separated columns lambda and c, '#' comments; failed rows are commented out.
void write_scan_dat(std::ostream& out, const ScanResult& scan);
void write_quotients_csv(std::ostream& out, const ScanResult& scan);

void write_sbps_header(std::ostream& out);
void write_sbps_rows(std::ostream& out, const PSReport& report);
[[nodiscard]] std::string ps_report_json(const PSReport& report);

void write_critical_points_csv(std::ostream& out, const std::vector<CriticalPointRecord>& records);

/// Human-readable verdict lines, one per checked conclusion and lambda0.
void write_summary(std::ostream& out, const std::vector<PSReport>& reports, const CorollaryReport* corollary);

}  // namespace sympass

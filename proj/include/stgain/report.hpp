#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stgain/metrics.hpp"
#include "stgain/predictor.hpp"
#include "stgain/selftrain.hpp"
#include "stgain/similarity.hpp"

namespace stgain {

enum class Protocol { Unsup, Loo, Tailored, TailoredTtOnly, Baselines, Grid };

inline constexpr std::array<Protocol, 6> kAllProtocols = {
    Protocol::Unsup,          Protocol::Loo,       Protocol::Tailored,
    Protocol::TailoredTtOnly, Protocol::Baselines, Protocol::Grid};

std::string_view to_string(Protocol p);
std::optional<Protocol> parse_protocol(std::string_view s);

// One table row; values are percentages.
struct ReportRow {
  std::string type;
  double precision_on_gain = 0.0;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
};

ReportRow make_row(std::string type, const ConfusionCounts& c);

struct ReportOptions {
  std::vector<Measure> measures{kAllMeasures.begin(), kAllMeasures.end()};
  IndicatorConfig indicator;
  int k = 1;
};

struct Report {
  Protocol protocol = Protocol::Unsup;
  std::vector<ReportRow> rows;  // empty for GRID
  std::optional<BulkGrid> grid;
  std::vector<std::string> warnings;
};

// Table protocols use the DOMAIN results only; GRID also needs BULK ones.
Report make_report(Protocol p, std::span<const SelfTrainResult> results,
                   const ReportOptions& options = {});

// Header `type,precision_on_gain,macro_f1,accuracy`; two decimals.
void write_table_csv(std::ostream& out, std::span<const ReportRow> rows);
// Header `train,<test domains...>`; diagonal cells are `-`.
void write_grid_csv(std::ostream& out, const BulkGrid& grid);
void write_report_csv(std::ostream& out, const Report& report);

}  // namespace stgain

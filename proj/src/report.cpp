#include "stgain/report.hpp"

#include <cstdio>
#include <ostream>

#include "stgain/error.hpp"

namespace stgain {

std::string_view to_string(Protocol p) {
  switch (p) {
    case Protocol::Unsup: return "UNSUP";
    case Protocol::Loo: return "LOO";
    case Protocol::Tailored: return "TAILORED";
    case Protocol::TailoredTtOnly: return "TAILORED_TT_ONLY";
    case Protocol::Baselines: return "BASELINES";
    case Protocol::Grid: return "GRID";
  }
  return "?";
}

std::optional<Protocol> parse_protocol(std::string_view s) {
  for (Protocol p : kAllProtocols) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

ReportRow make_row(std::string type, const ConfusionCounts& c) {
  const Scores s = scores(c);
  return {std::move(type), 100.0 * s.precision[0], 100.0 * s.macro_f1,
          100.0 * s.accuracy};
}

namespace {

std::vector<SelfTrainResult> select(std::span<const SelfTrainResult> results, bool bulk) {
  std::vector<SelfTrainResult> out;
  for (const auto& r : results) {
    if (r.setup.bulk() == bulk) out.push_back(r);
  }
  return out;
}

std::string measure_label(Measure m) {
  switch (m) {
    case Measure::Cosine: return "Cosine";
    case Measure::Euclidean: return "Euclidean";
    case Measure::Kl: return "KL";
    case Measure::Js: return "JS";
    case Measure::Suwr: return "sUWR";
  }
  return "?";
}

}  // namespace

Report make_report(Protocol p, std::span<const SelfTrainResult> results,
                   const ReportOptions& opt) {
  Report rep{p, {}, std::nullopt, {}};
  const std::vector<SelfTrainResult> domain = select(results, false);
  if (p != Protocol::Grid && domain.empty()) {
    throw InputError("no DOMAIN results to report on");
  }

  switch (p) {
    case Protocol::Unsup:
      for (Measure m : opt.measures) {
        ConfusionCounts c;
        for (const auto& r : domain) {
          GainLabel predicted = GainLabel::Loss;
          try {
            auto it = r.similarities.find(m);
            if (it == r.similarities.end()) {
              throw InputError("result " + r.setup.id() + " lacks " +
                               std::string(to_string(m)) + " similarities");
            }
            predicted = delta_indicator(it->second, opt.indicator);
          } catch (const InputError&) {
            throw;
          } catch (const Error& e) {
            rep.warnings.push_back(r.setup.id() + " " + std::string(to_string(m)) + ": " +
                                   e.what() + "; predicted LOSS");
          }
          c.add(r.gain, predicted);
        }
        rep.rows.push_back(make_row(measure_label(m), c));
      }
      break;
    case Protocol::Loo:
    case Protocol::Tailored:
    case Protocol::TailoredTtOnly: {
      const FeatureSet fs =
          p == Protocol::TailoredTtOnly ? FeatureSet::TestTrainOnly : FeatureSet::Three;
      for (Measure m : opt.measures) {
        try {
          const ConfusionCounts c = p == Protocol::Loo
                                        ? loo_cv(domain, m, fs, opt.k)
                                        : tailored_loo_cv(domain, m, fs, opt.k);
          rep.rows.push_back(make_row(measure_label(m), c));
        } catch (const Error& e) {
          throw InputError(std::string(to_string(p)) + ": " + e.what());
        }
      }
      break;
    }
    case Protocol::Baselines:
      for (Baseline b : {Baseline::Pos, Baseline::Neg, Baseline::Once, Baseline::Maj}) {
        ConfusionCounts c;
        for (const auto& r : domain) {
          GainLabel predicted = GainLabel::Loss;
          try {
            predicted = baseline_predict(b, r.setup, domain);
          } catch (const Error& e) {
            rep.warnings.push_back(std::string(to_string(b)) + " " + e.what() +
                                   "; predicted LOSS");
          }
          c.add(r.gain, predicted);
        }
        rep.rows.push_back(make_row(std::string(to_string(b)), c));
      }
      break;
    case Protocol::Grid: {
      const std::vector<SelfTrainResult> bulk = select(results, true);
      try {
        rep.grid = bulk_grid(domain, bulk);
      } catch (const Error& e) {
        throw InputError(std::string("GRID: ") + e.what());
      }
      break;
    }
  }
  return rep;
}

void write_table_csv(std::ostream& out, std::span<const ReportRow> rows) {
  out << "type,precision_on_gain,macro_f1,accuracy\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.2f,%.2f,%.2f", r.precision_on_gain, r.macro_f1,
                  r.accuracy);
    out << r.type << ',' << buf << '\n';
  }
}

void write_grid_csv(std::ostream& out, const BulkGrid& grid) {
  out << "train";
  for (const auto& d : grid.domains) out << ',' << d;
  out << '\n';
  for (const auto& train : grid.domains) {
    out << train;
    for (const auto& test : grid.domains) {
      out << ',';
      if (train == test) {
        out << '-';
      } else {
        out << to_string(grid.cells.at({train, test}));
      }
    }
    out << '\n';
  }
}

void write_report_csv(std::ostream& out, const Report& report) {
  if (report.grid) {
    write_grid_csv(out, *report.grid);
  } else {
    write_table_csv(out, report.rows);
  }
}

}  // namespace stgain

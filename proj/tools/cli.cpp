#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <ostream>
#include <sstream>

#include "stgain/commands.hpp"
#include "stgain/error.hpp"

namespace stgain::cli {

namespace {

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// A flat `key = value` file becomes `--key=value` arguments. Blank lines and
// lines starting with '#' are ignored; '_' in keys is read as '-'.
std::vector<std::string> config_args(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file " + path);
  std::vector<std::string> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path + ": expected key = value at line " + std::to_string(line_no));
    }
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    out.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  return out;
}

// Splices config-file arguments in front of the command-line ones so the
// latter win under the take-last policy. Keys the subcommand does not know
// are skipped, so one file can serve several subcommands.
std::vector<std::string> expand_config(std::vector<std::string> args, CLI::App& app) {
  if (args.empty()) return args;
  CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (sub == nullptr) return args;
  for (std::size_t i = 1; i < args.size(); ++i) {
    std::string path;
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
    } else if (args[i].starts_with("--config=")) {
      path = args[i].substr(9);
    } else {
      continue;
    }
    std::vector<std::string> extra = config_args(path);
    std::erase_if(extra, [&](const std::string& a) {
      return sub->get_option_no_throw(a.substr(0, a.find('='))) == nullptr;
    });
    args.insert(args.begin() + 1, extra.begin(), extra.end());
    break;
  }
  return args;
}

std::vector<Measure> parse_measures(const std::string& s) {
  std::vector<Measure> out;
  if (s == "all") return {kAllMeasures.begin(), kAllMeasures.end()};
  for (const auto& name : split_list(s)) {
    const auto m = parse_measure(name);
    if (!m) throw InputError("unknown measure '" + name + "'");
    out.push_back(*m);
  }
  if (out.empty()) throw InputError("no measure given");
  return out;
}

ModeSelection parse_mode(const std::string& s) {
  if (s == "DOMAIN") return ModeSelection::Domain;
  if (s == "BULK") return ModeSelection::Bulk;
  if (s == "BOTH") return ModeSelection::Both;
  throw InputError("unknown mode '" + s + "' (DOMAIN, BULK, BOTH)");
}

std::vector<Protocol> parse_protocols(const std::string& s) {
  if (s == "ALL") return {kAllProtocols.begin(), kAllProtocols.end()};
  std::vector<Protocol> out;
  for (const auto& name : split_list(s)) {
    const auto p = parse_protocol(name);
    if (!p) throw InputError("unknown protocol '" + name + "'");
    out.push_back(*p);
  }
  if (out.empty()) throw InputError("no protocol given");
  return out;
}

int finish(const CommandResult& r, std::ostream& out, std::ostream& err) {
  for (const auto& w : r.warnings) err << "warning: " << w << '\n';
  for (const auto& e : r.errors) err << "error: " << e << '\n';
  for (const auto& p : r.outputs) out << p.string() << '\n';
  return r.exit_code;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Corpus similarity and self-training gain prediction toolkit", "stgain"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  RunConfig cfg;
  std::string corpus_dir, out_dir = ".", domains, measures = "all", mode = "DOMAIN";
  std::string format = "canonical", protocols = "ALL", results, config_path;
  bool no_stratify = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value file of option defaults");
    sub->add_option("--out", out_dir, "output directory");
  };
  auto add_corpus = [&](CLI::App* sub) {
    sub->add_option("--corpus-dir", corpus_dir, "corpus directory")->required();
    sub->add_option("--domains", domains, "comma-separated domain ids (default: all)");
  };
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed");
  };

  CLI::App* ingest = app.add_subcommand("ingest", "sample raw domains to CANONICAL corpora");
  add_common(ingest);
  add_corpus(ingest);
  add_seed(ingest);
  ingest->add_option("--sample-size", cfg.sample_size, "documents per domain");
  ingest->add_option("--format", format, "raw format: canonical or blitzer")
      ->check(CLI::IsMember({"canonical", "blitzer"}));
  ingest->add_flag("--no-stratify", no_stratify, "sample without label stratification");

  CLI::App* sweep = app.add_subcommand("sweep", "run self-training over every setup");
  add_common(sweep);
  add_corpus(sweep);
  add_seed(sweep);
  sweep->add_option("--mode", mode, "DOMAIN, BULK or BOTH");
  sweep->add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  sweep->add_option("--epochs", cfg.learner.epochs, "linear learner epochs")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--regularization", cfg.learner.regularization,
                    "linear learner L2 strength")
      ->check(CLI::PositiveNumber);
  sweep->add_option("--ar-iterations", cfg.ar_iterations,
                    "randomization iterations for p-values (0 disables)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* report = app.add_subcommand("report", "emit prediction tables as CSV");
  add_common(report);
  report->add_option("--results", results, "results JSONL from sweep")->required();
  report->add_option("--protocol", protocols,
                     "comma list of UNSUP, LOO, TAILORED, TAILORED_TT_ONLY, BASELINES, "
                     "GRID, or ALL");
  report->add_option("--measure", measures, "comma list of measures or all");
  report->add_option("--tau", cfg.tau, "indicator threshold");
  report->add_option("--k", cfg.k, "kNN neighbours")->check(CLI::PositiveNumber);

  CLI::App* sim = app.add_subcommand("similarity", "pairwise similarity matrix as CSV");
  add_common(sim);
  add_corpus(sim);
  std::string measure_name;
  sim->add_option("--measure", measure_name, "cosine, euclidean, kl, js or suwr")->required();

  CLI::App* gen = app.add_subcommand("generate", "write synthetic CANONICAL domains");
  SyntheticOptions syn;
  std::string pools;
  add_common(gen);
  gen->add_option("--n-domains", syn.n_domains, "number of domains")->check(CLI::PositiveNumber);
  gen->add_option("--vocab-size", syn.vocab_size, "vocabulary size")->check(CLI::PositiveNumber);
  gen->add_option("--docs", syn.docs_per_domain, "documents per domain")
      ->check(CLI::PositiveNumber);
  gen->add_option("--divergence", syn.divergence, "0 shared .. 1 disjoint")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", syn.seed, "random seed");
  gen->add_option("--pools", pools, "comma list: token pool of each domain");

  try {
    std::vector<std::string> args = expand_config(raw_args, app);
    std::reverse(args.begin(), args.end());
    try {
      app.parse(args);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitInputError;
    }

    cfg.corpus_dir = corpus_dir;
    cfg.output_dir = out_dir;
    cfg.domains = split_list(domains);
    cfg.stratify = !no_stratify;
    cfg.raw_format = format == "blitzer" ? CorpusFormat::Blitzer : CorpusFormat::Canonical;

    if (ingest->parsed()) return finish(cmd_ingest(cfg), out, err);
    if (sweep->parsed()) {
      cfg.mode = parse_mode(mode);
      return finish(cmd_sweep(cfg), out, err);
    }
    if (report->parsed()) {
      cfg.measures = parse_measures(measures);
      return finish(cmd_report(cfg, results, parse_protocols(protocols)), out, err);
    }
    if (sim->parsed()) {
      const auto m = parse_measure(measure_name);
      if (!m) throw InputError("unknown measure '" + measure_name + "'");
      if (out_dir != "." && !out_dir.empty()) {
        std::filesystem::create_directories(out_dir);
        const auto path = std::filesystem::path(out_dir) /
                          ("similarity_" + std::string(to_string(*m)) + ".csv");
        std::ofstream f(path, std::ios::binary | std::ios::trunc);
        if (!f) throw InputError("cannot write " + path.string());
        auto r = cmd_similarity(cfg, *m, f);
        r.outputs.push_back(path);
        return finish(r, out, err);
      }
      return finish(cmd_similarity(cfg, *m, out), out, err);
    }
    if (gen->parsed()) {
      for (const auto& p : split_list(pools)) syn.pool_of_domain.push_back(std::stoi(p));
      return finish(cmd_generate(syn, out_dir), out, err);
    }
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace stgain::cli

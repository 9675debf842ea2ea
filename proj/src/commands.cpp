#include "stgain/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "stgain/error.hpp"
#include "stgain/results_io.hpp"
#include "stgain/selftrain.hpp"

namespace stgain {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;
constexpr std::uint64_t kFnvPrime = 0x100000001b3ULL;

std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = kFnvOffset) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= kFnvPrime;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads. The first exception
// thrown by any task is rethrown after all threads finish.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(jobs, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = n;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::vector<fs::path> raw_domain_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw InputError("corpus directory " + dir.string() + " does not exist");
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string name = entry.path().filename().string();
    if (name.starts_with(".") || name == "manifest.tsv") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

CorpusVector sum_vectors(std::span<const CorpusVector* const> parts) {
  CorpusVector out;
  for (const CorpusVector* v : parts) {
    for (const auto& [t, c] : v->entries) out.entries[t] += c;
    out.total_count += v->total_count;
  }
  return out;
}

}  // namespace

std::string content_hash(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  std::uint64_t h = kFnvOffset;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    h = fnv1a(std::string_view(buf, static_cast<std::size_t>(in.gcount())), h);
  }
  return hex64(h);
}

CommandResult cmd_ingest(const RunConfig& config) {
  std::vector<fs::path> files = raw_domain_files(config.corpus_dir);
  if (!config.domains.empty()) {
    const std::set<std::string> wanted(config.domains.begin(), config.domains.end());
    std::set<std::string> found;
    std::erase_if(files, [&](const fs::path& p) {
      const bool keep = wanted.contains(p.stem().string());
      if (keep) found.insert(p.stem().string());
      return !keep;
    });
    for (const auto& d : wanted) {
      if (!found.contains(d)) throw InputError("no raw file for domain " + d);
    }
  }
  if (files.empty()) {
    throw InputError("no corpus files in " + config.corpus_dir.string());
  }
  if (config.sample_size < 1) throw InputError("sample size must be positive");
  if (fs::exists(config.output_dir) && fs::exists(config.corpus_dir) &&
      fs::equivalent(config.output_dir, config.corpus_dir)) {
    throw InputError("output directory must differ from the raw corpus directory");
  }
  fs::create_directories(config.output_dir);

  CommandResult result;
  std::ostringstream manifest;
  manifest << "domain\tsize\tpositive\tnegative\tvocab_size\thash\n";
  std::vector<std::string> undersized;
  for (const auto& file : files) {
    const std::string domain = file.stem().string();
    const Corpus raw = load_corpus(file, config.raw_format, domain);
    if (raw.size() < config.sample_size) {
      undersized.push_back(domain + " (" + std::to_string(raw.size()) + ")");
      continue;
    }
    const std::uint64_t seed = config.seed ^ fnv1a(domain);
    Corpus sampled;
    try {
      sampled = sample_corpus(raw, config.sample_size, seed, config.stratify);
    } catch (const Error& e) {
      throw InputError(domain + ": " + e.what());
    }
    const fs::path out = config.output_dir / (domain + ".txt");
    save_corpus(sampled, out);
    manifest << domain << '\t' << sampled.size() << '\t'
             << sampled.count_label(Label::Positive) << '\t'
             << sampled.count_label(Label::Negative) << '\t'
             << sampled.vocabulary().size() << '\t' << content_hash(out) << '\n';
    result.outputs.push_back(out);
  }
  const fs::path manifest_path = config.output_dir / "manifest.tsv";
  {
    std::ofstream m(manifest_path, std::ios::binary | std::ios::trunc);
    if (!m) throw InputError("cannot write " + manifest_path.string());
    m << manifest.str();
  }
  result.outputs.push_back(manifest_path);
  if (!undersized.empty()) {
    std::string msg = "skipped " + std::to_string(undersized.size()) +
                      " domain(s) below sample size " +
                      std::to_string(config.sample_size) + ":";
    for (const auto& u : undersized) msg += " " + u;
    result.warnings.push_back(msg);
    result.exit_code = kExitWarnings;
  }
  return result;
}

std::map<std::string, Corpus> load_normalized(const RunConfig& config) {
  std::vector<std::string> domains = config.domains;
  const fs::path manifest = config.corpus_dir / "manifest.tsv";
  if (!fs::is_directory(config.corpus_dir)) {
    throw InputError("corpus directory " + config.corpus_dir.string() + " does not exist");
  }
  if (domains.empty() && fs::exists(manifest)) {
    std::ifstream in(manifest);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      domains.push_back(line.substr(0, line.find('\t')));
    }
  }
  if (domains.empty()) {
    for (const auto& entry : fs::directory_iterator(config.corpus_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".txt") {
        domains.push_back(entry.path().stem().string());
      }
    }
  }
  std::sort(domains.begin(), domains.end());
  std::map<std::string, Corpus> corpora;
  for (const auto& d : domains) {
    const fs::path file = config.corpus_dir / (d + ".txt");
    if (!fs::exists(file)) throw InputError("missing corpus file " + file.string());
    corpora.emplace(d, load_corpus(file, CorpusFormat::Canonical, d));
  }
  return corpora;
}

CommandResult cmd_sweep(const RunConfig& config) {
  const std::map<std::string, Corpus> corpora = load_normalized(config);
  std::vector<std::string> ids;
  for (const auto& [id, c] : corpora) {
    if (!c.fully_labeled()) throw InputError("corpus " + id + " is not fully labeled");
    ids.push_back(id);
  }
  if (ids.size() < 3) throw InputError("a sweep needs at least 3 domains");

  std::vector<SetupTriple> setups;
  try {
    if (config.mode != ModeSelection::Bulk) {
      setups = enumerate_setups(ids, SweepMode::Domain, config.seed);
    }
    if (config.mode != ModeSelection::Domain) {
      auto bulk = enumerate_setups(ids, SweepMode::Bulk, config.seed);
      setups.insert(setups.end(), bulk.begin(), bulk.end());
    }
  } catch (const Error& e) {
    throw InputError(e.what());
  }

  fs::create_directories(config.output_dir);
  const fs::path results_path = config.output_dir / "results.jsonl";
  std::vector<SelfTrainResult> all;
  if (fs::exists(results_path)) {
    all = read_results(results_path).results;
    sort_results(all);
    write_results(results_path, all);  // drops a truncated tail line
  }
  std::set<std::string> done;
  for (const auto& r : all) done.insert(r.setup.id());
  std::vector<SetupTriple> pending;
  for (const auto& s : setups) {
    if (!done.contains(s.id())) pending.push_back(s);
  }

  // Shared, read-only inputs for the workers.
  std::map<std::string, CorpusVector> centroids;
  for (const auto& [id, c] : corpora) centroids.emplace(id, centroid(c));

  LinearHyperparams hp = config.learner;
  hp.seed = config.seed;
  std::set<std::string> trains;
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& s : pending) {
    trains.insert(s.train);
    pairs.insert({s.train, s.test});
  }
  const std::vector<std::string> train_list(trains.begin(), trains.end());
  std::vector<LinearModel> models(train_list.size());
  parallel_for(train_list.size(), config.jobs, [&](std::size_t i) {
    models[i] = train_linear(to_features(corpora.at(train_list[i])), hp);
  });
  std::map<std::string, const LinearModel*> model_of;
  for (std::size_t i = 0; i < train_list.size(); ++i) model_of[train_list[i]] = &models[i];

  // Base runs keyed by (train, test): each pair's baseline is computed once.
  const std::vector<std::pair<std::string, std::string>> pair_list(pairs.begin(), pairs.end());
  std::vector<BaseRun> base_runs(pair_list.size());
  parallel_for(pair_list.size(), config.jobs, [&](std::size_t i) {
    const auto& [train, test] = pair_list[i];
    const Corpus& t = corpora.at(test);
    BaseRun& b = base_runs[i];
    b.model = *model_of.at(train);
    b.test_predictions = predict_linear(b.model, to_features(t));
    b.scores = labeling_scores(gold_labels(t), b.test_predictions);
  });
  std::map<std::pair<std::string, std::string>, const BaseRun*> base_of;
  for (std::size_t i = 0; i < pair_list.size(); ++i) base_of[pair_list[i]] = &base_runs[i];

  SelfTrainOptions options;
  options.learner = config.learner;
  options.ar_iterations = config.ar_iterations;

  std::mutex out_mu;
  std::ofstream out(results_path, std::ios::binary | std::ios::app);
  if (!out) throw InputError("cannot write " + results_path.string());
  std::vector<SelfTrainResult> fresh(pending.size());

  parallel_for(pending.size(), config.jobs, [&](std::size_t i) {
    const SetupTriple& s = pending[i];
    const Corpus& train = corpora.at(s.train);
    const Corpus& test = corpora.at(s.test);
    const BaseRun& base = *base_of.at({s.train, s.test});
    SelfTrainResult r;
    CorpusVector bulk_vec;
    const CorpusVector* extra_vec = nullptr;
    if (s.bulk()) {
      const Corpus extra = bulk_corpus(corpora, s.train, s.test);
      r = self_train(s, train, test, extra, base, options);
      std::vector<const CorpusVector*> parts;
      for (const auto& [id, v] : centroids) {
        if (id != s.train && id != s.test) parts.push_back(&v);
      }
      bulk_vec = sum_vectors(parts);
      extra_vec = &bulk_vec;
    } else {
      r = self_train(s, train, test, corpora.at(s.extra), base, options);
      extra_vec = &centroids.at(s.extra);
    }
    for (Measure m : kAllMeasures) {
      r.similarities[m] = similarity_features(centroids.at(s.test), centroids.at(s.train),
                                              *extra_vec, m);
    }
    const std::string line = to_jsonl_line(r);
    {
      std::lock_guard lock(out_mu);
      out << line << '\n';
      out.flush();
    }
    fresh[i] = std::move(r);
  });
  out.close();

  all.insert(all.end(), std::make_move_iterator(fresh.begin()),
             std::make_move_iterator(fresh.end()));
  sort_results(all);
  write_results(results_path, all);

  CommandResult result;
  result.outputs.push_back(results_path);
  return result;
}

CommandResult cmd_report(const RunConfig& config, const fs::path& results_path,
                         const std::vector<Protocol>& protocols) {
  const ResultsFile file = read_results(results_path);
  CommandResult result;
  if (file.dropped_partial_line) {
    result.warnings.push_back("ignored a truncated final record in " +
                              results_path.string());
  }
  ReportOptions opt;
  opt.measures = config.measures;
  opt.indicator.tau = config.tau;
  opt.k = config.k;
  fs::create_directories(config.output_dir);
  for (Protocol p : protocols) {
    Report rep;
    try {
      rep = make_report(p, file.results, opt);
    } catch (const InputError& e) {
      result.errors.push_back(e.what());
      continue;
    }
    std::string name(to_string(p));
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const fs::path path = config.output_dir / (name + ".csv");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + path.string());
    write_report_csv(out, rep);
    result.outputs.push_back(path);
    result.warnings.insert(result.warnings.end(), rep.warnings.begin(), rep.warnings.end());
  }
  if (!result.errors.empty()) {
    result.exit_code = kExitInputError;
  } else if (!result.warnings.empty()) {
    result.exit_code = kExitWarnings;
  }
  return result;
}

void write_similarity_matrix(std::ostream& out, const std::vector<std::string>& ids,
                             const std::vector<std::vector<double>>& matrix) {
  out << "domain";
  for (const auto& id : ids) out << ',' << id;
  out << '\n';
  char buf[40];
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out << ids[i];
    for (double v : matrix[i]) {
      std::snprintf(buf, sizeof buf, "%.12g", v);
      out << ',' << buf;
    }
    out << '\n';
  }
}

CommandResult cmd_similarity(const RunConfig& config, Measure measure, std::ostream& out) {
  const std::map<std::string, Corpus> corpora = load_normalized(config);
  if (corpora.empty()) throw InputError("no corpora found in " + config.corpus_dir.string());
  std::vector<std::string> ids;
  std::vector<Corpus> list;
  for (const auto& [id, c] : corpora) {
    ids.push_back(id);
    list.push_back(c);
  }
  write_similarity_matrix(out, ids, similarity_matrix(list, measure));
  return {};
}

CommandResult cmd_generate(const SyntheticOptions& options, const fs::path& output_dir) {
  fs::create_directories(output_dir);
  CommandResult result;
  for (const Corpus& c : generate_synthetic_domains(options)) {
    const fs::path path = output_dir / (c.domain_id() + ".txt");
    save_corpus(c, path);
    result.outputs.push_back(path);
  }
  return result;
}

}  // namespace stgain

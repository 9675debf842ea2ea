#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "stgain/corpus.hpp"
#include "stgain/learner.hpp"
#include "stgain/report.hpp"
#include "stgain/similarity.hpp"

namespace stgain {

enum class ModeSelection { Domain, Bulk, Both };

struct RunConfig {
  std::filesystem::path corpus_dir;
  std::vector<std::string> domains;  // empty: every domain found
  std::size_t sample_size = 2500;
  std::uint64_t seed = 0;
  std::vector<Measure> measures{kAllMeasures.begin(), kAllMeasures.end()};
  ModeSelection mode = ModeSelection::Domain;
  LinearHyperparams learner;
  std::filesystem::path output_dir = ".";
  int jobs = 1;
  double tau = -1.0;
  int k = 1;
  CorpusFormat raw_format = CorpusFormat::Canonical;
  bool stratify = true;
  int ar_iterations = 1000;
};

// Exit codes shared by every command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitInputError = 2;

struct CommandResult {
  int exit_code = kExitOk;
  std::vector<std::string> warnings;
  std::vector<std::string> errors;
  std::vector<std::filesystem::path> outputs;
};

// 64-bit FNV-1a of a file's bytes as 16 hex digits.
std::string content_hash(const std::filesystem::path& path);

// Samples every raw domain file in corpus_dir down to sample_size documents
// and writes <domain>.txt CANONICAL files plus manifest.tsv to output_dir.
// Undersized domains are skipped with a warning.
CommandResult cmd_ingest(const RunConfig& config);

// Loads the normalized corpora in corpus_dir. Domains come from
// config.domains, else manifest.tsv, else every *.txt file.
std::map<std::string, Corpus> load_normalized(const RunConfig& config);

// Runs every setup of the configured mode(s) and writes
// output_dir/results.jsonl. Records already present are kept and skipped;
// the final file is rewritten in canonical order.
CommandResult cmd_sweep(const RunConfig& config);

// Writes output_dir/<protocol>.csv for each requested protocol. A protocol
// the results cannot support is listed in errors and the rest still run.
CommandResult cmd_report(const RunConfig& config,
                         const std::filesystem::path& results_path,
                         const std::vector<Protocol>& protocols);

// CSV matrix: header `domain,<ids...>`, cell [row][col] = sim(row, col).
void write_similarity_matrix(std::ostream& out, const std::vector<std::string>& ids,
                             const std::vector<std::vector<double>>& matrix);
CommandResult cmd_similarity(const RunConfig& config, Measure measure,
                             std::ostream& out);

// Writes synthetic CANONICAL domains to output_dir.
CommandResult cmd_generate(const SyntheticOptions& options,
                           const std::filesystem::path& output_dir);

}  // namespace stgain

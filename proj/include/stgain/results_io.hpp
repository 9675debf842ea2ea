#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "stgain/selftrain.hpp"

namespace stgain {

// One JSON object per line with the fields
//   setup_id, train, test, extra, seed, base_f1, st_f1, base_acc, st_acc,
//   gain, p_value, pseudo_label_acc,
//   sim.{cosine,euclidean,kl,js,suwr}.{test_train,extra_train,test_extra}
// where sim is a nested object and absent optionals are null.
std::string to_jsonl_line(const SelfTrainResult& r);
SelfTrainResult parse_jsonl_line(std::string_view line);

struct ResultsFile {
  std::vector<SelfTrainResult> results;
  // A truncated final line (interrupted write) is dropped, not fatal.
  bool dropped_partial_line = false;
};

ResultsFile read_results(const std::filesystem::path& path);

// Canonical record order: DOMAIN setups before BULK, then by
// (train, test, extra).
void sort_results(std::vector<SelfTrainResult>& results);

// Writes via a temporary file and rename.
void write_results(const std::filesystem::path& path,
                   std::span<const SelfTrainResult> results);

}  // namespace stgain

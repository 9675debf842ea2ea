#include "stgain/results_io.hpp"

#include <algorithm>
#include <fstream>
#include <tuple>

#include <json.hpp>

#include "stgain/error.hpp"

namespace stgain {

using Json = nlohmann::ordered_json;

namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

std::optional<double> read_optional(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

std::string to_jsonl_line(const SelfTrainResult& r) {
  Json j;
  j["setup_id"] = r.setup.id();
  j["train"] = r.setup.train;
  j["test"] = r.setup.test;
  j["extra"] = r.setup.extra;
  j["seed"] = r.setup.seed;
  j["base_f1"] = r.base_f1;
  j["st_f1"] = r.st_f1;
  j["base_acc"] = r.base_acc;
  j["st_acc"] = r.st_acc;
  j["gain"] = std::string(to_string(r.gain));
  j["p_value"] = optional_number(r.p_value);
  j["pseudo_label_acc"] = optional_number(r.pseudo_label_acc);
  Json sim = Json::object();
  for (Measure m : kAllMeasures) {
    auto it = r.similarities.find(m);
    if (it == r.similarities.end()) continue;
    sim[std::string(to_string(m))] = {{"test_train", it->second.test_train},
                                      {"extra_train", it->second.extra_train},
                                      {"test_extra", it->second.test_extra}};
  }
  j["sim"] = std::move(sim);
  return j.dump();
}

SelfTrainResult parse_jsonl_line(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::parse_error& e) {
    throw InputError(std::string("malformed results record: ") + e.what());
  }
  try {
    SelfTrainResult r;
    r.setup.train = j.at("train").get<std::string>();
    r.setup.test = j.at("test").get<std::string>();
    r.setup.extra = j.at("extra").get<std::string>();
    r.setup.seed = j.at("seed").get<std::uint64_t>();
    r.base_f1 = j.at("base_f1").get<double>();
    r.st_f1 = j.at("st_f1").get<double>();
    r.base_acc = j.at("base_acc").get<double>();
    r.st_acc = j.at("st_acc").get<double>();
    const auto gain = parse_gain_label(j.at("gain").get<std::string>());
    if (!gain) throw InputError("bad gain label in results record");
    r.gain = *gain;
    r.p_value = read_optional(j, "p_value");
    r.pseudo_label_acc = read_optional(j, "pseudo_label_acc");
    if (j.contains("sim")) {
      for (const auto& [name, f] : j.at("sim").items()) {
        const auto m = parse_measure(name);
        if (!m) throw InputError("unknown measure '" + name + "' in results record");
        r.similarities[*m] = {*m, f.at("test_train").get<double>(),
                              f.at("extra_train").get<double>(),
                              f.at("test_extra").get<double>()};
      }
    }
    if (j.contains("setup_id") && j.at("setup_id").get<std::string>() != r.setup.id()) {
      throw InputError("setup_id does not match its domains: " +
                       j.at("setup_id").get<std::string>());
    }
    return r;
  } catch (const Json::exception& e) {
    throw InputError(std::string("incomplete results record: ") + e.what());
  }
}

ResultsFile read_results(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open results " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(std::move(line));
  }
  ResultsFile out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    try {
      out.results.push_back(parse_jsonl_line(lines[i]));
    } catch (const InputError& e) {
      if (i + 1 == lines.size()) {
        out.dropped_partial_line = true;
        break;
      }
      throw InputError(path.string() + " line " + std::to_string(i + 1) + ": " + e.what());
    }
  }
  return out;
}

void sort_results(std::vector<SelfTrainResult>& results) {
  std::stable_sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
    return std::forward_as_tuple(a.setup.bulk(), a.setup.train, a.setup.test, a.setup.extra) <
           std::forward_as_tuple(b.setup.bulk(), b.setup.train, b.setup.test, b.setup.extra);
  });
}

void write_results(const std::filesystem::path& path,
                   std::span<const SelfTrainResult> results) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    for (const auto& r : results) out << to_jsonl_line(r) << '\n';
    if (!out) throw InputError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace stgain

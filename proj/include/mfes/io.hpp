#pragma once

#include "mfes/campaign.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mfes {

/// "%.15g": the precision used for every float written to disk.
std::string format_double(double v);

/// One JSON object per line, one line per iteration.
std::string records_to_jsonl(const std::vector<IterationRecord>& records);
std::vector<IterationRecord> records_from_jsonl(const std::string& text);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// A campaign as persisted on disk: result.json plus records.jsonl in the same directory.
struct StoredResult {
  std::string method;  // "mfes" | "random_search"
  CampaignConfig config;
  CampaignResult result;
};

inline constexpr const char* kResultFile = "result.json";
inline constexpr const char* kRecordsFile = "records.jsonl";

void write_result(const std::filesystem::path& dir, const StoredResult& stored);
StoredResult read_result(const std::filesystem::path& result_json);

/// Frozen reference evaluations of the testbed.
struct GoldenEntry {
  std::string scenario;
  Fidelity fidelity = Fidelity::kReal;
  std::uint64_t seed = 0;
  ParamVector x;
  double total = 0.0;
  double stability = 0.0;
  double penalty = 0.0;
  bool fell = false;
  double fall_time = -1.0;  // -1 when the rollout did not fall
};

/// Evaluates the fixed set of (scenario, x, fidelity, seed) cases with the golden configs.
std::vector<GoldenEntry> compute_golden_fixtures();
std::string fixtures_to_text(const std::vector<GoldenEntry>& entries);
std::vector<GoldenEntry> fixtures_from_text(const std::string& text);

}  // namespace mfes

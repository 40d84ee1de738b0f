#pragma once

#include "mfes/entropy_search.hpp"
#include "mfes/gp.hpp"
#include "mfes/testbed.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace mfes {

/// Filtered-entropy stopping rule plus iteration caps.
struct TerminationConfig {
  double velocity = 0.9;           // v in (0, 1)
  double entropy_threshold = 0.2;  // stop once the filtered dH drops below this
  int min_iterations = 15;
  int max_iterations = 130;
  double innovation_cap = 3.0;  // kappa: incoming dH is clamped to [prev / kappa, prev * kappa]
  int max_real_evaluations = -1;  // optional budget on real runs, -1 = unlimited

  void validate() const;
};

struct CampaignConfig {
  std::string scenario = "ankle2d";
  Bounds bounds;
  MFModelParams model;
  AcquisitionConfig acquisition;
  PenaltyParams penalty;
  TerminationConfig termination;
  CostPlane cost_plane = CostPlane::kSummed;
  int initial_sim_evaluations = 5;
  double real_fall_gate = kFallCost / 2.0;
  std::uint64_t master_seed = 0;

  void validate() const;

  /// entropy_threshold defaults to this fraction of ln(grid_size).
  static constexpr double default_threshold_fraction = 0.002;

  /// Golden configuration of a testbed scenario.
  static CampaignConfig defaults_for(const std::string& scenario);
};

struct IterationRecord {
  int index = 0;
  AugmentedInput input;
  double cost = 0.0;
  double expected_dH = 0.0;
  double filtered_dH = 0.0;
  double wall_time = 0.0;  // walking seconds the evaluation consumed
  bool fell = false;
};

enum class TerminationReason { kEntropy, kMaxIterations, kRealBudget, kModelFitFailure };
const char* to_string(TerminationReason r) noexcept;
TerminationReason parse_termination_reason(const std::string& s);

struct CampaignResult {
  std::vector<IterationRecord> records;
  ParamVector x_opt;
  double predicted_cost = 0.0;
  int n_sim = 0;
  int n_real = 0;
  TerminationReason reason = TerminationReason::kMaxIterations;
  std::string diagnostic;
};

/// Cost oracle used by the loop: (x, fidelity, seed) -> evaluation.
using EvaluateFn = std::function<Evaluation(const ParamVector&, Fidelity, std::uint64_t)>;

/// One step of the saturated exponential filter on expected entropy change.
double filtered_entropy_update(double prev_filtered, double current_dH, const TerminationConfig& t);

/// True when the loop may stop after `iterations` records with the given filtered value.
bool entropy_stop(int iterations, double filtered_dH, const TerminationConfig& t);

Testbed make_testbed(const CampaignConfig& cfg);

/// Refits the model on the observations contained in a record list.
GPPosterior refit(const CampaignConfig& cfg, const std::vector<IterationRecord>& records);

/// Multi-fidelity Entropy Search campaign.
CampaignResult run_mfes(const CampaignConfig& cfg, const EvaluateFn& evaluate);
CampaignResult run_mfes(const CampaignConfig& cfg);

/// Greedy real-only baseline: perturb the incumbent with uniform noise, keep improvements.
CampaignResult run_random_search(const CampaignConfig& cfg, int real_budget, const EvaluateFn& evaluate);
CampaignResult run_random_search(const CampaignConfig& cfg, int real_budget);

}  // namespace mfes

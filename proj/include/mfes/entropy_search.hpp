#pragma once

#include "mfes/gp.hpp"

#include <cstdint>
#include <limits>
#include <vector>

namespace mfes {

/// Finite set of points on which the minimizer distribution is represented.
struct RepresenterGrid {
  std::vector<ParamVector> points;
  std::uint64_t generation_seed = 0;

  std::size_t size() const noexcept { return points.size(); }
};

/// Probability, per grid point, that it holds the minimum of the real-level cost.
struct PminDistribution {
  std::vector<double> probabilities;
  int sample_count = 0;
};

struct AcquisitionConfig {
  int grid_size = 60;        // M
  int pmin_samples = 2000;   // S
  int fantasy_draws = 20;    // F
  int candidate_count = 60;  // C, capped at M: candidates are grid points
  double w_sim = 10.0;
  double w_real = 50.0;
  std::uint64_t seed = 0;

  void validate() const;
  double weight(Fidelity f) const noexcept { return f == Fidelity::kReal ? w_real : w_sim; }
};

struct AcquisitionChoice {
  ParamVector x;
  Fidelity fidelity = Fidelity::kSim;
  double expected_dH = 0.0;
  double weighted_score = 0.0;
  std::size_t grid_index = 0;
};

/// Per-candidate scores from select_next, exposed for diagnostics and tests.
struct CandidateScore {
  std::size_t grid_index = 0;
  Fidelity fidelity = Fidelity::kSim;
  double expected_dH = 0.0;
  bool vetoed = false;
};

/// Half low-discrepancy coverage of the box, half the lowest points of one posterior
/// sample of the real-level cost drawn on a dense uniform set.
RepresenterGrid build_grid(const Bounds& bounds, const GPPosterior& post, int grid_size, std::uint64_t seed);

/// Monte-Carlo argmin frequencies of joint real-level posterior samples on the grid.
PminDistribution pmin(const GPPosterior& post, const RepresenterGrid& grid, int samples, std::uint64_t seed);

/// Shannon entropy in nats, with 0 ln 0 = 0.
double entropy(const PminDistribution& p);
double entropy(std::span<const double> p);

/// H(p_min now) - E_y[H(p_min after observing y at candidate)], estimated with
/// cfg.fantasy_draws fantasies over cfg.pmin_samples joint posterior samples.
double expected_entropy_change(const GPPosterior& post, const AugmentedInput& candidate, const RepresenterGrid& grid,
                               const AcquisitionConfig& cfg);

/// Scores every grid point at both fidelities and returns argmax of dH / w_fidelity.
/// Real candidates whose simulation posterior mean exceeds real_sim_mean_cap are skipped.
AcquisitionChoice select_next(const GPPosterior& post, const Bounds& bounds, const AcquisitionConfig& cfg,
                              const RepresenterGrid& grid,
                              double real_sim_mean_cap = std::numeric_limits<double>::infinity(),
                              std::vector<CandidateScore>* scores = nullptr);

/// Convenience overload that builds the grid from cfg.seed.
AcquisitionChoice select_next(const GPPosterior& post, const Bounds& bounds, const AcquisitionConfig& cfg);

/// Picks the highest weighted score among precomputed dH values (lowest index wins ties).
/// Split out so the fidelity trade-off can be checked independently of the sampler.
std::size_t weighted_argmax(std::span<const CandidateScore> scores, double w_sim, double w_real);

/// Point i of the Halton sequence in [0,1)^dim (i >= 1 skips the origin).
ParamVector halton_point(std::uint64_t index, Eigen::Index dim);

}  // namespace mfes

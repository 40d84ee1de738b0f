#include "mfes/entropy_search.hpp"

#include "mfes/random.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace mfes {

namespace {

constexpr std::uint64_t kBaseStream = 0;
constexpr std::uint64_t kCandidateStream = 1;
constexpr std::uint64_t kGridStream = 2;
constexpr std::uint64_t kNoiseStream = 0xFFFF;

// Joint posterior samples over the real-level grid values plus optional extra
// augmented inputs. Fantasy conditioning reuses the samples through pathwise
// (Matheron) updates: f | y ~ f + Cov(f, y) / Var(y) * (y - y_sample).
class JointSampler {
 public:
  JointSampler(const GPPosterior& post, const RepresenterGrid& grid, const std::vector<AugmentedInput>& extras,
               int samples, std::uint64_t seed)
      : grid_size_(static_cast<Eigen::Index>(grid.size())), scale_(post.params().k_sim.variance) {
    std::vector<AugmentedInput> queries;
    queries.reserve(grid.size() + extras.size());
    for (const auto& p : grid.points) queries.push_back({Fidelity::kReal, p});
    queries.insert(queries.end(), extras.begin(), extras.end());

    auto joint = post.predict_joint(queries);
    mean_ = std::move(joint.mean);
    cov_ = std::move(joint.covariance);
    const auto chol = cholesky_with_jitter(cov_, scale_);
    const Eigen::MatrixXd l = chol.llt.matrixL();

    const auto n = static_cast<Eigen::Index>(queries.size());
    Eigen::MatrixXd z(n, samples);
    Rng rng = make_rng(seed);
    std::normal_distribution<double> normal;
    for (Eigen::Index s = 0; s < samples; ++s)
      for (Eigen::Index i = 0; i < n; ++i) z(i, s) = normal(rng);
    samples_.noalias() = l * z;
    samples_.colwise() += mean_;

    std::vector<int> counts(static_cast<std::size_t>(grid_size_), 0);
    for (Eigen::Index s = 0; s < samples; ++s) {
      Eigen::Index best = 0;
      samples_.col(s).head(grid_size_).minCoeff(&best);
      ++counts[static_cast<std::size_t>(best)];
    }
    current_ = to_distribution(counts);
  }

  const PminDistribution& current() const noexcept { return current_; }

  double expected_change(Eigen::Index joint_index, double noise_std, int fantasies, std::uint64_t seed) const {
    const double h0 = entropy(current_);
    const double var_y = cov_(joint_index, joint_index) + noise_std * noise_std;
    if (var_y <= 1e-12 * scale_) return 0.0;

    const Eigen::VectorXd gain = cov_.col(joint_index).head(grid_size_) / var_y;
    const auto n_samples = samples_.cols();

    Eigen::VectorXd y_sample = samples_.row(joint_index).transpose();
    if (noise_std > 0.0) {
      Rng rng = make_rng(derive_seed(seed, {kNoiseStream}));
      std::normal_distribution<double> normal;
      for (Eigen::Index s = 0; s < n_samples; ++s) y_sample(s) += noise_std * normal(rng);
    }

    const double sd_y = std::sqrt(var_y);
    std::vector<int> counts(static_cast<std::size_t>(grid_size_));
    double h_sum = 0.0;
    for (int f = 0; f < fantasies; ++f) {
      Rng rng = make_rng(derive_seed(seed, {static_cast<std::uint64_t>(f)}));
      std::normal_distribution<double> normal;
      const double y_f = mean_(joint_index) + sd_y * normal(rng);

      std::fill(counts.begin(), counts.end(), 0);
      for (Eigen::Index s = 0; s < n_samples; ++s) {
        const double b = y_f - y_sample(s);
        const double* col = samples_.col(s).data();
        Eigen::Index best = 0;
        double best_val = col[0] + gain(0) * b;
        for (Eigen::Index g = 1; g < grid_size_; ++g) {
          const double v = col[g] + gain(g) * b;
          if (v < best_val) {
            best_val = v;
            best = g;
          }
        }
        ++counts[static_cast<std::size_t>(best)];
      }
      h_sum += entropy(to_distribution(counts));
    }
    return h0 - h_sum / fantasies;
  }

 private:
  static PminDistribution to_distribution(const std::vector<int>& counts) {
    PminDistribution p;
    p.sample_count = std::accumulate(counts.begin(), counts.end(), 0);
    p.probabilities.resize(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
      p.probabilities[i] = static_cast<double>(counts[i]) / p.sample_count;
    return p;
  }

  Eigen::Index grid_size_;
  double scale_;
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd samples_;  // one joint sample per column
  PminDistribution current_;
};

double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

void check_grid(const RepresenterGrid& grid, const Bounds& bounds) {
  if (grid.size() < 1) throw ConfigError("grid is empty");
  for (const auto& p : grid.points)
    if (!bounds.contains(p)) throw ConfigError("grid point outside bounds");
}

}  // namespace

void AcquisitionConfig::validate() const {
  if (grid_size < 2) throw ConfigError("acquisition: grid_size must be >= 2");
  if (pmin_samples < 1 || fantasy_draws < 1 || candidate_count < 1)
    throw ConfigError("acquisition: sample/fantasy/candidate counts must be >= 1");
  if (!(w_sim > 0.0) || !(w_real > 0.0)) throw ConfigError("acquisition: weights must be > 0");
}

ParamVector halton_point(std::uint64_t index, Eigen::Index dim) {
  static constexpr std::array<std::uint64_t, 16> kPrimes{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};
  if (dim > static_cast<Eigen::Index>(kPrimes.size())) throw ConfigError("halton: dimension too large");
  ParamVector u(dim);
  for (Eigen::Index d = 0; d < dim; ++d) u(d) = radical_inverse(index, kPrimes[static_cast<std::size_t>(d)]);
  return u;
}

RepresenterGrid build_grid(const Bounds& bounds, const GPPosterior& post, int grid_size, std::uint64_t seed) {
  if (grid_size < 2) throw ConfigError("build_grid: grid size must be >= 2");
  const auto dim = bounds.dim();
  if (dim != post.params().dim()) throw ConfigError("build_grid: bounds/model dimension mismatch");

  RepresenterGrid grid;
  grid.generation_seed = seed;
  const int n_thompson = grid_size / 2;
  const int n_lowdisc = grid_size - n_thompson;
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  // Cranley-Patterson rotated Halton points.
  ParamVector shift(dim);
  for (Eigen::Index d = 0; d < dim; ++d) shift(d) = unif(rng);
  for (int i = 0; i < n_lowdisc; ++i) {
    ParamVector u = halton_point(static_cast<std::uint64_t>(i + 1), dim) + shift;
    u = u.array() - u.array().floor();
    grid.points.push_back(bounds.clip(bounds.from_unit(u)));
  }

  const int n_dense = std::max(200, 8 * n_thompson);
  std::vector<AugmentedInput> dense;
  dense.reserve(static_cast<std::size_t>(n_dense));
  for (int i = 0; i < n_dense; ++i) {
    ParamVector u(dim);
    for (Eigen::Index d = 0; d < dim; ++d) u(d) = unif(rng);
    dense.push_back({Fidelity::kReal, bounds.from_unit(u)});
  }
  const auto joint = post.predict_joint(dense);
  const auto chol = cholesky_with_jitter(joint.covariance, post.params().k_sim.variance);
  Eigen::VectorXd z(n_dense);
  std::normal_distribution<double> normal;
  for (Eigen::Index i = 0; i < n_dense; ++i) z(i) = normal(rng);
  const Eigen::VectorXd draw = joint.mean + chol.llt.matrixL() * z;

  std::vector<int> order(static_cast<std::size_t>(n_dense));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return draw(a) < draw(b); });
  for (int i = 0; i < n_thompson; ++i) grid.points.push_back(dense[static_cast<std::size_t>(order[i])].x);
  return grid;
}

PminDistribution pmin(const GPPosterior& post, const RepresenterGrid& grid, int samples, std::uint64_t seed) {
  if (samples < 1) throw ConfigError("pmin: sample count must be >= 1");
  if (grid.size() == 0) throw ConfigError("pmin: empty grid");
  JointSampler sampler(post, grid, {}, samples, derive_seed(seed, {kBaseStream}));
  return sampler.current();
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double q : p)
    if (q > 0.0) h -= q * std::log(q);
  return std::max(0.0, h);
}

double entropy(const PminDistribution& p) { return entropy(std::span<const double>(p.probabilities)); }

double expected_entropy_change(const GPPosterior& post, const AugmentedInput& candidate, const RepresenterGrid& grid,
                               const AcquisitionConfig& cfg) {
  cfg.validate();
  std::vector<AugmentedInput> extras;
  Eigen::Index index = -1;
  if (candidate.fidelity == Fidelity::kReal) {
    for (std::size_t g = 0; g < grid.size(); ++g)
      if (grid.points[g] == candidate.x) index = static_cast<Eigen::Index>(g);
  }
  if (index < 0) {
    extras.push_back(candidate);
    index = static_cast<Eigen::Index>(grid.size());
  }
  JointSampler sampler(post, grid, extras, cfg.pmin_samples, derive_seed(cfg.seed, {kBaseStream}));
  return sampler.expected_change(index, post.params().noise_std(candidate.fidelity), cfg.fantasy_draws,
                                 derive_seed(cfg.seed, {kCandidateStream, 0}));
}

std::size_t weighted_argmax(std::span<const CandidateScore> scores, double w_sim, double w_real) {
  std::size_t best = scores.size();
  double best_score = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < scores.size(); ++k) {
    if (scores[k].vetoed) continue;
    const double w = scores[k].fidelity == Fidelity::kReal ? w_real : w_sim;
    const double s = scores[k].expected_dH / w;
    if (best == scores.size() || s > best_score) {
      best = k;
      best_score = s;
    }
  }
  if (best == scores.size()) throw ConfigError("select_next: every candidate was vetoed");
  return best;
}

AcquisitionChoice select_next(const GPPosterior& post, const Bounds& bounds, const AcquisitionConfig& cfg,
                              const RepresenterGrid& grid, double real_sim_mean_cap,
                              std::vector<CandidateScore>* scores_out) {
  cfg.validate();
  check_grid(grid, bounds);
  const auto m = grid.size();
  const auto c = std::min<std::size_t>(static_cast<std::size_t>(cfg.candidate_count), m);

  std::vector<std::size_t> candidates(c);
  for (std::size_t j = 0; j < c; ++j) candidates[j] = (j * m) / c;

  std::vector<AugmentedInput> extras;
  extras.reserve(c);
  for (auto g : candidates) extras.push_back({Fidelity::kSim, grid.points[g]});
  JointSampler sampler(post, grid, extras, cfg.pmin_samples, derive_seed(cfg.seed, {kBaseStream}));

  // Candidate k: sim candidates occupy k < c, real candidates k >= c; lowest k wins ties.
  std::vector<CandidateScore> scores;
  scores.reserve(2 * c);
  for (std::size_t k = 0; k < 2 * c; ++k) {
    const bool real = k >= c;
    const std::size_t j = real ? k - c : k;
    CandidateScore sc;
    sc.grid_index = candidates[j];
    sc.fidelity = real ? Fidelity::kReal : Fidelity::kSim;
    if (real && std::isfinite(real_sim_mean_cap)) {
      sc.vetoed = post.predict({Fidelity::kSim, grid.points[sc.grid_index]}).mean > real_sim_mean_cap;
    }
    if (!sc.vetoed) {
      const auto joint_index = real ? static_cast<Eigen::Index>(sc.grid_index) : static_cast<Eigen::Index>(m + j);
      sc.expected_dH = sampler.expected_change(joint_index, post.params().noise_std(sc.fidelity), cfg.fantasy_draws,
                                               derive_seed(cfg.seed, {kCandidateStream, k}));
    }
    scores.push_back(sc);
  }

  const auto best = weighted_argmax(scores, cfg.w_sim, cfg.w_real);
  AcquisitionChoice choice;
  choice.grid_index = scores[best].grid_index;
  choice.x = grid.points[choice.grid_index];
  choice.fidelity = scores[best].fidelity;
  choice.expected_dH = scores[best].expected_dH;
  choice.weighted_score = choice.expected_dH / cfg.weight(choice.fidelity);
  if (scores_out) *scores_out = std::move(scores);
  return choice;
}

AcquisitionChoice select_next(const GPPosterior& post, const Bounds& bounds, const AcquisitionConfig& cfg) {
  cfg.validate();
  const auto grid = build_grid(bounds, post, cfg.grid_size, derive_seed(cfg.seed, {kGridStream}));
  return select_next(post, bounds, cfg, grid);
}

}  // namespace mfes

#include "mfes/config.hpp"

#include "json_util.hpp"
#include "mfes/io.hpp"

#include <cmath>

namespace mfes {

namespace {

using detail::StrictObject;
using nlohmann::json;
using nlohmann::ordered_json;

void read_kernel(const json& j, const std::string& path, RQKernelParams& k) {
  StrictObject o(j, path);
  o.read("variance", k.variance);
  o.read("alpha", k.alpha);
  o.read_vector("lengthscales", k.lengthscales);
  o.finish();
}

ordered_json kernel_json(const RQKernelParams& k) {
  ordered_json j;
  j["variance"] = k.variance;
  j["alpha"] = k.alpha;
  j["lengthscales"] = detail::vector_json(k.lengthscales);
  return j;
}

}  // namespace

CampaignConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  StrictObject top(root, "config");
  std::string scenario = "ankle2d";
  top.read("scenario", scenario);
  CampaignConfig cfg = CampaignConfig::defaults_for(scenario);

  top.read("master_seed", cfg.master_seed);
  std::string plane = to_string(cfg.cost_plane);
  if (top.read("cost_plane", plane)) cfg.cost_plane = parse_cost_plane(plane);
  top.read("initial_sim_evaluations", cfg.initial_sim_evaluations);
  top.read("real_fall_gate", cfg.real_fall_gate);

  if (const auto* b = top.child("bounds")) {
    StrictObject o(*b, "config.bounds");
    ParamVector lower = cfg.bounds.lower;
    ParamVector upper = cfg.bounds.upper;
    o.read_vector("lower", lower);
    o.read_vector("upper", upper);
    o.finish();
    cfg.bounds = Bounds(lower, upper);
  }

  if (const auto* m = top.child("model")) {
    StrictObject o(*m, "config.model");
    if (const auto* k = o.child("k_sim")) read_kernel(*k, "config.model.k_sim", cfg.model.k_sim);
    if (const auto* k = o.child("k_eps")) read_kernel(*k, "config.model.k_eps", cfg.model.k_eps);
    o.read("mu_sim", cfg.model.mu_sim);
    o.read("mu_eps", cfg.model.mu_eps);
    o.read("noise_sim", cfg.model.noise_sim);
    o.read("noise_real", cfg.model.noise_real);
    o.finish();
  }

  bool explicit_threshold = false;
  if (const auto* a = top.child("acquisition")) {
    StrictObject o(*a, "config.acquisition");
    o.read("grid_size", cfg.acquisition.grid_size);
    o.read("pmin_samples", cfg.acquisition.pmin_samples);
    o.read("fantasy_draws", cfg.acquisition.fantasy_draws);
    o.read("candidate_count", cfg.acquisition.candidate_count);
    o.read("w_sim", cfg.acquisition.w_sim);
    o.read("w_real", cfg.acquisition.w_real);
    o.read("seed", cfg.acquisition.seed);
    o.finish();
  }
  if (const auto* p = top.child("penalty")) {
    StrictObject o(*p, "config.penalty");
    o.read("s", cfg.penalty.s);
    o.read("gamma", cfg.penalty.gamma);
    o.read("lambda", cfg.penalty.lambda);
    o.read_vector("x_max", cfg.penalty.x_max);
    o.finish();
  }
  if (const auto* t = top.child("termination")) {
    StrictObject o(*t, "config.termination");
    o.read("velocity", cfg.termination.velocity);
    explicit_threshold = o.read("entropy_threshold", cfg.termination.entropy_threshold);
    o.read("min_iterations", cfg.termination.min_iterations);
    o.read("max_iterations", cfg.termination.max_iterations);
    o.read("innovation_cap", cfg.termination.innovation_cap);
    o.read("max_real_evaluations", cfg.termination.max_real_evaluations);
    o.finish();
  }
  top.finish();

  if (!explicit_threshold)
    cfg.termination.entropy_threshold =
        CampaignConfig::default_threshold_fraction * std::log(static_cast<double>(cfg.acquisition.grid_size));
  cfg.validate();
  return cfg;
}

CampaignConfig load_config(const std::filesystem::path& path) { return parse_config(read_text(path)); }

std::string dump_config(const CampaignConfig& cfg) {
  ordered_json j;
  j["scenario"] = cfg.scenario;
  j["master_seed"] = cfg.master_seed;
  j["cost_plane"] = to_string(cfg.cost_plane);
  j["initial_sim_evaluations"] = cfg.initial_sim_evaluations;
  j["real_fall_gate"] = cfg.real_fall_gate;
  j["bounds"]["lower"] = detail::vector_json(cfg.bounds.lower);
  j["bounds"]["upper"] = detail::vector_json(cfg.bounds.upper);
  j["model"]["k_sim"] = kernel_json(cfg.model.k_sim);
  j["model"]["k_eps"] = kernel_json(cfg.model.k_eps);
  j["model"]["mu_sim"] = cfg.model.mu_sim;
  j["model"]["mu_eps"] = cfg.model.mu_eps;
  j["model"]["noise_sim"] = cfg.model.noise_sim;
  j["model"]["noise_real"] = cfg.model.noise_real;
  auto& a = j["acquisition"];
  a["grid_size"] = cfg.acquisition.grid_size;
  a["pmin_samples"] = cfg.acquisition.pmin_samples;
  a["fantasy_draws"] = cfg.acquisition.fantasy_draws;
  a["candidate_count"] = cfg.acquisition.candidate_count;
  a["w_sim"] = cfg.acquisition.w_sim;
  a["w_real"] = cfg.acquisition.w_real;
  a["seed"] = cfg.acquisition.seed;
  auto& p = j["penalty"];
  p["s"] = cfg.penalty.s;
  p["gamma"] = cfg.penalty.gamma;
  p["lambda"] = cfg.penalty.lambda;
  p["x_max"] = detail::vector_json(cfg.penalty.x_max);
  auto& t = j["termination"];
  t["velocity"] = cfg.termination.velocity;
  t["entropy_threshold"] = cfg.termination.entropy_threshold;
  t["min_iterations"] = cfg.termination.min_iterations;
  t["max_iterations"] = cfg.termination.max_iterations;
  t["innovation_cap"] = cfg.termination.innovation_cap;
  t["max_real_evaluations"] = cfg.termination.max_real_evaluations;
  return detail::dump15(j);
}

}  // namespace mfes

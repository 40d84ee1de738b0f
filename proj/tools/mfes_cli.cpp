// mfes: multi-fidelity Entropy Search campaigns on the gait-stabilization testbed.

#include "mfes/campaign.hpp"
#include "mfes/config.hpp"
#include "mfes/datasets.hpp"
#include "mfes/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

namespace {

enum ExitCode { kOk = 0, kConfigError = 2, kFitError = 3, kIoError = 4 };

mfes::CampaignConfig resolve_config(const std::string& path, const std::string& scenario,
                                    std::optional<std::uint64_t> seed) {
  auto cfg = path.empty() ? mfes::CampaignConfig::defaults_for(scenario) : mfes::load_config(path);
  if (seed) cfg.master_seed = *seed;
  return cfg;
}

mfes::ParamVector parse_x(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw mfes::ConfigError("--x: '" + item + "' is not a number");
    }
  }
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

int finish(const mfes::StoredResult& stored, const std::string& out) {
  mfes::write_result(out, stored);
  const auto& r = stored.result;
  std::cout << "method=" << stored.method << " iterations=" << r.records.size() << " n_sim=" << r.n_sim
            << " n_real=" << r.n_real << " termination=" << mfes::to_string(r.reason) << " x_opt=[";
  for (Eigen::Index i = 0; i < r.x_opt.size(); ++i) std::cout << (i ? "," : "") << mfes::format_double(r.x_opt(i));
  std::cout << "] predicted_cost=" << mfes::format_double(r.predicted_cost) << "\n";
  if (r.reason == mfes::TerminationReason::kModelFitFailure) {
    std::cerr << "model fit failure: " << r.diagnostic << "\n";
    return kFitError;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-fidelity Entropy Search for gait-stabilization gains"};
  app.require_subcommand(1);

  std::string config_path, scenario = "ankle2d", out_dir = "mfes_out";
  std::optional<std::uint64_t> seed;

  auto* optimize = app.add_subcommand("optimize", "Run a multi-fidelity Entropy Search campaign");
  optimize->add_option("--config", config_path, "JSON campaign configuration");
  optimize->add_option("--scenario", scenario, "Scenario defaults when no config is given")
      ->check(CLI::IsMember({"ankle2d", "arm_ankle4d"}));
  optimize->add_option("--seed", seed, "Master seed (overrides the config)");
  optimize->add_option("--out", out_dir, "Output directory")->capture_default_str();

  int budget = 25;
  auto* baseline = app.add_subcommand("baseline-random", "Greedy random search on the real fidelity");
  baseline->add_option("--budget", budget, "Number of real evaluations")->capture_default_str();
  baseline->add_option("--config", config_path, "JSON campaign configuration");
  baseline->add_option("--scenario", scenario, "Scenario defaults when no config is given")
      ->check(CLI::IsMember({"ankle2d", "arm_ankle4d"}));
  baseline->add_option("--seed", seed, "Master seed (overrides the config)");
  baseline->add_option("--out", out_dir, "Output directory")->capture_default_str();

  std::string x_text, fidelity = "real";
  std::uint64_t eval_seed = 0;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one parameter vector on the testbed");
  evaluate->add_option("--x", x_text, "Comma-separated gains")->required();
  evaluate->add_option("--fidelity", fidelity, "sim|real")->check(CLI::IsMember({"sim", "real"}));
  evaluate->add_option("--seed", eval_seed, "Rollout seed");
  evaluate->add_option("--config", config_path, "JSON campaign configuration");
  evaluate->add_option("--scenario", scenario, "Scenario")->check(CLI::IsMember({"ankle2d", "arm_ankle4d"}));

  std::string result_path, format, export_out;
  mfes::ExportOptions export_opts;
  auto* exporter = app.add_subcommand("export", "Write a plot dataset from a stored result");
  exporter->add_option("--result", result_path, "Path to result.json")->required();
  exporter->add_option("--format", format, "records|entropy_trace|posterior_slice|deviation_compare")->required();
  exporter->add_option("--out", export_out, "Output CSV (stdout when omitted)");
  exporter->add_option("--rollouts", export_opts.rollouts, "Rollouts for deviation_compare")->capture_default_str();
  exporter->add_option("--resolution", export_opts.slice_resolution, "Points per axis for posterior_slice")
      ->capture_default_str();
  exporter->add_option("--decimation", export_opts.decimation, "Keep every n-th sample of deviation_compare curves")
      ->capture_default_str();

  std::string fixture_path = "fixtures/golden_costs.txt";
  auto* fixtures = app.add_subcommand("fixtures", "Golden fixture maintenance");
  auto* regenerate = fixtures->add_subcommand("regenerate", "Recompute and overwrite the golden fixture file");
  regenerate->add_option("--path", fixture_path, "Fixture file")->capture_default_str();
  fixtures->require_subcommand(1);

  auto* show_config = app.add_subcommand("config", "Print the default configuration of a scenario");
  show_config->add_option("--scenario", scenario, "Scenario")->check(CLI::IsMember({"ankle2d", "arm_ankle4d"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  try {
    if (*optimize) {
      const auto cfg = resolve_config(config_path, scenario, seed);
      return finish({"mfes", cfg, mfes::run_mfes(cfg)}, out_dir);
    }
    if (*baseline) {
      const auto cfg = resolve_config(config_path, scenario, seed);
      return finish({"random_search", cfg, mfes::run_random_search(cfg, budget)}, out_dir);
    }
    if (*evaluate) {
      const auto cfg = resolve_config(config_path, scenario, std::nullopt);
      const auto tb = mfes::make_testbed(cfg);
      const auto ev = tb.evaluate(parse_x(x_text), mfes::parse_fidelity(fidelity), eval_seed);
      std::cout << "{\"total\":" << mfes::format_double(ev.cost.total)
                << ",\"stability\":" << mfes::format_double(ev.cost.stability)
                << ",\"penalty\":" << mfes::format_double(ev.cost.penalty)
                << ",\"fell\":" << (ev.cost.fell ? "true" : "false")
                << ",\"experiment_time\":" << mfes::format_double(ev.experiment_time) << "}\n";
      return kOk;
    }
    if (*exporter) {
      const auto stored = mfes::read_result(result_path);
      const auto csv = mfes::export_csv(stored, mfes::parse_export_format(format), export_opts);
      if (export_out.empty()) {
        std::cout << csv;
      } else {
        mfes::write_text(export_out, csv);
      }
      return kOk;
    }
    if (*regenerate) {
      const auto entries = mfes::compute_golden_fixtures();
      mfes::write_text(fixture_path, mfes::fixtures_to_text(entries));
      std::cout << "wrote " << entries.size() << " fixtures to " << fixture_path << "\n";
      return kOk;
    }
    if (*show_config) {
      std::cout << mfes::dump_config(mfes::CampaignConfig::defaults_for(scenario)) << "\n";
      return kOk;
    }
  } catch (const mfes::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const mfes::ModelFitError& e) {
    std::cerr << "model fit failure: " << e.what() << "\n";
    return kFitError;
  } catch (const mfes::IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kIoError;
  }
  return kOk;
}

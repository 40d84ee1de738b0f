#include "mfes/datasets.hpp"

#include "mfes/random.hpp"

#include <cmath>

namespace mfes {

namespace {

constexpr std::uint64_t kDeviationTag = 0xD0;

std::string csv_row(std::initializer_list<std::string> cells) {
  std::string s;
  bool first = true;
  for (const auto& c : cells) {
    if (!first) s += ',';
    first = false;
    s += c;
  }
  return s + "\n";
}

std::string records_csv(const StoredResult& stored) {
  const auto dim = stored.config.bounds.dim();
  std::string s = "index,fidelity";
  for (Eigen::Index d = 0; d < dim; ++d) s += ",x" + std::to_string(d);
  s += ",cost,expected_dH,filtered_dH,wall_time,fell\n";
  for (const auto& r : stored.result.records) {
    s += std::to_string(r.index) + "," + to_string(r.input.fidelity);
    for (Eigen::Index d = 0; d < r.input.x.size(); ++d) s += "," + format_double(r.input.x(d));
    s += "," + format_double(r.cost) + "," + format_double(r.expected_dH) + "," + format_double(r.filtered_dH) + "," +
         format_double(r.wall_time) + "," + (r.fell ? "1" : "0") + "\n";
  }
  return s;
}

std::string entropy_trace_csv(const StoredResult& stored) {
  std::string s = "iteration,raw_dH,filtered_dH\n";
  for (const auto& r : stored.result.records)
    s += csv_row({std::to_string(r.index), format_double(r.expected_dH), format_double(r.filtered_dH)});
  return s;
}

std::string posterior_slice_csv(const StoredResult& stored, const ExportOptions& opts) {
  if (opts.slice_resolution < 2) throw ConfigError("export: slice resolution must be >= 2");
  const auto& cfg = stored.config;
  const auto post = refit(cfg, stored.result.records);
  const auto dim = cfg.bounds.dim();
  const int n = opts.slice_resolution;
  const int n1 = dim >= 2 ? n : 1;
  ParamVector base = stored.result.x_opt.size() == dim ? stored.result.x_opt : cfg.bounds.center();

  std::string s = dim >= 2 ? "x0,x1" : "x0";
  s += ",mean_sim,sd_sim,mean_real,sd_real\n";
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n1; ++j) {
      ParamVector x = base;
      x(0) = cfg.bounds.lower(0) + cfg.bounds.range()(0) * i / (n - 1);
      if (dim >= 2) x(1) = cfg.bounds.lower(1) + cfg.bounds.range()(1) * j / (n - 1);
      const auto ps = post.predict({Fidelity::kSim, x});
      const auto pr = post.predict({Fidelity::kReal, x});
      s += format_double(x(0));
      if (dim >= 2) s += "," + format_double(x(1));
      s += "," + format_double(ps.mean) + "," + format_double(std::sqrt(ps.variance)) + "," + format_double(pr.mean) +
           "," + format_double(std::sqrt(pr.variance)) + "\n";
    }
  }
  return s;
}

std::string deviation_compare_csv(const StoredResult& stored, const ExportOptions& opts) {
  if (opts.decimation < 1) throw ConfigError("export: decimation must be >= 1");
  const Testbed tb = make_testbed(stored.config);
  const std::uint64_t seed = derive_seed(stored.config.master_seed, {kDeviationTag});
  const auto opt = deviation_integral(tb, stored.result.x_opt, opts.rollouts, seed);
  const auto ref = deviation_integral(tb, tb.scenario().reference, opts.rollouts, seed);
  std::string s = "t,opt_mean,opt_lo,opt_hi,ref_mean,ref_lo,ref_hi\n";
  for (std::size_t k = 0; k < opt.t.size(); ++k) {
    if (k % static_cast<std::size_t>(opts.decimation) != 0 && k + 1 != opt.t.size()) continue;
    s += csv_row({format_double(opt.t[k]), format_double(opt.mean[k]), format_double(opt.lo[k]),
                  format_double(opt.hi[k]), format_double(ref.mean[k]), format_double(ref.lo[k]),
                  format_double(ref.hi[k])});
  }
  return s;
}

}  // namespace

ExportFormat parse_export_format(const std::string& name) {
  if (name == "records") return ExportFormat::kRecords;
  if (name == "entropy_trace") return ExportFormat::kEntropyTrace;
  if (name == "posterior_slice") return ExportFormat::kPosteriorSlice;
  if (name == "deviation_compare") return ExportFormat::kDeviationCompare;
  throw ConfigError("unknown export format '" + name +
                    "' (expected records|entropy_trace|posterior_slice|deviation_compare)");
}

DeviationCurve deviation_integral(const Testbed& testbed, const ParamVector& x, int rollouts, std::uint64_t seed) {
  if (rollouts < 1) throw ConfigError("deviation_integral: need at least one rollout");
  const PlantParams plant = testbed.real_spec().effective();
  const auto steps = static_cast<std::size_t>(std::llround(plant.duration / plant.dt));
  const double fallen = plant.fall_threshold * plant.log_scale;

  std::vector<std::vector<double>> curves;
  for (int k = 0; k < rollouts; ++k) {
    const auto log = simulate(x, testbed.scenario(), testbed.real_spec(),
                              derive_seed(seed, {static_cast<std::uint64_t>(k)}));
    std::vector<double> c(steps);
    double acc = 0.0;
    for (std::size_t i = 0; i < steps; ++i) {
      // A fallen robot stays at the fall threshold for the rest of the sequence.
      const double dev = i < log.d_alpha.size() ? std::abs(log.d_alpha[i]) : fallen;
      acc += plant.dt * dev;
      c[i] = acc;
    }
    curves.push_back(std::move(c));
  }

  DeviationCurve out;
  for (std::size_t i = 0; i < steps; ++i) {
    double mean = 0.0;
    for (const auto& c : curves) mean += c[i];
    mean /= rollouts;
    double var = 0.0;
    for (const auto& c : curves) var += (c[i] - mean) * (c[i] - mean);
    const double sd = rollouts > 1 ? std::sqrt(var / (rollouts - 1)) : 0.0;
    out.t.push_back(static_cast<double>(i + 1) * plant.dt);
    out.mean.push_back(mean);
    out.lo.push_back(mean - 2.0 * sd);
    out.hi.push_back(mean + 2.0 * sd);
  }
  return out;
}

std::string export_csv(const StoredResult& stored, ExportFormat format, const ExportOptions& opts) {
  switch (format) {
    case ExportFormat::kRecords: return records_csv(stored);
    case ExportFormat::kEntropyTrace: return entropy_trace_csv(stored);
    case ExportFormat::kPosteriorSlice: return posterior_slice_csv(stored, opts);
    case ExportFormat::kDeviationCompare: return deviation_compare_csv(stored, opts);
  }
  throw ConfigError("unknown export format");
}

}  // namespace mfes

#include "mfes/campaign.hpp"
#include "mfes/config.hpp"
#include "mfes/cost.hpp"
#include "mfes/entropy_search.hpp"
#include "mfes/gp.hpp"
#include "mfes/testbed.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mfes;

namespace {

py::dict result_to_dict(const CampaignResult& r) {
  py::list records;
  for (const auto& rec : r.records) {
    py::dict d;
    d["index"] = rec.index;
    d["fidelity"] = to_string(rec.input.fidelity);
    d["x"] = rec.input.x;
    d["cost"] = rec.cost;
    d["expected_dH"] = rec.expected_dH;
    d["filtered_dH"] = rec.filtered_dH;
    d["wall_time"] = rec.wall_time;
    d["fell"] = rec.fell;
    records.append(d);
  }
  py::dict out;
  out["records"] = records;
  out["x_opt"] = r.x_opt;
  out["predicted_cost"] = r.predicted_cost;
  out["n_sim"] = r.n_sim;
  out["n_real"] = r.n_real;
  out["reason"] = to_string(r.reason);
  out["diagnostic"] = r.diagnostic;
  return out;
}

Observation make_observation(Fidelity f, const ParamVector& x, double y) { return {{f, x}, y}; }

}  // namespace

PYBIND11_MODULE(_mfes, m) {
  m.doc() = "Multi-fidelity Entropy Search core";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ModelFitError>(m, "ModelFitError", PyExc_RuntimeError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::enum_<Fidelity>(m, "Fidelity").value("SIM", Fidelity::kSim).value("REAL", Fidelity::kReal);

  py::class_<RQKernelParams>(m, "RQKernelParams")
      .def(py::init([](double variance, double alpha, const ParamVector& lengthscales) {
             return RQKernelParams{variance, alpha, lengthscales};
           }),
           py::arg("variance"), py::arg("alpha"), py::arg("lengthscales"))
      .def_readwrite("variance", &RQKernelParams::variance)
      .def_readwrite("alpha", &RQKernelParams::alpha)
      .def_readwrite("lengthscales", &RQKernelParams::lengthscales);

  py::class_<MFModelParams>(m, "MFModelParams")
      .def(py::init([](RQKernelParams k_sim, RQKernelParams k_eps, double mu_sim, double mu_eps, double noise_sim,
                       double noise_real) {
             return MFModelParams{std::move(k_sim), std::move(k_eps), mu_sim, mu_eps, noise_sim, noise_real};
           }),
           py::arg("k_sim"), py::arg("k_eps"), py::arg("mu_sim") = 0.0, py::arg("mu_eps") = 0.0,
           py::arg("noise_sim") = 0.05, py::arg("noise_real") = 0.05)
      .def_readwrite("k_sim", &MFModelParams::k_sim)
      .def_readwrite("k_eps", &MFModelParams::k_eps)
      .def_readwrite("mu_sim", &MFModelParams::mu_sim)
      .def_readwrite("mu_eps", &MFModelParams::mu_eps)
      .def_readwrite("noise_sim", &MFModelParams::noise_sim)
      .def_readwrite("noise_real", &MFModelParams::noise_real);

  m.def("rq_kernel", &rq_kernel, py::arg("xi"), py::arg("xj"), py::arg("params"));
  m.def(
      "mf_kernel",
      [](Fidelity fi, const ParamVector& xi, Fidelity fj, const ParamVector& xj, const MFModelParams& p) {
        return mf_kernel({fi, xi}, {fj, xj}, p);
      },
      py::arg("fi"), py::arg("xi"), py::arg("fj"), py::arg("xj"), py::arg("params"));

  py::class_<GPPosterior>(m, "GPPosterior")
      .def_static(
          "fit",
          [](const std::vector<std::tuple<Fidelity, ParamVector, double>>& data, const MFModelParams& p) {
            std::vector<Observation> obs;
            for (const auto& [f, x, y] : data) obs.push_back(make_observation(f, x, y));
            return GPPosterior::fit(std::move(obs), p);
          },
          py::arg("observations"), py::arg("params"),
          "Fit on a list of (fidelity, x, y) triples.")
      .def(
          "predict",
          [](const GPPosterior& post, Fidelity f, const ParamVector& x) {
            const auto p = post.predict({f, x});
            return py::make_tuple(p.mean, p.variance);
          },
          py::arg("fidelity"), py::arg("x"), "Posterior (mean, variance).")
      .def_property_readonly("jitter", &GPPosterior::jitter);

  m.def(
      "pmin",
      [](const GPPosterior& post, const std::vector<ParamVector>& points, int samples, std::uint64_t seed) {
        RepresenterGrid g;
        g.points = points;
        return pmin(post, g, samples, seed).probabilities;
      },
      py::arg("posterior"), py::arg("grid"), py::arg("samples"), py::arg("seed"));
  m.def(
      "entropy", [](const std::vector<double>& p) { return entropy(std::span<const double>(p)); }, py::arg("p"));

  m.def(
      "filtered_entropy_update",
      [](double prev, double current, double velocity, double innovation_cap) {
        TerminationConfig t;
        t.velocity = velocity;
        t.innovation_cap = innovation_cap;
        t.validate();
        return filtered_entropy_update(prev, current, t);
      },
      py::arg("prev"), py::arg("current"), py::arg("velocity") = 0.9, py::arg("innovation_cap") = 3.0);

  m.def("smooth_deadband", &smooth_deadband, py::arg("v"), py::arg("radius"));
  m.def(
      "penalty",
      [](const ParamVector& x, const ParamVector& x_max, double s, double gamma, double lambda) {
        PenaltyParams p{s, gamma, lambda, x_max};
        p.validate();
        return penalty(x, p);
      },
      py::arg("x"), py::arg("x_max"), py::arg("s") = 7.5, py::arg("gamma") = 6.0, py::arg("lambda_") = 0.75);

  m.def(
      "evaluate",
      [](const std::string& scenario, const ParamVector& x, Fidelity f, std::uint64_t seed) {
        const auto cfg = CampaignConfig::defaults_for(scenario);
        const auto ev = make_testbed(cfg).evaluate(x, f, seed);
        py::dict d;
        d["total"] = ev.cost.total;
        d["stability"] = ev.cost.stability;
        d["penalty"] = ev.cost.penalty;
        d["fell"] = ev.cost.fell;
        d["experiment_time"] = ev.experiment_time;
        return d;
      },
      py::arg("scenario"), py::arg("x"), py::arg("fidelity"), py::arg("seed"));

  m.def(
      "default_config", [](const std::string& scenario) { return dump_config(CampaignConfig::defaults_for(scenario)); },
      py::arg("scenario"), "Golden configuration of a scenario as JSON text.");
  m.def(
      "run_mfes",
      [](const std::string& config_json) {
        const auto cfg = parse_config(config_json);
        CampaignResult r;
        {
          py::gil_scoped_release release;
          r = run_mfes(cfg);
        }
        return result_to_dict(r);
      },
      py::arg("config_json"));
  m.def(
      "run_random_search",
      [](const std::string& config_json, int budget) {
        return result_to_dict(run_random_search(parse_config(config_json), budget));
      },
      py::arg("config_json"), py::arg("budget"));
}

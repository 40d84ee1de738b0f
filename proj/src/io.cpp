#include "mfes/io.hpp"

#include "json_util.hpp"
#include "mfes/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace mfes {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Infinity" : "-Infinity";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

namespace {

std::string join(const ParamVector& x, char sep) {
  std::string s;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i) s += sep;
    s += format_double(x(i));
  }
  return s;
}

ParamVector split_numbers(const std::string& s) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// JSON has no NaN; non-finite numbers are stored as null.
ordered_json number_or_null(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }
double number_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

}  // namespace

std::string records_to_jsonl(const std::vector<IterationRecord>& records) {
  std::string out;
  for (const auto& r : records) {
    ordered_json j;
    j["index"] = r.index;
    j["fidelity"] = to_string(r.input.fidelity);
    j["x"] = detail::vector_json(r.input.x);
    j["cost"] = r.cost;
    j["expected_dH"] = r.expected_dH;
    j["filtered_dH"] = r.filtered_dH;
    j["wall_time"] = r.wall_time;
    j["fell"] = r.fell;
    out += detail::dump15(j);
    out += '\n';
  }
  return out;
}

std::vector<IterationRecord> records_from_jsonl(const std::string& text) {
  std::vector<IterationRecord> records;
  std::stringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const auto j = json::parse(line);
      IterationRecord r;
      r.index = j.at("index").get<int>();
      r.input.fidelity = parse_fidelity(j.at("fidelity").get<std::string>());
      r.input.x = detail::vector_from_json(j.at("x"));
      r.cost = j.at("cost").get<double>();
      r.expected_dH = j.at("expected_dH").get<double>();
      r.filtered_dH = j.at("filtered_dH").get<double>();
      r.wall_time = j.at("wall_time").get<double>();
      r.fell = j.at("fell").get<bool>();
      records.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw IoError("records line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return records;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path.string() + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_result(const std::filesystem::path& dir, const StoredResult& stored) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  const auto& r = stored.result;
  ordered_json j;
  j["method"] = stored.method;
  j["config"] = json::parse(dump_config(stored.config));
  j["x_opt"] = detail::vector_json(r.x_opt);
  j["predicted_cost"] = number_or_null(r.predicted_cost);
  j["n_sim"] = r.n_sim;
  j["n_real"] = r.n_real;
  j["termination"] = to_string(r.reason);
  j["diagnostic"] = r.diagnostic;
  j["records_file"] = kRecordsFile;
  write_text(dir / kResultFile, detail::dump15(j) + "\n");
  write_text(dir / kRecordsFile, records_to_jsonl(r.records));
}

StoredResult read_result(const std::filesystem::path& result_json) {
  StoredResult s;
  json j;
  try {
    j = json::parse(read_text(result_json));
  } catch (const json::parse_error& e) {
    throw IoError("'" + result_json.string() + "' is not valid JSON: " + e.what());
  }
  try {
    s.method = j.at("method").get<std::string>();
    s.config = parse_config(j.at("config").dump());
    s.result.x_opt = detail::vector_from_json(j.at("x_opt"));
    s.result.predicted_cost = number_from(j.at("predicted_cost"));
    s.result.n_sim = j.at("n_sim").get<int>();
    s.result.n_real = j.at("n_real").get<int>();
    s.result.reason = parse_termination_reason(j.at("termination").get<std::string>());
    s.result.diagnostic = j.value("diagnostic", "");
    const auto records = result_json.parent_path() / j.value("records_file", std::string(kRecordsFile));
    s.result.records = records_from_jsonl(read_text(records));
  } catch (const json::exception& e) {
    throw IoError("'" + result_json.string() + "': " + e.what());
  }
  return s;
}

std::vector<GoldenEntry> compute_golden_fixtures() {
  struct Case {
    const char* scenario;
    Fidelity fidelity;
    std::uint64_t seed;
    std::vector<double> x;  // empty: scenario reference gains
  };
  const std::vector<Case> cases{
      {"ankle2d", Fidelity::kReal, 1, {}},        {"ankle2d", Fidelity::kReal, 2, {}},
      {"ankle2d", Fidelity::kReal, 3, {}},        {"ankle2d", Fidelity::kSim, 1, {}},
      {"ankle2d", Fidelity::kReal, 1, {0.0, 0.0}}, {"ankle2d", Fidelity::kReal, 1, {1.75, 2.0}},
      {"ankle2d", Fidelity::kSim, 1, {1.75, 1.0}}, {"arm_ankle4d", Fidelity::kReal, 1, {}},
      {"arm_ankle4d", Fidelity::kSim, 1, {}},
  };
  std::vector<GoldenEntry> out;
  for (const auto& c : cases) {
    const auto cfg = CampaignConfig::defaults_for(c.scenario);
    const Testbed tb = make_testbed(cfg);
    GoldenEntry e;
    e.scenario = c.scenario;
    e.fidelity = c.fidelity;
    e.seed = c.seed;
    e.x = c.x.empty() ? tb.scenario().reference
                      : ParamVector(Eigen::Map<const Eigen::VectorXd>(c.x.data(), static_cast<Eigen::Index>(c.x.size())));
    const auto ev = tb.evaluate(e.x, e.fidelity, e.seed);
    e.total = ev.cost.total;
    e.stability = ev.cost.stability;
    e.penalty = ev.cost.penalty;
    e.fell = ev.cost.fell;
    if (e.fell && e.fidelity == Fidelity::kReal) {
      e.fall_time = simulate(e.x, tb.scenario(), tb.real_spec(), Testbed::rollout_seed(e.seed, 0)).fall_time.value();
    }
    out.push_back(std::move(e));
  }
  return out;
}

std::string fixtures_to_text(const std::vector<GoldenEntry>& entries) {
  std::string s = "# scenario fidelity seed x total stability penalty fell fall_time\n";
  for (const auto& e : entries) {
    s += e.scenario + " " + to_string(e.fidelity) + " " + std::to_string(e.seed) + " " + join(e.x, ',') + " " +
         format_double(e.total) + " " + format_double(e.stability) + " " + format_double(e.penalty) + " " +
         (e.fell ? "1" : "0") + " " + format_double(e.fall_time) + "\n";
  }
  return s;
}

std::vector<GoldenEntry> fixtures_from_text(const std::string& text) {
  std::vector<GoldenEntry> out;
  std::stringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ls(line);
    GoldenEntry e;
    std::string fidelity, x;
    int fell = 0;
    if (!(ls >> e.scenario >> fidelity >> e.seed >> x >> e.total >> e.stability >> e.penalty >> fell >> e.fall_time))
      throw IoError("malformed fixture line: " + line);
    e.fidelity = parse_fidelity(fidelity);
    e.x = split_numbers(x);
    e.fell = fell != 0;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace mfes

#include "report/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "dynamics/maps.hpp"

namespace extremal {

namespace {

using nlohmann::json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// `key = value` lines become a flat JSON object; numbers and booleans are
// detected, comma lists become arrays, everything else stays a string.
json lines_to_json(const std::string& text) {
  json j = json::object();
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty() || val.empty())
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": empty key or value");
    if (val.find(',') != std::string::npos) {
      json arr = json::array();
      std::istringstream vs(val);
      std::string item;
      while (std::getline(vs, item, ',')) {
        item = trim(item);
        json parsed = json::parse(item, nullptr, false);
        arr.push_back(parsed.is_discarded() ? json(item) : parsed);
      }
      j[key] = arr;
      continue;
    }
    json parsed = json::parse(val, nullptr, false);
    if (parsed.is_discarded() || parsed.is_object() || parsed.is_array())
      j[key] = val;
    else
      j[key] = parsed;
  }
  return j;
}

template <typename T>
void take(json& j, const char* key, T& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
  j.erase(it);
}

void take_strings(json& j, const char* key, std::vector<std::string>& out) {
  auto it = j.find(key);
  if (it == j.end()) return;
  out.clear();
  if (it->is_string()) {
    out.push_back(it->get<std::string>());
  } else if (it->is_array()) {
    for (const auto& v : *it) out.push_back(v.get<std::string>());
  } else {
    throw ConfigError(std::string("config: bad value for '") + key + "'");
  }
  j.erase(it);
}

}  // namespace

std::uint64_t ExperimentConfig::series_length(std::uint64_t at_n) const {
  const double L = sample_factor * double(at_n) / tau;
  if (!(L >= 1.0) || L > 4e18)
    throw ConfigError("config: series length out of range");
  return std::uint64_t(std::llround(L));
}

std::uint64_t ExperimentConfig::kn_at(std::uint64_t at_n) const {
  if (kn > 0) return kn;
  return std::uint64_t(std::ceil(std::sqrt(double(at_n))));
}

std::vector<std::uint64_t> ExperimentConfig::grid() const {
  return n_grid.empty() ? std::vector<std::uint64_t>{n} : n_grid;
}

bool ExperimentConfig::emits(const std::string& what) const {
  for (const auto& e : emit)
    if (e == what) return true;
  return false;
}

void ExperimentConfig::validate() const {
  if (n == 0) throw ConfigError("config: n must be positive");
  if (!(tau > 0.0)) throw ConfigError("config: tau must be positive");
  if (!(tau < double(n))) throw ConfigError("config: tau must be below n");
  if (replicas == 0) throw ConfigError("config: replicas must be positive");
  if (!(sample_factor > 0.0))
    throw ConfigError("config: sample_factor must be positive");
  if (!(y_max_factor >= 1.0))
    throw ConfigError("config: y_max_factor must be at least 1");
  if (example.id == ExampleId::SmithLSV ||
      example.id == ExampleId::PeriodicLSV) {
    if (!(example.alpha > 0.0) || !(example.alpha < kLsvAlphaMax))
      throw ConfigError("config: alpha must lie in (0, sqrt(5)-2)");
    if (example.id == ExampleId::PeriodicLSV &&
        (example.p < 2 || example.p > 12))
      throw ConfigError("config: orbit period must lie in [2, 12]");
  }
  for (std::uint64_t g : n_grid)
    if (g == 0 || !(tau < double(g)))
      throw ConfigError("config: n_grid entries must exceed tau");
  for (const auto& e : emit)
    if (e != "csv" && e != "json" && e != "svg" && e != "none")
      throw ConfigError("config: emit entries must be csv, json, svg or none");
  (void)series_length(n);
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  json j;
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ConfigError("config: invalid JSON object");
  } else {
    j = lines_to_json(text);
  }

  ExperimentConfig cfg;
  std::string example_name_str;
  take(j, "example", example_name_str);
  if (!example_name_str.empty() &&
      !example_parse(example_name_str, cfg.example.id))
    throw ConfigError("config: unknown example '" + example_name_str + "'");
  take(j, "alpha", cfg.example.alpha);
  take(j, "p", cfg.example.p);
  take(j, "n", cfg.n);
  take(j, "n_grid", cfg.n_grid);
  take(j, "tau", cfg.tau);
  take(j, "q", cfg.q);
  take(j, "select_q", cfg.select_q);
  take(j, "dprime", cfg.dprime);
  take(j, "replicas", cfg.replicas);
  take(j, "seed", cfg.seed);
  take(j, "burn_in", cfg.burn_in);
  take(j, "sample_factor", cfg.sample_factor);
  take(j, "kn", cfg.kn);
  take(j, "y_max_factor", cfg.y_max_factor);
  take(j, "calib_samples", cfg.calib_samples);
  std::string thr;
  take(j, "threshold", thr);
  if (thr == "empirical")
    cfg.threshold = ThresholdKind::Empirical;
  else if (!thr.empty() && thr != "analytic")
    throw ConfigError("config: threshold must be analytic or empirical");
  take(j, "workers", cfg.workers);
  take(j, "out", cfg.out);
  take_strings(j, "emit", cfg.emit);
  if (!j.empty())
    throw ConfigError("config: unknown key '" + j.begin().key() + "'");
  cfg.validate();
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

std::string ExperimentConfig::to_json(int indent) const {
  json j;
  j["example"] = example_name(example.id);
  if (example.id == ExampleId::SmithLSV ||
      example.id == ExampleId::PeriodicLSV)
    j["alpha"] = example.alpha;
  if (example.id == ExampleId::PeriodicLSV) j["p"] = example.p;
  j["n"] = n;
  if (!n_grid.empty()) j["n_grid"] = n_grid;
  j["tau"] = tau;
  j["q"] = q;
  j["select_q"] = select_q;
  j["dprime"] = dprime;
  j["replicas"] = replicas;
  j["seed"] = seed;
  j["burn_in"] = burn_in;
  j["sample_factor"] = sample_factor;
  j["kn"] = kn;
  j["y_max_factor"] = y_max_factor;
  j["calib_samples"] = calib_samples;
  j["threshold"] =
      threshold == ThresholdKind::Analytic ? "analytic" : "empirical";
  j["workers"] = workers;
  j["out"] = out;
  j["emit"] = emit;
  return j.dump(indent);
}

}  // namespace extremal

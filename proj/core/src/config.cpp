#include "tempergap/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tempergap/errors.hpp"

namespace tempergap {
namespace {

using T = ConfigType;

std::string trim(std::string s) {
  auto ns = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), ns));
  s.erase(std::find_if(s.rbegin(), s.rend(), ns).base(), s.end());
  return s;
}

const ConfigKey* find_key(const std::string& name) {
  for (const auto& k : config_schema()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

double parse_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config key '" + key + "': '" + text + "' is not a real number");
  }
  return v;
}

long parse_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("config key '" + key + "': '" + text + "' is not an integer");
  }
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_real(key, item));
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("config key '" + key + "': '" + text + "' is not a boolean");
}

void check_value(const ConfigKey& k, const std::string& v) {
  switch (k.type) {
    case T::Real: parse_real(k.name, v); break;
    case T::Integer: parse_integer(k.name, v); break;
    case T::RealList: parse_list(k.name, v); break;
    case T::Boolean: parse_bool(k.name, v); break;
    case T::String: break;
  }
}

void reject_unknown(const std::vector<std::string>& unknown) {
  if (unknown.empty()) return;
  std::string msg = "unknown config keys:";
  for (const auto& u : unknown) msg += " " + u;
  throw ConfigError(msg);
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"experiment.seed", T::Integer, "", "RNG seed (mandatory; --seed overrides)"},
      {"experiment.name", T::String, "run", "label written to the manifest"},
      {"potential.name", T::String, "DW1", "builtin potential: DW1 or DW2"},
      {"potential.delta", T::Real, "0", "DW1 asymmetry delta >= 0"},
      {"potential.mu", T::Real, "0", "tilt mu >= 0"},
      {"potential.c_y", T::Real, "6", "DW2 transverse stiffness c_y > 0"},
      {"ladder.eps_high", T::Real, "1", "highest temperature"},
      {"ladder.eps_low", T::Real, "0.1", "lowest temperature"},
      {"ladder.nu_bar", T::Real, "1", "maximal inverse-temperature spacing"},
      {"ladder.eta", T::Real, "0.5", "step-size constant, h_k = min(eta eps_k^2, 1)"},
      {"chain.kind", T::String, "PT", "MRW, LazyMRW, RestrictedMRW, PT or ST"},
      {"chain.steps", T::Integer, "100000", "number of steps (>= 1)"},
      {"chain.thin", T::Integer, "1", "record every thin-th step"},
      {"chain.burn_in", T::Integer, "0", "unrecorded initial steps"},
      {"chain.eps", T::Real, "0.3", "temperature of single-temperature kinds"},
      {"chain.h", T::Real, "0.1", "step size of single-temperature kinds"},
      {"chain.basin", T::Integer, "1", "basin label for RestrictedMRW"},
      {"chain.start", T::RealList, "", "initial point; defaults to the deeper minimum"},
      {"chain.observable", T::String, "basin", "observable used by gap-empirical: basin, energy, x0, level"},
      {"grid.M", T::Integer, "256", "grid size of discretized kernels"},
      {"grid.quadrature", T::Integer, "256", "nodes per axis for mass quadrature"},
      {"grid.boundary_resolution", T::Real, "0.001", "boundary polyline vertex spacing (d = 2)"},
      {"grid.cache_resolution", T::Integer, "512", "basin label cache nodes per axis"},
      {"grid.allow_large", T::Boolean, "false", "allow ST kernels above 20000 states"},
      {"spectral.method", T::String, "auto", "auto, dense or iterative"},
      {"spectral.rho_high", T::Real, "0.8", "upper autocorrelation fit bound"},
      {"spectral.rho_low", T::Real, "0.05", "lower autocorrelation fit bound"},
      {"spectral.blocks", T::Integer, "20", "bootstrap blocks"},
      {"study.kind", T::String, "st-polynomial", "mrw-arrhenius, st-polynomial (alias st-gap), restricted-gap or first-level"},
      {"study.eps", T::RealList, "", "temperature grid (lowest temperatures for st-polynomial)"},
      {"study.h", T::Real, "0.05", "fixed step size for mrw-arrhenius"},
      {"study.eta", T::Real, "0.5", "step-size constant for ladder-based kinds"},
      {"study.M", T::Integer, "256", "grid size"},
      {"study.basin", T::Integer, "1", "basin for restricted-gap"},
      {"perturbation.a", T::Real, "0.03", "perturbation scale a"},
      {"perturbation.kappa", T::Real, "0", "stable saddle eigenvalue kappa; 0 selects half the admissible limit"},
      {"perturbation.gamma", T::Real, "0.5", "Lyapunov exponent gamma"},
      {"perturbation.eta", T::Real, "0.05", "h = eta eps^2 for the drift scan"},
      {"perturbation.eps", T::RealList, "0.1,0.05,0.025", "temperatures to verify"},
      {"perturbation.quadrature", T::String, "monte-carlo", "tensor-grid or monte-carlo"},
      {"perturbation.samples", T::Integer, "100000", "Monte Carlo proposals per point"},
      {"perturbation.radial", T::Integer, "200", "radial quadrature nodes"},
      {"perturbation.angular", T::Integer, "64", "angular quadrature nodes"},
      {"perturbation.budget", T::Integer, "500", "drift scan points"},
      {"perturbation.tolerance", T::Real, "0.001", "required empirical drift rate"},
      {"perturbation.unperturbed", T::Boolean, "false", "scan the unperturbed potential as well"},
      {"tv.m_max", T::Integer, "200", "largest power checked"},
      {"tv.kernel", T::String, "st", "st or lazy-mrw"},
      {"overlap.first_level_eps", T::RealList, "0.5,0.75,1,1.5,2", "temperatures of the first-level check"},
      {"overlap.factor", T::Real, "5", "allowed spread of the normalized first-level gap"},
  };
  return schema;
}

ExperimentConfig ExperimentConfig::from_ini(const std::string& text) {
  ExperimentConfig cfg;
  std::vector<std::string> unknown;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("config line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = (section.empty() ? "" : section + ".") + trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!find_key(key)) {
      unknown.push_back(key);
      continue;
    }
    cfg.set(key, value);
  }
  reject_unknown(unknown);
  return cfg;
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config JSON: ") + e.what());
  }
  if (doc.is_object() && doc.contains("config") && doc.contains("version")) doc = doc["config"];
  if (!doc.is_object()) throw ConfigError("config JSON must be an object of sections");
  ExperimentConfig cfg;
  std::vector<std::string> unknown;
  for (auto& [section, body] : doc.items()) {
    if (!body.is_object()) throw ConfigError("config JSON section '" + section + "' must be an object");
    for (auto& [k, v] : body.items()) {
      const std::string key = section + "." + k;
      if (!find_key(key)) {
        unknown.push_back(key);
        continue;
      }
      std::string value;
      if (v.is_string()) {
        value = v.get<std::string>();
      } else if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) value += (i ? "," : "") + v[i].dump();
      } else {
        value = v.dump();
      }
      cfg.set(key, value);
    }
  }
  reject_unknown(unknown);
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  const bool json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
  return json ? from_json(buf.str()) : from_ini(buf.str());
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const ConfigKey* k = find_key(key);
  if (!k) throw ConfigError("unknown config keys: " + key);
  check_value(*k, value);
  values_[key] = value;
}

bool ExperimentConfig::has(const std::string& key) const { return values_.count(key) > 0; }

const std::string& ExperimentConfig::raw(const std::string& key) const {
  auto it = values_.find(key);
  if (it != values_.end()) return it->second;
  const ConfigKey* k = find_key(key);
  if (!k) throw ConfigError("unknown config key '" + key + "'");
  if (k->default_value.empty() && k->type != T::RealList && k->type != T::String) {
    throw ConfigError("config key '" + key + "' is required");
  }
  return k->default_value;
}

double ExperimentConfig::real(const std::string& key) const { return parse_real(key, raw(key)); }
long ExperimentConfig::integer(const std::string& key) const { return parse_integer(key, raw(key)); }
std::string ExperimentConfig::str(const std::string& key) const { return raw(key); }
std::vector<double> ExperimentConfig::reals(const std::string& key) const { return parse_list(key, raw(key)); }
bool ExperimentConfig::boolean(const std::string& key) const { return parse_bool(key, raw(key)); }

void ExperimentConfig::validate() const {
  if (!has("experiment.seed")) throw ConfigError("config key 'experiment.seed' is required");
  for (const auto& [k, v] : values_) check_value(*find_key(k), v);
}

std::string ExperimentConfig::to_ini() const {
  std::string out;
  std::string section;
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    const std::string s = key.substr(0, dot);
    if (s != section) {
      out += (out.empty() ? "" : "\n") + std::string("[") + s + "]\n";
      section = s;
    }
    out += key.substr(dot + 1) + " = " + value + "\n";
  }
  return out;
}

std::string ExperimentConfig::to_json() const {
  nlohmann::json doc = nlohmann::json::object();
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    doc[key.substr(0, dot)][key.substr(dot + 1)] = value;
  }
  return doc.dump(2);
}

std::string config_schema_markdown() {
  auto type_name = [](T t) {
    switch (t) {
      case T::Real: return "real";
      case T::Integer: return "integer";
      case T::String: return "string";
      case T::RealList: return "list of reals";
      case T::Boolean: return "boolean";
    }
    return "?";
  };
  std::string out = "| key | type | default | meaning |\n|---|---|---|---|\n";
  for (const auto& k : config_schema()) {
    out += "| `" + k.name + "` | " + type_name(k.type) + " | " + (k.default_value.empty() ? "-" : "`" + k.default_value + "`") +
           " | " + k.description + " |\n";
  }
  return out;
}

}  // namespace tempergap

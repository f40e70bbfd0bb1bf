#include "sparseal/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sparseal/errors.hpp"

namespace sparseal {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool found = false;
    for (const char* k : known) {
      if (item.key() == k) {
        found = true;
        break;
      }
    }
    if (!found) throw ParameterError("config: unknown key '" + item.key() + "' in " + where);
  }
}

MarginalKind marginal_from_string(const std::string& name) {
  if (name == "gaussian") return MarginalKind::gaussian;
  if (name == "uniform_ball") return MarginalKind::uniform_ball;
  throw ParameterError("config: unknown marginal '" + name + "'");
}

NoiseSetting parse_noise(const json& j) {
  reject_unknown_keys(j, {"kind", "level"}, "noise");
  NoiseSetting noise;
  if (j.contains("kind")) noise.kind = noise_kind_from_string(j.at("kind").get<std::string>());
  if (j.contains("level")) noise.level = j.at("level").get<double>();
  return noise;
}

ExperimentConfig apply_json(const json& j) {
  if (!j.is_object()) throw ParameterError("config: top level must be an object");
  reject_unknown_keys(j,
                      {"d", "t", "epsilon", "delta", "marginal", "noise", "constants", "solver",
                       "draw", "estimate", "seeds", "baselines", "output", "sweep", "tune"},
                      "top level");

  ExperimentConfig cfg;
  if (j.contains("d")) cfg.d = j.at("d").get<int>();
  if (j.contains("t")) cfg.t = j.at("t").get<int>();
  if (j.contains("epsilon")) cfg.epsilon = j.at("epsilon").get<double>();
  if (j.contains("delta")) cfg.delta = j.at("delta").get<double>();
  if (j.contains("marginal")) {
    cfg.marginal = marginal_from_string(j.at("marginal").get<std::string>());
  }
  if (j.contains("noise")) cfg.noise = parse_noise(j.at("noise"));

  if (j.contains("constants")) {
    const json& c = j.at("constants");
    reject_unknown_keys(c, {"sample_scale", "band_scale", "margin_scale", "angle_ratio"},
                        "constants");
    if (c.contains("sample_scale")) cfg.constants.sample_scale = c.at("sample_scale").get<double>();
    if (c.contains("band_scale")) cfg.constants.band_scale = c.at("band_scale").get<double>();
    if (c.contains("margin_scale")) cfg.constants.margin_scale = c.at("margin_scale").get<double>();
    if (c.contains("angle_ratio")) cfg.constants.angle_ratio = c.at("angle_ratio").get<double>();
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    reject_unknown_keys(s, {"iterations", "gap_tolerance", "step_scale"}, "solver");
    if (s.contains("iterations")) cfg.solver.iterations = s.at("iterations").get<int>();
    if (s.contains("gap_tolerance")) cfg.solver.gap_tolerance = s.at("gap_tolerance").get<double>();
    if (s.contains("step_scale")) cfg.solver.step_scale = s.at("step_scale").get<double>();
  }
  if (j.contains("draw")) {
    const json& d = j.at("draw");
    reject_unknown_keys(d, {"attempt_cap"}, "draw");
    if (d.contains("attempt_cap")) cfg.draw.attempt_cap = d.at("attempt_cap").get<std::uint64_t>();
  }
  if (j.contains("estimate")) {
    const json& e = j.at("estimate");
    reject_unknown_keys(e, {"method", "samples"}, "estimate");
    if (e.contains("method")) {
      cfg.estimate.method = error_method_from_string(e.at("method").get<std::string>());
    }
    if (e.contains("samples")) cfg.estimate.samples = e.at("samples").get<std::size_t>();
  }
  if (j.contains("seeds")) cfg.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  if (j.contains("baselines")) {
    const json& b = j.at("baselines");
    reject_unknown_keys(b, {"passive", "fulldim", "passive_budget"}, "baselines");
    if (b.contains("passive")) cfg.baselines.passive = b.at("passive").get<bool>();
    if (b.contains("fulldim")) cfg.baselines.fulldim = b.at("fulldim").get<bool>();
    if (b.contains("passive_budget")) {
      cfg.baselines.passive_budget = b.at("passive_budget").get<std::uint64_t>();
    }
  }
  if (j.contains("output")) cfg.output = j.at("output").get<std::string>();

  if (j.contains("sweep")) {
    const json& s = j.at("sweep");
    reject_unknown_keys(s, {"d", "t", "epsilon", "noise", "noise_kinds", "noise_levels"}, "sweep");
    if (s.contains("d")) cfg.sweep.d = s.at("d").get<std::vector<int>>();
    if (s.contains("t")) cfg.sweep.t = s.at("t").get<std::vector<int>>();
    if (s.contains("epsilon")) cfg.sweep.epsilon = s.at("epsilon").get<std::vector<double>>();
    if (s.contains("noise")) {
      for (const json& n : s.at("noise")) cfg.sweep.noise.push_back(parse_noise(n));
    }
    if (s.contains("noise_kinds") || s.contains("noise_levels")) {
      const auto kinds = s.value("noise_kinds", std::vector<std::string>{});
      const auto levels = s.value("noise_levels", std::vector<double>{});
      if (kinds.size() != levels.size()) {
        throw ParameterError("config: sweep.noise_kinds and sweep.noise_levels lengths differ");
      }
      for (std::size_t i = 0; i < kinds.size(); ++i) {
        cfg.sweep.noise.push_back({noise_kind_from_string(kinds[i]), levels[i]});
      }
    }
  }
  if (j.contains("tune")) {
    const json& t = j.at("tune");
    reject_unknown_keys(t, {"sample_scale", "band_scale", "margin_scale", "angle_ratio", "seeds"},
                        "tune");
    if (t.contains("sample_scale")) {
      cfg.tune.sample_scale = t.at("sample_scale").get<std::vector<double>>();
    }
    if (t.contains("band_scale")) cfg.tune.band_scale = t.at("band_scale").get<std::vector<double>>();
    if (t.contains("margin_scale")) {
      cfg.tune.margin_scale = t.at("margin_scale").get<std::vector<double>>();
    }
    if (t.contains("angle_ratio")) {
      cfg.tune.angle_ratio = t.at("angle_ratio").get<std::vector<double>>();
    }
    if (t.contains("seeds")) cfg.tune.seeds = t.at("seeds").get<std::vector<std::uint64_t>>();
  }
  return cfg;
}

// --- minimal TOML subset ---

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

json parse_toml_scalar(const std::string& raw) {
  const std::string v = trim(raw);
  if (v.empty()) throw ParameterError("toml: empty value");
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') throw ParameterError("toml: unterminated string: " + v);
    return json(v.substr(1, v.size() - 2));
  }
  if (v == "true") return json(true);
  if (v == "false") return json(false);
  // Integer if it parses exactly as one, double otherwise.
  try {
    std::size_t used = 0;
    const long long i = std::stoll(v, &used);
    if (used == v.size()) return json(i);
  } catch (...) {
  }
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return json(d);
  } catch (...) {
  }
  throw ParameterError("toml: cannot parse value: " + v);
}

json parse_toml_value(const std::string& raw) {
  const std::string v = trim(raw);
  if (!v.empty() && v.front() == '[') {
    if (v.back() != ']') throw ParameterError("toml: unterminated array: " + v);
    json arr = json::array();
    const std::string body = v.substr(1, v.size() - 2);
    std::string item;
    bool in_string = false;
    for (char c : body) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        arr.push_back(parse_toml_scalar(item));
        item.clear();
      } else {
        item.push_back(c);
      }
    }
    if (!trim(item).empty()) arr.push_back(parse_toml_scalar(item));
    return arr;
  }
  return parse_toml_scalar(v);
}

std::vector<std::string> split_key(const std::string& dotted) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : dotted) {
    if (c == '.') {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(trim(cur));
  for (const std::string& p : parts) {
    if (p.empty()) throw ParameterError("toml: empty key segment in '" + dotted + "'");
  }
  return parts;
}

json toml_to_json(const std::string& text) {
  json root = json::object();
  std::vector<std::string> prefix;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParameterError("toml: malformed section: " + line);
      prefix = split_key(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParameterError("toml: expected key = value: " + line);
    std::vector<std::string> path = prefix;
    for (const std::string& part : split_key(trim(line.substr(0, eq)))) path.push_back(part);
    json* node = &root;
    for (std::size_t i = 0; i + 1 < path.size(); ++i) node = &(*node)[path[i]];
    (*node)[path.back()] = parse_toml_value(line.substr(eq + 1));
  }
  return root;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: JSON parse error: ") + e.what());
  }
  try {
    return apply_json(j);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: bad field type: ") + e.what());
  }
}

ExperimentConfig parse_config_toml(const std::string& text) {
  try {
    return apply_json(toml_to_json(text));
  } catch (const json::exception& e) {
    throw ParameterError(std::string("config: bad field type: ") + e.what());
  }
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParameterError("config: cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  const std::string text = buf.str();
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".toml") {
    return parse_config_toml(text);
  }
  if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
    return parse_config_json(text);
  }
  throw ParameterError("config: expected a .json or .toml file: " + path);
}

std::string default_config_json() {
  const ExperimentConfig cfg;
  json j;
  j["d"] = cfg.d;
  j["t"] = cfg.t;
  j["epsilon"] = cfg.epsilon;
  j["delta"] = cfg.delta;
  j["marginal"] = cfg.marginal == MarginalKind::gaussian ? "gaussian" : "uniform_ball";
  j["noise"] = {{"kind", to_string(cfg.noise.kind)}, {"level", cfg.noise.level}};
  j["constants"] = {{"sample_scale", cfg.constants.sample_scale},
                    {"band_scale", cfg.constants.band_scale},
                    {"margin_scale", cfg.constants.margin_scale},
                    {"angle_ratio", cfg.constants.angle_ratio}};
  j["solver"] = {{"iterations", cfg.solver.iterations},
                 {"gap_tolerance", cfg.solver.gap_tolerance},
                 {"step_scale", cfg.solver.step_scale}};
  j["draw"] = {{"attempt_cap", cfg.draw.attempt_cap}};
  j["estimate"] = {{"method", to_string(cfg.estimate.method)}, {"samples", cfg.estimate.samples}};
  j["seeds"] = cfg.seeds;
  j["baselines"] = {{"passive", cfg.baselines.passive},
                    {"fulldim", cfg.baselines.fulldim},
                    {"passive_budget", cfg.baselines.passive_budget}};
  j["output"] = cfg.output;
  return j.dump(2);
}

}  // namespace sparseal

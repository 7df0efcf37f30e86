#include "voltacell/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <sstream>

namespace voltacell {

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_double(const std::string& s) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw std::invalid_argument("expected a finite number, got '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s) {
  const double v = parse_double(s);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw std::invalid_argument("expected an integer, got '" + s + "'");
  }
  return static_cast<int>(v);
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw std::invalid_argument("expected true or false, got '" + s + "'");
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_int(trim(item)));
  if (out.empty()) throw std::invalid_argument("expected a comma-separated integer list");
  return out;
}

std::string int_list(const std::vector<int>& v) {
  std::vector<std::string> parts;
  for (int x : v) parts.push_back(std::to_string(x));
  return join(parts, ",");
}

struct KeyHandler {
  std::string key;
  std::function<void(ScenarioConfig&, const std::string&)> set;
  std::function<std::string(const ScenarioConfig&)> get;
};

#define VC_DOUBLE(k, member)                                                            \
  KeyHandler {                                                                           \
    k, [](ScenarioConfig& c, const std::string& v) { c.member = parse_double(v); },      \
        [](const ScenarioConfig& c) { return fmt(c.member); }                           \
  }
#define VC_INT(k, member)                                                               \
  KeyHandler {                                                                           \
    k, [](ScenarioConfig& c, const std::string& v) { c.member = parse_int(v); },         \
        [](const ScenarioConfig& c) { return std::to_string(c.member); }                \
  }
#define VC_BOOL(k, member)                                                              \
  KeyHandler {                                                                           \
    k, [](ScenarioConfig& c, const std::string& v) { c.member = parse_bool(v); },        \
        [](const ScenarioConfig& c) { return std::string(c.member ? "true" : "false"); } \
  }

const std::vector<std::string>& material_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const char* e : {"anode", "cathode"}) {
      for (const char* f : {"rho_cv", "lambda", "E", "nu", "alpha", "omega", "gamma", "D0", "c_max"}) {
        k.push_back(std::string(e) + "." + f);
      }
    }
    for (const char* f : {"rho_cv", "lambda", "kappa", "D", "t_plus"}) {
      k.push_back(std::string("electrolyte.") + f);
    }
    for (const char* f : {"k_bv", "alpha_D", "beta_D", "pi_max", "theta0", "c_e0"}) k.push_back(f);
    return k;
  }();
  return keys;
}

double* material_slot(MaterialSet& m, const std::string& key) {
  auto electrode = [&](ElectrodeMaterial& e, const std::string& f) -> double* {
    if (f == "rho_cv") return &e.rho_cv;
    if (f == "lambda") return &e.lambda;
    if (f == "E") return &e.E;
    if (f == "nu") return &e.nu;
    if (f == "alpha") return &e.alpha;
    if (f == "omega") return &e.omega;
    if (f == "gamma") return &e.gamma;
    if (f == "D0") return &e.D0;
    if (f == "c_max") return &e.c_max;
    return nullptr;
  };
  if (key.rfind("anode.", 0) == 0) return electrode(m.anode, key.substr(6));
  if (key.rfind("cathode.", 0) == 0) return electrode(m.cathode, key.substr(8));
  if (key == "electrolyte.rho_cv") return &m.electrolyte.rho_cv;
  if (key == "electrolyte.lambda") return &m.electrolyte.lambda;
  if (key == "electrolyte.kappa") return &m.electrolyte.kappa;
  if (key == "electrolyte.D") return &m.electrolyte.D;
  if (key == "electrolyte.t_plus") return &m.electrolyte.t_plus;
  if (key == "k_bv") return &m.k_bv;
  if (key == "alpha_D") return &m.alpha_D;
  if (key == "beta_D") return &m.beta_D;
  if (key == "pi_max") return &m.pi_max;
  if (key == "theta0") return &m.theta0;
  if (key == "c_e0") return &m.c_e0;
  return nullptr;
}

const std::vector<KeyHandler>& handlers() {
  static const std::vector<KeyHandler> h = [] {
    std::vector<KeyHandler> v{
        {"name", [](ScenarioConfig& c, const std::string& s) { c.name = s; },
         [](const ScenarioConfig& c) { return c.name; }},
        VC_DOUBLE("i_app", i_app),
        VC_DOUBLE("t_end", t_end),
        VC_DOUBLE("dt", dt),
        {"soc_init",
         [](ScenarioConfig& c, const std::string& s) { c.soc_anode = c.soc_cathode = parse_double(s); },
         nullptr},
        VC_DOUBLE("soc_anode", soc_anode),
        VC_DOUBLE("soc_cathode", soc_cathode),
        {"model",
         [](ScenarioConfig& c, const std::string& s) {
           if (s == "full") c.mode = ModelMode::Full;
           else if (s == "electrochemical") c.mode = ModelMode::Electrochemical;
           else throw std::invalid_argument("model must be full or electrochemical, got '" + s + "'");
         },
         [](const ScenarioConfig& c) { return std::string(to_string(c.mode)); }},
        {"heat_sign",
         [](ScenarioConfig& c, const std::string& s) {
           if (s == "physical") c.heat_sign = HeatSign::Physical;
           else if (s == "literal") c.heat_sign = HeatSign::Literal;
           else throw std::invalid_argument("heat_sign must be physical or literal, got '" + s + "'");
         },
         [](const ScenarioConfig& c) {
           return std::string(c.heat_sign == HeatSign::Physical ? "physical" : "literal");
         }},
        VC_BOOL("diffusional_conductivity", diffusional_conductivity),
        VC_DOUBLE("geometry.H_s", dims.electrode_half_thickness),
        VC_DOUBLE("geometry.H_e", dims.channel_thickness),
        VC_DOUBLE("geometry.L", dims.digit_length),
        VC_DOUBLE("geometry.w", dims.tip_gap),
        VC_DOUBLE("geometry.l", dims.end_cap_length),
        {"mesh.preset",
         [](ScenarioConfig& c, const std::string& s) {
           if (s == "coarse") c.mesh = MeshSpec::coarse();
           else if (s == "default") c.mesh = MeshSpec{};
           else throw std::invalid_argument("mesh.preset must be default or coarse, got '" + s + "'");
         },
         nullptr},
        {"mesh.base_x", [](ScenarioConfig& c, const std::string& s) { c.mesh.base_x = parse_int_list(s); },
         [](const ScenarioConfig& c) { return int_list(c.mesh.base_x); }},
        {"mesh.base_y", [](ScenarioConfig& c, const std::string& s) { c.mesh.base_y = parse_int_list(s); },
         [](const ScenarioConfig& c) { return int_list(c.mesh.base_y); }},
        VC_INT("mesh.layers", mesh.layers),
        VC_DOUBLE("mesh.grading", mesh.grading),
        VC_INT("mesh.degree", mesh.degree),
        VC_INT("mesh.normal_degree", mesh.normal_degree),
        VC_DOUBLE("mesh.max_aspect_ratio", mesh.max_aspect_ratio),
        VC_DOUBLE("guard.eps_e", guard_eps_e),
        VC_DOUBLE("guard.eps_s_fraction", guard_eps_s_fraction),
        {"guard.action",
         [](ScenarioConfig& c, const std::string& s) {
           if (s == "clamp") c.guard_action = GuardAction::ClampAndLog;
           else if (s == "abort") c.guard_action = GuardAction::Abort;
           else throw std::invalid_argument("guard.action must be clamp or abort, got '" + s + "'");
         },
         [](const ScenarioConfig& c) {
           return std::string(c.guard_action == GuardAction::Abort ? "abort" : "clamp");
         }},
        VC_INT("extra_fp_iters", extra_fp_iters),
        VC_DOUBLE("fp_tol", fp_tol),
        VC_INT("warmup_steps", warmup_steps),
        VC_DOUBLE("snapshot_interval", snapshot_interval),
        VC_BOOL("write_vtk", write_vtk),
        {"output_dir", [](ScenarioConfig& c, const std::string& s) { c.output_dir = s; },
         [](const ScenarioConfig& c) { return c.output_dir; }},
        VC_DOUBLE("scale.length", length_ref),
        VC_DOUBLE("scale.time", time_ref),
    };
    for (const std::string& k : material_keys()) {
      v.push_back({k,
                   [k](ScenarioConfig& c, const std::string& s) { c.material_overrides[k] = parse_double(s); },
                   nullptr});
    }
    return v;
  }();
  return h;
}

#undef VC_DOUBLE
#undef VC_INT
#undef VC_BOOL

const KeyHandler* find_handler(const std::string& key) {
  for (const KeyHandler& h : handlers()) {
    if (h.key == key) return &h;
  }
  return nullptr;
}

std::size_t edit_distance(const std::string& a, const std::string& b) {
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> messages)
    : std::runtime_error("invalid configuration:\n  " + join(messages, "\n  ")),
      messages_(std::move(messages)) {}

std::vector<std::string> ScenarioConfig::violations() const {
  std::vector<std::string> v;
  if (!(dt > 0.0)) v.push_back("dt must be positive");
  if (!(t_end >= 0.0)) v.push_back("t_end must be nonnegative");
  if (dt > 0.0 && t_end > 0.0 && dt > t_end) v.push_back("dt must not exceed t_end");
  if (dt > 0.0 && t_end > 0.0) {
    const double n = t_end / dt;
    if (std::abs(n - std::round(n)) > 1e-9 * n) v.push_back("t_end must be a whole multiple of dt");
  }
  if (!(soc_anode > 0.0 && soc_anode < 1.0)) v.push_back("soc_anode must lie in (0, 1)");
  if (!(soc_cathode > 0.0 && soc_cathode < 1.0)) v.push_back("soc_cathode must lie in (0, 1)");
  if (!std::isfinite(i_app)) v.push_back("i_app must be finite");
  if (!(guard_eps_e > 0.0)) v.push_back("guard.eps_e must be positive");
  if (!(guard_eps_s_fraction > 0.0 && guard_eps_s_fraction < 0.5)) {
    v.push_back("guard.eps_s_fraction must lie in (0, 0.5)");
  }
  if (extra_fp_iters < 0) v.push_back("extra_fp_iters must be nonnegative");
  if (!(fp_tol >= 0.0)) v.push_back("fp_tol must be nonnegative");
  if (warmup_steps < 0) v.push_back("warmup_steps must be nonnegative");
  if (!(snapshot_interval >= 0.0)) v.push_back("snapshot_interval must be nonnegative");
  if (!(length_ref > 0.0)) v.push_back("scale.length must be positive");
  if (!(time_ref > 0.0)) v.push_back("scale.time must be positive");
  if (output_dir.empty()) v.push_back("output_dir must not be empty");
  try {
    dims.validate();
  } catch (const std::exception& e) {
    v.push_back(e.what());
  }
  try {
    mesh.validate();
  } catch (const std::exception& e) {
    v.push_back(e.what());
  }
  try {
    materials().validate();
  } catch (const std::exception& e) {
    v.push_back(e.what());
  }
  return v;
}

void ScenarioConfig::validate() const {
  auto v = violations();
  if (!v.empty()) throw ConfigError(std::move(v));
}

MaterialSet ScenarioConfig::materials() const {
  MaterialSet m;
  for (const auto& [k, value] : material_overrides) {
    double* slot = material_slot(m, k);
    if (!slot) throw ConfigError({"unknown material key '" + k + "'"});
    *slot = value;
  }
  return m;
}

std::string ScenarioConfig::to_text() const {
  std::ostringstream os;
  for (const KeyHandler& h : handlers()) {
    if (h.get) os << h.key << " = " << h.get(*this) << "\n";
  }
  for (const auto& [k, value] : material_overrides) os << k << " = " << fmt(value) << "\n";
  return os.str();
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"low_discharge", "high_discharge", "low_charge",
                                              "high_charge"};
  return names;
}

bool is_preset(const std::string& name) {
  const auto& n = preset_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

ScenarioConfig preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "low_discharge") {
    c.i_app = 5.0;
    c.t_end = 4.0 * 3600.0;
  } else if (name == "high_discharge") {
    c.i_app = 20.0;
    c.t_end = 3600.0;
  } else if (name == "low_charge") {
    c.i_app = -5.0;
    c.t_end = 4.0 * 3600.0;
  } else if (name == "high_charge") {
    c.i_app = -20.0;
    c.t_end = 3600.0;
  } else {
    throw ConfigError({"unknown preset '" + name + "' (known: " + join(preset_names(), ", ") + ")"});
  }
  c.output_dir = name;
  return c;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k{"preset"};
    for (const KeyHandler& h : handlers()) k.push_back(h.key);
    return k;
  }();
  return keys;
}

std::vector<std::string> suggest_keys(const std::string& key) {
  std::vector<std::pair<std::size_t, std::string>> scored;
  for (const std::string& k : config_keys()) scored.push_back({edit_distance(key, k), k});
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::string> out;
  const std::size_t limit = std::max<std::size_t>(2, key.size() / 3);
  for (const auto& [d, k] : scored) {
    if (d > limit || out.size() == 3) break;
    out.push_back(k);
  }
  return out;
}

ScenarioConfig parse_scenario_text(const std::string& text, const std::string& origin) {
  struct Line {
    int number;
    std::string key, value;
  };
  std::vector<Line> lines;
  std::vector<std::string> errors;
  std::istringstream in(text);
  std::string raw;
  int number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      errors.push_back(origin + ":" + std::to_string(number) + ": expected 'key = value'");
      continue;
    }
    lines.push_back({number, trim(body.substr(0, eq)), trim(body.substr(eq + 1))});
  }

  ScenarioConfig c;
  int preset_line = 0;
  for (const Line& l : lines) {
    if (l.key != "preset") continue;
    const std::string where = origin + ":" + std::to_string(l.number) + ": ";
    if (preset_line) {
      errors.push_back(where + "preset already given on line " + std::to_string(preset_line));
    } else if (!is_preset(l.value)) {
      errors.push_back(where + "unknown preset '" + l.value + "' (known: " + join(preset_names(), ", ") + ")");
    } else {
      c = preset(l.value);
    }
    preset_line = l.number;
  }

  for (const Line& l : lines) {
    if (l.key == "preset") continue;
    const std::string where = origin + ":" + std::to_string(l.number) + ": ";
    const KeyHandler* h = find_handler(l.key);
    if (!h) {
      std::string msg = where + "unknown key '" + l.key + "'";
      const auto s = suggest_keys(l.key);
      if (!s.empty()) msg += " (did you mean " + join(s, ", ") + "?)";
      errors.push_back(msg);
      continue;
    }
    try {
      h->set(c, l.value);
    } catch (const std::exception& e) {
      errors.push_back(where + l.key + ": " + e.what());
    }
  }
  for (const std::string& v : c.violations()) errors.push_back(origin + ": " + v);
  if (!errors.empty()) throw ConfigError(std::move(errors));
  return c;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError({"cannot read scenario file '" + path + "'"});
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario_text(ss.str(), path);
}

ScenarioConfig load_scenario(const std::string& preset_or_path) {
  if (is_preset(preset_or_path)) return preset(preset_or_path);
  return parse_scenario_file(preset_or_path);
}

ScaleSet scales_for(const ScenarioConfig& config, const MaterialSet& si) {
  return ScaleSet(config.length_ref, config.time_ref, 1.0, si.theta0, si.c_e0, si.pi_max);
}

ScaledScenario nondimensionalize(const ScenarioConfig& config) {
  config.validate();
  const MaterialSet si = config.materials();
  ScaledScenario s;
  s.scales = scales_for(config, si);
  s.materials = si.to_internal(s.scales);
  s.i_app = s.scales.to_internal(config.i_app, dim::current_density);
  s.dt = s.scales.to_internal(config.dt, dim::time);
  s.t_end = s.scales.to_internal(config.t_end, dim::time);
  s.guard.eps_e = s.scales.to_internal(config.guard_eps_e, dim::concentration);
  s.guard.eps_s_fraction = config.guard_eps_s_fraction;
  s.guard.action = config.guard_action;
  s.options.mode = config.mode;
  s.options.heat_sign = config.heat_sign;
  s.options.diffusional_conductivity = config.diffusional_conductivity;
  s.options.guard = s.guard;
  return s;
}

std::string config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : config.to_text()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

}  // namespace voltacell

#include "superrad/io/config.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <openssl/evp.h>

#include "superrad/errors.hpp"
#include "superrad/io/csv.hpp"

namespace superrad::io {

namespace {

using std::numbers::pi;

struct Unit {
  std::string_view suffix;
  double factor;
};

// Longest suffixes first so "rad/us" wins over "us".
constexpr std::array kFrequencyUnits{
    Unit{"rad/us", 1.0}, Unit{"rad/ms", 1e-3}, Unit{"rad/ns", 1e3}, Unit{"rad/s", 1e-6},
    Unit{"GHz", 1e3},    Unit{"MHz", 1.0},     Unit{"kHz", 1e-3},   Unit{"Hz", 1e-6},
};
constexpr std::array kRateUnits{
    Unit{"/us", 1.0},  Unit{"/ms", 1e-3},  Unit{"/ns", 1e3},  Unit{"/s", 1e-6},
    Unit{"GHz", 1e3},  Unit{"MHz", 1.0},   Unit{"kHz", 1e-3}, Unit{"Hz", 1e-6},
};
constexpr std::array kTimeUnits{
    Unit{"us", 1.0}, Unit{"ms", 1e3}, Unit{"ns", 1e-3}, Unit{"s", 1e6},
};
constexpr std::array kAngleUnits{
    Unit{"deg", pi / 180.0},
    Unit{"rad", 1.0},
};

std::string trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  return out;
}

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return v;
}

double parse_factor(std::string_view f, std::string_view full) {
  if (f == "pi") return pi;
  if (f == "two_pi" || f == "2pi") return 2.0 * pi;
  if (ends_with(f, "pi")) {
    if (const auto v = parse_number(f.substr(0, f.size() - 2))) return *v * pi;
  }
  if (const auto v = parse_number(f)) return *v;
  throw ConfigError("cannot parse '" + std::string(f) + "' in value '" + std::string(full) + "'");
}

// Product/quotient of numbers and pi, e.g. "2pi*100", "pi/4", "1e-4".
double parse_expression(std::string_view expr, std::string_view full) {
  if (expr.empty()) return 1.0;
  double value = 1.0;
  char op = '*';
  std::size_t start = 0;
  for (std::size_t i = 0; i <= expr.size(); ++i) {
    const bool boundary =
        i == expr.size() || ((expr[i] == '*' || expr[i] == '/') && i > start);
    if (!boundary) continue;
    const double f = parse_factor(expr.substr(start, i - start), full);
    value = (op == '*') ? value * f : value / f;
    if (i < expr.size()) op = expr[i];
    start = i + 1;
  }
  return value;
}

template <std::size_t K>
double apply_units(const std::string& compact, const std::array<Unit, K>& units,
                   std::string_view full) {
  for (const auto& u : units) {
    if (ends_with(compact, u.suffix)) {
      std::string_view expr(compact);
      expr.remove_suffix(u.suffix.size());
      if (!expr.empty() && expr.back() == '*') expr.remove_suffix(1);
      return parse_expression(expr, full) * u.factor;
    }
  }
  return parse_expression(compact, full);
}

struct KeySpec {
  std::string_view name;
  Quantity quantity;
};

constexpr std::array kKeys{
    KeySpec{"n_spins", Quantity::Dimensionless},
    KeySpec{"omega0", Quantity::AngularFrequency},
    KeySpec{"omega_d", Quantity::AngularFrequency},
    KeySpec{"theta", Quantity::Angle},
    KeySpec{"phi", Quantity::Angle},
    KeySpec{"tau_c", Quantity::Time},
    KeySpec{"geometry", Quantity::Dimensionless},
    KeySpec{"alpha_c", Quantity::Dimensionless},
    KeySpec{"omega_sl", Quantity::AngularFrequency},
    KeySpec{"detuning", Quantity::AngularFrequency},
    KeySpec{"nbar", Quantity::Dimensionless},
    KeySpec{"p_plus", Quantity::Rate},
    KeySpec{"p_minus", Quantity::Rate},
};

const KeySpec& lookup(const std::string& name, std::string_view where) {
  for (const auto& k : kKeys)
    if (k.name == name) return k;
  throw ConfigError(std::string(where) + ": unknown key '" + name + "'");
}

std::pair<std::string, std::string> split_assignment(std::string_view line, std::string_view where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError(std::string(where) + ": expected 'key = value', got '" + trim(line) + "'");
  }
  std::string key = trim(line.substr(0, eq));
  std::string value = trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError(std::string(where) + ": missing key before '='");
  if (value.empty()) throw ConfigError(std::string(where) + ": key '" + key + "' has no value");
  return {key, value};
}

int parse_spin_count(const std::string& value) {
  int n = 0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), n);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw ConfigError("n_spins must be an integer, got '" + value + "'");
  }
  return n;
}

}  // namespace

double parse_quantity(std::string_view text, Quantity kind) {
  const std::string compact = strip_spaces(text);
  if (compact.empty()) throw ConfigError("empty value");
  switch (kind) {
    case Quantity::AngularFrequency:
      return apply_units(compact, kFrequencyUnits, text);
    case Quantity::Rate:
      return apply_units(compact, kRateUnits, text);
    case Quantity::Time:
      return apply_units(compact, kTimeUnits, text);
    case Quantity::Angle:
      return apply_units(compact, kAngleUnits, text);
    case Quantity::Dimensionless:
      return parse_expression(compact, text);
  }
  throw ConfigError("unsupported quantity");
}

model::SystemConfig parse_config(std::string_view text, const std::vector<std::string>& overrides,
                                 std::string_view source) {
  std::map<std::string, std::string> values;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const std::string where = std::string(source) + ":" + std::to_string(lineno);
    auto [key, value] = split_assignment(line, where);
    lookup(key, where);
    if (!values.emplace(key, value).second) {
      throw ConfigError(where + ": duplicate key '" + key + "'");
    }
  }
  for (const auto& o : overrides) {
    auto [key, value] = split_assignment(o, "override");
    lookup(key, "override");
    values[key] = value;
  }

  auto require = [&](std::string_view name) -> const std::string& {
    const auto it = values.find(std::string(name));
    if (it == values.end()) {
      throw ConfigError(std::string(source) + ": missing required key '" + std::string(name) + "'");
    }
    return it->second;
  };
  auto quantity = [&](std::string_view name) {
    const auto& spec = lookup(std::string(name), source);
    try {
      return parse_quantity(values.at(std::string(name)), spec.quantity);
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(source) + ": key '" + std::string(name) + "': " + e.what());
    }
  };
  auto has = [&](std::string_view name) { return values.count(std::string(name)) > 0; };

  model::SystemConfig cfg;
  cfg.n_spins = parse_spin_count(require("n_spins"));
  for (auto name : {"omega0", "omega_d", "theta", "tau_c"}) require(name);
  cfg.omega0 = quantity("omega0");
  cfg.omega_d = quantity("omega_d");
  cfg.theta = quantity("theta");
  cfg.tau_c = quantity("tau_c");
  if (has("phi")) cfg.phi = quantity("phi");
  if (has("alpha_c")) cfg.alpha_c = quantity("alpha_c");
  if (has("geometry")) cfg.geometry = model::parse_geometry(values.at("geometry"));

  const bool thermal = has("omega_sl") || has("detuning") || has("nbar");
  const bool direct = has("p_plus") || has("p_minus");
  if (thermal && direct) {
    throw ConfigError(std::string(source) +
                      ": thermal bath keys (omega_sl, detuning, nbar) and direct rates "
                      "(p_plus, p_minus) are mutually exclusive");
  }
  if (thermal) {
    model::ThermalBath bath;
    require("omega_sl");
    bath.omega_sl = quantity("omega_sl");
    if (has("detuning")) bath.detuning = quantity("detuning");
    if (has("nbar")) bath.nbar = quantity("nbar");
    cfg.bath = bath;
  } else {
    model::DirectRates bath;
    if (has("p_plus")) bath.p_plus = quantity("p_plus");
    if (has("p_minus")) bath.p_minus = quantity("p_minus");
    cfg.bath = bath;
  }

  cfg.validate();
  return cfg;
}

model::SystemConfig load_config(const std::filesystem::path& path,
                                const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), overrides, path.string());
}

std::string canonical_form(const model::SystemConfig& cfg) {
  std::map<std::string, std::string> kv;
  kv["n_spins"] = std::to_string(cfg.n_spins);
  kv["omega0"] = format_double(cfg.omega0);
  kv["omega_d"] = format_double(cfg.omega_d);
  kv["theta"] = format_double(cfg.theta);
  kv["phi"] = format_double(cfg.phi);
  kv["tau_c"] = format_double(cfg.tau_c);
  kv["geometry"] = std::string(model::to_string(cfg.geometry));
  kv["alpha_c"] = format_double(cfg.alpha_c);
  if (const auto* t = std::get_if<model::ThermalBath>(&cfg.bath)) {
    kv["omega_sl"] = format_double(t->omega_sl);
    kv["detuning"] = format_double(t->detuning);
    kv["nbar"] = format_double(t->nbar);
  } else {
    const auto& d = std::get<model::DirectRates>(cfg.bath);
    kv["p_plus"] = format_double(d.p_plus);
    kv["p_minus"] = format_double(d.p_minus);
  }
  std::string out;
  for (const auto& [k, v] : kv) out += k + " = " + v + "\n";
  return out;
}

std::string config_hash(const model::SystemConfig& cfg) {
  const std::string text = canonical_form(cfg);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace superrad::io

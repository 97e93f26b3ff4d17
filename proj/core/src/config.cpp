#include "dpstream/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dpstream/error.hpp"

namespace dpstream {

namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view key, std::string_view text) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value)) {
    throw ParameterError(std::string(key) + ": not a finite number: " + std::string(text));
  }
  return value;
}

std::uint64_t to_uint(std::string_view key, std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ParameterError(std::string(key) + ": not a non-negative integer: " + std::string(text));
  }
  return value;
}

bool to_bool(std::string_view key, std::string_view text) {
  if (text == "on" || text == "true" || text == "1") return true;
  if (text == "off" || text == "false" || text == "0") return false;
  throw ParameterError(std::string(key) + ": expected on/off: " + std::string(text));
}

std::string shortest(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

// FNV-1a
struct Hasher {
  std::uint64_t h = 1469598103934665603ull;
  void bytes(const void* p, std::size_t n) {
    const auto* c = static_cast<const unsigned char*>(p);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= c[i];
      h *= 1099511628211ull;
    }
  }
  template <class T>
  void add(const T& v) { bytes(&v, sizeof v); }
};

}  // namespace

void EngineConfig::validate() const {
  decay.validate();
  if (!(r > 0.0) || !std::isfinite(r)) throw ParameterError("r must be positive");
  if (!(tau0 > 0.0) || !std::isfinite(tau0)) throw ParameterError("tau0 must be positive");
  if (alpha_override && !(*alpha_override > 0.0 && *alpha_override < 1.0)) {
    throw ParameterError("alpha must lie in (0, 1)");
  }
  if (init_cell_count < 2) throw ParameterError("init_cell_count must be at least 2");
  if (sweep_interval < 1) throw ParameterError("sweep_interval must be at least 1");
}

std::uint64_t EngineConfig::fingerprint() const {
  Hasher h;
  h.add(decay.a);
  h.add(decay.lambda);
  h.add(decay.v);
  h.add(decay.beta);
  h.add(r);
  h.add(tau0);
  const double alpha = alpha_override.value_or(-1.0);
  h.add(alpha);
  h.add(init_cell_count);
  h.add(sweep_interval);
  h.add(recycle);
  h.add(filters);
  h.add(seed);
  h.add(order);
  h.add(index);
  h.add(ties);
  h.add(objective);
  return h.h;
}

std::string_view to_string(FilterMode mode) {
  switch (mode) {
    case FilterMode::Both: return "both";
    case FilterMode::DensityOnly: return "density-only";
    case FilterMode::Off: return "off";
  }
  return "both";
}

FilterMode parse_filter_mode(std::string_view text) {
  if (text == "both") return FilterMode::Both;
  if (text == "density-only" || text == "density_only") return FilterMode::DensityOnly;
  if (text == "off") return FilterMode::Off;
  throw ParameterError("filters: expected both, density-only or off: " + std::string(text));
}

std::string_view to_string(ObjectiveForm form) {
  return form == ObjectiveForm::AsPrinted ? "printed" : "reciprocal";
}

ObjectiveForm parse_objective_form(std::string_view text) {
  if (text == "printed") return ObjectiveForm::AsPrinted;
  if (text == "reciprocal") return ObjectiveForm::Reciprocal;
  throw ParameterError("objective: expected printed or reciprocal: " + std::string(text));
}

EngineConfig parse_config(std::istream& in) {
  EngineConfig c;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError(line_no, "expected key=value");
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ParseError(line_no, "expected key=value");

    if (key == "a") c.decay.a = to_double(key, value);
    else if (key == "lambda") c.decay.lambda = to_double(key, value);
    else if (key == "v") c.decay.v = to_double(key, value);
    else if (key == "beta") c.decay.beta = to_double(key, value);
    else if (key == "r") c.r = to_double(key, value);
    else if (key == "tau0") c.tau0 = to_double(key, value);
    else if (key == "alpha") {
      if (value == "auto") c.alpha_override.reset();
      else c.alpha_override = to_double(key, value);
    }
    else if (key == "init_cell_count") c.init_cell_count = to_uint(key, value);
    else if (key == "sweep_interval") c.sweep_interval = to_uint(key, value);
    else if (key == "recycle") c.recycle = to_bool(key, value);
    else if (key == "filters") c.filters = parse_filter_mode(value);
    else if (key == "seed") c.seed = to_uint(key, value);
    else throw ParameterError("unknown config key: " + std::string(key));
  }
  c.validate();
  return c;
}

EngineConfig parse_config(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_config(in);
}

EngineConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config: " + path);
  return parse_config(in);
}

std::string format_config(const EngineConfig& c) {
  std::string out;
  auto put = [&](std::string_view k, const std::string& v) {
    out.append(k).append("=").append(v).append("\n");
  };
  put("a", shortest(c.decay.a));
  put("lambda", shortest(c.decay.lambda));
  put("v", shortest(c.decay.v));
  put("beta", shortest(c.decay.beta));
  put("r", shortest(c.r));
  put("tau0", shortest(c.tau0));
  put("alpha", c.alpha_override ? shortest(*c.alpha_override) : std::string("auto"));
  put("init_cell_count", std::to_string(c.init_cell_count));
  put("sweep_interval", std::to_string(c.sweep_interval));
  put("recycle", c.recycle ? "on" : "off");
  put("filters", std::string(to_string(c.filters)));
  put("seed", std::to_string(c.seed));
  return out;
}

}  // namespace dpstream

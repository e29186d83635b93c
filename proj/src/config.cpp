#include "qpv/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

namespace qpv {

namespace {

constexpr const char* kKnownSections[] = {
    "protocol", "channel", "security", "coefficients",
    "geometry", "latency",  "run"};

struct Entry {
  std::string value;
  int line = 0;
  bool consumed = false;
};

using Section = std::map<std::string, Entry>;
using RawConfig = std::map<std::string, Section>;

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

RawConfig parse_raw(const std::string& text) {
  RawConfig raw;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto cut = line.find_first_of("#;");
    if (cut != std::string::npos) line = line.substr(0, cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unterminated section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      bool known = false;
      for (const char* s : kKnownSections) known |= (section == s);
      if (!known) {
        throw ConfigError("line " + std::to_string(line_no) +
                          ": unknown section [" + section + "]");
      }
      raw[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": expected key = value");
    }
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) +
                        ": key outside any [section]");
    }
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    }
    auto [it, inserted] = raw[section].try_emplace(key, Entry{value, line_no});
    if (!inserted) {
      throw ConfigError("duplicate key '" + key + "' in [" + section +
                        "] (lines " + std::to_string(it->second.line) +
                        " and " + std::to_string(line_no) + ")");
    }
  }
  return raw;
}

class Reader {
 public:
  explicit Reader(RawConfig raw) : raw_(std::move(raw)) {}

  std::optional<std::string> get_string(const std::string& sec,
                                        const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) return std::nullopt;
    return e->value;
  }

  std::optional<double> get_double(const std::string& sec,
                                   const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) return std::nullopt;
    const char* begin = e->value.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
      fail(sec, key, *e, "not a finite number");
    }
    return v;
  }

  // Integer-valued, possibly in scientific notation (rounds = 1e7).
  std::optional<std::int64_t> get_count(const std::string& sec,
                                        const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) return std::nullopt;
    auto v = get_reparsed_double(sec, key, *e);
    if (v < 0 || v > 9.0e15 || std::floor(v) != v) {
      fail(sec, key, *e, "not a non-negative integer");
    }
    return static_cast<std::int64_t>(v);
  }

  std::optional<std::uint64_t> get_u64(const std::string& sec,
                                       const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) return std::nullopt;
    return parse_u64(sec, key, *e, e->value);
  }

  std::optional<std::vector<std::uint64_t>> get_u64_list(
      const std::string& sec, const std::string& key) {
    Entry* e = find(sec, key);
    if (!e) return std::nullopt;
    std::vector<std::uint64_t> out;
    std::string spaced = e->value;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::string token;
    std::istringstream in(spaced);
    while (in >> token) {
      out.push_back(parse_u64(sec, key, *e, token));
    }
    if (out.empty()) fail(sec, key, *e, "expected at least one value");
    return out;
  }

  // Every key must have been consumed by a typed getter above.
  void finish() const {
    for (const auto& [sec, entries] : raw_) {
      for (const auto& [key, e] : entries) {
        if (!e.consumed) {
          throw ConfigError("unknown key '" + key + "' in [" + sec +
                            "] (line " + std::to_string(e.line) + ")");
        }
      }
    }
  }

 private:
  Entry* find(const std::string& sec, const std::string& key) {
    auto s = raw_.find(sec);
    if (s == raw_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    k->second.consumed = true;
    return &k->second;
  }

  double get_reparsed_double(const std::string& sec, const std::string& key,
                             const Entry& e) {
    const char* begin = e.value.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v)) {
      fail(sec, key, e, "not a finite number");
    }
    return v;
  }

  std::uint64_t parse_u64(const std::string& sec, const std::string& key,
                          const Entry& e, const std::string& token) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || p != token.data() + token.size()) {
      fail(sec, key, e, "not an unsigned integer: '" + token + "'");
    }
    return v;
  }

  [[noreturn]] void fail(const std::string& sec, const std::string& key,
                         const Entry& e, const std::string& why) {
    throw ConfigError("[" + sec + "] " + key + " (line " +
                      std::to_string(e.line) + "): " + why);
  }

  RawConfig raw_;
};

const struct {
  const char* key;
  const char* component;
} kLatencyKeys[] = {
    {"boolean_function_ns", "boolean-function"},
    {"classical_channel_1_ns", "classical-channel-1"},
    {"classical_channel_2_ns", "classical-channel-2"},
    {"detector_ns", "detector"},
    {"switch_driver_ns", "switch-driver"},
    {"interconnect_ns", "interconnect"},
};

[[noreturn]] void missing(const std::string& sec, const std::string& key) {
  throw ConfigError("missing required key '" + key + "' in [" + sec + "]");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Reader r(parse_raw(text));
  RunConfig cfg;

  cfg.rounds = r.get_count("protocol", "rounds");
  if (auto v = r.get_count("protocol", "input_bits")) {
    cfg.input_bits = static_cast<int>(*v);
  }
  cfg.mu = r.get_double("protocol", "mu");
  if (auto v = r.get_double("protocol", "rep_rate_hz")) cfg.rep_rate_hz = *v;

  cfg.eta = r.get_double("channel", "eta");
  cfg.p_e = r.get_double("channel", "p_e");
  cfg.eta_mu = r.get_double("channel", "eta_mu");

  if (auto v = r.get_double("security", "epsilon")) cfg.security.epsilon = *v;
  if (auto v = r.get_double("security", "xi")) cfg.security.xi = *v;

  if (auto v = r.get_double("coefficients", "gamma_c")) {
    cfg.coefficients.gamma_c = *v;
  }
  if (auto v = r.get_double("coefficients", "gamma_perp")) {
    cfg.coefficients.gamma_perp = *v;
  }
  if (auto v = r.get_double("coefficients", "gamma_i")) {
    cfg.coefficients.gamma_i = *v;
  }

  if (auto v = r.get_count("geometry", "dimension")) {
    cfg.geometry.present = true;
    if (*v != 1 && *v != 2) {
      throw ConfigError("[geometry] dimension must be 1 or 2");
    }
    cfg.geometry.dimension = static_cast<int>(*v);
  }
  auto geo_double = [&](const char* key) -> std::optional<double> {
    auto v = r.get_double("geometry", key);
    if (v) cfg.geometry.present = true;
    return v;
  };
  if (auto v = geo_double("v1")) cfg.geometry.v1 = *v;
  if (auto v = geo_double("v2")) cfg.geometry.v2 = *v;
  if (auto v = geo_double("v1_x")) cfg.geometry.v1_point.x = *v;
  if (auto v = geo_double("v1_y")) cfg.geometry.v1_point.y = *v;
  if (auto v = geo_double("v2_x")) cfg.geometry.v2_point.x = *v;
  if (auto v = geo_double("v2_y")) cfg.geometry.v2_point.y = *v;
  {
    auto t1s = r.get_count("geometry", "t1_send_ps");
    auto t1r = r.get_count("geometry", "t1_recv_ps");
    auto t2s = r.get_count("geometry", "t2_send_ps");
    auto t2r = r.get_count("geometry", "t2_recv_ps");
    int have = !!t1s + !!t1r + !!t2s + !!t2r;
    if (have == 4) {
      cfg.geometry.present = true;
      cfg.geometry.timing = TimingRecord{
          static_cast<std::int64_t>(*t1s), static_cast<std::int64_t>(*t1r),
          static_cast<std::int64_t>(*t2s), static_cast<std::int64_t>(*t2r)};
    } else if (have != 0) {
      throw ConfigError(
          "[geometry] timing needs all four of t1_send_ps, t1_recv_ps, "
          "t2_send_ps, t2_recv_ps");
    }
  }
  if (auto v = geo_double("excess_ns")) cfg.geometry.excess_ns = *v;

  for (const auto& lk : kLatencyKeys) {
    if (auto v = r.get_double("latency", lk.key)) {
      cfg.latency.push_back({lk.component, *v});
    }
  }

  if (auto v = r.get_u64_list("run", "seeds")) cfg.seeds = *v;
  if (auto v = r.get_string("run", "role")) cfg.role = *v;
  if (auto v = r.get_string("run", "mode")) cfg.mode = *v;
  if (auto v = r.get_string("run", "boolean_backend")) cfg.boolean_backend = *v;
  if (auto v = r.get_u64("run", "boolean_seed")) cfg.boolean_seed = *v;
  if (auto v = r.get_double("run", "adversary_det_eff")) {
    cfg.adversary_det_eff = *v;
  }
  if (auto v = r.get_count("run", "vacuum_responses")) {
    cfg.vacuum_responses = *v;
  }
  if (auto v = r.get_double("run", "mu_min")) cfg.mu_interval.lo = *v;
  if (auto v = r.get_double("run", "mu_max")) cfg.mu_interval.hi = *v;
  if (auto v = r.get_double("run", "mu_tolerance")) cfg.mu_tolerance = *v;

  r.finish();

  if (cfg.role != "honest" && cfg.role != "vacuum-responder" &&
      cfg.role != "intercept-resend" && cfg.role != "composite") {
    throw ConfigError(
        "[run] role must be one of: honest, vacuum-responder, "
        "intercept-resend, composite");
  }
  if (cfg.mode != "monte-carlo" && cfg.mode != "expected") {
    throw ConfigError("[run] mode must be one of: monte-carlo, expected");
  }
  if (cfg.boolean_backend != "keyed" && cfg.boolean_backend != "explicit" &&
      cfg.boolean_backend != "constant-zero") {
    throw ConfigError(
        "[run] boolean_backend must be one of: keyed, explicit, "
        "constant-zero");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

ProtocolParams resolve_protocol_params(const RunConfig& cfg, bool require_mu) {
  if (!cfg.rounds) missing("protocol", "rounds");
  if (*cfg.rounds < 1) {
    throw ConfigError("[protocol] rounds must be >= 1");
  }
  if (require_mu && !cfg.mu) missing("protocol", "mu");
  if (!cfg.p_e) missing("channel", "p_e");

  double eta;
  if (cfg.eta_mu) {
    if (!cfg.mu || *cfg.mu <= 0.0) {
      throw ConfigError(
          "[channel] eta_mu needs a positive [protocol] mu to divide by");
    }
    eta = *cfg.eta_mu / *cfg.mu;
  } else if (cfg.eta) {
    eta = *cfg.eta;
  } else {
    missing("channel", "eta");
  }

  ProtocolParams p{*cfg.rounds,        cfg.input_bits, cfg.mu.value_or(0.0),
                   {eta, *cfg.p_e},    cfg.security,   cfg.rep_rate_hz};
  try {
    validate_params(p);
    validate_coefficients(cfg.coefficients);
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
  return p;
}

SessionRole resolve_role(const RunConfig& cfg, double x_star_hint) {
  std::int64_t budget = cfg.vacuum_responses.value_or(
      std::llround(std::max(0.0, x_star_hint)));
  if (cfg.role == "honest") return HonestProver{};
  if (cfg.role == "vacuum-responder") return VacuumResponder{budget};
  if (cfg.role == "intercept-resend") {
    return InterceptResend{cfg.adversary_det_eff};
  }
  return CompositeAdversary{cfg.adversary_det_eff, budget};
}

BooleanFunction::Backend resolve_backend(const RunConfig& cfg) {
  if (cfg.boolean_backend == "explicit") {
    return BooleanFunction::Backend::Explicit;
  }
  if (cfg.boolean_backend == "constant-zero") {
    return BooleanFunction::Backend::ConstantZero;
  }
  return BooleanFunction::Backend::Keyed;
}

}  // namespace qpv

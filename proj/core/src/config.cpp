#include "stc/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <spdlog/spdlog.h>

#include "stc/errors.hpp"

namespace stc {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

double to_double(std::string_view v, std::size_t line) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(line, "expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::size_t to_size(std::string_view v, std::size_t line) {
  std::size_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    fail(line, "expected a non-negative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::string to_string_value(std::string_view v, std::size_t line) {
  if (v.size() < 2 || v.front() != '"' || v.back() != '"') {
    fail(line, "expected a quoted string, got '" + std::string(v) + "'");
  }
  return std::string(v.substr(1, v.size() - 2));
}

std::string_view strip_comment(std::string_view s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

FamilyFile parse_family(std::istream& in) {
  FamilyFile f;
  std::map<std::string, bool> seen;
  std::map<std::string, bool> set_seen;
  bool in_set = false;

  using Setter = std::function<void(std::string_view, std::size_t)>;
  const std::map<std::string, Setter, std::less<>> top{
      {"plant", [&](auto v, auto l) { f.plant = to_string_value(v, l); }},
      {"lambda", [&](auto v, auto l) { f.settings.lambda = to_double(v, l); }},
      {"c_x", [&](auto v, auto l) { f.settings.c_x = to_double(v, l); }},
      {"tau_mad", [&](auto v, auto l) { f.settings.tau_mad = to_double(v, l); }},
      {"m", [&](auto v, auto l) { f.settings.m = to_size(v, l); }},
      {"horizon_cap", [&](auto v, auto l) { f.settings.horizon_cap = to_double(v, l); }},
      {"phi_step", [&](auto v, auto l) { f.settings.phi_step = to_double(v, l); }},
  };
  const std::map<std::string, Setter, std::less<>> per_set{
      {"eps", [&](auto v, auto l) { f.sets.back().eps = to_double(v, l); }},
      {"gamma0", [&](auto v, auto l) { f.sets.back().gamma0 = to_double(v, l); }},
      {"gamma1", [&](auto v, auto l) { f.sets.back().gamma1 = to_double(v, l); }},
      {"l0", [&](auto v, auto l) { f.sets.back().l0 = to_double(v, l); }},
      {"l1", [&](auto v, auto l) { f.sets.back().l1 = to_double(v, l); }},
      {"phi0_0", [&](auto v, auto l) { f.sets.back().phi0_init = to_double(v, l); }},
      {"phi1_0", [&](auto v, auto l) { f.sets.back().phi1_init = to_double(v, l); }},
      {"tmax", [&](auto v, auto l) { f.t_max.back() = to_double(v, l); }},
  };

  auto close_set = [&](std::size_t line) {
    if (!in_set) return;
    for (const auto& [key, _] : per_set) {
      if (key != "tmax" && !set_seen.count(key)) fail(line, "set is missing '" + key + "'");
    }
  };

  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto text = trim(strip_comment(raw));
    if (text.empty()) continue;
    if (text == "[[set]]") {
      close_set(line);
      in_set = true;
      set_seen.clear();
      f.sets.emplace_back();
      f.t_max.push_back(0.0);
      continue;
    }
    if (text.front() == '[') fail(line, "unknown table '" + std::string(text) + "'");
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) fail(line, "expected 'key = value'");
    const auto key = trim(text.substr(0, eq));
    const auto value = trim(text.substr(eq + 1));
    const auto& table = in_set ? per_set : top;
    auto& seen_here = in_set ? set_seen : seen;
    const auto it = table.find(key);
    if (it == table.end()) fail(line, "unknown key '" + std::string(key) + "'");
    if (seen_here[std::string(key)]) fail(line, "duplicate key '" + std::string(key) + "'");
    seen_here[std::string(key)] = true;
    it->second(value, line);
  }
  close_set(line);
  if (f.sets.empty()) throw ConfigError("family file has no [[set]] tables");
  return f;
}

FamilyFile read_family(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  try {
    return parse_family(in);
  } catch (const ConfigError& ex) {
    throw ConfigError(path + ": " + ex.what());
  }
}

void write_family(std::ostream& out, const FamilyFile& f) {
  out << "plant = \"" << f.plant << "\"\n"
      << "lambda = " << fmt17(f.settings.lambda) << "\n"
      << "c_x = " << fmt17(f.settings.c_x) << "\n"
      << "tau_mad = " << fmt17(f.settings.tau_mad) << "\n"
      << "m = " << f.settings.m << "\n"
      << "horizon_cap = " << fmt17(f.settings.horizon_cap) << "\n"
      << "phi_step = " << fmt17(f.settings.phi_step) << "\n";
  for (std::size_t i = 0; i < f.sets.size(); ++i) {
    const auto& p = f.sets[i];
    out << "\n[[set]]\n"
        << "eps = " << fmt17(p.eps) << "\n"
        << "gamma0 = " << fmt17(p.gamma0) << "\n"
        << "gamma1 = " << fmt17(p.gamma1) << "\n"
        << "l0 = " << fmt17(p.l0) << "\n"
        << "l1 = " << fmt17(p.l1) << "\n"
        << "phi0_0 = " << fmt17(p.phi0_init) << "\n"
        << "phi1_0 = " << fmt17(p.phi1_init) << "\n";
    if (i < f.t_max.size()) out << "tmax = " << fmt17(f.t_max[i]) << "\n";
  }
}

void write_family(const std::string& path, const FamilyFile& family) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config '" + path + "'");
  write_family(out, family);
}

FamilyFile to_family(const TriggerConfig& cfg, std::string plant) {
  return {std::move(plant), cfg.settings, cfg.sets, cfg.t_max};
}

TriggerConfig to_trigger_config(const FamilyFile& family) {
  TriggerConfig cfg = make_trigger_config(family.settings, family.sets);
  for (std::size_t i = 0; i < cfg.t_max.size() && i < family.t_max.size(); ++i) {
    if (family.t_max[i] > 0.0 && std::abs(family.t_max[i] - cfg.t_max[i]) > 1e-9) {
      spdlog::warn("set {}: stored tmax {} differs from recomputed {}", i + 1,
                   family.t_max[i], cfg.t_max[i]);
    }
  }
  return cfg;
}

bool same_config(const TriggerConfig& a, const TriggerConfig& b) {
  return a.settings == b.settings && a.sets == b.sets && a.c_u == b.c_u &&
         a.t_min == b.t_min && a.t_max == b.t_max && a.cap_bound == b.cap_bound;
}

}  // namespace stc

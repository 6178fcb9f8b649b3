#include "sclink/config.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sclink/errors.hpp"
#include "sclink/link_model.hpp"

namespace sclink {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

const std::set<std::string>& plain_keys() {
  static const std::set<std::string> keys{
      "fiber.length_km", "fiber.attenuation_table", "fiber.raman_table",
      "fiber.dispersion_ps_nm_km", "fiber.reference_wavelength_nm", "fiber.gamma_per_w_km",
      "fiber.temperature_k",
      "grid.spacing_ghz", "grid.symbol_rate_gbd", "grid.launch_power_dbm",
      "link.band_set", "link.spans", "link.pump_count",
      "pumps.list", "pumps.power_model", "pumps.efficiency",
      "raman.step_km", "raman.search_step_km", "raman.tolerance", "raman.search_tolerance",
      "raman.damping", "raman.acceleration_depth", "raman.max_iterations",
      "raman.pump_depletion", "raman.pump_interactions", "raman.fast",
      "quality.transceiver_snr_db", "quality.format_correction", "quality.modulation_order",
      "quality.format_correction_weight",
      "ledger.p_mm_w", "ledger.efficiency_point",
      "pso.particles", "pso.iterations", "pso.inertia", "pso.cognitive", "pso.social",
      "pso.velocity_fraction", "pso.seed", "pso.threads",
      "sweep.band_sets", "sweep.spans", "sweep.pumps", "sweep.p_mm_w",
      "cache.enabled", "cache.dir",
  };
  return keys;
}

const std::set<std::string>& band_fields() {
  static const std::set<std::string> fields{"range_nm", "channel_count", "noise_figure_db",
                                            "efficiency_curve"};
  return fields;
}

}  // namespace

void check_config_key(const std::string& key) {
  if (plain_keys().count(key)) return;
  if (key.rfind("band.", 0) == 0) {
    const auto dot = key.find('.', 5);
    if (dot == std::string::npos) throw ValidationError("config key '" + key + "': missing field");
    const std::string label = key.substr(5, dot - 5);
    const std::string field = key.substr(dot + 1);
    if (!parse_band(label)) {
      throw ValidationError("config key '" + key + "': unknown band label '" + label +
                            "' (expected S, C or L)");
    }
    if (!band_fields().count(field)) {
      throw ValidationError("config key '" + key + "': unknown band field '" + field + "'");
    }
    return;
  }
  if (key.rfind("pumps.draw_curve.", 0) == 0) {
    const std::string wl = key.substr(17);
    char* end = nullptr;
    const double v = std::strtod(wl.c_str(), &end);
    if (wl.empty() || *end != '\0' || !(v > 0.0)) {
      throw ValidationError("config key '" + key + "': expected a pump wavelength in nm");
    }
    return;
  }
  throw ValidationError("unknown config key '" + key + "'");
}

Config Config::parse(std::istream& in, const std::string& source_name,
                     const std::string& base_dir) {
  Config c;
  c.source_ = source_name;
  c.base_dir_ = base_dir;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    std::ostringstream where;
    where << source_name << ":" << line << ": ";
    if (eq == std::string::npos) throw ValidationError(where.str() + "expected 'key = value'");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    try {
      check_config_key(key);
    } catch (const ValidationError& e) {
      throw ValidationError(where.str() + e.what());
    }
    if (c.values_.count(key)) throw ValidationError(where.str() + "duplicate key '" + key + "'");
    c.values_[key] = Entry{value, line};
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config " + path);
  const auto dir = std::filesystem::path(path).parent_path();
  return parse(in, path, dir.empty() ? "." : dir.string());
}

void Config::set(const std::string& key, const std::string& value) {
  check_config_key(key);
  values_[key] = Entry{value, 0};
}

void Config::fail(const std::string& key, const std::string& what) const {
  std::ostringstream msg;
  msg << source_;
  if (const Entry* e = find(key); e && e->line > 0) msg << ":" << e->line;
  msg << ": key '" << key << "': " << what;
  throw ValidationError(msg.str());
}

const Config::Entry* Config::find(const std::string& key) const {
  const auto it = values_.find(key);
  return it == values_.end() ? nullptr : &it->second;
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  const Entry* e = find(key);
  return e ? e->value : fallback;
}

double Config::number(const std::string& key, double fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  char* end = nullptr;
  const double v = std::strtod(e->value.c_str(), &end);
  if (e->value.empty() || *end != '\0') fail(key, "'" + e->value + "' is not a number");
  return v;
}

int Config::integer(const std::string& key, int fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  char* end = nullptr;
  const long v = std::strtol(e->value.c_str(), &end, 10);
  if (e->value.empty() || *end != '\0') fail(key, "'" + e->value + "' is not an integer");
  return static_cast<int>(v);
}

bool Config::boolean(const std::string& key, bool fallback) const {
  const Entry* e = find(key);
  if (!e) return fallback;
  std::string v = e->value;
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  fail(key, "'" + e->value + "' is not a boolean");
}

std::vector<std::string> Config::list(const std::string& key) const {
  std::vector<std::string> out;
  const Entry* e = find(key);
  if (!e) return out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) fail(key, "empty list element");
    out.push_back(item);
  }
  return out;
}

std::vector<double> Config::numbers(const std::string& key, std::vector<double> fallback) const {
  if (!has(key)) return fallback;
  std::vector<double> out;
  for (const auto& item : list(key)) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (*end != '\0') fail(key, "'" + item + "' is not a number");
    out.push_back(v);
  }
  return out;
}

std::optional<std::string> Config::path(const std::string& key) const {
  const Entry* e = find(key);
  if (!e) return std::nullopt;
  std::filesystem::path p(e->value);
  if (p.is_relative()) p = std::filesystem::path(base_dir_) / p;
  return p.lexically_normal().string();
}

std::vector<std::string> Config::keys_with_prefix(const std::string& prefix) const {
  std::vector<std::string> out;
  for (const auto& [key, entry] : values_) {
    if (key.rfind(prefix, 0) == 0) out.push_back(key);
  }
  return out;
}

std::string Config::canonical() const {
  std::ostringstream out;
  for (const auto& [key, entry] : values_) {
    const bool is_path = key == "fiber.attenuation_table" || key == "fiber.raman_table" ||
                         key.rfind("pumps.draw_curve.", 0) == 0 ||
                         key.find(".efficiency_curve") != std::string::npos;
    out << key << "=" << (is_path ? *path(key) : entry.value) << "\n";
  }
  return out.str();
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace sclink

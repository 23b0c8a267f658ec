#include "run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wpcn::cli
{

namespace
{

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v)
{
  try
  {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size() && std::isfinite(x))
      return x;
  }
  catch (const std::exception&)
  {
  }
  throw ConfigError(key + ": expected a number, got '" + v + "'");
}

long to_long(const std::string& key, const std::string& v)
{
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e15)
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  return static_cast<long>(x);
}

std::vector<double> to_list(const std::string& key, const std::string& v)
{
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ','))
    out.push_back(to_double(key, trim(item)));
  if (out.empty())
    throw ConfigError(key + ": empty list");
  for (std::size_t i = 1; i < out.size(); ++i)
    if (!(out[i] > out[i - 1]))
      throw ConfigError(key + ": values must be strictly increasing");
  return out;
}

}  // namespace

const KeyValues& default_key_values()
{
  static const KeyValues kv{
      {"altitude_m", "5"},
      {"device_distance_m", "15"},
      {"uav_power_dbm", "40"},
      {"eh_efficiency", "0.6"},
      {"ref_gain_db", "-30"},
      {"noise_dbm", "-100"},
      {"max_speed_mps", "5"},
      {"min_separation_m", "1"},
      {"mission_time_s", "4"},
      {"slot_s", "0.1"},
      {"num_slots", ""},
      {"uav1_initial_x_m", "-2"},
      {"uav1_initial_y_m", "-2"},
      {"uav1_final_x_m", "-2"},
      {"uav1_final_y_m", "2"},
      {"uav2_initial_x_m", "2"},
      {"uav2_initial_y_m", "-2"},
      {"uav2_final_x_m", "2"},
      {"uav2_final_y_m", "2"},
      {"sweep_values", ""},
      {"outer_max_iterations", "50"},
      {"outer_tolerance", "1e-4"},
      {"mc_geometries", "50"},
      {"mc_samples", "100000"},
  };
  return kv;
}

KeyValues parse_key_values(const std::string& text, const std::string& origin)
{
  KeyValues kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty())
      continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!default_key_values().contains(key))
      throw ConfigError(key + ": unknown key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::string& path)
{
  std::ifstream f(path);
  if (!f)
    throw ConfigError("config: cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_key_values(ss.str(), path);
}

void apply_overrides(KeyValues& kv, const std::vector<std::string>& sets)
{
  for (const std::string& s : sets)
  {
    const KeyValues one = parse_key_values(s, "--set");
    if (one.empty())
      throw ConfigError("--set: expected key=value, got '" + s + "'");
    for (const auto& [k, v] : one)
      kv[k] = v;
  }
}

KeyValues resolved_key_values(const KeyValues& kv)
{
  KeyValues out = default_key_values();
  for (const auto& [k, v] : kv)
  {
    if (!out.contains(k))
      throw ConfigError(k + ": unknown key");
    out[k] = v;
  }
  return out;
}

RunSettings build_settings(const KeyValues& given)
{
  const KeyValues kv = resolved_key_values(given);
  const auto num = [&](const char* key) { return to_double(key, kv.at(key)); };

  RunSettings rs;
  ScenarioConfig& c = rs.scenario;
  c.altitude_H = num("altitude_m");
  c.set_device_distance(num("device_distance_m"));
  c.uav_tx_power_P = dbm_to_watt(num("uav_power_dbm"));
  c.eh_efficiency_eta = num("eh_efficiency");
  c.ref_gain_beta0 = db_to_linear(num("ref_gain_db"));
  c.noise_sigma2 = dbm_to_watt(num("noise_dbm"));
  c.max_speed = num("max_speed_mps");
  c.min_separation = num("min_separation_m");
  c.mission_T = num("mission_time_s");
  c.uav_initial = {Point2{num("uav1_initial_x_m"), num("uav1_initial_y_m")},
                   Point2{num("uav2_initial_x_m"), num("uav2_initial_y_m")}};
  c.uav_final = {Point2{num("uav1_final_x_m"), num("uav1_final_y_m")},
                 Point2{num("uav2_final_x_m"), num("uav2_final_y_m")}};

  rs.slot_s = num("slot_s");
  if (!(rs.slot_s > 0.0))
    throw ConfigError("slot_s: must be positive");
  if (!kv.at("num_slots").empty())
  {
    const long n = to_long("num_slots", kv.at("num_slots"));
    if (n < 1 || n > 100000)
      throw ConfigError("num_slots: must lie in [1, 100000]");
    rs.slots_fixed = true;
    c.num_slots_N = static_cast<int>(n);
  }
  if (!kv.at("sweep_values").empty())
  {
    rs.sweep_values = to_list("sweep_values", kv.at("sweep_values"));
    rs.sweep_given = true;
  }
  rs.outer_max = static_cast<int>(to_long("outer_max_iterations", kv.at("outer_max_iterations")));
  if (rs.outer_max < 1)
    throw ConfigError("outer_max_iterations: must be at least 1");
  rs.outer_tol = num("outer_tolerance");
  if (!(rs.outer_tol > 0.0))
    throw ConfigError("outer_tolerance: must be positive");
  rs.mc_geometries = static_cast<int>(to_long("mc_geometries", kv.at("mc_geometries")));
  rs.mc_samples = to_long("mc_samples", kv.at("mc_samples"));
  if (rs.mc_geometries < 1)
    throw ConfigError("mc_geometries: must be at least 1");
  if (rs.mc_samples < 2)
    throw ConfigError("mc_samples: must be at least 2");

  c = rs.scenario_at(c.device_distance_D, c.mission_T);
  c.validate();
  return rs;
}

ScenarioConfig RunSettings::scenario_at(double D, double T) const
{
  ScenarioConfig c = scenario;
  c.set_device_distance(D);
  c.mission_T = T;
  if (!slots_fixed)
    c.num_slots_N = std::max(1, static_cast<int>(std::lround(T / slot_s)));
  return c;
}

}  // namespace wpcn::cli

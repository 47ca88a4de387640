#include "fcw/run_config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "fcw/format.hpp"

namespace fcw {
namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) {
      throw std::invalid_argument(value);
    }
    return v;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "': not a number: " + value);
  }
}

std::uint64_t parse_seed(const std::string& value) {
  std::uint64_t v = 0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (res.ec != std::errc() || res.ptr != value.data() + value.size()) {
    throw config_error("config key 'seed': not a non-negative integer: " + value);
  }
  return v;
}

using ParamField = double FcwParams::*;

const std::map<std::string, ParamField>& param_fields() {
  static const std::map<std::string, ParamField> fields = {
      {"t_dr", &FcwParams::t_dr},
      {"a_ego_max", &FcwParams::a_ego_max},
      {"a_lead_max", &FcwParams::a_lead_max},
      {"alpha", &FcwParams::alpha},
      {"attend_buffer_max", &FcwParams::attend_buffer_max},
      {"attend_decrement_rate", &FcwParams::attend_decrement_rate},
      {"attend_increment_rate", &FcwParams::attend_increment_rate},
      {"min_gap_warn", &FcwParams::min_gap_warn},
      {"horizon", &FcwParams::horizon},
      {"history", &FcwParams::history},
  };
  return fields;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kSda:
      return "sda";
    case Method::kAttentionAware:
      return "attention_aware";
    case Method::kAttendGaze:
      return "attend_gaze";
    case Method::kAttendGazeScene:
      return "attend_gaze_scene";
    case Method::kForecastFullAttn:
      return "forecast_full_attn";
    case Method::kForecastDriverAttn:
      return "forecast_driver_attn";
  }
  throw std::invalid_argument("unknown method");
}

Method method_from_string(const std::string& s) {
  for (const Method m : kAllMethods) {
    if (to_string(m) == s) {
      return m;
    }
  }
  throw config_error("unknown method: " + s);
}

std::string to_string(ForecasterKind f) {
  switch (f) {
    case ForecasterKind::kConstantVelocity:
      return "constant_velocity";
    case ForecasterKind::kConstantAcceleration:
      return "constant_acceleration";
    case ForecasterKind::kWorstCaseBrake:
      return "worst_case_brake";
    case ForecasterKind::kExternal:
      return "external";
  }
  throw std::invalid_argument("unknown forecaster");
}

ForecasterKind forecaster_from_string(const std::string& s) {
  for (const ForecasterKind f :
       {ForecasterKind::kConstantVelocity, ForecasterKind::kConstantAcceleration,
        ForecasterKind::kWorstCaseBrake, ForecasterKind::kExternal}) {
    if (to_string(f) == s) {
      return f;
    }
  }
  throw config_error("unknown forecaster: " + s);
}

RunConfig parse_run_config(const std::string& text) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": expected 'key = value'";
      throw config_error(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      std::ostringstream msg;
      msg << "config line " << line_no << ": empty key or value";
      throw config_error(msg.str());
    }

    if (key == "method") {
      cfg.method = method_from_string(value);
    } else if (key == "forecaster") {
      cfg.forecaster = forecaster_from_string(value);
    } else if (key == "episode_dir") {
      cfg.episode_dir = value;
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "external_forecasts") {
      cfg.external_forecasts = value;
    } else if (key == "seed") {
      cfg.seed = parse_seed(value);
    } else if (is_fcw_param(key)) {
      set_param(cfg.params, key, parse_double(value, key));
    } else {
      throw config_error("unknown config key: " + key);
    }
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw config_error("cannot open config file: " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

std::string run_config_to_text(const RunConfig& cfg) {
  std::ostringstream out;
  out << "method = " << to_string(cfg.method) << '\n';
  out << "forecaster = " << to_string(cfg.forecaster) << '\n';
  out << "episode_dir = " << cfg.episode_dir << '\n';
  out << "output = " << cfg.output << '\n';
  if (cfg.external_forecasts.has_value()) {
    out << "external_forecasts = " << *cfg.external_forecasts << '\n';
  }
  out << "seed = " << cfg.seed << '\n';
  for (const auto& name : fcw_param_names()) {
    out << name << " = " << format_double(get_param(cfg.params, name)) << '\n';
  }
  return out.str();
}

void validate_config(const RunConfig& cfg) {
  const bool is_forecast_method = cfg.method == Method::kForecastFullAttn ||
                                  cfg.method == Method::kForecastDriverAttn;
  if (is_forecast_method && cfg.forecaster == ForecasterKind::kExternal &&
      !cfg.external_forecasts.has_value()) {
    throw config_error(
        "forecaster 'external' requires an external_forecasts path");
  }
  const auto violations = validate_params(cfg.params);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid parameters:";
    for (const auto& v : violations) {
      msg << " [" << v << "]";
    }
    throw config_error(msg.str());
  }
}

const std::vector<std::string>& fcw_param_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, field] : param_fields()) {
      out.push_back(name);
    }
    return out;
  }();
  return names;
}

bool is_fcw_param(const std::string& name) {
  return param_fields().count(name) > 0;
}

double get_param(const FcwParams& p, const std::string& name) {
  const auto it = param_fields().find(name);
  if (it == param_fields().end()) {
    throw config_error("unknown parameter: " + name);
  }
  return p.*(it->second);
}

void set_param(FcwParams& p, const std::string& name, double value) {
  const auto it = param_fields().find(name);
  if (it == param_fields().end()) {
    throw config_error("unknown parameter: " + name);
  }
  p.*(it->second) = value;
}

}  // namespace fcw

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fcw/errors.hpp"
#include "fcw/warning.hpp"

namespace fcw {

// One name per evaluated method row.
enum class Method {
  kSda,
  kAttentionAware,
  kAttendGaze,
  kAttendGazeScene,
  kForecastFullAttn,
  kForecastDriverAttn,
};

inline constexpr Method kAllMethods[] = {
    Method::kSda,
    Method::kAttentionAware,
    Method::kAttendGaze,
    Method::kAttendGazeScene,
    Method::kForecastFullAttn,
    Method::kForecastDriverAttn,
};

enum class ForecasterKind {
  kConstantVelocity,
  kConstantAcceleration,
  kWorstCaseBrake,
  kExternal,
};

std::string to_string(Method m);
Method method_from_string(const std::string& s);
std::string to_string(ForecasterKind f);
ForecasterKind forecaster_from_string(const std::string& s);

struct RunConfig {
  Method method{Method::kSda};
  ForecasterKind forecaster{ForecasterKind::kConstantVelocity};
  FcwParams params;
  std::string episode_dir;
  std::string output;
  std::optional<std::string> external_forecasts;
  std::uint64_t seed{0};

  bool operator==(const RunConfig&) const = default;
};

// Flat "key = value" text ('#' starts a comment). Keys mirror the RunConfig
// and FcwParams field names exactly; unknown keys are errors.
RunConfig parse_run_config(const std::string& text);
RunConfig load_run_config(const std::filesystem::path& file);
std::string run_config_to_text(const RunConfig& cfg);

// Throws config_error for inconsistent configs (e.g. the external forecaster
// without an external_forecasts path, or non-positive parameters).
void validate_config(const RunConfig& cfg);

// FcwParams fields by name, for sweeps and config parsing.
const std::vector<std::string>& fcw_param_names();
bool is_fcw_param(const std::string& name);
double get_param(const FcwParams& p, const std::string& name);
void set_param(FcwParams& p, const std::string& name, double value);

}  // namespace fcw

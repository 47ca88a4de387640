#include "fcw/episode_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace fcw {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

constexpr double kFrameTimeTol = 1e-6;  // s

[[noreturn]] void fail(const std::string& origin, const std::string& what) {
  throw data_error(origin + ": " + what);
}

double require_number(const json& j, const char* key, const std::string& origin) {
  if (!j.contains(key) || !j[key].is_number()) {
    fail(origin, std::string("missing or non-numeric '") + key + "'");
  }
  return j[key].get<double>();
}

// Returns false when the value is absent or null (omitted speed).
bool read_state(const json& j, const std::string& origin, VehicleState* out) {
  out->x_m = require_number(j, "x_m", origin);
  out->y_m = require_number(j, "y_m", origin);
  out->heading_rad = wrap_angle(require_number(j, "heading_rad", origin));
  if (!j.contains("speed_mps") || j["speed_mps"].is_null()) {
    out->speed_mps = 0.0;
    return false;
  }
  if (!j["speed_mps"].is_number()) {
    fail(origin, "non-numeric 'speed_mps'");
  }
  out->speed_mps = j["speed_mps"].get<double>();
  return true;
}

ordered_json state_to_json(const VehicleState& s) {
  ordered_json j;
  j["x_m"] = s.x_m;
  j["y_m"] = s.y_m;
  j["heading_rad"] = s.heading_rad;
  j["speed_mps"] = s.speed_mps;
  return j;
}

}  // namespace

Episode parse_episode_json(const std::string& text, const std::string& origin) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) {
    fail(origin, "not valid JSON");
  }
  if (!root.is_object()) {
    fail(origin, "top level is not an object");
  }
  if (!root.contains("schema_version") ||
      !root["schema_version"].is_number_integer() ||
      root["schema_version"].get<int>() != kEpisodeSchemaVersion) {
    fail(origin, "unsupported or missing schema_version (expected 1)");
  }
  if (!root.contains("id") || !root["id"].is_string()) {
    fail(origin, "missing or non-string 'id'");
  }

  Episode e;
  e.id = root["id"].get<std::string>();
  e.dt_s = require_number(root, "dt_s", origin);
  e.deployed_fcw_time_s = require_number(root, "deployed_fcw_time_s", origin);
  e.ego_length_m = require_number(root, "ego_length_m", origin);
  e.lead_length_m = require_number(root, "lead_length_m", origin);
  if (!(e.dt_s > 0.0)) {
    fail(origin, "dt_s must be positive");
  }

  if (!root.contains("frames") || !root["frames"].is_array() ||
      root["frames"].empty()) {
    fail(origin, "missing or empty 'frames'");
  }
  const auto& frames = root["frames"];

  bool any_ego_speed = false;
  bool all_ego_speed = true;
  bool any_lead_speed = false;
  bool all_lead_speed = true;

  double prev_t = 0.0;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    std::ostringstream where;
    where << origin << " frames[" << i << "]";
    if (!f.is_object() || !f.contains("ego") || !f.contains("lead")) {
      fail(where.str(), "frame must contain 'ego' and 'lead'");
    }
    const double t = require_number(f, "t_s", where.str());
    if (i == 0) {
      e.ego.start_time_s = t;
      e.lead.start_time_s = t;
      e.attention.start_time_s = t;
    } else {
      if (t <= prev_t) {
        fail(where.str(), "timestamps must be strictly increasing");
      }
      const double expected = e.ego.start_time_s + static_cast<double>(i) * e.dt_s;
      if (std::abs(t - expected) > kFrameTimeTol) {
        fail(where.str(), "timestamp off the uniform dt_s grid");
      }
    }
    prev_t = t;

    VehicleState ego_state;
    VehicleState lead_state;
    const bool ego_has = read_state(f["ego"], where.str() + ".ego", &ego_state);
    const bool lead_has = read_state(f["lead"], where.str() + ".lead", &lead_state);
    any_ego_speed |= ego_has;
    all_ego_speed &= ego_has;
    any_lead_speed |= lead_has;
    all_lead_speed &= lead_has;

    if (!f.contains("attended") || !f["attended"].is_boolean()) {
      fail(where.str(), "missing or non-boolean 'attended'");
    }
    e.ego.states.push_back(ego_state);
    e.lead.states.push_back(lead_state);
    e.attention.attended.push_back(f["attended"].get<bool>());
  }
  e.ego.dt_s = e.dt_s;
  e.lead.dt_s = e.dt_s;
  e.attention.dt_s = e.dt_s;

  if (any_ego_speed && !all_ego_speed) {
    fail(origin, "ego speed_mps present in some frames but not all");
  }
  if (any_lead_speed && !all_lead_speed) {
    fail(origin, "lead speed_mps present in some frames but not all");
  }
  if (!any_ego_speed) {
    e.ego = fill_speeds_from_positions(std::move(e.ego));
  }
  if (!any_lead_speed) {
    e.lead = fill_speeds_from_positions(std::move(e.lead));
  }

  if (!root.contains("annotation") || !root["annotation"].is_object()) {
    fail(origin, "missing 'annotation'");
  }
  const auto& anno = root["annotation"];
  if (!anno.contains("votes") || !anno["votes"].is_array() || anno["votes"].empty()) {
    fail(origin, "annotation.votes must be a non-empty array");
  }
  for (const auto& v : anno["votes"]) {
    if (!v.is_boolean()) {
      fail(origin, "annotation.votes entries must be booleans");
    }
    e.annotation.validity_votes.push_back(v.get<bool>());
  }
  if (anno.contains("preferred_times_s")) {
    const auto& times = anno["preferred_times_s"];
    if (!times.is_array() || times.size() != e.annotation.validity_votes.size()) {
      fail(origin, "annotation.preferred_times_s must match votes length");
    }
    for (const auto& t : times) {
      if (t.is_null()) {
        e.annotation.preferred_times_s.emplace_back(std::nullopt);
      } else if (t.is_number()) {
        e.annotation.preferred_times_s.emplace_back(t.get<double>());
      } else {
        fail(origin, "annotation.preferred_times_s entries must be numbers or null");
      }
    }
  } else {
    e.annotation.preferred_times_s.assign(e.annotation.validity_votes.size(),
                                          std::nullopt);
  }

  return e;
}

Episode read_episode(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw data_error("cannot open episode file: " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_episode_json(buf.str(), file.string());
}

std::string episode_to_json(const Episode& e) {
  ordered_json root;
  root["schema_version"] = kEpisodeSchemaVersion;
  root["id"] = e.id;
  root["dt_s"] = e.dt_s;
  root["deployed_fcw_time_s"] = e.deployed_fcw_time_s;
  root["ego_length_m"] = e.ego_length_m;
  root["lead_length_m"] = e.lead_length_m;

  ordered_json frames = ordered_json::array();
  for (std::size_t i = 0; i < e.size(); ++i) {
    ordered_json f;
    f["t_s"] = e.ego.time_at(i);
    f["ego"] = state_to_json(e.ego.states[i]);
    f["lead"] = state_to_json(e.lead.states[i]);
    f["attended"] = static_cast<bool>(e.attention.attended[i]);
    frames.push_back(std::move(f));
  }
  root["frames"] = std::move(frames);

  ordered_json anno;
  anno["votes"] = e.annotation.validity_votes;
  ordered_json times = ordered_json::array();
  for (const auto& t : e.annotation.preferred_times_s) {
    if (t.has_value()) {
      times.push_back(*t);
    } else {
      times.push_back(nullptr);
    }
  }
  anno["preferred_times_s"] = std::move(times);
  root["annotation"] = std::move(anno);

  return root.dump(2) + "\n";
}

void write_episode(const Episode& e, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) {
    throw data_error("cannot write episode file: " + file.string());
  }
  out << episode_to_json(e);
}

std::vector<Episode> read_episode_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  if (!std::filesystem::is_directory(dir, ec)) {
    throw data_error("episode directory not found: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::vector<Episode> episodes;
  episodes.reserve(files.size());
  for (const auto& f : files) {
    episodes.push_back(read_episode(f));
  }
  if (episodes.empty()) {
    throw data_error("no episode files (*.json) in " + dir.string());
  }
  std::sort(episodes.begin(), episodes.end(),
            [](const Episode& a, const Episode& b) { return a.id < b.id; });
  return episodes;
}

}  // namespace fcw

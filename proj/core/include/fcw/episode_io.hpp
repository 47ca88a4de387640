#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fcw/errors.hpp"
#include "fcw/kinematics.hpp"

namespace fcw {

inline constexpr int kEpisodeSchemaVersion = 1;

// One episode per JSON file. Top-level keys: schema_version, id, dt_s,
// deployed_fcw_time_s, ego_length_m, lead_length_m, frames, annotation.
// Frame timestamps must be strictly increasing and uniformly spaced at dt_s.
// speed_mps may be null/absent for a vehicle in every frame, in which case
// speeds are recomputed from positions by central finite differences.
Episode read_episode(const std::filesystem::path& file);
Episode parse_episode_json(const std::string& text, const std::string& origin);

std::string episode_to_json(const Episode& e);
void write_episode(const Episode& e, const std::filesystem::path& file);

// All *.json files directly under dir, sorted by episode id. Throws
// data_error when the directory is missing or contains no episodes.
std::vector<Episode> read_episode_dir(const std::filesystem::path& dir);

}  // namespace fcw

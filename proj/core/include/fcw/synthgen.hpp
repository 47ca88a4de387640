#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fcw/kinematics.hpp"

namespace fcw {

enum class ScenarioKind {
  kBrakeDuringInattention,
  kAccelerateDuringInattention,
  kNominalFollowing,
  kAttentiveBrake,
};

inline constexpr ScenarioKind kAllScenarioKinds[] = {
    ScenarioKind::kBrakeDuringInattention,
    ScenarioKind::kAccelerateDuringInattention,
    ScenarioKind::kNominalFollowing,
    ScenarioKind::kAttentiveBrake,
};

std::string to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct InattentionWindow {
  double start_s{0.0};
  double end_s{0.0};
};

// Straight-lane car-following scenario: the lead applies
// event_magnitude_mps2 from event_time_s until its terminal speed (zero when
// braking), the driver looks away inside the inattention window, and the ego
// brakes once the driver notices the gap dropping below the conventional
// warning envelope (or re-attends while inside it).
struct ScenarioSpec {
  ScenarioKind kind{ScenarioKind::kNominalFollowing};
  double ego_speed_mps{20.0};
  double lead_speed_mps{18.0};
  double initial_gap_m{55.0};
  double event_time_s{4.0};
  double event_magnitude_mps2{0.0};  // signed lead acceleration
  std::optional<InattentionWindow> inattention_window;
  double duration_s{15.0};
  double dt_s{kCanonicalDt};
  std::uint64_t seed{0};
};

// Deterministic under (spec, seed). Annotation votes are rule-derived:
// warning-needed iff the minimum gap over the episode falls below 5 m or
// contact occurs; the preferred time is the last step from which a
// reaction-then-full-brake maneuver still avoids contact.
Episode generate(const ScenarioSpec& spec);

// The regime parameters (event sign/strength, window, approach speeds) for
// one kind, layered over a base spec.
ScenarioSpec spec_for_kind(ScenarioKind kind, const ScenarioSpec& base);

struct LabeledEpisode {
  Episode episode;
  ScenarioKind kind{ScenarioKind::kNominalFollowing};
  std::uint64_t seed{0};
  bool warning_needed{false};
};

// n_per_kind episodes of each of the four kinds, with per-episode seeds
// drawn from `seed`. Episode ids are "<kind>_<index>".
std::vector<LabeledEpisode> generate_suite(std::size_t n_per_kind,
                                           const ScenarioSpec& base,
                                           std::uint64_t seed);

}  // namespace fcw

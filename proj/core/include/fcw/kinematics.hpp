#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace fcw {

inline constexpr double kCanonicalDt = 0.1;           // s
inline constexpr double kDefaultVehicleLength = 4.5;  // m

// 2D state in a fixed world frame. speed_mps is the scalar velocity along
// the heading; it is stored, not differentiated from positions.
struct VehicleState {
  double x_m{0.0};
  double y_m{0.0};
  double heading_rad{0.0};
  double speed_mps{0.0};
};

// Uniformly sampled state sequence: state i sits at start_time_s + i * dt_s.
struct Trajectory {
  double dt_s{kCanonicalDt};
  double start_time_s{0.0};
  std::vector<VehicleState> states;

  std::size_t size() const { return states.size(); }
  bool empty() const { return states.empty(); }
  double time_at(std::size_t i) const {
    return start_time_s + static_cast<double>(i) * dt_s;
  }
  double end_time() const;

  // Index of the sampling interval containing t. Snaps to the nearest grid
  // point when t lands within 1e-6 steps of it. Throws std::invalid_argument
  // when t is outside [start_time, end_time].
  std::size_t index_at_time(double t) const;

  // Sub-range [first, last] inclusive, keeping the grid time of `first`.
  Trajectory slice(std::size_t first, std::size_t last) const;
};

// Whether the driver is visually attending to the lead vehicle, per timestep.
struct AttentionTrace {
  double dt_s{kCanonicalDt};
  double start_time_s{0.0};
  std::vector<bool> attended;

  std::size_t size() const { return attended.size(); }
};

// Per-observer validity votes; a preferred warning time is present only for
// observers that voted valid.
struct Annotation {
  std::vector<bool> validity_votes;
  std::vector<std::optional<double>> preferred_times_s;
};

// One FCW event window (default span 15 s: 5 s before the deployed alert and
// 10 s after), with aligned ego/lead trajectories and an attention trace.
struct Episode {
  std::string id;
  double dt_s{kCanonicalDt};
  double deployed_fcw_time_s{5.0};
  Trajectory ego;
  Trajectory lead;
  AttentionTrace attention;
  Annotation annotation;
  double ego_length_m{kDefaultVehicleLength};
  double lead_length_m{kDefaultVehicleLength};

  std::size_t size() const { return ego.size(); }
  double start_time() const { return ego.start_time_s; }
  double end_time() const { return ego.end_time(); }
};

// Wraps an angle into [-pi, pi).
double wrap_angle(double a);

// Returns every invariant violation with a field path; empty iff valid.
std::vector<std::string> validate_episode(const Episode& e);

// Throws std::invalid_argument listing all violations when the episode is
// not well formed.
void require_valid(const Episode& e);

// Linear interpolation of positions, speeds, and (shortest-arc) headings
// onto a new uniform grid over the same span. Grid points coinciding with
// source samples copy the source state exactly.
Trajectory resample(const Trajectory& t, double dt_new);

// Resamples ego/lead (linear) and attention (nearest) onto the canonical
// 0.1 s grid. Episodes already on it are returned unchanged.
Episode canonicalize_episode(const Episode& e);

// Center-to-center projection of (lead - ego) onto the ego heading, minus
// the mean vehicle length. Negative values mean overlap (collision in
// simulation). Lateral offset is ignored.
double longitudinal_gap(const VehicleState& ego, const VehicleState& lead,
                        double ego_length_m, double lead_length_m);

// Replaces every speed with the central finite difference of positions
// (one-sided at the ends). Used when an input file carries no speeds;
// recorded speeds are otherwise authoritative.
Trajectory fill_speeds_from_positions(Trajectory t);

}  // namespace fcw

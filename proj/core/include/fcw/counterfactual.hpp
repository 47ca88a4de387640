#pragma once

#include <iosfwd>

#include "fcw/kinematics.hpp"

namespace fcw {

struct PerceivedState {
  double x_m{0.0};
  double y_m{0.0};
  double heading_rad{0.0};
  double speed_mps{0.0};
  bool observed{false};
};

// The lead trajectory as the driver is assumed to perceive it: the actual
// state at every attended timestep, and a constant-velocity extrapolation of
// the last attended state (speed and heading held) while not attending.
// Re-attending snaps back to the actual state with no blending.
struct PerceivedTrajectory {
  double dt_s{kCanonicalDt};
  double start_time_s{0.0};
  std::vector<PerceivedState> states;

  std::size_t size() const { return states.size(); }
  Trajectory to_trajectory() const;
};

// The initial timestep is always treated as observed, so the extrapolation
// anchor is defined even when the trace starts unattended.
PerceivedTrajectory perceived_lead_trajectory(const Trajectory& lead,
                                              const AttentionTrace& attention);

// Speed the driver believes the lead has at time t: the actual speed when
// attended, otherwise the speed at the last attended timestep.
double counterfactual_speed_at(const Trajectory& lead,
                               const AttentionTrace& attention, double t);

// Columns: t_s,x_m,y_m,speed_mps,observed
void write_perceived_csv(const PerceivedTrajectory& pt, std::ostream& out);

}  // namespace fcw

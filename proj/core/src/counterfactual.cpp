#include "fcw/counterfactual.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fcw/format.hpp"

namespace fcw {
namespace {

constexpr double kTimeTol = 1e-9;  // s

void check_aligned(const Trajectory& lead, const AttentionTrace& attention) {
  if (lead.size() != attention.size() ||
      std::abs(lead.dt_s - attention.dt_s) > kTimeTol ||
      std::abs(lead.start_time_s - attention.start_time_s) > kTimeTol) {
    throw std::invalid_argument(
        "lead trajectory and attention trace are not aligned");
  }
  if (lead.empty()) {
    throw std::invalid_argument("empty lead trajectory");
  }
}

}  // namespace

Trajectory PerceivedTrajectory::to_trajectory() const {
  Trajectory out;
  out.dt_s = dt_s;
  out.start_time_s = start_time_s;
  out.states.reserve(states.size());
  for (const auto& s : states) {
    out.states.push_back({s.x_m, s.y_m, s.heading_rad, s.speed_mps});
  }
  return out;
}

PerceivedTrajectory perceived_lead_trajectory(const Trajectory& lead,
                                              const AttentionTrace& attention) {
  check_aligned(lead, attention);

  PerceivedTrajectory out;
  out.dt_s = lead.dt_s;
  out.start_time_s = lead.start_time_s;
  out.states.reserve(lead.size());

  std::size_t anchor = 0;  // step 0 counts as observed
  for (std::size_t i = 0; i < lead.size(); ++i) {
    const bool attended = attention.attended[i];
    if (attended || i == 0) {
      const VehicleState& s = lead.states[i];
      out.states.push_back({s.x_m, s.y_m, s.heading_rad, s.speed_mps, attended});
      anchor = i;
    } else {
      const VehicleState& a = lead.states[anchor];
      const double elapsed = static_cast<double>(i - anchor) * lead.dt_s;
      PerceivedState p;
      p.x_m = a.x_m + a.speed_mps * elapsed * std::cos(a.heading_rad);
      p.y_m = a.y_m + a.speed_mps * elapsed * std::sin(a.heading_rad);
      p.heading_rad = a.heading_rad;
      p.speed_mps = a.speed_mps;
      p.observed = false;
      out.states.push_back(p);
    }
  }
  return out;
}

double counterfactual_speed_at(const Trajectory& lead,
                               const AttentionTrace& attention, double t) {
  check_aligned(lead, attention);
  std::size_t i = lead.index_at_time(t);
  while (i > 0 && !attention.attended[i]) {
    --i;
  }
  return lead.states[i].speed_mps;
}

void write_perceived_csv(const PerceivedTrajectory& pt, std::ostream& out) {
  out << "t_s,x_m,y_m,speed_mps,observed\n";
  for (std::size_t i = 0; i < pt.size(); ++i) {
    const auto& s = pt.states[i];
    out << format_double(pt.start_time_s + static_cast<double>(i) * pt.dt_s)
        << ',' << format_double(s.x_m) << ',' << format_double(s.y_m) << ','
        << format_double(s.speed_mps) << ',' << (s.observed ? '1' : '0')
        << '\n';
  }
}

}  // namespace fcw

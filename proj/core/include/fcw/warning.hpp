#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fcw/kinematics.hpp"

namespace fcw {

// Physical and algorithmic constants shared by the warning methods.
// Config-file keys mirror these field names exactly.
struct FcwParams {
  double t_dr{1.5};                   // driver reaction time, s
  double a_ego_max{6.0};              // max ego deceleration magnitude, m/s^2
  double a_lead_max{6.0};             // max lead deceleration magnitude, m/s^2
  double alpha{1.8};                  // counterfactual speed-gap gain, s
  double attend_buffer_max{2.0};      // s
  double attend_decrement_rate{1.0};  // buffer-seconds per second off target
  double attend_increment_rate{1.0};  // buffer-seconds per second on target
  double min_gap_warn{2.0};           // m, forecast decision threshold
  double horizon{3.0};                // s, forecast future length
  double history{1.0};                // s, forecast input length

  bool operator==(const FcwParams&) const = default;
};

// Empty iff all fields are strictly positive (alpha may be zero).
std::vector<std::string> validate_params(const FcwParams& p);

// Per-timestep warn decisions of one method on one episode. No hysteresis;
// first_warning_time_s is the time of the earliest true entry, absent when
// the trace never warns.
struct WarningTrace {
  double dt_s{kCanonicalDt};
  double start_time_s{0.0};
  std::vector<bool> warn;
  std::optional<double> first_warning_time_s;
};

WarningTrace make_warning_trace(double dt_s, double start_time_s,
                                std::vector<bool> warn);
std::optional<double> first_warning_time(const WarningTrace& w);

// Stop-distance warning envelope, unclamped:
//   v_ego * t_dr + v_ego^2 / (2 a_ego_max) - v_lead^2 / (2 a_lead_max)
double sda_warning_core(double v_ego, double v_lead, const FcwParams& p);

// The envelope above clamped at zero (a warning distance is a length).
double sda_warning_distance(double v_ego, double v_lead, const FcwParams& p);

// Adds alpha * (v_hat_lead - v_lead) to the unclamped envelope, then clamps
// at zero. Larger than the plain envelope when the driver believes the lead
// is faster than it is, smaller in the opposite case.
double attention_aware_warning_distance(double v_ego, double v_lead,
                                        double v_hat_lead, const FcwParams& p);

// warn[i] = gap(i) < warning distance from actual speeds.
WarningTrace evaluate_sda(const Episode& e, const FcwParams& p);

// warn[i] uses the counterfactual lead speed for the alpha adjustment.
WarningTrace evaluate_attention_aware(const Episode& e, const FcwParams& p);

// Time buffer that drains at attend_decrement_rate while the driver looks
// away and refills at attend_increment_rate otherwise, clamped to
// [0, attend_buffer_max]. Entry i integrates attention over [t_{i-1}, t_i).
std::vector<double> attend_buffer_trace(const AttentionTrace& attention,
                                        const FcwParams& p);

// warn[i] = buffer depleted at i.
WarningTrace evaluate_attend_gaze_only(const Episode& e, const FcwParams& p);

// warn[i] = buffer depleted AND gap(i) below the stop-distance envelope;
// pointwise conjunction of the gaze-only and stop-distance conditions.
WarningTrace evaluate_attend_gaze_scene(const Episode& e, const FcwParams& p);

// Columns: t_s,warn
void write_warning_csv(const WarningTrace& w, std::ostream& out);

}  // namespace fcw

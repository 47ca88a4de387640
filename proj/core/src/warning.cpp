#include "fcw/warning.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "fcw/counterfactual.hpp"
#include "fcw/format.hpp"

namespace fcw {
namespace {

// Treats accumulated floating-point dust on a drained buffer as zero.
constexpr double kBufferDepletedTol = 1e-9;

void check_speeds(double v_ego, double v_lead) {
  if (v_ego < 0.0 || v_lead < 0.0) {
    throw std::invalid_argument("speeds must be non-negative");
  }
}

}  // namespace

std::vector<std::string> validate_params(const FcwParams& p) {
  std::vector<std::string> out;
  const auto positive = [&out](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      out.push_back(std::string(name) + ": must be positive");
    }
  };
  positive(p.t_dr, "t_dr");
  positive(p.a_ego_max, "a_ego_max");
  positive(p.a_lead_max, "a_lead_max");
  positive(p.attend_buffer_max, "attend_buffer_max");
  positive(p.attend_decrement_rate, "attend_decrement_rate");
  positive(p.attend_increment_rate, "attend_increment_rate");
  positive(p.min_gap_warn, "min_gap_warn");
  positive(p.horizon, "horizon");
  positive(p.history, "history");
  if (p.alpha < 0.0 || !std::isfinite(p.alpha)) {
    out.push_back("alpha: must be non-negative");
  }
  return out;
}

WarningTrace make_warning_trace(double dt_s, double start_time_s,
                                std::vector<bool> warn) {
  WarningTrace out;
  out.dt_s = dt_s;
  out.start_time_s = start_time_s;
  out.warn = std::move(warn);
  out.first_warning_time_s = first_warning_time(out);
  return out;
}

std::optional<double> first_warning_time(const WarningTrace& w) {
  for (std::size_t i = 0; i < w.warn.size(); ++i) {
    if (w.warn[i]) {
      return w.start_time_s + static_cast<double>(i) * w.dt_s;
    }
  }
  return std::nullopt;
}

double sda_warning_core(double v_ego, double v_lead, const FcwParams& p) {
  check_speeds(v_ego, v_lead);
  return v_ego * p.t_dr + v_ego * v_ego / (2.0 * p.a_ego_max) -
         v_lead * v_lead / (2.0 * p.a_lead_max);
}

double sda_warning_distance(double v_ego, double v_lead, const FcwParams& p) {
  return std::max(0.0, sda_warning_core(v_ego, v_lead, p));
}

double attention_aware_warning_distance(double v_ego, double v_lead,
                                        double v_hat_lead, const FcwParams& p) {
  check_speeds(v_ego, v_lead);
  if (v_hat_lead < 0.0) {
    throw std::invalid_argument("speeds must be non-negative");
  }
  return std::max(0.0, sda_warning_core(v_ego, v_lead, p) +
                           p.alpha * (v_hat_lead - v_lead));
}

WarningTrace evaluate_sda(const Episode& e, const FcwParams& p) {
  require_valid(e);
  std::vector<bool> warn(e.size(), false);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double gap = longitudinal_gap(e.ego.states[i], e.lead.states[i],
                                        e.ego_length_m, e.lead_length_m);
    warn[i] = gap < sda_warning_distance(e.ego.states[i].speed_mps,
                                         e.lead.states[i].speed_mps, p);
  }
  return make_warning_trace(e.dt_s, e.start_time(), std::move(warn));
}

WarningTrace evaluate_attention_aware(const Episode& e, const FcwParams& p) {
  require_valid(e);
  const PerceivedTrajectory perceived =
      perceived_lead_trajectory(e.lead, e.attention);
  std::vector<bool> warn(e.size(), false);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double gap = longitudinal_gap(e.ego.states[i], e.lead.states[i],
                                        e.ego_length_m, e.lead_length_m);
    warn[i] = gap < attention_aware_warning_distance(
                        e.ego.states[i].speed_mps, e.lead.states[i].speed_mps,
                        perceived.states[i].speed_mps, p);
  }
  return make_warning_trace(e.dt_s, e.start_time(), std::move(warn));
}

std::vector<double> attend_buffer_trace(const AttentionTrace& attention,
                                        const FcwParams& p) {
  std::vector<double> buffer(attention.size(), p.attend_buffer_max);
  for (std::size_t i = 1; i < attention.size(); ++i) {
    const double delta = attention.attended[i - 1]
                             ? p.attend_increment_rate * attention.dt_s
                             : -p.attend_decrement_rate * attention.dt_s;
    buffer[i] = std::clamp(buffer[i - 1] + delta, 0.0, p.attend_buffer_max);
  }
  return buffer;
}

WarningTrace evaluate_attend_gaze_only(const Episode& e, const FcwParams& p) {
  require_valid(e);
  const std::vector<double> buffer = attend_buffer_trace(e.attention, p);
  std::vector<bool> warn(e.size(), false);
  for (std::size_t i = 0; i < e.size(); ++i) {
    warn[i] = buffer[i] <= kBufferDepletedTol;
  }
  return make_warning_trace(e.dt_s, e.start_time(), std::move(warn));
}

WarningTrace evaluate_attend_gaze_scene(const Episode& e, const FcwParams& p) {
  require_valid(e);
  const std::vector<double> buffer = attend_buffer_trace(e.attention, p);
  std::vector<bool> warn(e.size(), false);
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double gap = longitudinal_gap(e.ego.states[i], e.lead.states[i],
                                        e.ego_length_m, e.lead_length_m);
    const bool scene = gap < sda_warning_distance(e.ego.states[i].speed_mps,
                                                  e.lead.states[i].speed_mps, p);
    warn[i] = buffer[i] <= kBufferDepletedTol && scene;
  }
  return make_warning_trace(e.dt_s, e.start_time(), std::move(warn));
}

void write_warning_csv(const WarningTrace& w, std::ostream& out) {
  out << "t_s,warn\n";
  for (std::size_t i = 0; i < w.warn.size(); ++i) {
    out << format_double(w.start_time_s + static_cast<double>(i) * w.dt_s)
        << ',' << (w.warn[i] ? '1' : '0') << '\n';
  }
}

}  // namespace fcw

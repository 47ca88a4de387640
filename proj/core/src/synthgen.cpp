#include "fcw/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "fcw/warning.hpp"

namespace fcw {
namespace {

constexpr double kLabelGapThreshold = 5.0;  // m, below this a warning was needed
constexpr double kLeadTerminalSpeed = 40.0;  // m/s, cap for speed-up events
constexpr double kSpeedJitterFraction = 0.02;
constexpr double kTimeTol = 1e-9;  // s

// Notice rule and maneuver model use the stock parameter set.
const FcwParams kDriverModel{};

// Regime constants for the accelerate-during-inattention kind: a fast
// approach on a slow lead that speeds up while the driver looks away.
constexpr double kAccelKindLeadSpeed = 8.0;   // m/s
constexpr double kAccelKindGap = 82.0;        // m
constexpr double kNominalKindGap = 40.0;      // m
constexpr double kBrakeEventAccel = -5.0;     // m/s^2
constexpr double kSpeedUpEventAccel = 2.0;    // m/s^2

struct LeadProfile {
  double v0{0.0};
  double event_time{0.0};
  double accel{0.0};
  double v_term{0.0};

  double speed_at(double t) const {
    if (accel == 0.0 || t <= event_time) {
      return v0;
    }
    const double v = v0 + accel * (t - event_time);
    return accel < 0.0 ? std::max(v, 0.0) : std::min(v, v_term);
  }

  double distance_at(double t) const {
    if (accel == 0.0 || t <= event_time) {
      return v0 * t;
    }
    const double tau = t - event_time;
    const double tau_term = (v_term - v0) / accel;
    double d = v0 * event_time;
    if (tau <= tau_term) {
      return d + v0 * tau + 0.5 * accel * tau * tau;
    }
    d += v0 * tau_term + 0.5 * accel * tau_term * tau_term;
    return d + v_term * (tau - tau_term);
  }
};

bool in_window(double t, const std::optional<InattentionWindow>& w) {
  return w.has_value() && t >= w->start_s - kTimeTol && t < w->end_s - kTimeTol;
}

void check_spec(const ScenarioSpec& s) {
  std::ostringstream msg;
  if (!(s.dt_s > 0.0)) {
    msg << "dt_s must be positive";
  } else if (!(s.duration_s > 0.0)) {
    msg << "duration_s must be positive";
  } else if (!(s.initial_gap_m > 0.0)) {
    msg << "initial_gap_m must be positive (infeasible scene)";
  } else if (s.ego_speed_mps < 0.0 || s.lead_speed_mps < 0.0) {
    msg << "speeds must be non-negative";
  } else if (s.duration_s < s.event_time_s) {
    msg << "duration_s must cover event_time_s";
  } else if (s.inattention_window.has_value() &&
             (s.inattention_window->start_s < 0.0 ||
              s.inattention_window->end_s > s.duration_s + kTimeTol ||
              s.inattention_window->end_s < s.inattention_window->start_s)) {
    msg << "inattention_window must lie within the episode duration";
  } else {
    return;
  }
  throw std::invalid_argument("scenario spec: " + msg.str());
}

// Advances a braking vehicle by one step, stopping exactly at v = 0.
void step_braking(double dt, double decel, double* x, double* v) {
  const double t_stop = *v / decel;
  if (t_stop >= dt) {
    *x += *v * dt - 0.5 * decel * dt * dt;
    *v -= decel * dt;
  } else {
    *x += *v * *v / (2.0 * decel);
    *v = 0.0;
  }
}

// True when an ego maneuver started at step i (constant speed for the
// reaction time, then a full brake) keeps positive clearance against the
// recorded lead motion, extended at constant speed past the episode end.
bool maneuver_avoids_contact(const Episode& e, std::size_t i) {
  const double dt = e.dt_s;
  const double half_lengths = 0.5 * (e.ego_length_m + e.lead_length_m);
  const auto react_steps =
      static_cast<std::size_t>(std::llround(kDriverModel.t_dr / dt));
  const std::size_t n = e.size();

  double x = e.ego.states[i].x_m;
  double v = e.ego.states[i].speed_mps;
  for (std::size_t k = 0;; ++k) {
    const std::size_t j = i + k;
    double lead_x;
    if (j < n) {
      lead_x = e.lead.states[j].x_m;
    } else {
      const auto& last = e.lead.states[n - 1];
      lead_x = last.x_m + last.speed_mps * static_cast<double>(j - (n - 1)) * dt;
    }
    if (lead_x - x - half_lengths <= 0.0) {
      return false;
    }
    if (k >= react_steps && v <= 0.0) {
      return true;
    }
    if (k < react_steps) {
      x += v * dt;
    } else {
      step_braking(dt, kDriverModel.a_ego_max, &x, &v);
    }
  }
}

}  // namespace

std::string to_string(ScenarioKind k) {
  switch (k) {
    case ScenarioKind::kBrakeDuringInattention:
      return "brake_during_inattention";
    case ScenarioKind::kAccelerateDuringInattention:
      return "accelerate_during_inattention";
    case ScenarioKind::kNominalFollowing:
      return "nominal_following";
    case ScenarioKind::kAttentiveBrake:
      return "attentive_brake";
  }
  throw std::invalid_argument("unknown scenario kind");
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  for (const ScenarioKind k : kAllScenarioKinds) {
    if (to_string(k) == s) {
      return k;
    }
  }
  throw std::invalid_argument("unknown scenario kind: " + s);
}

Episode generate(const ScenarioSpec& spec) {
  check_spec(spec);

  // One common scale keeps closing-rate signs, and with them the regime
  // membership, stable under jitter.
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> jitter(-kSpeedJitterFraction,
                                                kSpeedJitterFraction);
  const double scale = 1.0 + jitter(rng);
  const double ego_v0 = spec.ego_speed_mps * scale;

  LeadProfile lead;
  lead.v0 = spec.lead_speed_mps * scale;
  lead.event_time = spec.event_time_s;
  lead.accel = spec.event_magnitude_mps2;
  lead.v_term = lead.accel < 0.0 ? 0.0 : std::max(lead.v0, kLeadTerminalSpeed);

  const auto n = static_cast<std::size_t>(
                     std::llround(spec.duration_s / spec.dt_s)) + 1;
  const double lead_x0 =
      spec.initial_gap_m + 0.5 * (2.0 * kDefaultVehicleLength);

  Episode e;
  e.id = to_string(spec.kind) + "-s" + std::to_string(spec.seed);
  e.dt_s = spec.dt_s;
  e.deployed_fcw_time_s = std::min(5.0, spec.duration_s);
  e.ego.dt_s = e.lead.dt_s = e.attention.dt_s = spec.dt_s;
  e.ego.start_time_s = e.lead.start_time_s = e.attention.start_time_s = 0.0;
  e.ego.states.reserve(n);
  e.lead.states.reserve(n);
  e.attention.attended.reserve(n);

  double ego_x = 0.0;
  double ego_v = ego_v0;
  bool braking = false;
  double prev_gap_excess = 0.0;  // gap - D_w at the previous step
  bool prev_attended = true;

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * spec.dt_s;
    const bool attended = !in_window(t, spec.inattention_window);
    const double lead_v = lead.speed_at(t);
    const double lead_x = lead_x0 + lead.distance_at(t);

    e.ego.states.push_back({ego_x, 0.0, 0.0, ego_v});
    e.lead.states.push_back({lead_x, 0.0, 0.0, lead_v});
    e.attention.attended.push_back(attended);

    const double gap = (lead_x - ego_x) - kDefaultVehicleLength;
    const double excess = gap - sda_warning_distance(ego_v, lead_v, kDriverModel);

    // The driver reacts when the scene turns critical in front of their
    // eyes, or when a glance back lands on an already-critical scene. The
    // starting gap counts as the driver's accepted following distance.
    if (!braking && i > 0 && attended && excess < 0.0 &&
        (prev_gap_excess >= 0.0 || !prev_attended)) {
      braking = true;
    }
    prev_gap_excess = excess;
    prev_attended = attended;

    if (braking) {
      step_braking(spec.dt_s, kDriverModel.a_ego_max, &ego_x, &ego_v);
    } else {
      ego_x += ego_v * spec.dt_s;
    }
  }

  double min_gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    min_gap = std::min(min_gap, longitudinal_gap(e.ego.states[i], e.lead.states[i],
                                                 e.ego_length_m, e.lead_length_m));
  }
  const bool needed = min_gap < kLabelGapThreshold;

  e.annotation.validity_votes.assign(3, needed);
  e.annotation.preferred_times_s.assign(3, std::nullopt);
  if (needed) {
    double preferred = e.ego.time_at(0);
    for (std::size_t i = n; i-- > 0;) {
      if (maneuver_avoids_contact(e, i)) {
        preferred = e.ego.time_at(i);
        break;
      }
    }
    e.annotation.preferred_times_s.assign(3, preferred);
  }
  return e;
}

ScenarioSpec spec_for_kind(ScenarioKind kind, const ScenarioSpec& base) {
  ScenarioSpec s = base;
  s.kind = kind;
  switch (kind) {
    case ScenarioKind::kBrakeDuringInattention:
      s.event_magnitude_mps2 = kBrakeEventAccel;
      if (!s.inattention_window.has_value()) {
        s.inattention_window = InattentionWindow{3.0, 8.0};
      }
      break;
    case ScenarioKind::kAccelerateDuringInattention:
      s.lead_speed_mps = kAccelKindLeadSpeed;
      s.initial_gap_m = kAccelKindGap;
      s.event_magnitude_mps2 = kSpeedUpEventAccel;
      if (!s.inattention_window.has_value()) {
        s.inattention_window = InattentionWindow{1.2, 9.5};
      }
      break;
    case ScenarioKind::kNominalFollowing:
      s.lead_speed_mps = s.ego_speed_mps;
      s.initial_gap_m = kNominalKindGap;
      s.event_magnitude_mps2 = 0.0;
      s.inattention_window.reset();
      break;
    case ScenarioKind::kAttentiveBrake:
      s.event_magnitude_mps2 = kBrakeEventAccel;
      s.inattention_window.reset();
      break;
  }
  return s;
}

std::vector<LabeledEpisode> generate_suite(std::size_t n_per_kind,
                                           const ScenarioSpec& base,
                                           std::uint64_t seed) {
  if (n_per_kind < 1) {
    throw std::invalid_argument("n_per_kind must be at least 1");
  }
  std::mt19937_64 suite_rng(seed);
  std::vector<LabeledEpisode> out;
  out.reserve(n_per_kind * 4);
  for (const ScenarioKind kind : kAllScenarioKinds) {
    for (std::size_t i = 0; i < n_per_kind; ++i) {
      ScenarioSpec s = spec_for_kind(kind, base);
      s.seed = suite_rng();
      LabeledEpisode item;
      item.episode = generate(s);
      std::ostringstream id;
      id << to_string(kind) << '_' << std::setw(4) << std::setfill('0') << i;
      item.episode.id = id.str();
      item.kind = kind;
      item.seed = s.seed;
      item.warning_needed = item.episode.annotation.validity_votes.front();
      out.push_back(std::move(item));
    }
  }
  return out;
}

}  // namespace fcw

#include "fcw/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace fcw {
namespace {

constexpr double kGridSnapTol = 1e-6;  // fraction of one step
constexpr double kTimeTol = 1e-9;      // s

bool finite(const VehicleState& s) {
  return std::isfinite(s.x_m) && std::isfinite(s.y_m) &&
         std::isfinite(s.heading_rad) && std::isfinite(s.speed_mps);
}

VehicleState lerp_state(const VehicleState& a, const VehicleState& b, double f) {
  VehicleState out;
  out.x_m = a.x_m + (b.x_m - a.x_m) * f;
  out.y_m = a.y_m + (b.y_m - a.y_m) * f;
  out.speed_mps = a.speed_mps + (b.speed_mps - a.speed_mps) * f;
  const double dh = wrap_angle(b.heading_rad - a.heading_rad);
  out.heading_rad = wrap_angle(a.heading_rad + dh * f);
  return out;
}

void check_series_alignment(std::vector<std::string>& out, const Episode& e,
                            const std::string& name, double dt, double start,
                            std::size_t len) {
  if (std::abs(dt - e.dt_s) > kTimeTol) {
    out.push_back(name + ".dt_s: does not match episode dt_s");
  }
  if (std::abs(start - e.ego.start_time_s) > kTimeTol) {
    out.push_back(name + ".start_time_s: does not match ego start time");
  }
  if (len != e.ego.size()) {
    std::ostringstream msg;
    msg << name << ": length mismatch (" << len << " vs " << e.ego.size() << ")";
    out.push_back(msg.str());
  }
}

}  // namespace

double Trajectory::end_time() const {
  if (states.empty()) {
    return start_time_s;
  }
  return time_at(states.size() - 1);
}

std::size_t Trajectory::index_at_time(double t) const {
  if (states.empty()) {
    throw std::invalid_argument("index_at_time: empty trajectory");
  }
  if (dt_s <= 0.0) {
    throw std::invalid_argument("index_at_time: non-positive dt");
  }
  const double x = (t - start_time_s) / dt_s;
  double i = std::floor(x);
  if (x - i > 1.0 - kGridSnapTol) {
    i += 1.0;
  }
  if (i < 0.0 && x > -kGridSnapTol) {
    i = 0.0;
  }
  if (i < 0.0 || i >= static_cast<double>(states.size())) {
    std::ostringstream msg;
    msg << "index_at_time: t=" << t << " outside [" << start_time_s << ", "
        << end_time() << "]";
    throw std::invalid_argument(msg.str());
  }
  return static_cast<std::size_t>(i);
}

Trajectory Trajectory::slice(std::size_t first, std::size_t last) const {
  if (first > last || last >= states.size()) {
    throw std::invalid_argument("slice: bad range");
  }
  Trajectory out;
  out.dt_s = dt_s;
  out.start_time_s = time_at(first);
  out.states.assign(states.begin() + static_cast<std::ptrdiff_t>(first),
                    states.begin() + static_cast<std::ptrdiff_t>(last) + 1);
  return out;
}

double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(a + std::numbers::pi, two_pi);
  if (w < 0.0) {
    w += two_pi;
  }
  return w - std::numbers::pi;
}

std::vector<std::string> validate_episode(const Episode& e) {
  std::vector<std::string> out;

  if (!(e.dt_s > 0.0) || !std::isfinite(e.dt_s)) {
    out.push_back("dt_s: dt must be positive");
  }
  if (e.ego.empty()) {
    out.push_back("ego.states: must be non-empty");
  }
  if (e.lead.empty()) {
    out.push_back("lead.states: must be non-empty");
  }
  if (!(e.ego_length_m > 0.0)) {
    out.push_back("ego_length_m: must be positive");
  }
  if (!(e.lead_length_m > 0.0)) {
    out.push_back("lead_length_m: must be positive");
  }

  const auto check_traj = [&out](const Trajectory& t, const std::string& name) {
    if (!(t.dt_s > 0.0) || !std::isfinite(t.dt_s)) {
      out.push_back(name + ".dt_s: dt must be positive");
    }
    for (std::size_t i = 0; i < t.states.size(); ++i) {
      const VehicleState& s = t.states[i];
      std::ostringstream path;
      path << name << ".states[" << i << "]";
      if (!finite(s)) {
        out.push_back(path.str() + ": non-finite component");
        continue;
      }
      if (s.speed_mps < 0.0) {
        out.push_back(path.str() + ".speed_mps: must be non-negative");
      }
      if (s.heading_rad < -std::numbers::pi || s.heading_rad >= std::numbers::pi) {
        out.push_back(path.str() + ".heading_rad: outside [-pi, pi)");
      }
    }
  };
  check_traj(e.ego, "ego");
  check_traj(e.lead, "lead");

  check_series_alignment(out, e, "lead", e.lead.dt_s, e.lead.start_time_s,
                         e.lead.size());
  check_series_alignment(out, e, "attention", e.attention.dt_s,
                         e.attention.start_time_s, e.attention.size());
  if (std::abs(e.ego.dt_s - e.dt_s) > kTimeTol) {
    out.push_back("ego.dt_s: does not match episode dt_s");
  }

  if (!e.ego.empty()) {
    const double t0 = e.start_time();
    const double t1 = e.end_time();
    if (e.deployed_fcw_time_s < t0 - kTimeTol || e.deployed_fcw_time_s > t1 + kTimeTol) {
      out.push_back("deployed_fcw_time_s: outside episode span");
    }
    if (e.annotation.validity_votes.empty()) {
      out.push_back("annotation.validity_votes: must be non-empty");
    }
    if (e.annotation.preferred_times_s.size() != e.annotation.validity_votes.size()) {
      out.push_back("annotation.preferred_times_s: length mismatch with votes");
    } else {
      for (std::size_t i = 0; i < e.annotation.validity_votes.size(); ++i) {
        const auto& pt = e.annotation.preferred_times_s[i];
        if (pt.has_value() && !e.annotation.validity_votes[i]) {
          std::ostringstream msg;
          msg << "annotation.preferred_times_s[" << i
              << "]: present without a matching valid vote";
          out.push_back(msg.str());
        }
        if (pt.has_value() && (*pt < t0 - kTimeTol || *pt > t1 + kTimeTol)) {
          std::ostringstream msg;
          msg << "annotation.preferred_times_s[" << i << "]: outside episode span";
          out.push_back(msg.str());
        }
      }
    }
  }

  return out;
}

void require_valid(const Episode& e) {
  const auto violations = validate_episode(e);
  if (violations.empty()) {
    return;
  }
  std::ostringstream msg;
  msg << "invalid episode '" << e.id << "':";
  for (const auto& v : violations) {
    msg << " [" << v << "]";
  }
  throw std::invalid_argument(msg.str());
}

Trajectory resample(const Trajectory& t, double dt_new) {
  if (!(dt_new > 0.0)) {
    throw std::invalid_argument("resample: dt_new must be positive");
  }
  if (t.empty()) {
    throw std::invalid_argument("resample: empty trajectory");
  }
  const double span = static_cast<double>(t.size() - 1) * t.dt_s;
  const double ratio = span / dt_new;
  auto steps = static_cast<long long>(std::llround(ratio));
  if (std::abs(ratio - static_cast<double>(steps)) > 1e-9) {
    steps = static_cast<long long>(std::floor(ratio + 1e-12));
  }
  steps = std::max<long long>(steps, 0);

  Trajectory out;
  out.dt_s = dt_new;
  out.start_time_s = t.start_time_s;
  out.states.reserve(static_cast<std::size_t>(steps) + 1);
  for (long long k = 0; k <= steps; ++k) {
    const double rel = static_cast<double>(k) * dt_new / t.dt_s;
    auto i = static_cast<std::size_t>(std::floor(rel));
    if (i >= t.size() - 1 && t.size() > 1) {
      i = t.size() - 2;
    }
    const double frac = t.size() > 1 ? rel - static_cast<double>(i) : 0.0;
    if (frac <= kGridSnapTol) {
      out.states.push_back(t.states[i]);
    } else if (frac >= 1.0 - kGridSnapTol) {
      out.states.push_back(t.states[i + 1]);
    } else {
      out.states.push_back(lerp_state(t.states[i], t.states[i + 1], frac));
    }
  }
  return out;
}

Episode canonicalize_episode(const Episode& e) {
  if (std::abs(e.dt_s - kCanonicalDt) <= kTimeTol) {
    return e;
  }
  Episode out = e;
  out.dt_s = kCanonicalDt;
  out.ego = resample(e.ego, kCanonicalDt);
  out.lead = resample(e.lead, kCanonicalDt);
  out.attention.dt_s = kCanonicalDt;
  out.attention.start_time_s = e.attention.start_time_s;
  out.attention.attended.clear();
  out.attention.attended.reserve(out.ego.size());
  for (std::size_t k = 0; k < out.ego.size(); ++k) {
    const double t = out.ego.time_at(k);
    auto src = static_cast<long long>(
        std::llround((t - e.attention.start_time_s) / e.attention.dt_s));
    src = std::clamp<long long>(src, 0,
                                static_cast<long long>(e.attention.size()) - 1);
    out.attention.attended.push_back(
        e.attention.attended[static_cast<std::size_t>(src)]);
  }
  return out;
}

double longitudinal_gap(const VehicleState& ego, const VehicleState& lead,
                        double ego_length_m, double lead_length_m) {
  const double ux = std::cos(ego.heading_rad);
  const double uy = std::sin(ego.heading_rad);
  const double proj = (lead.x_m - ego.x_m) * ux + (lead.y_m - ego.y_m) * uy;
  return proj - 0.5 * (ego_length_m + lead_length_m);
}

Trajectory fill_speeds_from_positions(Trajectory t) {
  const std::size_t n = t.size();
  if (n == 0 || !(t.dt_s > 0.0)) {
    return t;
  }
  auto dist = [&t](std::size_t a, std::size_t b) {
    const double dx = t.states[b].x_m - t.states[a].x_m;
    const double dy = t.states[b].y_m - t.states[a].y_m;
    return std::hypot(dx, dy);
  };
  std::vector<double> speeds(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (n == 1) {
      speeds[i] = 0.0;
    } else if (i == 0) {
      speeds[i] = dist(0, 1) / t.dt_s;
    } else if (i == n - 1) {
      speeds[i] = dist(n - 2, n - 1) / t.dt_s;
    } else {
      speeds[i] = dist(i - 1, i + 1) / (2.0 * t.dt_s);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    t.states[i].speed_mps = speeds[i];
  }
  return t;
}

}  // namespace fcw

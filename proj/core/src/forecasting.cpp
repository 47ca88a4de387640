#include "fcw/forecasting.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace fcw {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

long long future_step_count(double horizon_s, double dt_s) {
  if (!(horizon_s > 0.0)) {
    throw std::invalid_argument("forecast horizon must be positive");
  }
  return std::max<long long>(1, std::llround(horizon_s / dt_s));
}

// Distance covered after tau seconds from speed v0 under constant
// acceleration a, with speed clamped to [0, v_cap].
double clamped_accel_distance(double v0, double a, double tau, double v_cap) {
  if (a == 0.0) {
    return v0 * tau;
  }
  const double v_term = a < 0.0 ? 0.0 : v_cap;
  const double tau_term = (v_term - v0) / a;
  if (tau_term > 0.0 && tau < tau_term) {
    return v0 * tau + 0.5 * a * tau * tau;
  }
  const double t_seg = std::max(0.0, tau_term);
  const double d_seg = v0 * t_seg + 0.5 * a * t_seg * t_seg;
  return d_seg + v_term * (tau - t_seg);
}

double clamped_accel_speed(double v0, double a, double tau, double v_cap) {
  return std::clamp(v0 + a * tau, 0.0, std::max(v0, v_cap));
}

Trajectory extrapolate(const Trajectory& history, double accel, double horizon_s,
                       double v_cap) {
  const VehicleState& last = history.states.back();
  const long long n = future_step_count(horizon_s, history.dt_s);
  const double ux = std::cos(last.heading_rad);
  const double uy = std::sin(last.heading_rad);

  Trajectory out;
  out.dt_s = history.dt_s;
  out.start_time_s = history.end_time();
  out.states.reserve(static_cast<std::size_t>(n) + 1);
  for (long long k = 0; k <= n; ++k) {
    const double tau = static_cast<double>(k) * history.dt_s;
    const double d = clamped_accel_distance(last.speed_mps, accel, tau, v_cap);
    VehicleState s;
    s.x_m = last.x_m + d * ux;
    s.y_m = last.y_m + d * uy;
    s.heading_rad = last.heading_rad;
    s.speed_mps = clamped_accel_speed(last.speed_mps, accel, tau, v_cap);
    out.states.push_back(s);
  }
  return out;
}

double speed_slope(const Trajectory& history) {
  const std::size_t n = history.size();
  double t_mean = 0.0;
  double v_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t_mean += static_cast<double>(i) * history.dt_s;
    v_mean += history.states[i].speed_mps;
  }
  t_mean /= static_cast<double>(n);
  v_mean /= static_cast<double>(n);
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dt = static_cast<double>(i) * history.dt_s - t_mean;
    num += dt * (history.states[i].speed_mps - v_mean);
    den += dt * dt;
  }
  return num / den;
}

void check_request(const ForecastRequest& r, std::size_t min_len) {
  if (r.ego_history.size() < min_len || r.lead_history.size() < min_len) {
    std::ostringstream msg;
    msg << "forecast request needs at least " << min_len
        << " history samples per vehicle";
    throw std::invalid_argument(msg.str());
  }
  if (r.ego_history.size() != r.lead_history.size()) {
    throw std::invalid_argument("forecast request histories are not aligned");
  }
}

constexpr double kNoSpeedCap = 1e9;  // m/s; effectively unclamped above

Trajectory parse_future(const json& arr, double dt_s, const std::string& where) {
  if (!arr.is_array() || arr.empty()) {
    throw data_error(where + ": future must be a non-empty array");
  }
  Trajectory out;
  out.dt_s = dt_s;
  out.start_time_s = 0.0;
  for (const auto& js : arr) {
    if (!js.is_object() || !js.contains("x_m") || !js.contains("y_m") ||
        !js.contains("heading_rad") || !js.contains("speed_mps")) {
      throw data_error(where + ": future state missing fields");
    }
    VehicleState s;
    s.x_m = js["x_m"].get<double>();
    s.y_m = js["y_m"].get<double>();
    s.heading_rad = js["heading_rad"].get<double>();
    s.speed_mps = js["speed_mps"].get<double>();
    out.states.push_back(s);
  }
  return out;
}

ordered_json future_to_json(const Trajectory& t) {
  ordered_json arr = ordered_json::array();
  for (const auto& s : t.states) {
    ordered_json js;
    js["x_m"] = s.x_m;
    js["y_m"] = s.y_m;
    js["heading_rad"] = s.heading_rad;
    js["speed_mps"] = s.speed_mps;
    arr.push_back(std::move(js));
  }
  return arr;
}

}  // namespace

Forecast forecast_constant_velocity(const ForecastRequest& r) {
  check_request(r, 1);
  return {extrapolate(r.ego_history, 0.0, r.horizon_s, kNoSpeedCap),
          extrapolate(r.lead_history, 0.0, r.horizon_s, kNoSpeedCap)};
}

Forecast forecast_constant_acceleration(const ForecastRequest& r) {
  check_request(r, 2);
  return {extrapolate(r.ego_history, speed_slope(r.ego_history), r.horizon_s,
                      kNoSpeedCap),
          extrapolate(r.lead_history, speed_slope(r.lead_history), r.horizon_s,
                      kNoSpeedCap)};
}

Forecast forecast_worst_case_brake(const ForecastRequest& r, double decel) {
  if (!(decel > 0.0)) {
    throw std::invalid_argument("worst-case brake deceleration must be positive");
  }
  check_request(r, 1);
  return {extrapolate(r.ego_history, 0.0, r.horizon_s, kNoSpeedCap),
          extrapolate(r.lead_history, -decel, r.horizon_s, kNoSpeedCap)};
}

double min_future_gap(const Forecast& f, double ego_length_m,
                      double lead_length_m) {
  if (f.ego_future.size() != f.lead_future.size() || f.ego_future.empty()) {
    throw std::invalid_argument("forecast futures are not aligned");
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < f.ego_future.size(); ++k) {
    best = std::min(best, longitudinal_gap(f.ego_future.states[k],
                                           f.lead_future.states[k],
                                           ego_length_m, lead_length_m));
  }
  return best;
}

void ExternalForecasts::insert(std::string episode_id, std::size_t timestep,
                               Forecast f) {
  entries_[{std::move(episode_id), timestep}] = std::move(f);
}

const Forecast& ExternalForecasts::at(const std::string& episode_id,
                                      std::size_t timestep) const {
  const auto it = entries_.find({episode_id, timestep});
  if (it == entries_.end()) {
    std::ostringstream msg;
    msg << "no external forecast for episode '" << episode_id << "' timestep "
        << timestep;
    throw data_error(msg.str());
  }
  return it->second;
}

bool ExternalForecasts::contains(const std::string& episode_id,
                                 std::size_t timestep) const {
  return entries_.count({episode_id, timestep}) > 0;
}

ExternalForecasts load_external_forecasts(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw data_error("cannot open forecast file: " + file.string());
  }
  ExternalForecasts out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    std::ostringstream where;
    where << file.string() << ':' << line_no;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      throw data_error(where.str() + ": not a JSON object");
    }
    if (!j.contains("episode_id") || !j["episode_id"].is_string() ||
        !j.contains("timestep_index") || !j["timestep_index"].is_number_unsigned() ||
        !j.contains("dt_s") || !j["dt_s"].is_number()) {
      throw data_error(where.str() +
                       ": needs episode_id, timestep_index, and dt_s");
    }
    const double dt = j["dt_s"].get<double>();
    if (!(dt > 0.0)) {
      throw data_error(where.str() + ": dt_s must be positive");
    }
    Forecast f;
    f.ego_future = parse_future(j["ego_future"], dt, where.str() + " ego_future");
    f.lead_future = parse_future(j["lead_future"], dt, where.str() + " lead_future");
    if (f.ego_future.size() != f.lead_future.size()) {
      throw data_error(where.str() + ": ego and lead futures differ in length");
    }
    out.insert(j["episode_id"].get<std::string>(),
               j["timestep_index"].get<std::size_t>(), std::move(f));
  }
  return out;
}

void write_external_forecasts(const ExternalForecasts& forecasts,
                              const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) {
    throw data_error("cannot write forecast file: " + file.string());
  }
  for (const auto& [key, f] : forecasts.entries()) {
    ordered_json j;
    j["episode_id"] = key.first;
    j["timestep_index"] = key.second;
    j["dt_s"] = f.ego_future.dt_s;
    j["ego_future"] = future_to_json(f.ego_future);
    j["lead_future"] = future_to_json(f.lead_future);
    out << j.dump() << '\n';
  }
}

Forecaster constant_velocity_forecaster() {
  return [](const ForecastRequest& r, const ForecastContext&) {
    return forecast_constant_velocity(r);
  };
}

Forecaster constant_acceleration_forecaster() {
  return [](const ForecastRequest& r, const ForecastContext&) {
    return forecast_constant_acceleration(r);
  };
}

Forecaster worst_case_brake_forecaster(double decel) {
  return [decel](const ForecastRequest& r, const ForecastContext&) {
    return forecast_worst_case_brake(r, decel);
  };
}

Forecaster external_forecaster(std::shared_ptr<const ExternalForecasts> store) {
  if (!store) {
    throw std::invalid_argument("external forecaster needs a forecast store");
  }
  return [store](const ForecastRequest&, const ForecastContext& ctx) {
    return store->at(ctx.episode_id, ctx.timestep);
  };
}

namespace {

std::size_t history_steps(const Episode& e, const FcwParams& p) {
  return static_cast<std::size_t>(
      std::max<long long>(1, std::llround(p.history / e.dt_s)));
}

template <typename Fn>
WarningTrace forecast_scan(const Episode& e, const FcwParams& p,
                           bool use_counterfactual, Fn&& per_step) {
  require_valid(e);
  const std::size_t h = history_steps(e, p);
  if (e.size() <= h) {
    throw std::invalid_argument(
        "episode shorter than the forecast history window");
  }
  const Trajectory lead_source =
      use_counterfactual
          ? perceived_lead_trajectory(e.lead, e.attention).to_trajectory()
          : e.lead;
  std::vector<bool> warn(e.size(), false);
  for (std::size_t i = h; i < e.size(); ++i) {
    ForecastRequest req;
    req.ego_history = e.ego.slice(i - h, i);
    req.lead_history = lead_source.slice(i - h, i);
    req.horizon_s = p.horizon;
    warn[i] = per_step(i, req);
  }
  return make_warning_trace(e.dt_s, e.start_time(), std::move(warn));
}

}  // namespace

WarningTrace evaluate_forecast_fcw(const Episode& e, const Forecaster& forecaster,
                                   const FcwParams& p, bool use_counterfactual) {
  return forecast_scan(
      e, p, use_counterfactual, [&](std::size_t i, const ForecastRequest& req) {
        const Forecast f = forecaster(req, {e.id, i});
        return min_future_gap(f, e.ego_length_m, e.lead_length_m) <
               p.min_gap_warn;
      });
}

ExternalForecasts record_forecasts(const Episode& e, const Forecaster& forecaster,
                                   const FcwParams& p, bool use_counterfactual) {
  ExternalForecasts out;
  forecast_scan(e, p, use_counterfactual,
                [&](std::size_t i, const ForecastRequest& req) {
                  out.insert(e.id, i, forecaster(req, {e.id, i}));
                  return false;
                });
  return out;
}

}  // namespace fcw

#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>

#include "fcw/counterfactual.hpp"
#include "fcw/errors.hpp"
#include "fcw/warning.hpp"

namespace fcw {

// Aligned ego/lead histories (lead may be the driver-perceived trajectory)
// and the future length to hypothesize.
struct ForecastRequest {
  Trajectory ego_history;
  Trajectory lead_history;
  double horizon_s{3.0};
};

// Joint hypothesized future. State 0 is the last history state; the sequence
// extends exactly horizon_s beyond it on the history grid.
struct Forecast {
  Trajectory ego_future;
  Trajectory lead_future;
};

// Both vehicles continue at their final-history speed along their final
// heading.
Forecast forecast_constant_velocity(const ForecastRequest& r);

// Per-vehicle scalar acceleration from the least-squares slope of the
// history speeds; speeds integrate forward clamped at zero, positions along
// the final heading. Needs at least two history samples.
Forecast forecast_constant_acceleration(const ForecastRequest& r);

// Lead brakes at `decel` from its final speed until stopped; ego continues
// at constant velocity.
Forecast forecast_worst_case_brake(const ForecastRequest& r, double decel);

// Minimum longitudinal gap over the paired future states.
double min_future_gap(const Forecast& f, double ego_length_m,
                      double lead_length_m);

// Precomputed forecasts keyed by (episode id, timestep index). This is the
// integration seam for learned models evaluated through the same decision
// rule: serialize their outputs as JSON Lines and replay them here.
class ExternalForecasts {
 public:
  using Key = std::pair<std::string, std::size_t>;

  void insert(std::string episode_id, std::size_t timestep, Forecast f);
  // Throws data_error naming the episode and timestep when absent.
  const Forecast& at(const std::string& episode_id, std::size_t timestep) const;
  bool contains(const std::string& episode_id, std::size_t timestep) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<Key, Forecast>& entries() const { return entries_; }

 private:
  std::map<Key, Forecast> entries_;
};

// JSON Lines, one forecast per line:
//   {"episode_id", "timestep_index", "dt_s", "ego_future": [...], "lead_future": [...]}
// Future start times are not part of the interchange format; the gap rule
// does not depend on them.
ExternalForecasts load_external_forecasts(const std::filesystem::path& file);
void write_external_forecasts(const ExternalForecasts& forecasts,
                              const std::filesystem::path& file);

struct ForecastContext {
  std::string episode_id;
  std::size_t timestep{0};
};

using Forecaster = std::function<Forecast(const ForecastRequest&,
                                          const ForecastContext&)>;

Forecaster constant_velocity_forecaster();
Forecaster constant_acceleration_forecaster();
Forecaster worst_case_brake_forecaster(double decel);
Forecaster external_forecaster(std::shared_ptr<const ExternalForecasts> store);

// At each timestep with a full trailing history window, hypothesizes the
// joint future and warns when its minimum longitudinal gap drops below
// p.min_gap_warn. With use_counterfactual the lead history is the
// driver-perceived trajectory; otherwise the actual one. Timesteps before
// one full history window emit no warning.
WarningTrace evaluate_forecast_fcw(const Episode& e, const Forecaster& forecaster,
                                   const FcwParams& p, bool use_counterfactual);

// Forecasts for every evaluated timestep of e, keyed for replay through the
// external forecaster.
ExternalForecasts record_forecasts(const Episode& e, const Forecaster& forecaster,
                                   const FcwParams& p, bool use_counterfactual);

}  // namespace fcw

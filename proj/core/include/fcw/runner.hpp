#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "fcw/evaluation.hpp"
#include "fcw/forecasting.hpp"
#include "fcw/run_config.hpp"
#include "fcw/synthgen.hpp"

namespace fcw {

// The warning function selected by the config, with parameters and (for the
// forecast methods) the forecaster bound in.
MethodFn make_method(const RunConfig& cfg);

// Loads external forecasts from disk when the config selects them.
Forecaster make_forecaster(const RunConfig& cfg);

// Report JSON mirrors EvaluationReport and embeds the config and seed; no
// wall-clock fields, so identical runs serialize identically.
std::string report_to_json(const EvaluationReport& report, const RunConfig& cfg);
RunConfig config_from_report_json(const std::string& text);

// One line in the result-table format:
//   <method>  UAR <u>  TPR <t>  TNR <n>  buffer <b>s (<count>)
std::string summary_line(const EvaluationReport& report);

// Suite-generation spec: flat "key = value" text with keys n_per_kind,
// ego_speed, lead_speed, initial_gap, event_time, duration, dt, seed,
// inattention_start, inattention_end. Unknown keys are errors.
struct SuiteSpec {
  std::size_t n_per_kind{25};
  ScenarioSpec base;
};

SuiteSpec parse_suite_spec(const std::string& text);
SuiteSpec load_suite_spec(const std::filesystem::path& file);

// Writes one episode file per suite entry plus manifest.csv; returns the
// number of episodes written. Deterministic under (spec, seed).
std::size_t cmd_generate(const SuiteSpec& spec,
                         const std::filesystem::path& out_dir,
                         std::uint64_t seed);

// Loads episodes, evaluates the configured method, and writes the report
// JSON to cfg.output.
EvaluationReport cmd_evaluate(const RunConfig& cfg);

struct SweepRow {
  double value{0.0};
  EvaluationReport report;
};

// One evaluation per value of the named parameter.
std::vector<SweepRow> cmd_sweep(const RunConfig& cfg,
                                const std::string& param_name,
                                const std::vector<double>& values);

void write_sweep_csv(const std::string& param_name,
                     const std::vector<SweepRow>& rows, std::ostream& out);

// Per-timestep diagnostics for one episode. Columns: t_s, gap_m,
// d_w_conventional_m, d_w_attention_m, v_lead_mps, v_hat_lead_mps, attended,
// min_future_gap_m, warn. The hypothesized-gap column uses the driver-
// perceived lead history unless the configured method is forecast_full_attn;
// it is empty before one full history window.
std::string cmd_trace_csv(const RunConfig& cfg, const std::string& episode_id);

}  // namespace fcw

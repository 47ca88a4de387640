#include "fcw/runner.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "fcw/counterfactual.hpp"
#include "fcw/episode_io.hpp"
#include "fcw/format.hpp"

namespace fcw {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

ordered_json config_to_json(const RunConfig& cfg) {
  ordered_json j;
  j["method"] = to_string(cfg.method);
  j["forecaster"] = to_string(cfg.forecaster);
  j["episode_dir"] = cfg.episode_dir;
  j["output"] = cfg.output;
  if (cfg.external_forecasts.has_value()) {
    j["external_forecasts"] = *cfg.external_forecasts;
  } else {
    j["external_forecasts"] = nullptr;
  }
  j["seed"] = cfg.seed;
  ordered_json params;
  for (const auto& name : fcw_param_names()) {
    params[name] = get_param(cfg.params, name);
  }
  j["params"] = std::move(params);
  return j;
}

std::vector<Episode> load_episodes(const RunConfig& cfg) {
  std::vector<Episode> episodes = read_episode_dir(cfg.episode_dir);
  for (auto& e : episodes) {
    e = canonicalize_episode(e);
  }
  return episodes;
}

const Episode& find_episode(const std::vector<Episode>& episodes,
                            const std::string& id) {
  for (const auto& e : episodes) {
    if (e.id == id) {
      return e;
    }
  }
  throw data_error("no episode with id '" + id + "'");
}

ordered_json optional_to_json(const std::optional<double>& v) {
  if (v.has_value()) {
    return *v;
  }
  return nullptr;
}

}  // namespace

Forecaster make_forecaster(const RunConfig& cfg) {
  switch (cfg.forecaster) {
    case ForecasterKind::kConstantVelocity:
      return constant_velocity_forecaster();
    case ForecasterKind::kConstantAcceleration:
      return constant_acceleration_forecaster();
    case ForecasterKind::kWorstCaseBrake:
      return worst_case_brake_forecaster(cfg.params.a_lead_max);
    case ForecasterKind::kExternal: {
      if (!cfg.external_forecasts.has_value()) {
        throw config_error(
            "forecaster 'external' requires an external_forecasts path");
      }
      auto store = std::make_shared<ExternalForecasts>(
          load_external_forecasts(*cfg.external_forecasts));
      return external_forecaster(std::move(store));
    }
  }
  throw config_error("unknown forecaster");
}

MethodFn make_method(const RunConfig& cfg) {
  const FcwParams p = cfg.params;
  switch (cfg.method) {
    case Method::kSda:
      return [p](const Episode& e) { return evaluate_sda(e, p); };
    case Method::kAttentionAware:
      return [p](const Episode& e) { return evaluate_attention_aware(e, p); };
    case Method::kAttendGaze:
      return [p](const Episode& e) { return evaluate_attend_gaze_only(e, p); };
    case Method::kAttendGazeScene:
      return [p](const Episode& e) { return evaluate_attend_gaze_scene(e, p); };
    case Method::kForecastFullAttn:
    case Method::kForecastDriverAttn: {
      const Forecaster fc = make_forecaster(cfg);
      const bool use_counterfactual = cfg.method == Method::kForecastDriverAttn;
      return [fc, p, use_counterfactual](const Episode& e) {
        return evaluate_forecast_fcw(e, fc, p, use_counterfactual);
      };
    }
  }
  throw config_error("unknown method");
}

std::string report_to_json(const EvaluationReport& report, const RunConfig& cfg) {
  ordered_json root;
  root["method"] = report.method;
  root["seed"] = cfg.seed;
  root["config"] = config_to_json(cfg);
  ordered_json counts;
  counts["tp"] = report.counts.tp;
  counts["fp"] = report.counts.fp;
  counts["tn"] = report.counts.tn;
  counts["fn"] = report.counts.fn;
  root["counts"] = std::move(counts);
  root["tpr"] = report.tpr;
  root["tnr"] = report.tnr;
  root["uar"] = report.uar;
  root["buffer_mean_s"] = optional_to_json(report.buffer_mean_s);
  root["buffer_n"] = report.buffer_n;

  ordered_json rows = ordered_json::array();
  for (const auto& row : report.per_episode) {
    ordered_json r;
    r["id"] = row.id;
    r["label"] = row.label;
    r["warned"] = row.warned;
    r["first_warning_time_s"] = optional_to_json(row.first_warning_time_s);
    r["buffer_s"] = optional_to_json(row.buffer_s);
    ordered_json preferred = ordered_json::array();
    for (const auto& t : row.preferred_times_s) {
      preferred.push_back(optional_to_json(t));
    }
    r["preferred_times_s"] = std::move(preferred);
    rows.push_back(std::move(r));
  }
  root["per_episode"] = std::move(rows);
  return root.dump(2) + "\n";
}

RunConfig config_from_report_json(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded() || !root.is_object() || !root.contains("config")) {
    throw data_error("report JSON has no config object");
  }
  const auto& j = root["config"];
  RunConfig cfg;
  cfg.method = method_from_string(j.at("method").get<std::string>());
  cfg.forecaster = forecaster_from_string(j.at("forecaster").get<std::string>());
  cfg.episode_dir = j.at("episode_dir").get<std::string>();
  cfg.output = j.at("output").get<std::string>();
  if (j.contains("external_forecasts") && !j["external_forecasts"].is_null()) {
    cfg.external_forecasts = j["external_forecasts"].get<std::string>();
  }
  cfg.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& name : fcw_param_names()) {
    set_param(cfg.params, name, j.at("params").at(name).get<double>());
  }
  return cfg;
}

std::string summary_line(const EvaluationReport& report) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(3);
  out << report.method << "  UAR " << report.uar << "  TPR " << report.tpr
      << "  TNR " << report.tnr << "  buffer ";
  if (report.buffer_mean_s.has_value()) {
    out << *report.buffer_mean_s << "s";
  } else {
    out << "n/a";
  }
  out << " (" << report.buffer_n << ")";
  return out.str();
}

SuiteSpec parse_suite_spec(const std::string& text) {
  SuiteSpec spec;
  std::optional<double> win_start;
  std::optional<double> win_end;

  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line = line.substr(0, hash);
    }
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "suite spec line " << line_no << ": expected 'key = value'";
      throw config_error(msg.str());
    }
    auto strip = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) {
        return std::string();
      }
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      std::ostringstream msg;
      msg << "suite spec line " << line_no << ": empty key or value";
      throw config_error(msg.str());
    }

    const auto as_double = [&]() {
      try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) {
          throw std::invalid_argument(value);
        }
        return v;
      } catch (const std::exception&) {
        throw config_error("suite spec key '" + key + "': not a number: " + value);
      }
    };

    if (key == "n_per_kind") {
      const double v = as_double();
      if (v < 0.0 || v != std::floor(v)) {
        throw config_error("n_per_kind must be a non-negative integer");
      }
      spec.n_per_kind = static_cast<std::size_t>(v);
    } else if (key == "ego_speed") {
      spec.base.ego_speed_mps = as_double();
    } else if (key == "lead_speed") {
      spec.base.lead_speed_mps = as_double();
    } else if (key == "initial_gap") {
      spec.base.initial_gap_m = as_double();
    } else if (key == "event_time") {
      spec.base.event_time_s = as_double();
    } else if (key == "duration") {
      spec.base.duration_s = as_double();
    } else if (key == "dt") {
      spec.base.dt_s = as_double();
    } else if (key == "seed") {
      spec.base.seed = static_cast<std::uint64_t>(as_double());
    } else if (key == "inattention_start") {
      win_start = as_double();
    } else if (key == "inattention_end") {
      win_end = as_double();
    } else {
      throw config_error("unknown suite spec key: " + key);
    }
  }

  if (win_start.has_value() != win_end.has_value()) {
    throw config_error(
        "inattention_start and inattention_end must be given together");
  }
  if (win_start.has_value()) {
    spec.base.inattention_window = InattentionWindow{*win_start, *win_end};
  }
  return spec;
}

SuiteSpec load_suite_spec(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw config_error("cannot open suite spec file: " + file.string());
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_suite_spec(buf.str());
}

std::size_t cmd_generate(const SuiteSpec& spec,
                         const std::filesystem::path& out_dir,
                         std::uint64_t seed) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (!std::filesystem::is_directory(out_dir)) {
    throw data_error("cannot create output directory: " + out_dir.string());
  }
  const auto suite = generate_suite(spec.n_per_kind, spec.base, seed);

  std::ofstream manifest(out_dir / "manifest.csv");
  if (!manifest) {
    throw data_error("cannot write manifest in " + out_dir.string());
  }
  manifest << "id,kind,seed,label,file\n";
  for (const auto& item : suite) {
    const std::string file = item.episode.id + ".json";
    write_episode(item.episode, out_dir / file);
    manifest << item.episode.id << ',' << to_string(item.kind) << ','
             << item.seed << ',' << (item.warning_needed ? 1 : 0) << ',' << file
             << '\n';
  }
  return suite.size();
}

EvaluationReport cmd_evaluate(const RunConfig& cfg) {
  validate_config(cfg);
  if (cfg.output.empty()) {
    throw config_error("evaluate needs an output path (config output or --out)");
  }
  const std::vector<Episode> episodes = load_episodes(cfg);
  const EvaluationReport report =
      evaluate_method(episodes, to_string(cfg.method), make_method(cfg));
  std::ofstream out(cfg.output);
  if (!out) {
    throw data_error("cannot write report file: " + cfg.output);
  }
  out << report_to_json(report, cfg);
  return report;
}

std::vector<SweepRow> cmd_sweep(const RunConfig& cfg,
                                const std::string& param_name,
                                const std::vector<double>& values) {
  if (!is_fcw_param(param_name)) {
    throw config_error("unknown sweep parameter: " + param_name);
  }
  if (values.empty()) {
    throw config_error("sweep needs at least one value");
  }
  const std::vector<Episode> episodes = load_episodes(cfg);
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (const double v : values) {
    RunConfig swept = cfg;
    set_param(swept.params, param_name, v);
    validate_config(swept);
    rows.push_back(
        {v, evaluate_method(episodes, to_string(swept.method), make_method(swept))});
  }
  return rows;
}

void write_sweep_csv(const std::string& param_name,
                     const std::vector<SweepRow>& rows, std::ostream& out) {
  out << "param,value,method,uar,tpr,tnr,buffer_mean_s,buffer_n\n";
  for (const auto& row : rows) {
    out << param_name << ',' << format_double(row.value) << ','
        << row.report.method << ',' << format_double(row.report.uar) << ','
        << format_double(row.report.tpr) << ',' << format_double(row.report.tnr)
        << ',';
    if (row.report.buffer_mean_s.has_value()) {
      out << format_double(*row.report.buffer_mean_s);
    }
    out << ',' << row.report.buffer_n << '\n';
  }
}

std::string cmd_trace_csv(const RunConfig& cfg, const std::string& episode_id) {
  validate_config(cfg);
  const std::vector<Episode> episodes = load_episodes(cfg);
  const Episode& e = find_episode(episodes, episode_id);
  require_valid(e);

  const FcwParams& p = cfg.params;
  const PerceivedTrajectory perceived =
      perceived_lead_trajectory(e.lead, e.attention);
  const WarningTrace trace = make_method(cfg)(e);

  const bool use_counterfactual = cfg.method != Method::kForecastFullAttn;
  const Forecaster fc = make_forecaster(cfg);
  const ExternalForecasts hypothesized =
      record_forecasts(e, fc, p, use_counterfactual);

  std::ostringstream out;
  out << "t_s,gap_m,d_w_conventional_m,d_w_attention_m,v_lead_mps,"
         "v_hat_lead_mps,attended,min_future_gap_m,warn\n";
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double v_ego = e.ego.states[i].speed_mps;
    const double v_lead = e.lead.states[i].speed_mps;
    const double v_hat = perceived.states[i].speed_mps;
    const double gap = longitudinal_gap(e.ego.states[i], e.lead.states[i],
                                        e.ego_length_m, e.lead_length_m);
    out << format_double(e.ego.time_at(i)) << ',' << format_double(gap) << ','
        << format_double(sda_warning_distance(v_ego, v_lead, p)) << ','
        << format_double(
               attention_aware_warning_distance(v_ego, v_lead, v_hat, p))
        << ',' << format_double(v_lead) << ',' << format_double(v_hat) << ','
        << (e.attention.attended[i] ? '1' : '0') << ',';
    if (hypothesized.contains(e.id, i)) {
      out << format_double(min_future_gap(hypothesized.at(e.id, i),
                                          e.ego_length_m, e.lead_length_m));
    }
    out << ',' << (trace.warn[i] ? '1' : '0') << '\n';
  }
  return out.str();
}

}  // namespace fcw

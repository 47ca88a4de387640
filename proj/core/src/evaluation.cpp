#include "fcw/evaluation.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "fcw/errors.hpp"
#include "fcw/format.hpp"

namespace fcw {

bool majority_validity(const std::vector<bool>& votes) {
  if (votes.empty()) {
    throw std::invalid_argument("majority_validity: no votes");
  }
  const auto yes = std::count(votes.begin(), votes.end(), true);
  return 2 * yes > static_cast<long>(votes.size());
}

bool classify_episode(const WarningTrace& trace) {
  return std::find(trace.warn.begin(), trace.warn.end(), true) !=
         trace.warn.end();
}

Rates rates(const ConfusionCounts& c) {
  if (c.tp + c.fn == 0) {
    throw data_error(
        "rates undefined: no warning-needed episodes (TPR denominator empty)");
  }
  if (c.tn + c.fp == 0) {
    throw data_error(
        "rates undefined: no warning-not-needed episodes (TNR denominator empty)");
  }
  Rates r;
  r.tpr = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  r.tnr = static_cast<double>(c.tn) / static_cast<double>(c.tn + c.fp);
  r.uar = (r.tpr + r.tnr) / 2.0;
  return r;
}

std::optional<double> buffer_time(const WarningTrace& trace,
                                  double deployed_time_s) {
  const auto first = first_warning_time(trace);
  if (!first.has_value()) {
    return std::nullopt;
  }
  return deployed_time_s - *first;
}

EvaluationReport evaluate_method(const std::vector<Episode>& episodes,
                                 const std::string& method_name,
                                 const MethodFn& method) {
  EvaluationReport report;
  report.method = method_name;

  std::vector<const Episode*> ordered;
  ordered.reserve(episodes.size());
  for (const auto& e : episodes) {
    ordered.push_back(&e);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const Episode* a, const Episode* b) { return a->id < b->id; });

  double buffer_sum = 0.0;
  for (const Episode* e : ordered) {
    const bool label = majority_validity(e->annotation.validity_votes);
    const WarningTrace trace = method(*e);
    const bool warned = classify_episode(trace);

    PerEpisodeResult row;
    row.id = e->id;
    row.label = label;
    row.warned = warned;
    row.first_warning_time_s = first_warning_time(trace);
    row.buffer_s = buffer_time(trace, e->deployed_fcw_time_s);
    row.preferred_times_s = e->annotation.preferred_times_s;

    if (label && warned) {
      ++report.counts.tp;
      buffer_sum += *row.buffer_s;
    } else if (label && !warned) {
      ++report.counts.fn;
    } else if (!label && warned) {
      ++report.counts.fp;
    } else {
      ++report.counts.tn;
    }
    report.per_episode.push_back(std::move(row));
  }

  const Rates r = rates(report.counts);
  report.tpr = r.tpr;
  report.tnr = r.tnr;
  report.uar = r.uar;
  report.buffer_n = report.counts.tp;
  if (report.buffer_n > 0) {
    report.buffer_mean_s = buffer_sum / static_cast<double>(report.buffer_n);
  }
  return report;
}

void write_report_csv(const EvaluationReport& report, std::ostream& out) {
  out << "id,label,warned,first_warning_time_s,buffer_s\n";
  for (const auto& row : report.per_episode) {
    out << row.id << ',' << (row.label ? '1' : '0') << ','
        << (row.warned ? '1' : '0') << ',';
    if (row.first_warning_time_s.has_value()) {
      out << format_double(*row.first_warning_time_s);
    }
    out << ',';
    if (row.buffer_s.has_value()) {
      out << format_double(*row.buffer_s);
    }
    out << '\n';
  }
}

}  // namespace fcw

#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fcw/warning.hpp"

namespace fcw {

struct ConfusionCounts {
  int tp{0};
  int fp{0};
  int tn{0};
  int fn{0};

  int total() const { return tp + fp + tn + fn; }
};

struct Rates {
  double tpr{0.0};
  double tnr{0.0};
  double uar{0.0};
};

// True iff a strict majority of votes is true; even panels tie to not-valid.
bool majority_validity(const std::vector<bool>& votes);

// Episode-level prediction: did the method warn at all. Timing is scored
// separately through the buffer.
bool classify_episode(const WarningTrace& trace);

// tpr = tp/(tp+fn), tnr = tn/(tn+fp), uar = their mean. Throws data_error
// naming the empty class when a denominator is zero.
Rates rates(const ConfusionCounts& c);

// Deployed-alert time minus the first warning time; absent without a
// warning, negative when the method warned after the deployed alert.
std::optional<double> buffer_time(const WarningTrace& trace,
                                  double deployed_time_s);

struct PerEpisodeResult {
  std::string id;
  bool label{false};
  bool warned{false};
  std::optional<double> first_warning_time_s;
  std::optional<double> buffer_s;
  // Carried through from the annotation for downstream analysis; not scored.
  std::vector<std::optional<double>> preferred_times_s;
};

struct EvaluationReport {
  std::string method;
  ConfusionCounts counts;
  double tpr{0.0};
  double tnr{0.0};
  double uar{0.0};
  // Mean buffer over correctly triggered warnings only; buffer_n == counts.tp.
  std::optional<double> buffer_mean_s;
  int buffer_n{0};
  std::vector<PerEpisodeResult> per_episode;
};

using MethodFn = std::function<WarningTrace(const Episode&)>;

// Labels come from the majority vote, predictions from classify_episode.
// Rows are ordered by episode id so reports are deterministic.
EvaluationReport evaluate_method(const std::vector<Episode>& episodes,
                                 const std::string& method_name,
                                 const MethodFn& method);

// Per-episode rows as CSV:
//   id,label,warned,first_warning_time_s,buffer_s
void write_report_csv(const EvaluationReport& report, std::ostream& out);

}  // namespace fcw

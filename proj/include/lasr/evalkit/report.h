// lasr/evalkit/report.h

// Copyright 2026  The LASR Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//       http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LASR_EVALKIT_REPORT_H_
#define LASR_EVALKIT_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lasr/evalkit/metrics.h"
#include "lasr/langsim/corpus.h"

namespace lasr::evalkit {

struct SubsetMetrics {
  std::string name;
  /// No trial falls in the subset; the metric fields are then NaN and are
  /// printed as "empty".
  bool empty = true;
  std::size_t num_classes = 0;
  std::size_t num_trials = 0;
  double accuracy = 0.0;
  double macro_f1 = 0.0;
  double eer = 0.0;
};

/// Metrics overall and on the trials whose true language is (overlap) or is
/// not (non-overlap) among the pre-training languages.
struct MetricsReport {
  SubsetMetrics overall;
  SubsetMetrics overlap;
  SubsetMetrics nonoverlap;
  std::vector<ClassStats> per_class;
};

MetricsReport SplitReport(const std::vector<ScoredTrial>& trials, const std::vector<int>& overlap,
                          const std::vector<int>& nonoverlap);
MetricsReport SplitReport(const std::vector<ScoredTrial>& trials, const langsim::Corpus& corpus);

/// Columns: utterance_id,true_label,score_0,...,score_{L-1}. Scores use
/// round-trip precision.
void WriteTrialsCsv(std::ostream& os, const std::vector<ScoredTrial>& trials);
std::vector<ScoredTrial> ReadTrialsCsv(std::istream& is);

/// Header plus rows overall, overlap, nonoverlap.
std::string MetricsCsvHeader();
std::string MetricsCsvRow(const SubsetMetrics& m);
void WriteMetricsCsv(std::ostream& os, const MetricsReport& report);
/// Aligned, human-readable table including per-class F1.
std::string FormatMetricsTable(const MetricsReport& report);

void WriteReportFiles(const std::filesystem::path& dir, const std::vector<ScoredTrial>& trials,
                      const MetricsReport& report);

}  // namespace lasr::evalkit

#endif  // LASR_EVALKIT_REPORT_H_

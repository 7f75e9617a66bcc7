// evalkit/report.cc

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

#include "lasr/evalkit/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "lasr/base/error.h"

namespace lasr::evalkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

SubsetMetrics Compute(std::string name, const std::vector<ScoredTrial>& trials,
                      std::size_t num_classes) {
  SubsetMetrics m;
  m.name = std::move(name);
  m.num_classes = num_classes;
  m.num_trials = trials.size();
  m.empty = trials.empty();
  if (m.empty) {
    m.accuracy = m.macro_f1 = m.eer = kNaN;
    return m;
  }
  m.accuracy = Accuracy(trials);
  m.macro_f1 = MacroF1(trials);
  m.eer = Eer(trials);
  return m;
}

std::string Number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string Cell(const SubsetMetrics& m, double v) { return m.empty ? "empty" : Number(v); }

}  // namespace

MetricsReport SplitReport(const std::vector<ScoredTrial>& trials, const std::vector<int>& overlap,
                          const std::vector<int>& nonoverlap) {
  ValidateTrials(trials);
  const std::set<int> o(overlap.begin(), overlap.end()), no(nonoverlap.begin(), nonoverlap.end());
  std::vector<ScoredTrial> in_o, in_no;
  for (const ScoredTrial& t : trials) {
    if (o.count(t.true_label)) in_o.push_back(t);
    else if (no.count(t.true_label)) in_no.push_back(t);
    else Fail<DomainError>("trial ", t.utterance_id, " has label ", t.true_label,
                           " outside the corpus language set");
  }
  MetricsReport r;
  r.overall = Compute("overall", trials, o.size() + no.size());
  r.overlap = Compute("overlap", in_o, o.size());
  r.nonoverlap = Compute("nonoverlap", in_no, no.size());
  r.per_class = PerClassStats(trials);
  return r;
}

MetricsReport SplitReport(const std::vector<ScoredTrial>& trials, const langsim::Corpus& corpus) {
  return SplitReport(trials, corpus.overlap_set, corpus.nonoverlap_set);
}

void WriteTrialsCsv(std::ostream& os, const std::vector<ScoredTrial>& trials) {
  const std::size_t l = trials.empty() ? 0 : trials.front().scores.size();
  os << "utterance_id,true_label";
  for (std::size_t c = 0; c < l; ++c) os << ",score_" << c;
  os << '\n';
  char buf[40];
  for (const ScoredTrial& t : trials) {
    os << t.utterance_id << ',' << t.true_label;
    for (double s : t.scores) {
      std::snprintf(buf, sizeof(buf), "%.17g", s);
      os << ',' << buf;
    }
    os << '\n';
  }
}

std::vector<ScoredTrial> ReadTrialsCsv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("utterance_id,true_label", 0) != 0)
    Fail<IoError>("trials CSV: missing header");
  const std::size_t l = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) - 1;
  std::vector<ScoredTrial> trials;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(row, field, ',')) fields.push_back(field);
    if (fields.size() != l + 2)
      Fail<IoError>("trials CSV line ", line_no, ": expected ", l + 2, " fields, got ", fields.size());
    ScoredTrial t;
    try {
      t.utterance_id = std::stoull(fields[0]);
      t.true_label = std::stoi(fields[1]);
      for (std::size_t c = 0; c < l; ++c) t.scores.push_back(std::stod(fields[c + 2]));
    } catch (const std::exception&) {
      Fail<IoError>("trials CSV line ", line_no, ": malformed number");
    }
    trials.push_back(std::move(t));
  }
  return trials;
}

std::string MetricsCsvHeader() { return "subset,classes,trials,accuracy,macro_f1,eer"; }

std::string MetricsCsvRow(const SubsetMetrics& m) {
  std::ostringstream os;
  os << m.name << ',' << m.num_classes << ',' << m.num_trials << ',' << Cell(m, m.accuracy) << ','
     << Cell(m, m.macro_f1) << ',' << Cell(m, m.eer);
  return os.str();
}

void WriteMetricsCsv(std::ostream& os, const MetricsReport& report) {
  os << MetricsCsvHeader() << '\n';
  for (const SubsetMetrics* m : {&report.overall, &report.overlap, &report.nonoverlap})
    os << MetricsCsvRow(*m) << '\n';
}

std::string FormatMetricsTable(const MetricsReport& report) {
  std::ostringstream os;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-12s %8s %7s %10s %10s %10s\n", "subset", "classes", "trials",
                "accuracy", "macro_f1", "eer");
  os << buf;
  for (const SubsetMetrics* m : {&report.overall, &report.overlap, &report.nonoverlap}) {
    std::snprintf(buf, sizeof(buf), "%-12s %8zu %7zu %10s %10s %10s\n", m->name.c_str(),
                  m->num_classes, m->num_trials, Cell(*m, m->accuracy).c_str(),
                  Cell(*m, m->macro_f1).c_str(), Cell(*m, m->eer).c_str());
    os << buf;
  }
  os << "\nper-class\n";
  std::snprintf(buf, sizeof(buf), "%-8s %8s %10s %10s %10s\n", "label", "support", "precision",
                "recall", "f1");
  os << buf;
  for (const ClassStats& c : report.per_class) {
    std::snprintf(buf, sizeof(buf), "%-8d %8zu %10.6f %10.6f %10.6f\n", c.label, c.support,
                  c.precision, c.recall, c.f1);
    os << buf;
  }
  return os.str();
}

void WriteReportFiles(const std::filesystem::path& dir, const std::vector<ScoredTrial>& trials,
                      const MetricsReport& report) {
  std::filesystem::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream os(dir / name, std::ios::binary | std::ios::trunc);
    if (!os) Fail<IoError>("cannot write '", (dir / name).string(), "'");
    return os;
  };
  {
    auto os = open("trials.csv");
    WriteTrialsCsv(os, trials);
  }
  {
    auto os = open("metrics.csv");
    WriteMetricsCsv(os, report);
  }
  auto os = open("metrics.txt");
  os << FormatMetricsTable(report);
}

}  // namespace lasr::evalkit

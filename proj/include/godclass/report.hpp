#pragma once

#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "godclass/decomposition.hpp"
#include "godclass/detection.hpp"
#include "godclass/evaluation.hpp"
#include "godclass/model.hpp"

namespace godclass::report {

// RFC 4180 quoting when the field needs it.
std::string csv_field(std::string_view text);

nlohmann::json detection_json(const CodeModel& model, const DetectionReport& report);
// One row per class: class,name,nom,cbo,ic,detected
void detection_csv(std::ostream& out, const CodeModel& model, const DetectionReport& report);
// One row per metric: metric,min,q1,median,q3,max,cutoff
void detection_summary_csv(std::ostream& out, const DetectionReport& report);

struct GraphSummary {
  std::string cls;
  std::size_t methods = 0;
  std::size_t edges = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double min_weight = 0.0;
  double max_weight = 0.0;
  ThresholdInterval interval;
};

GraphSummary summarize(const CodeModel& model, const ResponsibilityGraph& graph);

nlohmann::json decomposition_record(const CodeModel& model, const Decomposition& d);
// A single decomposition is written flat; a sweep nests its records under "sweep".
nlohmann::json decomposition_json(const GraphSummary& graph,
                                  const std::vector<nlohmann::json>& records, bool is_sweep);
// One row per threshold: class,threshold,groups,removed_edges,type,members
// where members separates groups with ';' and ids with '|'.
void decomposition_csv(std::ostream& out, const GraphSummary& graph,
                       const std::vector<nlohmann::json>& records);

struct ProducedDecomposition {
  double threshold = 0.0;
  std::vector<MethodSet> groups;
};

struct DecompositionFile {
  std::string cls;
  std::vector<ProducedDecomposition> entries;  // one per threshold
};

// Reads what decomposition_json wrote. Throws std::invalid_argument on schema errors.
DecompositionFile decomposition_from_json(const nlohmann::json& doc);

// Undirected DOT graph; edges lighter than the applied threshold are dashed.
void write_dot(std::ostream& out, const CodeModel& model, const ResponsibilityGraph& graph,
               double threshold);

nlohmann::json evaluation_json(const GroundTruth& truth, const DecompositionFile& produced,
                               const std::vector<EvaluationResult>& results);
// One row per (threshold, responsibility); the class-level F is repeated per row.
void evaluation_csv(std::ostream& out, const GroundTruth& truth, const DecompositionFile& produced,
                    const std::vector<EvaluationResult>& results);

}  // namespace godclass::report

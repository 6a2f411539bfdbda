#pragma once

#include <optional>
#include <span>
#include <vector>

#include "godclass/interaction.hpp"
#include "godclass/model.hpp"

namespace godclass {

struct ClassMetrics {
  NodeId cls{};
  std::size_t nom = 0;
  std::size_t cbo = 0;
  std::optional<double> ic;  // absent when nom < 2
};

struct FiveNumberSummary {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Linear-interpolation quantile at fractional rank (n - 1) * q of the sorted
// values. Throws std::invalid_argument on empty input or q outside [0, 1].
double quantile(std::span<const double> values, double q);
FiveNumberSummary metric_summary(std::span<const double> values);

// Mean ISS over distinct ordered method pairs of a class; absent below two methods.
std::optional<double> class_cohesion(const InteractionEngine& engine, NodeId cls);

// Number of distinct other classes linked to `cls` by a call edge in either
// direction or a declared relationship.
std::size_t class_coupling(const CodeModel& model, NodeId cls);

struct DetectionRule {
  double quartile = 0.75;
  // Absent when the corresponding distribution is empty; such a rule detects nothing.
  std::optional<double> nom_cutoff;
  std::optional<double> cbo_cutoff;
  std::optional<double> ic_cutoff;

  bool size_and_coupling_qualify(const ClassMetrics& m) const;
  bool matches(const ClassMetrics& m) const;
};

// Cut-offs are the `quartile` quantiles of the NOM and CBO distributions over
// all given classes, and of IC over the classes that have one.
DetectionRule derive_rule(std::span<const ClassMetrics> metrics, double quartile = 0.75);

struct DetectionReport {
  std::vector<ClassMetrics> metrics;  // one per analyzed class, model order
  DetectionRule rule;
  std::optional<FiveNumberSummary> nom_summary;
  std::optional<FiveNumberSummary> cbo_summary;
  std::optional<FiveNumberSummary> ic_summary;
  std::vector<NodeId> detected;
};

// Metrics for every non-library class of the model.
std::vector<ClassMetrics> compute_metrics(const InteractionEngine& engine);

DetectionReport detect_god_classes(const InteractionEngine& engine, double quartile = 0.75);
DetectionReport detect_god_classes(std::vector<ClassMetrics> metrics, double quartile = 0.75);

}  // namespace godclass

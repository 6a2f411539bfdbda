#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace godclass {

// A responsibility: a set of method ids. Kept sorted and unique.
using MethodSet = std::vector<std::string>;

MethodSet make_method_set(std::vector<std::string> ids);

struct GroundTruth {
  std::string cls;
  std::vector<MethodSet> responsibilities;
};

// {"class": id, "responsibilities": [[methodId, ...], ...]}; throws
// std::invalid_argument on schema violations.
GroundTruth ground_truth_from_json(const nlohmann::json& doc);

// Empty or overlapping responsibilities.
std::vector<std::string> check_ground_truth(const GroundTruth& truth);
// As above, plus ids that are not among the class's methods.
std::vector<std::string> check_ground_truth(const GroundTruth& truth, const MethodSet& class_methods);

// Index of the produced set with the highest Jaccard overlap with `truth`.
// Ties go to the larger intersection, then to the earlier set.
std::size_t best_match(const MethodSet& truth, std::span<const MethodSet> produced);

struct ResponsibilityScore {
  std::size_t best = 0;  // index into the produced sets
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;
};

struct EvaluationResult {
  std::vector<ResponsibilityScore> per_responsibility;
  double mean_precision = 0.0;
  double mean_recall = 0.0;
  double class_f = 0.0;  // harmonic mean of the two means
};

// Throws std::invalid_argument when the ground truth has empty or overlapping
// responsibilities, or when `produced` is empty.
EvaluationResult score(const GroundTruth& truth, std::span<const MethodSet> produced);

}  // namespace godclass

#include "godclass/evaluation.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace godclass {

namespace {

std::size_t intersection_size(const MethodSet& a, const MethodSet& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

double harmonic(double p, double r) { return p + r == 0.0 ? 0.0 : 2.0 * p * r / (p + r); }

}  // namespace

MethodSet make_method_set(std::vector<std::string> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

GroundTruth ground_truth_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("ground truth must be a JSON object");
  GroundTruth truth;
  const auto cls = doc.find("class");
  if (cls == doc.end() || !cls->is_string()) {
    throw std::invalid_argument("ground truth needs a string 'class'");
  }
  truth.cls = cls->get<std::string>();
  const auto resp = doc.find("responsibilities");
  if (resp == doc.end() || !resp->is_array()) {
    throw std::invalid_argument("ground truth needs a 'responsibilities' array");
  }
  for (const auto& group : *resp) {
    if (!group.is_array()) throw std::invalid_argument("each responsibility must be an array of ids");
    std::vector<std::string> ids;
    for (const auto& id : group) {
      if (!id.is_string()) throw std::invalid_argument("method ids must be strings");
      ids.push_back(id.get<std::string>());
    }
    truth.responsibilities.push_back(make_method_set(std::move(ids)));
  }
  return truth;
}

std::vector<std::string> check_ground_truth(const GroundTruth& truth) {
  std::vector<std::string> problems;
  if (truth.responsibilities.empty()) problems.emplace_back("no responsibilities given");
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < truth.responsibilities.size(); ++i) {
    const auto& r = truth.responsibilities[i];
    if (r.empty()) problems.push_back("responsibility " + std::to_string(i) + " is empty");
    for (const auto& id : r) {
      if (!seen.insert(id).second) problems.push_back("method '" + id + "' appears in two responsibilities");
    }
  }
  return problems;
}

std::vector<std::string> check_ground_truth(const GroundTruth& truth, const MethodSet& class_methods) {
  auto problems = check_ground_truth(truth);
  for (const auto& r : truth.responsibilities) {
    for (const auto& id : r) {
      if (!std::binary_search(class_methods.begin(), class_methods.end(), id)) {
        problems.push_back("method '" + id + "' is not a method of class '" + truth.cls + "'");
      }
    }
  }
  return problems;
}

std::size_t best_match(const MethodSet& truth, std::span<const MethodSet> produced) {
  if (produced.empty()) throw std::invalid_argument("no produced responsibilities to match");
  std::size_t best = 0;
  std::size_t best_inter = 0;
  std::size_t best_union = 1;
  for (std::size_t j = 0; j < produced.size(); ++j) {
    const std::size_t inter = intersection_size(truth, produced[j]);
    const std::size_t uni = truth.size() + produced[j].size() - inter;
    // Compare inter/uni fractions exactly by cross-multiplication.
    const std::size_t lhs = inter * best_union;
    const std::size_t rhs = best_inter * std::max<std::size_t>(uni, 1);
    const bool better = j == 0 || lhs > rhs || (lhs == rhs && inter > best_inter);
    if (better) {
      best = j;
      best_inter = inter;
      best_union = std::max<std::size_t>(uni, 1);
    }
  }
  return best;
}

EvaluationResult score(const GroundTruth& truth, std::span<const MethodSet> produced) {
  if (auto problems = check_ground_truth(truth); !problems.empty()) {
    throw std::invalid_argument("malformed ground truth: " + problems.front());
  }
  EvaluationResult result;
  for (const auto& r : truth.responsibilities) {
    ResponsibilityScore s;
    s.best = best_match(r, produced);
    const auto& match = produced[s.best];
    const auto inter = static_cast<double>(intersection_size(r, match));
    s.precision = match.empty() ? 0.0 : inter / static_cast<double>(match.size());
    s.recall = inter / static_cast<double>(r.size());
    s.f = harmonic(s.precision, s.recall);
    result.mean_precision += s.precision;
    result.mean_recall += s.recall;
    result.per_responsibility.push_back(s);
  }
  const auto count = static_cast<double>(truth.responsibilities.size());
  result.mean_precision /= count;
  result.mean_recall /= count;
  result.class_f = harmonic(result.mean_precision, result.mean_recall);
  return result;
}

}  // namespace godclass

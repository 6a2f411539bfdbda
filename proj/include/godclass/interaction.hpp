#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "godclass/model.hpp"
#include "godclass/similarity.hpp"

namespace godclass {

// Fan-in/fan-out sets per method, drawn from every call edge in the model.
class CallIndex {
 public:
  explicit CallIndex(const CodeModel& model);

  // Both sets are sorted and deduplicated.
  std::span<const NodeId> fan_in(NodeId method) const { return fan_in_.at(index(method)); }
  std::span<const NodeId> fan_out(NodeId method) const { return fan_out_.at(index(method)); }

 private:
  std::vector<std::vector<NodeId>> fan_in_;
  std::vector<std::vector<NodeId>> fan_out_;
};

// Mean similarity over the Cartesian product of two method sets; 0 when
// either set is empty.
double mean_set_similarity(const MethodSimilarity& sim, std::span<const NodeId> lhs,
                           std::span<const NodeId> rhs);

// Interaction-based similarity: fan-in mss + fan-out mss + pair similarity.
class InteractionEngine {
 public:
  InteractionEngine(const CodeModel& model, const MethodSimilarity& similarity);

  const CodeModel& model() const { return *model_; }
  const CallIndex& calls() const { return calls_; }
  const MethodSimilarity& similarity() const { return *similarity_; }

  double interaction_similarity(NodeId a, NodeId b) const;

 private:
  const CodeModel* model_;
  const MethodSimilarity* similarity_;
  CallIndex calls_;
};

// Symmetric ISS matrix over the given methods with a zero diagonal.
Eigen::MatrixXd interaction_matrix(const InteractionEngine& engine, std::span<const NodeId> methods);

}  // namespace godclass

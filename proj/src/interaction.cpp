#include "godclass/interaction.hpp"

#include <algorithm>
#include <stdexcept>

namespace godclass {

CallIndex::CallIndex(const CodeModel& model)
    : fan_in_(model.size()), fan_out_(model.size()) {
  for (const auto& c : model.calls()) {
    fan_out_[index(c.caller)].push_back(c.callee);
    fan_in_[index(c.callee)].push_back(c.caller);
  }
  auto normalize = [](std::vector<NodeId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  };
  for (auto& v : fan_in_) normalize(v);
  for (auto& v : fan_out_) normalize(v);
}

double mean_set_similarity(const MethodSimilarity& sim, std::span<const NodeId> lhs,
                           std::span<const NodeId> rhs) {
  if (lhs.empty() || rhs.empty()) return 0.0;
  double sum = 0.0;
  for (NodeId a : lhs) {
    for (NodeId b : rhs) sum += sim.similarity(a, b);
  }
  return sum / (static_cast<double>(lhs.size()) * static_cast<double>(rhs.size()));
}

InteractionEngine::InteractionEngine(const CodeModel& model, const MethodSimilarity& similarity)
    : model_(&model), similarity_(&similarity), calls_(model) {}

double InteractionEngine::interaction_similarity(NodeId a, NodeId b) const {
  if (!model_->is_method(a) || !model_->is_method(b)) {
    throw std::invalid_argument("interaction similarity is defined for methods only");
  }
  return mean_set_similarity(*similarity_, calls_.fan_in(a), calls_.fan_in(b)) +
         mean_set_similarity(*similarity_, calls_.fan_out(a), calls_.fan_out(b)) +
         similarity_->similarity(a, b);
}

Eigen::MatrixXd interaction_matrix(const InteractionEngine& engine, std::span<const NodeId> methods) {
  const auto n = static_cast<Eigen::Index>(methods.size());
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      weights(i, j) = weights(j, i) = engine.interaction_similarity(methods[i], methods[j]);
    }
  }
  return weights;
}

}  // namespace godclass

#pragma once

#include <cstdint>
#include <vector>

#include "godclass/model.hpp"

namespace godclass {

// Structural taxonomy over a code model: the containment tree with subtree
// sizes and an Euler-tour/sparse-table index answering lowest-common-ancestor
// queries in O(1) after O(N log N) preprocessing.
class Taxonomy {
 public:
  explicit Taxonomy(const CodeModel& model);

  const CodeModel& model() const { return *model_; }
  std::size_t node_count() const { return depth_.size(); }
  NodeId lca(NodeId a, NodeId b) const;
  std::uint32_t depth(NodeId n) const { return depth_.at(index(n)); }
  // Number of proper descendants.
  std::size_t descendant_count(NodeId n) const { return descendants_.at(index(n)); }

  // Probability mass of a node: max(1, descendants) / N.
  double probability(NodeId n) const;

  // -log10 P(lca(a, b)) for two methods; throws std::invalid_argument for
  // non-method ids and std::out_of_range for ids outside the model.
  double structural_similarity(NodeId a, NodeId b) const;

  // log10(N): the similarity of any method with itself.
  double max_similarity() const;

 private:
  const CodeModel* model_;
  std::vector<std::uint32_t> depth_;
  std::vector<std::size_t> descendants_;
  std::vector<std::uint32_t> first_;  // first Euler-tour position per node
  std::vector<NodeId> euler_;
  // sparse_[k][i] = Euler position with minimal depth in [i, i + 2^k)
  std::vector<std::vector<std::uint32_t>> sparse_;
};

}  // namespace godclass

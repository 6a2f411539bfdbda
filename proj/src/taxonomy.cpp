#include "godclass/taxonomy.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace godclass {

Taxonomy::Taxonomy(const CodeModel& model) : model_(&model) {
  const std::size_t n = model.size();
  depth_.assign(n, 0);
  descendants_.assign(n, 0);
  first_.assign(n, 0);
  euler_.reserve(2 * n);
  if (n == 0) return;

  struct Frame {
    NodeId node;
    std::size_t next_child;
  };
  std::vector<Frame> stack{{model.root(), 0}};
  first_[index(model.root())] = 0;
  euler_.push_back(model.root());
  while (!stack.empty()) {
    auto& top = stack.back();
    const auto kids = model.children(top.node);
    if (top.next_child < kids.size()) {
      const NodeId child = kids[top.next_child++];
      depth_[index(child)] = depth_[index(top.node)] + 1;
      first_[index(child)] = static_cast<std::uint32_t>(euler_.size());
      euler_.push_back(child);
      stack.push_back({child, 0});
    } else {
      const NodeId done = top.node;
      stack.pop_back();
      if (!stack.empty()) {
        descendants_[index(stack.back().node)] += descendants_[index(done)] + 1;
        euler_.push_back(stack.back().node);
      }
    }
  }

  const std::size_t m = euler_.size();
  const int levels = std::bit_width(m);
  sparse_.resize(levels);
  sparse_[0].resize(m);
  for (std::size_t i = 0; i < m; ++i) sparse_[0][i] = static_cast<std::uint32_t>(i);
  auto shallower = [this](std::uint32_t x, std::uint32_t y) {
    return depth_[index(euler_[y])] < depth_[index(euler_[x])] ? y : x;
  };
  for (int k = 1; k < levels; ++k) {
    const std::size_t span = std::size_t{1} << k;
    const std::size_t half = span >> 1;
    sparse_[k].resize(m - span + 1);
    for (std::size_t i = 0; i + span <= m; ++i) {
      sparse_[k][i] = shallower(sparse_[k - 1][i], sparse_[k - 1][i + half]);
    }
  }
}

NodeId Taxonomy::lca(NodeId a, NodeId b) const {
  std::uint32_t lo = first_.at(index(a));
  std::uint32_t hi = first_.at(index(b));
  if (lo > hi) std::swap(lo, hi);
  const int k = std::bit_width(hi - lo + 1u) - 1;
  const std::uint32_t x = sparse_[k][lo];
  const std::uint32_t y = sparse_[k][hi + 1 - (1u << k)];
  return depth_[index(euler_[y])] < depth_[index(euler_[x])] ? euler_[y] : euler_[x];
}

double Taxonomy::probability(NodeId n) const {
  const auto size = std::max<std::size_t>(1, descendant_count(n));
  return static_cast<double>(size) / static_cast<double>(node_count());
}

double Taxonomy::structural_similarity(NodeId a, NodeId b) const {
  if (!model_->is_method(a) || !model_->is_method(b)) {
    throw std::invalid_argument("structural similarity is defined for methods only");
  }
  return -std::log10(probability(lca(a, b)));
}

double Taxonomy::max_similarity() const {
  return std::log10(static_cast<double>(node_count()));
}

}  // namespace godclass

#include "godclass/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace godclass {

Eigen::VectorXd ResponsibilityGraph::edge_weights() const {
  Eigen::VectorXd out(static_cast<Eigen::Index>(edge_count()));
  Eigen::Index k = 0;
  const auto n = weights.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) out(k++) = weights(i, j);
  }
  return out;
}

ResponsibilityGraph make_graph(NodeId cls, std::vector<NodeId> methods, Eigen::MatrixXd weights) {
  if (methods.size() < 2) {
    throw std::invalid_argument("a responsibility graph needs at least two methods");
  }
  const auto n = static_cast<Eigen::Index>(methods.size());
  if (weights.rows() != n || weights.cols() != n) {
    throw std::invalid_argument("weight matrix does not match the method count");
  }
  ResponsibilityGraph g{cls, std::move(methods), std::move(weights)};
  const Eigen::VectorXd w = g.edge_weights();
  g.min_weight = w.minCoeff();
  g.max_weight = w.maxCoeff();
  g.mean = w.mean();
  if (w.size() > 1) {
    g.stddev = std::sqrt((w.array() - g.mean).square().sum() / static_cast<double>(w.size() - 1));
  }
  return g;
}

ResponsibilityGraph build_graph(const InteractionEngine& engine, NodeId cls) {
  const auto methods = engine.model().methods_of(cls);
  if (methods.size() < 2) {
    throw std::invalid_argument("class '" + engine.model().entity(cls).id +
                                "' has fewer than two methods");
  }
  return make_graph(cls, {methods.begin(), methods.end()}, interaction_matrix(engine, methods));
}

ThresholdInterval threshold_interval(const ResponsibilityGraph& graph) {
  // Weights are never negative, so the low end floors at zero rather than at
  // the lightest edge; a lighter cut than every edge is still a valid t.
  return {std::max(graph.mean - graph.stddev, 0.0), std::min(graph.mean + graph.stddev, graph.max_weight)};
}

std::string_view to_string(ResponsibilityType type) {
  switch (type) {
    case ResponsibilityType::A: return "A";
    case ResponsibilityType::B: return "B";
    case ResponsibilityType::C: return "C";
    case ResponsibilityType::undetermined: return "undetermined";
  }
  return "?";
}

namespace {

std::string describe_out_of_range(double t, ThresholdInterval interval) {
  std::ostringstream out;
  out << "threshold " << t << " lies outside [" << interval.low << ", " << interval.high << "]";
  return out.str();
}

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

ThresholdOutOfRange::ThresholdOutOfRange(double t, ThresholdInterval interval)
    : std::invalid_argument(describe_out_of_range(t, interval)) {}

Decomposition split(const ResponsibilityGraph& graph, double t, bool allow_outside) {
  if (!allow_outside) {
    const auto interval = threshold_interval(graph);
    if (!interval.contains(t)) throw ThresholdOutOfRange(t, interval);
  }
  const std::size_t n = graph.node_count();
  DisjointSets sets(n);
  Decomposition d;
  d.cls = graph.cls;
  d.threshold = t;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (graph.weights(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) < t) {
        ++d.removed_edges;
      } else {
        sets.unite(i, j);
      }
    }
  }
  // Representatives are the smallest member index, so groups come out in
  // order of their first method.
  std::vector<std::size_t> slot(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t rep = sets.find(i);
    if (slot[rep] == n) {
      slot[rep] = d.groups.size();
      d.groups.emplace_back();
    }
    d.groups[slot[rep]].push_back(graph.methods[i]);
  }
  return d;
}

std::vector<Decomposition> sweep(const ResponsibilityGraph& graph, double start, double end,
                                 double step) {
  if (!(step > 0.0) || !(start <= end) || !std::isfinite(start) || !std::isfinite(end)) {
    throw std::invalid_argument("sweep needs start <= end and step > 0");
  }
  const auto steps = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9));
  std::vector<Decomposition> out;
  out.reserve(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    out.push_back(split(graph, start + static_cast<double>(i) * step, true));
  }
  return out;
}

ResponsibilityType classify_type(const CodeModel& model, const Decomposition& decomposition) {
  const std::size_t k = decomposition.groups.size();
  if (k < 2) throw std::invalid_argument("type classification needs at least two groups");

  std::unordered_map<std::size_t, std::size_t> group_of;
  for (std::size_t g = 0; g < k; ++g) {
    for (NodeId m : decomposition.groups[g]) group_of.emplace(index(m), g);
  }
  auto group = [&](NodeId m) -> std::optional<std::size_t> {
    auto it = group_of.find(index(m));
    if (it == group_of.end()) return std::nullopt;
    return it->second;
  };

  std::vector<char> direct(k * k, 0);
  std::vector<char> indirect(k * k, 0);
  // Per intermediary class: groups calling into it and groups it calls.
  std::unordered_map<std::size_t, std::pair<std::vector<std::size_t>, std::vector<std::size_t>>> via;

  for (const auto& c : model.calls()) {
    const auto from = group(c.caller);
    const auto to = group(c.callee);
    if (from && to) {
      if (*from != *to) direct[*from * k + *to] = 1;
      continue;
    }
    if (from) {
      const NodeId x = model.class_of(c.callee);
      if (x != decomposition.cls) via[index(x)].first.push_back(*from);
    } else if (to) {
      const NodeId x = model.class_of(c.caller);
      if (x != decomposition.cls) via[index(x)].second.push_back(*to);
    }
  }
  for (const auto& [cls, links] : via) {
    for (std::size_t i : links.first) {
      for (std::size_t j : links.second) {
        if (i != j) indirect[i * k + j] = 1;
      }
    }
  }

  std::optional<ResponsibilityType> label;
  bool mixed = false;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const bool forward = direct[i * k + j] || indirect[i * k + j];
      const bool backward = direct[j * k + i] || indirect[j * k + i];
      if (!forward && !backward) continue;
      ResponsibilityType pair = ResponsibilityType::C;
      if (forward != backward) {
        const bool direct_one_way = forward ? direct[i * k + j] : direct[j * k + i];
        pair = direct_one_way ? ResponsibilityType::B : ResponsibilityType::C;
      }
      if (label && *label != pair) mixed = true;
      label = pair;
    }
  }
  if (!label) return ResponsibilityType::A;
  return mixed ? ResponsibilityType::undetermined : *label;
}

}  // namespace godclass

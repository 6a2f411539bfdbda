#pragma once

#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "godclass/interaction.hpp"
#include "godclass/model.hpp"

namespace godclass {

// Complete weighted graph over one class's methods. weights(i, j) is the
// edge between methods[i] and methods[j]; the diagonal is unused.
struct ResponsibilityGraph {
  NodeId cls{};
  std::vector<NodeId> methods;
  Eigen::MatrixXd weights;
  double min_weight = 0.0;
  double max_weight = 0.0;
  double mean = 0.0;
  double stddev = 0.0;  // sample (n - 1) form; 0 for a single edge

  std::size_t node_count() const { return methods.size(); }
  std::size_t edge_count() const { return methods.size() * (methods.size() - 1) / 2; }
  // Upper-triangle weights in row-major pair order.
  Eigen::VectorXd edge_weights() const;
};

// Throws std::invalid_argument for fewer than two methods or a non-square
// or mis-sized weight matrix.
ResponsibilityGraph make_graph(NodeId cls, std::vector<NodeId> methods, Eigen::MatrixXd weights);
ResponsibilityGraph build_graph(const InteractionEngine& engine, NodeId cls);

struct ThresholdInterval {
  double low = 0.0;
  double high = 0.0;

  bool contains(double t) const { return t >= low && t <= high; }
};

// [mean - sd, mean + sd], with the low end floored at zero and the high end
// capped at the heaviest edge.
ThresholdInterval threshold_interval(const ResponsibilityGraph& graph);

enum class ResponsibilityType { A, B, C, undetermined };

std::string_view to_string(ResponsibilityType type);

struct Decomposition {
  NodeId cls{};
  double threshold = 0.0;
  // Disjoint, non-empty, covering every method. Groups are ordered by their
  // first method's position in the graph; members keep graph order.
  std::vector<std::vector<NodeId>> groups;
  std::size_t removed_edges = 0;
  std::optional<ResponsibilityType> type;  // set by classify_type for >= 2 groups
};

class ThresholdOutOfRange : public std::invalid_argument {
 public:
  ThresholdOutOfRange(double t, ThresholdInterval interval);
};

// Removes every edge lighter than t and returns the connected components.
// Throws ThresholdOutOfRange when t is outside the threshold interval unless
// `allow_outside` is set.
Decomposition split(const ResponsibilityGraph& graph, double t, bool allow_outside = false);

// split() at start, start + step, ... up to end (inclusive, within 1e-9).
// Sweeps are exploratory and are not restricted to the threshold interval.
std::vector<Decomposition> sweep(const ResponsibilityGraph& graph, double start, double end,
                                 double step);

// Type A: no dependency between groups. Type B: direct calls in one direction
// only. Type C: dependencies in both directions, or only through one
// intermediary class. Pairs of groups are labelled individually; with more
// than two groups the result is undetermined when dependent pairs disagree.
// Throws std::invalid_argument for a single-group decomposition.
ResponsibilityType classify_type(const CodeModel& model, const Decomposition& decomposition);

}  // namespace godclass

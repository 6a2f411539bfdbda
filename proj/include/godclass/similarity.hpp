#pragma once

#include <cstdint>
#include <istream>
#include <unordered_map>
#include <unordered_set>

#include "godclass/model.hpp"
#include "godclass/taxonomy.hpp"

namespace godclass {

enum class TappingMode { off, clamp };

struct WeightConfig {
  double inner = 1.5;
  double generalization = 1.4;
  double aggregation = 1.3;
  double association = 1.2;
  double dependency = 1.2;
  double same_class_call = 2.0;
  TappingMode tapping = TappingMode::off;

  double weight(RelationKind kind) const;
  // Throws std::invalid_argument when any weight is below 1.
  void check() const;
};

// Applies `key = value` lines (kinds as in the model format, plus
// `same-class-call` and `tapping = off|clamp`) on top of `base`. Blank lines
// and `#` comments are ignored. Throws std::invalid_argument on bad input.
WeightConfig parse_weight_config(std::istream& in, WeightConfig base = {});
void apply_weight_override(WeightConfig& config, std::string_view key, std::string_view value);

// Weight of the strongest declared relationship between two classes, in
// either direction; 1 for unrelated classes and for a class with itself.
double relationship_weight(const WeightConfig& config, const CodeModel& model, NodeId class_a,
                           NodeId class_b);

// Scale a raw similarity by a refinement factor, optionally capped.
double refine(double raw, double factor, TappingMode tapping, double cap);

// Pairwise method similarity. Implementations must be symmetric.
class MethodSimilarity {
 public:
  virtual ~MethodSimilarity() = default;
  virtual double similarity(NodeId a, NodeId b) const = 0;
};

// Structural similarity refined by class relationships and same-class call
// dependencies. Values are computed per query; nothing is materialized.
class SimilarityEngine final : public MethodSimilarity {
 public:
  SimilarityEngine(const Taxonomy& taxonomy, WeightConfig config = {});

  const CodeModel& model() const { return taxonomy_->model(); }
  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const WeightConfig& config() const { return config_; }

  double raw(NodeId a, NodeId b) const { return taxonomy_->structural_similarity(a, b); }
  double relationship_factor(NodeId class_a, NodeId class_b) const;
  bool same_class_call(NodeId a, NodeId b) const;
  double similarity(NodeId a, NodeId b) const override;

 private:
  static std::uint64_t key(NodeId a, NodeId b);

  const Taxonomy* taxonomy_;
  WeightConfig config_;
  std::unordered_map<std::uint64_t, double> class_weights_;
  std::unordered_set<std::uint64_t> linked_methods_;
};

// Explicit similarity values keyed by unordered method pair, falling back to
// another source (if any) for pairs not in the table.
class SimilarityTable final : public MethodSimilarity {
 public:
  explicit SimilarityTable(const MethodSimilarity* fallback = nullptr) : fallback_(fallback) {}

  void set(NodeId a, NodeId b, double value);
  // Throws std::out_of_range for a missing pair without fallback.
  double similarity(NodeId a, NodeId b) const override;

 private:
  const MethodSimilarity* fallback_;
  std::unordered_map<std::uint64_t, double> values_;
};

}  // namespace godclass

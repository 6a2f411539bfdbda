#include "godclass/similarity.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>
#include <string>

namespace godclass {

namespace {

std::uint64_t unordered_key(NodeId a, NodeId b) {
  auto lo = static_cast<std::uint64_t>(index(a));
  auto hi = static_cast<std::uint64_t>(index(b));
  if (lo > hi) std::swap(lo, hi);
  return (hi << 32) | lo;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

double WeightConfig::weight(RelationKind kind) const {
  switch (kind) {
    case RelationKind::inner: return inner;
    case RelationKind::generalization: return generalization;
    case RelationKind::aggregation: return aggregation;
    case RelationKind::association: return association;
    case RelationKind::dependency: return dependency;
  }
  return 1.0;
}

void WeightConfig::check() const {
  for (double w : {inner, generalization, aggregation, association, dependency, same_class_call}) {
    if (!(w >= 1.0)) throw std::invalid_argument("weights must be >= 1");
  }
}

void apply_weight_override(WeightConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "tapping") {
    if (value == "off") {
      config.tapping = TappingMode::off;
    } else if (value == "clamp") {
      config.tapping = TappingMode::clamp;
    } else {
      throw std::invalid_argument("tapping must be 'off' or 'clamp'");
    }
    return;
  }
  double parsed = 0.0;
  const auto [end, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
  if (ec != std::errc{} || end != value.data() + value.size()) {
    throw std::invalid_argument("weight for '" + std::string(key) + "' is not a number: '" +
                                std::string(value) + "'");
  }
  if (!(parsed >= 1.0)) {
    throw std::invalid_argument("weight for '" + std::string(key) + "' must be >= 1");
  }
  if (key == "same-class-call") {
    config.same_class_call = parsed;
  } else if (auto kind = parse_relation_kind(key)) {
    switch (*kind) {
      case RelationKind::inner: config.inner = parsed; break;
      case RelationKind::generalization: config.generalization = parsed; break;
      case RelationKind::aggregation: config.aggregation = parsed; break;
      case RelationKind::association: config.association = parsed; break;
      case RelationKind::dependency: config.dependency = parsed; break;
    }
  } else {
    throw std::invalid_argument("unknown weight key '" + std::string(key) + "'");
  }
}

WeightConfig parse_weight_config(std::istream& in, WeightConfig base) {
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    try {
      apply_weight_override(base, view.substr(0, eq), view.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return base;
}

double relationship_weight(const WeightConfig& config, const CodeModel& model, NodeId class_a,
                           NodeId class_b) {
  if (!model.is_class(class_a) || !model.is_class(class_b)) {
    throw std::invalid_argument("relationship weight needs two classes");
  }
  if (class_a == class_b) return 1.0;
  double w = 1.0;
  for (const auto& r : model.relationships()) {
    if ((r.source == class_a && r.target == class_b) || (r.source == class_b && r.target == class_a)) {
      w = std::max(w, config.weight(r.kind));
    }
  }
  return w;
}

double refine(double raw, double factor, TappingMode tapping, double cap) {
  const double refined = raw * factor;
  return tapping == TappingMode::clamp ? std::min(refined, std::max(raw, cap)) : refined;
}

SimilarityEngine::SimilarityEngine(const Taxonomy& taxonomy, WeightConfig config)
    : taxonomy_(&taxonomy), config_(config) {
  config_.check();
  const auto& m = taxonomy.model();
  for (const auto& r : m.relationships()) {
    auto& w = class_weights_[key(r.source, r.target)];
    w = std::max({w, 1.0, config_.weight(r.kind)});
  }
  for (const auto& c : m.calls()) {
    if (m.class_of(c.caller) == m.class_of(c.callee)) linked_methods_.insert(key(c.caller, c.callee));
  }
}

std::uint64_t SimilarityEngine::key(NodeId a, NodeId b) { return unordered_key(a, b); }

double SimilarityEngine::relationship_factor(NodeId class_a, NodeId class_b) const {
  if (class_a == class_b) return 1.0;
  auto it = class_weights_.find(key(class_a, class_b));
  return it == class_weights_.end() ? 1.0 : it->second;
}

bool SimilarityEngine::same_class_call(NodeId a, NodeId b) const {
  return linked_methods_.contains(key(a, b));
}

double SimilarityEngine::similarity(NodeId a, NodeId b) const {
  const double base = raw(a, b);
  const auto& m = model();
  const NodeId ca = m.class_of(a);
  const NodeId cb = m.class_of(b);
  double factor = 1.0;
  if (ca != cb) {
    factor = relationship_factor(ca, cb);
  } else if (same_class_call(a, b)) {
    factor = config_.same_class_call;
  }
  return refine(base, factor, config_.tapping, taxonomy_->max_similarity());
}

void SimilarityTable::set(NodeId a, NodeId b, double value) { values_[unordered_key(a, b)] = value; }

double SimilarityTable::similarity(NodeId a, NodeId b) const {
  if (auto it = values_.find(unordered_key(a, b)); it != values_.end()) return it->second;
  if (fallback_ != nullptr) return fallback_->similarity(a, b);
  throw std::out_of_range("no similarity value for pair (" + std::to_string(index(a)) + ", " +
                          std::to_string(index(b)) + ")");
}

}  // namespace godclass

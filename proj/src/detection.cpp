#include "godclass/detection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace godclass {

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty list");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile fraction must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double rank = static_cast<double>(sorted.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

FiveNumberSummary metric_summary(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("summary of an empty list");
  return {quantile(values, 0.0), quantile(values, 0.25), quantile(values, 0.5),
          quantile(values, 0.75), quantile(values, 1.0)};
}

std::optional<double> class_cohesion(const InteractionEngine& engine, NodeId cls) {
  const auto methods = engine.model().methods_of(cls);
  const auto n = static_cast<double>(methods.size());
  if (methods.size() < 2) return std::nullopt;
  // The diagonal is zero, so the full sum counts each distinct ordered pair once.
  return interaction_matrix(engine, methods).sum() / (n * (n - 1.0));
}

std::size_t class_coupling(const CodeModel& model, NodeId cls) {
  if (!model.is_class(cls)) {
    throw std::invalid_argument("'" + model.entity(cls).id + "' is not a class");
  }
  std::unordered_set<std::size_t> partners;
  for (const auto& c : model.calls()) {
    const NodeId from = model.class_of(c.caller);
    const NodeId to = model.class_of(c.callee);
    if (from == cls && to != cls) partners.insert(index(to));
    if (to == cls && from != cls) partners.insert(index(from));
  }
  for (const auto& r : model.relationships()) {
    if (r.source == cls) partners.insert(index(r.target));
    if (r.target == cls) partners.insert(index(r.source));
  }
  return partners.size();
}

bool DetectionRule::size_and_coupling_qualify(const ClassMetrics& m) const {
  return nom_cutoff && cbo_cutoff && static_cast<double>(m.nom) > *nom_cutoff &&
         static_cast<double>(m.cbo) > *cbo_cutoff;
}

bool DetectionRule::matches(const ClassMetrics& m) const {
  return size_and_coupling_qualify(m) && m.ic && ic_cutoff && *m.ic < *ic_cutoff;
}

DetectionRule derive_rule(std::span<const ClassMetrics> metrics, double quartile) {
  if (!(quartile > 0.0 && quartile < 1.0)) {
    throw std::invalid_argument("quartile must lie strictly between 0 and 1");
  }
  DetectionRule rule;
  rule.quartile = quartile;
  std::vector<double> nom;
  std::vector<double> cbo;
  std::vector<double> ic;
  for (const auto& m : metrics) {
    nom.push_back(static_cast<double>(m.nom));
    cbo.push_back(static_cast<double>(m.cbo));
    if (m.ic) ic.push_back(*m.ic);
  }
  if (!nom.empty()) {
    rule.nom_cutoff = quantile(nom, quartile);
    rule.cbo_cutoff = quantile(cbo, quartile);
  }
  if (!ic.empty()) rule.ic_cutoff = quantile(ic, quartile);
  return rule;
}

std::vector<ClassMetrics> compute_metrics(const InteractionEngine& engine) {
  const auto& model = engine.model();

  // Coupling for all classes in one pass over the edges.
  std::vector<std::unordered_set<std::size_t>> partners(model.size());
  auto link = [&](NodeId a, NodeId b) {
    if (a == b) return;
    partners[index(a)].insert(index(b));
    partners[index(b)].insert(index(a));
  };
  for (const auto& c : model.calls()) link(model.class_of(c.caller), model.class_of(c.callee));
  for (const auto& r : model.relationships()) link(r.source, r.target);

  std::vector<ClassMetrics> out;
  for (NodeId cls : model.classes()) {
    if (model.entity(cls).library) continue;
    ClassMetrics m;
    m.cls = cls;
    m.nom = model.methods_of(cls).size();
    m.cbo = partners[index(cls)].size();
    m.ic = class_cohesion(engine, cls);
    out.push_back(m);
  }
  return out;
}

DetectionReport detect_god_classes(std::vector<ClassMetrics> metrics, double quartile) {
  DetectionReport report;
  report.rule = derive_rule(metrics, quartile);
  std::vector<double> nom;
  std::vector<double> cbo;
  std::vector<double> ic;
  for (const auto& m : metrics) {
    nom.push_back(static_cast<double>(m.nom));
    cbo.push_back(static_cast<double>(m.cbo));
    if (m.ic) ic.push_back(*m.ic);
    if (report.rule.matches(m)) report.detected.push_back(m.cls);
  }
  if (!nom.empty()) {
    report.nom_summary = metric_summary(nom);
    report.cbo_summary = metric_summary(cbo);
  }
  if (!ic.empty()) report.ic_summary = metric_summary(ic);
  report.metrics = std::move(metrics);
  return report;
}

DetectionReport detect_god_classes(const InteractionEngine& engine, double quartile) {
  return detect_god_classes(compute_metrics(engine), quartile);
}

}  // namespace godclass

#include <doctest.h>

#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "godclass/detection.hpp"

using namespace godclass;
using namespace godclass::testing;

namespace {

// Model with one class per entry of `noms`, all under one package.
ModelData classes_with(const std::vector<int>& noms) {
  ModelData d;
  d.entities.push_back(package("P"));
  for (std::size_t c = 0; c < noms.size(); ++c) {
    const std::string cls = "K" + std::to_string(c);
    d.entities.push_back(klass(cls, "P"));
    for (int i = 0; i < noms[c]; ++i) d.entities.push_back(method(cls + "_m" + std::to_string(i), cls));
  }
  return d;
}

// Brute-force IC: double loop over distinct ordered pairs.
double brute_ic(const InteractionEngine& engine, NodeId cls) {
  const auto methods = engine.model().methods_of(cls);
  double sum = 0.0;
  for (NodeId a : methods) {
    for (NodeId b : methods) {
      if (a != b) sum += engine.interaction_similarity(a, b);
    }
  }
  const double n = static_cast<double>(methods.size());
  return sum / (n * (n - 1));
}

}  // namespace

TEST_CASE("quantiles and five-number summaries") {
  const double four[] = {4, 1, 3, 2};
  CHECK(quantile(four, 0.75) == doctest::Approx(3.25));
  const double one[] = {5};
  const auto s = metric_summary(one);
  CHECK(s.min == 5);
  CHECK(s.q1 == 5);
  CHECK(s.median == 5);
  CHECK(s.q3 == 5);
  CHECK(s.max == 5);
  const double five[] = {1, 2, 3, 4, 5};
  CHECK(metric_summary(five).median == 3);
  CHECK(metric_summary(five).q1 == 2);
  CHECK_THROWS_AS(metric_summary({}), std::invalid_argument);
  CHECK_THROWS_AS(quantile(five, 1.5), std::invalid_argument);
}

TEST_CASE("cohesion from a known ISS table") {
  const auto m = CodeModel::build(classes_with({3, 2, 1}));
  SimilarityTable table;
  const auto k0 = m.methods_of(m.at("K0"));
  table.set(k0[0], k0[1], 2.0);
  table.set(k0[0], k0[2], 4.0);
  table.set(k0[1], k0[2], 6.0);
  const auto k1 = m.methods_of(m.at("K1"));
  table.set(k1[0], k1[1], 0.7);
  const InteractionEngine engine(m, table);
  CHECK(class_cohesion(engine, m.at("K0")) == doctest::Approx(4.0));
  CHECK(class_cohesion(engine, m.at("K1")) == doctest::Approx(0.7));
  CHECK_FALSE(class_cohesion(engine, m.at("K2")).has_value());
  CHECK_THROWS_AS(class_cohesion(engine, m.at("P")), std::invalid_argument);
}

TEST_CASE("coupling") {
  auto d = classes_with({2, 1, 1, 1, 1});
  d.calls = {{"K0_m0", "K1_m0"}, {"K0_m1", "K2_m0"}, {"K1_m0", "K0_m0"}, {"K0_m0", "K0_m1"}};
  d.relationships = {{"K3", "K4", RelationKind::generalization}};
  const auto m = CodeModel::build(d);
  CHECK(class_coupling(m, m.at("K0")) == 2);
  CHECK(class_coupling(m, m.at("K3")) == 1);
  CHECK(class_coupling(m, m.at("K4")) == 1);
  CHECK(class_coupling(m, m.at("K2")) == 1);

  const auto isolated = CodeModel::build(classes_with({1}));
  CHECK(class_coupling(isolated, isolated.at("K0")) == 0);
  CHECK_THROWS_AS(class_coupling(m, m.at("K0_m0")), std::invalid_argument);

  const Taxonomy tax(m);
  const SimilarityEngine sim(tax);
  const InteractionEngine engine(m, sim);
  for (const auto& metrics : compute_metrics(engine)) {
    CHECK(metrics.cbo == class_coupling(m, metrics.cls));
  }
}

TEST_CASE("rule application") {
  DetectionRule rule;
  rule.nom_cutoff = 9.0;
  rule.cbo_cutoff = 6.0;
  rule.ic_cutoff = 1.22;
  CHECK(rule.matches({NodeId{}, 22, 10, 0.9}));
  CHECK_FALSE(rule.matches({NodeId{}, 9, 10, 0.9}));   // NOM not strictly above
  CHECK_FALSE(rule.matches({NodeId{}, 22, 6, 0.9}));   // CBO not strictly above
  CHECK_FALSE(rule.matches({NodeId{}, 22, 10, 1.22})); // IC not strictly below
  CHECK_FALSE(rule.matches({NodeId{}, 22, 10, std::nullopt}));
}

TEST_CASE("identical classes are never detected") {
  std::vector<ClassMetrics> metrics(8, ClassMetrics{NodeId{}, 5, 4, 1.0});
  const auto report = detect_god_classes(metrics);
  CHECK(report.detected.empty());
  CHECK(*report.rule.nom_cutoff == 5.0);
  CHECK(*report.rule.ic_cutoff == 1.0);
}

TEST_CASE("classes without IC are excluded from the IC distribution") {
  std::vector<ClassMetrics> metrics = {
      {node_at(1), 1, 0, std::nullopt}, {node_at(2), 2, 1, 3.0}, {node_at(3), 3, 2, 1.0},
      {node_at(4), 4, 3, 2.0},          {node_at(5), 10, 9, 0.5}};
  const auto report = detect_god_classes(metrics);
  CHECK(*report.rule.ic_cutoff == doctest::Approx(quantile(std::vector<double>{3.0, 1.0, 2.0, 0.5}, 0.75)));
  REQUIRE(report.detected.size() == 1);
  CHECK(report.detected[0] == node_at(5));
  REQUIRE(report.ic_summary);
  CHECK(report.ic_summary->min == 0.5);
}

TEST_CASE("detection on random metrics matches the brute-force rule") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ClassMetrics> metrics;
    const int n = std::uniform_int_distribution<int>(1, 60)(rng);
    for (int i = 0; i < n; ++i) {
      ClassMetrics c{node_at(i), std::uniform_int_distribution<std::size_t>(0, 30)(rng),
                     std::uniform_int_distribution<std::size_t>(0, 15)(rng), std::nullopt};
      if (c.nom >= 2) c.ic = std::uniform_real_distribution<double>(0.0, 3.0)(rng);
      metrics.push_back(c);
    }
    const auto report = detect_god_classes(metrics, 0.75);
    const auto strict = detect_god_classes(metrics, 0.9);

    std::vector<double> nom, cbo, ic;
    for (const auto& c : metrics) {
      nom.push_back(static_cast<double>(c.nom));
      cbo.push_back(static_cast<double>(c.cbo));
      if (c.ic) ic.push_back(*c.ic);
    }
    std::vector<NodeId> expected;
    std::size_t qualified75 = 0, qualified90 = 0;
    for (const auto& c : metrics) {
      const bool size = c.nom > quantile(nom, 0.75) && c.cbo > quantile(cbo, 0.75);
      qualified75 += size;
      qualified90 += c.nom > quantile(nom, 0.9) && c.cbo > quantile(cbo, 0.9);
      if (size && c.ic && !ic.empty() && *c.ic < quantile(ic, 0.75)) expected.push_back(c.cls);
    }
    CHECK(report.detected == expected);
    CHECK(qualified90 <= qualified75);
    for (NodeId id : report.detected) CHECK(metrics[index(id)].nom >= 2);
    std::size_t strict_qualified = 0;
    for (const auto& c : metrics) strict_qualified += strict.rule.size_and_coupling_qualify(c);
    CHECK(strict_qualified == qualified90);
  }
}

TEST_CASE("IC matches the double-loop oracle and ignores method order") {
  auto d = interaction_fixture();
  d.relationships = {{"C1", "C3", RelationKind::association}};
  const auto m = CodeModel::build(d);
  const Taxonomy tax(m);
  const SimilarityEngine sim(tax);
  const InteractionEngine engine(m, sim);
  for (NodeId cls : m.classes()) {
    const auto ic = class_cohesion(engine, cls);
    if (!ic) continue;
    CHECK(std::abs(*ic - brute_ic(engine, cls)) <= 1e-9);
  }

  // Reversing declaration order inside C1 leaves IC unchanged.
  auto reordered = d;
  std::swap(reordered.entities[3], reordered.entities[5]);
  const auto m2 = CodeModel::build(reordered);
  const Taxonomy tax2(m2);
  const SimilarityEngine sim2(tax2);
  const InteractionEngine engine2(m2, sim2);
  CHECK(*class_cohesion(engine2, m2.at("C1")) == doctest::Approx(*class_cohesion(engine, m.at("C1"))));
}

TEST_CASE("empty model") {
  const auto m = CodeModel::build(ModelData{});
  const Taxonomy tax(m);
  const SimilarityEngine sim(tax);
  const InteractionEngine engine(m, sim);
  const auto report = detect_god_classes(engine);
  CHECK(report.metrics.empty());
  CHECK(report.detected.empty());
  CHECK_FALSE(report.rule.nom_cutoff);
}

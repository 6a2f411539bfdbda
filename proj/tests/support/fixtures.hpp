#pragma once

// Shared test fixtures, independent brute-force oracles and synthetic model
// generators. Nothing here calls into the Taxonomy or the engines, so the
// oracles stay independent of the code they check.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "godclass/model.hpp"

namespace godclass::testing {

inline Entity package(std::string id, std::optional<std::string> parent = std::nullopt) {
  return {id, EntityKind::package, id, std::move(parent), false};
}
inline Entity klass(std::string id, std::string parent) {
  return {id, EntityKind::class_, id, std::move(parent), false};
}
inline Entity method(std::string id, std::string parent) {
  return {id, EntityKind::method, id, std::move(parent), false};
}

// 21-node taxonomy: P1 { P2 { C1 {M1 M2 M3}, C2 {M4} },
//                        P3 { C3 {M5 M6 M7}, C4 {M8 M9} },
//                        P4 { C5 {M10 M11 M12} } }
// P2 has 6 descendants and P1 has 20, which fixes SS(M1,M4), SS(M1,M5),
// SS(M1,M2) and the self similarity.
inline ModelData taxonomy_fixture() {
  ModelData d;
  d.entities = {
      package("P1"),
      package("P2", "P1"),   klass("C1", "P2"),    method("M1", "C1"),  method("M2", "C1"),
      method("M3", "C1"),    klass("C2", "P2"),    method("M4", "C2"),
      package("P3", "P1"),   klass("C3", "P3"),    method("M5", "C3"),  method("M6", "C3"),
      method("M7", "C3"),    klass("C4", "P3"),    method("M8", "C4"),  method("M9", "C4"),
      package("P4", "P1"),   klass("C5", "P4"),    method("M10", "C5"), method("M11", "C5"),
      method("M12", "C5"),
  };
  return d;
}

// The taxonomy fixture plus the fan-in/fan-out configuration used for ISS:
// M4 calls M1 and M2; M1 calls M6 and M7; M2 calls M7; M3 calls M5.
inline ModelData interaction_fixture() {
  ModelData d = taxonomy_fixture();
  d.calls = {{"M4", "M1"}, {"M4", "M2"}, {"M1", "M6"}, {"M1", "M7"}, {"M2", "M7"}, {"M3", "M5"}};
  return d;
}

// Plain parent-vector tree used by the oracles. parent[root] == -1.
struct Tree {
  std::vector<int> parent;
  std::vector<EntityKind> kind;
};

// Walk-up LCA: mark every ancestor of a, then climb from b.
inline int naive_lca(const Tree& t, int a, int b) {
  std::vector<char> mark(t.parent.size(), 0);
  for (int x = a; x != -1; x = t.parent[x]) mark[x] = 1;
  for (int y = b; y != -1; y = t.parent[y]) {
    if (mark[y]) return y;
  }
  return -1;
}

// Proper descendants by testing every node's ancestor chain.
inline std::size_t naive_descendants(const Tree& t, int node) {
  std::size_t count = 0;
  for (int x = 0; x < static_cast<int>(t.parent.size()); ++x) {
    for (int y = t.parent[x]; y != -1; y = t.parent[y]) {
      if (y == node) {
        ++count;
        break;
      }
    }
  }
  return count;
}

inline double naive_similarity(const Tree& t, int a, int b) {
  const int l = naive_lca(t, a, b);
  const double size = std::max<std::size_t>(1, naive_descendants(t, l));
  return -std::log10(size / static_cast<double>(t.parent.size()));
}

// Random package/class/method tree with `n` nodes (n >= 3). Node 0 is the
// root package; ids are "n<index>".
inline Tree random_tree(std::mt19937& rng, int n) {
  Tree t;
  t.parent.push_back(-1);
  t.kind.push_back(EntityKind::package);
  std::vector<int> packages{0};
  std::vector<int> classes;
  // Guarantee at least one class with one method.
  t.parent.push_back(0);
  t.kind.push_back(EntityKind::class_);
  classes.push_back(1);
  t.parent.push_back(1);
  t.kind.push_back(EntityKind::method);
  while (static_cast<int>(t.parent.size()) < n) {
    const int id = static_cast<int>(t.parent.size());
    const int roll = std::uniform_int_distribution<int>(0, 9)(rng);
    if (roll < 2) {
      t.parent.push_back(packages[std::uniform_int_distribution<std::size_t>(0, packages.size() - 1)(rng)]);
      t.kind.push_back(EntityKind::package);
      packages.push_back(id);
    } else if (roll < 4) {
      const bool nested = !classes.empty() && roll == 3;
      t.parent.push_back(nested ? classes[std::uniform_int_distribution<std::size_t>(0, classes.size() - 1)(rng)]
                                : packages[std::uniform_int_distribution<std::size_t>(0, packages.size() - 1)(rng)]);
      t.kind.push_back(EntityKind::class_);
      classes.push_back(id);
    } else {
      t.parent.push_back(classes[std::uniform_int_distribution<std::size_t>(0, classes.size() - 1)(rng)]);
      t.kind.push_back(EntityKind::method);
    }
  }
  return t;
}

inline std::string node_name(int i) { return "n" + std::to_string(i); }

inline ModelData to_model(const Tree& t) {
  ModelData d;
  for (int i = 0; i < static_cast<int>(t.parent.size()); ++i) {
    Entity e{node_name(i), t.kind[i], node_name(i), std::nullopt, false};
    if (t.parent[i] != -1) e.parent = node_name(t.parent[i]);
    d.entities.push_back(std::move(e));
  }
  return d;
}

struct SyntheticShape {
  int packages = 405;
  int classes = 1623;
  int methods = 9005;
  int calls = 4066;
  int inner = 176;
  int generalizations = 187;
  int associations = 655;
};

// Deterministic model sized like a mid-sized Java application. Methods are
// spread unevenly so NOM varies between classes.
inline ModelData synthetic_system(const SyntheticShape& shape = {}, unsigned seed = 7) {
  std::mt19937 rng(seed);
  ModelData d;
  d.entities.push_back(package("pkg0"));
  for (int p = 1; p < shape.packages; ++p) {
    const int parent = std::uniform_int_distribution<int>(0, p - 1)(rng);
    d.entities.push_back(package("pkg" + std::to_string(p), "pkg" + std::to_string(parent)));
  }
  std::vector<std::string> class_ids;
  for (int c = 0; c < shape.classes; ++c) {
    const int p = std::uniform_int_distribution<int>(0, shape.packages - 1)(rng);
    class_ids.push_back("cls" + std::to_string(c));
    d.entities.push_back(klass(class_ids.back(), "pkg" + std::to_string(p)));
  }
  // Every class gets one method; the rest follow a skewed distribution.
  std::vector<std::string> method_ids;
  std::vector<int> owner;
  std::geometric_distribution<int> skew(0.02);
  for (int m = 0; m < shape.methods; ++m) {
    const int c = m < shape.classes ? m : std::min(skew(rng), shape.classes - 1);
    method_ids.push_back("m" + std::to_string(m));
    owner.push_back(c);
    d.entities.push_back(method(method_ids.back(), class_ids[c]));
  }
  std::vector<std::vector<int>> by_class(shape.classes);
  for (int m = 0; m < shape.methods; ++m) by_class[owner[m]].push_back(m);
  std::uniform_int_distribution<int> any_method(0, shape.methods - 1);
  for (int i = 0; i < shape.calls; ++i) {
    const int a = any_method(rng);
    int b = any_method(rng);
    const auto& siblings = by_class[owner[a]];
    if (i % 3 == 0 && siblings.size() > 1) {
      // A share of calls stays within the caller's class.
      b = siblings[std::uniform_int_distribution<std::size_t>(0, siblings.size() - 1)(rng)];
    }
    d.calls.push_back({method_ids[a], method_ids[b]});
  }
  std::uniform_int_distribution<int> any_class(0, shape.classes - 1);
  auto relate = [&](int count, RelationKind kind) {
    for (int i = 0; i < count; ++i) {
      const int a = any_class(rng);
      int b = any_class(rng);
      if (a == b) b = (b + 1) % shape.classes;
      d.relationships.push_back({class_ids[a], class_ids[b], kind});
    }
  };
  relate(shape.inner, RelationKind::inner);
  relate(shape.generalizations, RelationKind::generalization);
  relate(shape.associations, RelationKind::association);
  return d;
}

}  // namespace godclass::testing

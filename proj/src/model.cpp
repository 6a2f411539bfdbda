#include "godclass/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

namespace godclass {

using nlohmann::json;

std::string_view to_string(EntityKind kind) {
  switch (kind) {
    case EntityKind::package: return "package";
    case EntityKind::class_: return "class";
    case EntityKind::method: return "method";
  }
  return "?";
}

std::string_view to_string(RelationKind kind) {
  switch (kind) {
    case RelationKind::inner: return "inner";
    case RelationKind::generalization: return "generalization";
    case RelationKind::aggregation: return "aggregation";
    case RelationKind::association: return "association";
    case RelationKind::dependency: return "dependency";
  }
  return "?";
}

std::string_view to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::duplicate_id: return "duplicate id";
    case DiagnosticKind::dangling_id: return "dangling id";
    case DiagnosticKind::cycle: return "cycle";
    case DiagnosticKind::kind_violation: return "kind violation";
    case DiagnosticKind::self_relationship: return "self relationship";
  }
  return "?";
}

std::optional<EntityKind> parse_entity_kind(std::string_view text) {
  if (text == "package") return EntityKind::package;
  if (text == "class") return EntityKind::class_;
  if (text == "method") return EntityKind::method;
  return std::nullopt;
}

std::optional<RelationKind> parse_relation_kind(std::string_view text) {
  if (text == "inner") return RelationKind::inner;
  if (text == "generalization") return RelationKind::generalization;
  if (text == "aggregation") return RelationKind::aggregation;
  if (text == "association") return RelationKind::association;
  if (text == "dependency") return RelationKind::dependency;
  return std::nullopt;
}

namespace {

std::string summarize(const std::vector<Diagnostic>& diagnostics) {
  std::ostringstream out;
  out << diagnostics.size() << " validation error(s)";
  if (!diagnostics.empty()) {
    const auto& first = diagnostics.front();
    out << "; first: " << to_string(first.kind) << " '" << first.id << "': " << first.message;
  }
  return out.str();
}

bool parent_kind_allowed(EntityKind child, EntityKind parent) {
  switch (child) {
    case EntityKind::method: return parent == EntityKind::class_;
    case EntityKind::class_: return parent == EntityKind::package || parent == EntityKind::class_;
    case EntityKind::package: return parent == EntityKind::package;
  }
  return false;
}

}  // namespace

ValidationError::ValidationError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

std::vector<Diagnostic> validate_model(const ModelData& data) {
  std::vector<Diagnostic> out;
  std::unordered_map<std::string_view, std::size_t> position;
  position.reserve(data.entities.size());

  for (std::size_t i = 0; i < data.entities.size(); ++i) {
    const auto& e = data.entities[i];
    if (!position.emplace(e.id, i).second) {
      out.push_back({DiagnosticKind::duplicate_id, e.id, "id declared more than once"});
    }
  }

  auto lookup = [&](const std::string& id) -> const Entity* {
    auto it = position.find(id);
    return it == position.end() ? nullptr : &data.entities[it->second];
  };

  for (const auto& e : data.entities) {
    if (!e.parent) {
      if (e.kind == EntityKind::method) {
        out.push_back({DiagnosticKind::kind_violation, e.id, "method declared outside a class"});
      }
      continue;
    }
    const Entity* parent = lookup(*e.parent);
    if (parent == nullptr) {
      out.push_back({DiagnosticKind::dangling_id, *e.parent,
                     "parent of '" + e.id + "' is not declared"});
    } else if (!parent_kind_allowed(e.kind, parent->kind)) {
      out.push_back({DiagnosticKind::kind_violation, e.id,
                     std::string(to_string(e.kind)) + " cannot be nested in a " +
                         std::string(to_string(parent->kind))});
    }
  }

  // Cycle detection over parent links; 0 = unvisited, 1 = on current path, 2 = done.
  std::vector<char> state(data.entities.size(), 0);
  for (std::size_t start = 0; start < data.entities.size(); ++start) {
    if (state[start] != 0) continue;
    std::vector<std::size_t> path;
    std::size_t cur = start;
    while (true) {
      if (state[cur] == 2) break;
      if (state[cur] == 1) {
        out.push_back({DiagnosticKind::cycle, data.entities[cur].id, "parent chain loops back"});
        break;
      }
      state[cur] = 1;
      path.push_back(cur);
      const auto& parent = data.entities[cur].parent;
      if (!parent) break;
      auto it = position.find(*parent);
      if (it == position.end()) break;
      cur = it->second;
    }
    for (auto p : path) state[p] = 2;
  }

  for (const auto& r : data.relationships) {
    bool resolved = true;
    for (const auto* end : {&r.source, &r.target}) {
      const Entity* e = lookup(*end);
      if (e == nullptr) {
        out.push_back({DiagnosticKind::dangling_id, *end, "relationship endpoint is not declared"});
        resolved = false;
      } else if (e->kind != EntityKind::class_) {
        out.push_back({DiagnosticKind::kind_violation, *end, "relationship endpoint is not a class"});
      }
    }
    if (resolved && r.source == r.target) {
      out.push_back({DiagnosticKind::self_relationship, r.source,
                     std::string(to_string(r.kind)) + " relationship to itself"});
    }
  }

  for (const auto& c : data.calls) {
    for (const auto* end : {&c.caller, &c.callee}) {
      const Entity* e = lookup(*end);
      if (e == nullptr) {
        out.push_back({DiagnosticKind::dangling_id, *end, "call endpoint is not declared"});
      } else if (e->kind != EntityKind::method) {
        out.push_back({DiagnosticKind::kind_violation, *end, "call endpoint is not a method"});
      }
    }
  }
  return out;
}

namespace {

const json& require(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw ParseError(std::string(where) + ": missing field '" + key + "'");
  }
  return *it;
}

std::string require_string(const json& obj, const char* key, std::string_view where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ParseError(std::string(where) + ": field '" + key + "' must be a string");
  return v.get<std::string>();
}

const json& optional_array(const json& doc, const char* key) {
  static const json empty = json::array();
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return empty;
  if (!it->is_array()) throw ParseError(std::string("'") + key + "' must be an array");
  return *it;
}

}  // namespace

ModelData model_from_json(const json& doc) {
  if (!doc.is_object()) throw ParseError("model document must be a JSON object");
  ModelData data;

  for (const auto& item : optional_array(doc, "entities")) {
    if (!item.is_object()) throw ParseError("entity must be an object");
    Entity e;
    e.id = require_string(item, "id", "entity");
    const std::string where = "entity '" + e.id + "'";
    const auto kind_text = require_string(item, "kind", where);
    const auto kind = parse_entity_kind(kind_text);
    if (!kind) throw ParseError(where + ": unknown kind '" + kind_text + "'");
    e.kind = *kind;
    if (auto it = item.find("name"); it != item.end() && !it->is_null()) {
      if (!it->is_string()) throw ParseError(where + ": field 'name' must be a string");
      e.name = it->get<std::string>();
    } else {
      e.name = e.id;
    }
    if (auto it = item.find("parent"); it != item.end() && !it->is_null()) {
      if (!it->is_string()) throw ParseError(where + ": field 'parent' must be a string");
      e.parent = it->get<std::string>();
    }
    if (auto it = item.find("library"); it != item.end() && !it->is_null()) {
      if (!it->is_boolean()) throw ParseError(where + ": field 'library' must be a boolean");
      e.library = it->get<bool>();
    }
    data.entities.push_back(std::move(e));
  }

  for (const auto& item : optional_array(doc, "relationships")) {
    if (!item.is_object()) throw ParseError("relationship must be an object");
    ClassRelationship r;
    r.source = require_string(item, "source", "relationship");
    r.target = require_string(item, "target", "relationship");
    const auto kind_text = require_string(item, "kind", "relationship");
    const auto kind = parse_relation_kind(kind_text);
    if (!kind) throw ParseError("relationship: unknown kind '" + kind_text + "'");
    r.kind = *kind;
    data.relationships.push_back(std::move(r));
  }

  for (const auto& item : optional_array(doc, "calls")) {
    if (!item.is_object()) throw ParseError("call must be an object");
    data.calls.push_back({require_string(item, "caller", "call"), require_string(item, "callee", "call")});
  }
  return data;
}

json model_to_json(const ModelData& data) {
  json entities = json::array();
  for (const auto& e : data.entities) {
    json item = {{"id", e.id}, {"kind", to_string(e.kind)}, {"name", e.name}};
    if (e.parent) item["parent"] = *e.parent;
    if (e.library) item["library"] = true;
    entities.push_back(std::move(item));
  }
  json relationships = json::array();
  for (const auto& r : data.relationships) {
    relationships.push_back({{"source", r.source}, {"target", r.target}, {"kind", to_string(r.kind)}});
  }
  json calls = json::array();
  for (const auto& c : data.calls) {
    calls.push_back({{"caller", c.caller}, {"callee", c.callee}});
  }
  return {{"entities", std::move(entities)},
          {"relationships", std::move(relationships)},
          {"calls", std::move(calls)}};
}

ModelData read_model_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path.string() + "': " + e.what());
  }
  return model_from_json(doc);
}

CodeModel CodeModel::build(ModelData data, LoadOptions options) {
  if (auto diagnostics = validate_model(data); !diagnostics.empty()) {
    throw ValidationError(std::move(diagnostics));
  }

  std::unordered_map<std::string, std::size_t> declared;
  for (std::size_t i = 0; i < data.entities.size(); ++i) declared.emplace(data.entities[i].id, i);

  // Library-ness is inherited; library entities are dropped unless requested.
  std::vector<char> library(data.entities.size(), 0);
  std::vector<char> resolved(data.entities.size(), 0);
  auto visit = [&](auto&& self, std::size_t i) -> char {
    if (resolved[i]) return library[i];
    const auto& e = data.entities[i];
    char lib = e.library ? 1 : 0;
    if (!lib && e.parent) lib = self(self, declared.at(*e.parent));
    library[i] = lib;
    resolved[i] = 1;
    return lib;
  };
  for (std::size_t i = 0; i < data.entities.size(); ++i) visit(visit, i);

  CodeModel m;
  std::vector<Entity> kept;
  kept.reserve(data.entities.size() + 1);
  std::size_t top_level = 0;
  for (std::size_t i = 0; i < data.entities.size(); ++i) {
    if (library[i] && !options.include_libraries) continue;
    if (!data.entities[i].parent) ++top_level;
    data.entities[i].library = library[i] != 0;
    kept.push_back(std::move(data.entities[i]));
  }

  if (top_level != 1) {
    std::string root_id(kSyntheticRootId);
    while (declared.contains(root_id)) root_id += '_';
    for (auto& e : kept) {
      if (!e.parent) e.parent = root_id;
    }
    Entity root{root_id, EntityKind::package, "", std::nullopt, false};
    kept.insert(kept.begin(), std::move(root));
  }

  m.entities_ = std::move(kept);
  const std::size_t n = m.entities_.size();
  m.lookup_.reserve(n);
  for (std::size_t i = 0; i < n; ++i) m.lookup_.emplace(m.entities_[i].id, node_at(i));

  m.parents_.resize(n);
  m.children_.resize(n);
  m.methods_of_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& e = m.entities_[i];
    if (e.parent) {
      const NodeId p = m.lookup_.at(*e.parent);
      m.parents_[i] = p;
      m.children_[index(p)].push_back(node_at(i));
    } else {
      m.root_ = node_at(i);
    }
    if (e.kind == EntityKind::class_) m.classes_.push_back(node_at(i));
    if (e.kind == EntityKind::method) {
      m.methods_.push_back(node_at(i));
      m.methods_of_[index(*m.parents_[i])].push_back(node_at(i));
    }
  }

  for (const auto& r : data.relationships) {
    auto s = m.find(r.source);
    auto t = m.find(r.target);
    if (s && t) m.relationships_.push_back({*s, *t, r.kind});
  }

  std::unordered_set<std::uint64_t> seen;
  for (const auto& c : data.calls) {
    auto a = m.find(c.caller);
    auto b = m.find(c.callee);
    if (!a || !b) continue;
    const auto key = (static_cast<std::uint64_t>(index(*a)) << 32) | index(*b);
    if (seen.insert(key).second) m.calls_.push_back({*a, *b});
  }
  return m;
}

std::optional<NodeId> CodeModel::parent(NodeId id) const { return parents_.at(index(id)); }

std::optional<NodeId> CodeModel::find(std::string_view id) const {
  auto it = lookup_.find(std::string(id));
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

NodeId CodeModel::at(std::string_view id) const {
  if (auto found = find(id)) return *found;
  throw std::out_of_range("unknown entity id '" + std::string(id) + "'");
}

std::span<const NodeId> CodeModel::methods_of(NodeId cls) const {
  if (!is_class(cls)) {
    throw std::invalid_argument("'" + entity(cls).id + "' is not a class");
  }
  return methods_of_[index(cls)];
}

NodeId CodeModel::class_of(NodeId method) const {
  if (!is_method(method)) {
    throw std::invalid_argument("'" + entity(method).id + "' is not a method");
  }
  return *parents_[index(method)];
}

ModelData CodeModel::to_data() const {
  ModelData data;
  data.entities = entities_;
  for (const auto& r : relationships_) {
    data.relationships.push_back({entity(r.source).id, entity(r.target).id, r.kind});
  }
  for (const auto& c : calls_) {
    data.calls.push_back({entity(c.caller).id, entity(c.callee).id});
  }
  return data;
}

CodeModel load_model(const std::filesystem::path& path, bool include_libraries) {
  return CodeModel::build(read_model_file(path), LoadOptions{include_libraries});
}

}  // namespace godclass

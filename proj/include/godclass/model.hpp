#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace godclass {

// Dense handle into a loaded CodeModel. Values are positions in
// CodeModel::entities(), so they are only meaningful for the model that
// produced them.
enum class NodeId : std::uint32_t {};

constexpr std::size_t index(NodeId id) { return static_cast<std::size_t>(id); }
constexpr NodeId node_at(std::size_t i) { return static_cast<NodeId>(i); }

enum class EntityKind { package, class_, method };

enum class RelationKind { inner, generalization, aggregation, association, dependency };

std::string_view to_string(EntityKind kind);
std::string_view to_string(RelationKind kind);
std::optional<EntityKind> parse_entity_kind(std::string_view text);
std::optional<RelationKind> parse_relation_kind(std::string_view text);

struct Entity {
  std::string id;
  EntityKind kind = EntityKind::package;
  std::string name;
  std::optional<std::string> parent;
  bool library = false;

  friend bool operator==(const Entity&, const Entity&) = default;
};

struct ClassRelationship {
  std::string source;
  std::string target;
  RelationKind kind = RelationKind::dependency;

  friend bool operator==(const ClassRelationship&, const ClassRelationship&) = default;
};

struct CallEdge {
  std::string caller;
  std::string callee;

  friend bool operator==(const CallEdge&, const CallEdge&) = default;
};

// The model exactly as declared in a file, before validation.
struct ModelData {
  std::vector<Entity> entities;
  std::vector<ClassRelationship> relationships;
  std::vector<CallEdge> calls;

  friend bool operator==(const ModelData&, const ModelData&) = default;
};

enum class DiagnosticKind { duplicate_id, dangling_id, cycle, kind_violation, self_relationship };

std::string_view to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string id;  // offending entity or edge endpoint
  std::string message;
};

/// Checks every structural invariant of a declared model. Returns one
/// diagnostic per violation; an empty result means the model is loadable.
std::vector<Diagnostic> validate_model(const ModelData& data);

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

ModelData model_from_json(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelData& data);

// Throws ParseError for unreadable or malformed input.
ModelData read_model_file(const std::filesystem::path& path);

inline constexpr std::string_view kSyntheticRootId = "<root>";

struct LoadOptions {
  bool include_libraries = false;
};

// Immutable, validated and indexed view of a code model. There is always
// exactly one root; a synthetic package is inserted when the declared model
// has zero or several top-level entities.
class CodeModel {
 public:
  static CodeModel build(ModelData data, LoadOptions options = {});

  std::size_t size() const { return entities_.size(); }
  std::span<const Entity> entities() const { return entities_; }
  const Entity& entity(NodeId id) const { return entities_.at(index(id)); }
  EntityKind kind(NodeId id) const { return entity(id).kind; }
  NodeId root() const { return root_; }
  std::optional<NodeId> parent(NodeId id) const;
  std::span<const NodeId> children(NodeId id) const { return children_.at(index(id)); }

  std::optional<NodeId> find(std::string_view id) const;
  // Like find(), but throws std::out_of_range naming the unknown id.
  NodeId at(std::string_view id) const;

  bool is_method(NodeId id) const { return kind(id) == EntityKind::method; }
  bool is_class(NodeId id) const { return kind(id) == EntityKind::class_; }

  std::span<const NodeId> classes() const { return classes_; }
  std::span<const NodeId> methods() const { return methods_; }
  // Methods declared directly in the class (not in nested classes).
  std::span<const NodeId> methods_of(NodeId cls) const;
  // Owning class of a method.
  NodeId class_of(NodeId method) const;

  struct Relationship {
    NodeId source;
    NodeId target;
    RelationKind kind;
  };
  struct Call {
    NodeId caller;
    NodeId callee;
  };
  std::span<const Relationship> relationships() const { return relationships_; }
  // Deduplicated, in first-seen order.
  std::span<const Call> calls() const { return calls_; }

  // Serializable form; load(to_data()) reproduces this model.
  ModelData to_data() const;

 private:
  CodeModel() = default;

  std::vector<Entity> entities_;
  std::vector<std::optional<NodeId>> parents_;
  std::vector<std::vector<NodeId>> children_;
  std::unordered_map<std::string, NodeId> lookup_;
  std::vector<NodeId> classes_;
  std::vector<NodeId> methods_;
  std::vector<std::vector<NodeId>> methods_of_;
  std::vector<Relationship> relationships_;
  std::vector<Call> calls_;
  NodeId root_{};
};

CodeModel load_model(const std::filesystem::path& path, bool include_libraries = false);

}  // namespace godclass

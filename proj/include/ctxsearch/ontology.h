#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ctxsearch {

// Dense id of an ontology instance.
struct EntityId {
  std::uint32_t value = 0;
  auto operator<=>(const EntityId&) const = default;
};

// Dense id of a taxonomy class. Disjoint from EntityId.
struct ClassId {
  std::uint32_t value = 0;
  auto operator<=>(const ClassId&) const = default;
};

enum class Direction { Forward, Reverse };

enum class Gender { Male, Female, Neuter, Unknown };

struct Relation {
  std::string name;
  ClassId sourceClass;
  ClassId targetClass;
  // (subject, object) sorted by subject then object.
  std::vector<std::pair<EntityId, EntityId>> forward;
  // (object, subject) sorted by object then subject.
  std::vector<std::pair<EntityId, EntityId>> reverse;
};

// Name of the class every other class descends from.
inline constexpr std::string_view kRootClassName = "Entity";
// Optional relation from which pronoun gender is read.
inline constexpr std::string_view kGenderRelation = "has-gender";

// Class taxonomy (a DAG rooted at Entity), instance membership and typed
// relations. Immutable after loading.
//
// Ids are assigned in lexicographic order of canonical names, so loading the
// same input twice yields identical tables.
class Ontology {
 public:
  static Ontology load(const std::filesystem::path& path);
  static Ontology parse(std::istream& in, const std::string& sourceName = "<ontology>");
  static Ontology parseString(const std::string& tsv);

  std::size_t numEntities() const { return entityNames_.size(); }
  std::size_t numClasses() const { return classNames_.size(); }

  const std::string& entityName(EntityId id) const { return entityNames_.at(id.value); }
  const std::string& className(ClassId id) const { return classNames_.at(id.value); }

  // Accepts the canonical name, the name with '_' for ' ', or a
  // case-insensitive match if that is unambiguous.
  std::optional<EntityId> findEntity(std::string_view name) const;
  std::optional<ClassId> findClass(std::string_view name) const;

  ClassId rootClass() const { return root_; }

  const std::vector<ClassId>& parents(ClassId c) const { return parents_.at(c.value); }
  const std::vector<ClassId>& children(ClassId c) const { return children_.at(c.value); }
  const std::vector<ClassId>& directClasses(EntityId e) const { return memberOf_.at(e.value); }
  const std::vector<EntityId>& directMembers(ClassId c) const { return members_.at(c.value); }

  // Members of `c` or of any descendant, sorted. Throws Error for an unknown id.
  std::vector<EntityId> instancesOf(ClassId c) const;
  bool isInstanceOf(EntityId e, ClassId c) const;
  // True if `c` equals `ancestor` or descends from it.
  bool isSubclassOf(ClassId c, ClassId ancestor) const;
  // Proper descendants of `c`, sorted.
  std::vector<ClassId> descendants(ClassId c) const;
  // Every class `e` belongs to, directly or transitively, sorted.
  std::vector<ClassId> classesOf(EntityId e) const;

  const std::vector<Relation>& relations() const { return relations_; }
  const Relation* findRelation(std::string_view name) const;

  // For Forward: subject -> objects of facts with subject in `sources`;
  // Reverse swaps the roles. Throws Error for an unknown relation.
  std::map<EntityId, std::vector<EntityId>> relationImage(
      std::string_view relation, Direction direction,
      std::span<const EntityId> sources) const;

  Gender gender(EntityId e) const;

  // Stable digest of all interned tables.
  std::uint64_t fingerprint() const;

 private:
  std::vector<std::string> entityNames_;
  std::vector<std::string> classNames_;
  std::unordered_map<std::string, std::uint32_t> entityByName_;
  std::unordered_map<std::string, std::uint32_t> classByName_;
  std::unordered_map<std::string, std::uint32_t> entityByKey_;
  std::unordered_map<std::string, std::uint32_t> classByKey_;
  ClassId root_;
  std::vector<std::vector<ClassId>> parents_;
  std::vector<std::vector<ClassId>> children_;
  std::vector<std::vector<ClassId>> memberOf_;
  std::vector<std::vector<EntityId>> members_;
  std::vector<Relation> relations_;
  std::vector<Gender> genders_;
};

}  // namespace ctxsearch

template <>
struct std::hash<ctxsearch::EntityId> {
  std::size_t operator()(ctxsearch::EntityId id) const noexcept { return id.value; }
};
template <>
struct std::hash<ctxsearch::ClassId> {
  std::size_t operator()(ctxsearch::ClassId id) const noexcept { return id.value; }
};

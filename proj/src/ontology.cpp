#include "ctxsearch/ontology.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "ctxsearch/error.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

namespace {

struct Record {
  std::size_t line;
  std::vector<std::string> fields;
};

std::uint64_t fnvMix(std::uint64_t h, std::string_view bytes) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::uint64_t fnvMix(std::uint64_t h, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h ^= (v >> (8 * i)) & 0xFF;
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename Map>
std::optional<std::uint32_t> lookup(const Map& exact, const Map& byKey,
                                    std::string_view name) {
  if (auto it = exact.find(std::string(name)); it != exact.end()) return it->second;
  std::string spaced(name);
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  if (auto it = exact.find(spaced); it != exact.end()) return it->second;
  if (auto it = byKey.find(text::nameKey(name)); it != byKey.end()) return it->second;
  return std::nullopt;
}

// Keeps only keys that map to a single id.
std::unordered_map<std::string, std::uint32_t> uniqueKeys(
    const std::vector<std::string>& names) {
  std::unordered_map<std::string, std::uint32_t> result;
  std::set<std::string> ambiguous;
  for (std::uint32_t i = 0; i < names.size(); ++i) {
    auto key = text::nameKey(names[i]);
    if (!result.emplace(key, i).second) ambiguous.insert(key);
  }
  for (const auto& key : ambiguous) result.erase(key);
  return result;
}

}  // namespace

Ontology Ontology::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(path.string(), 0, "cannot open file");
  return parse(in, path.string());
}

Ontology Ontology::parseString(const std::string& tsv) {
  std::istringstream in(tsv);
  return parse(in);
}

Ontology Ontology::parse(std::istream& in, const std::string& sourceName) {
  std::vector<Record> classLines, instanceLines, relationLines, factLines;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto trimmed = text::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    auto fields = text::split(line, '\t');
    for (auto& f : fields) f = std::string(text::trim(f));
    if (fields.size() != 4) {
      throw LoadError(sourceName, lineNo,
                      "expected 4 tab-separated fields, got " +
                          std::to_string(fields.size()));
    }
    for (const auto& f : fields) {
      if (f.empty()) throw LoadError(sourceName, lineNo, "empty field");
    }
    const auto& kind = fields[0];
    if (kind == "class") {
      if (fields[2] != "subclass-of") {
        throw LoadError(sourceName, lineNo, "expected 'subclass-of', got '" + fields[2] + "'");
      }
      classLines.push_back({lineNo, std::move(fields)});
    } else if (kind == "instance") {
      if (fields[2] != "is-a") {
        throw LoadError(sourceName, lineNo, "expected 'is-a', got '" + fields[2] + "'");
      }
      instanceLines.push_back({lineNo, std::move(fields)});
    } else if (kind == "relation") {
      relationLines.push_back({lineNo, std::move(fields)});
    } else if (kind == "fact") {
      factLines.push_back({lineNo, std::move(fields)});
    } else {
      throw LoadError(sourceName, lineNo, "unknown record kind '" + kind + "'");
    }
  }

  Ontology o;

  std::set<std::string> classNames{std::string(kRootClassName)};
  for (const auto& r : classLines) classNames.insert(r.fields[1]);
  std::set<std::string> entityNames;
  for (const auto& r : instanceLines) entityNames.insert(r.fields[1]);
  for (const auto& name : entityNames) {
    if (classNames.contains(name)) {
      auto it = std::find_if(instanceLines.begin(), instanceLines.end(),
                             [&](const Record& r) { return r.fields[1] == name; });
      throw LoadError(sourceName, it->line,
                      "'" + name + "' is declared both as class and as instance");
    }
  }

  o.classNames_.assign(classNames.begin(), classNames.end());
  o.entityNames_.assign(entityNames.begin(), entityNames.end());
  for (std::uint32_t i = 0; i < o.classNames_.size(); ++i) o.classByName_[o.classNames_[i]] = i;
  for (std::uint32_t i = 0; i < o.entityNames_.size(); ++i) o.entityByName_[o.entityNames_[i]] = i;
  o.classByKey_ = uniqueKeys(o.classNames_);
  o.entityByKey_ = uniqueKeys(o.entityNames_);
  o.root_ = ClassId{o.classByName_.at(std::string(kRootClassName))};

  auto requireClass = [&](const std::string& name, std::size_t line) {
    auto it = o.classByName_.find(name);
    if (it == o.classByName_.end()) {
      throw LoadError(sourceName, line, "unknown class '" + name + "'");
    }
    return ClassId{it->second};
  };
  auto requireEntity = [&](const std::string& name, std::size_t line) {
    auto it = o.entityByName_.find(name);
    if (it == o.entityByName_.end()) {
      throw LoadError(sourceName, line, "unknown instance '" + name + "'");
    }
    return EntityId{it->second};
  };

  o.parents_.assign(o.classNames_.size(), {});
  o.children_.assign(o.classNames_.size(), {});
  std::vector<std::vector<std::size_t>> edgeLines(o.classNames_.size());
  for (const auto& r : classLines) {
    ClassId child = requireClass(r.fields[1], r.line);
    ClassId parent = requireClass(r.fields[3], r.line);
    if (child == o.root_) {
      throw LoadError(sourceName, r.line, "the root class cannot have a parent");
    }
    auto& ps = o.parents_[child.value];
    if (std::find(ps.begin(), ps.end(), parent) == ps.end()) {
      ps.push_back(parent);
      o.children_[parent.value].push_back(child);
      edgeLines[child.value].push_back(r.line);
    }
  }
  for (auto& v : o.parents_) std::sort(v.begin(), v.end());
  for (auto& v : o.children_) std::sort(v.begin(), v.end());

  // Cycle check: iterative DFS with colors over parent edges.
  {
    enum : char { White, Grey, Black };
    std::vector<char> color(o.classNames_.size(), White);
    for (std::uint32_t start = 0; start < o.classNames_.size(); ++start) {
      if (color[start] != White) continue;
      std::vector<std::pair<std::uint32_t, std::size_t>> stack{{start, 0}};
      color[start] = Grey;
      while (!stack.empty()) {
        auto& [node, next] = stack.back();
        const auto& ps = o.parents_[node];
        if (next == ps.size()) {
          color[node] = Black;
          stack.pop_back();
          continue;
        }
        std::uint32_t parent = ps[next].value;
        std::size_t edgeLine = edgeLines[node][next];
        ++next;
        if (color[parent] == Grey) {
          throw LoadError(sourceName, edgeLine,
                          "taxonomy cycle through class '" + o.classNames_[parent] + "'");
        }
        if (color[parent] == White) {
          color[parent] = Grey;
          stack.emplace_back(parent, 0);
        }
      }
    }
  }

  o.memberOf_.assign(o.entityNames_.size(), {});
  o.members_.assign(o.classNames_.size(), {});
  for (const auto& r : instanceLines) {
    EntityId e = requireEntity(r.fields[1], r.line);
    ClassId c = requireClass(r.fields[3], r.line);
    auto& cs = o.memberOf_[e.value];
    if (std::find(cs.begin(), cs.end(), c) == cs.end()) {
      cs.push_back(c);
      o.members_[c.value].push_back(e);
    }
  }
  for (auto& v : o.memberOf_) std::sort(v.begin(), v.end());
  for (auto& v : o.members_) std::sort(v.begin(), v.end());

  std::map<std::string, std::size_t> relationIndex;
  {
    std::vector<const Record*> sorted;
    for (const auto& r : relationLines) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const Record* a, const Record* b) {
      return a->fields[1] != b->fields[1] ? a->fields[1] < b->fields[1] : a->line < b->line;
    });
    for (const Record* r : sorted) {
      if (relationIndex.contains(r->fields[1])) {
        throw LoadError(sourceName, r->line, "duplicate relation '" + r->fields[1] + "'");
      }
      Relation rel;
      rel.name = r->fields[1];
      rel.sourceClass = requireClass(r->fields[2], r->line);
      rel.targetClass = requireClass(r->fields[3], r->line);
      relationIndex[rel.name] = o.relations_.size();
      o.relations_.push_back(std::move(rel));
    }
  }

  for (const auto& r : factLines) {
    auto it = relationIndex.find(r.fields[2]);
    if (it == relationIndex.end()) {
      throw LoadError(sourceName, r.line, "unknown relation '" + r.fields[2] + "'");
    }
    auto& rel = o.relations_[it->second];
    EntityId subject = requireEntity(r.fields[1], r.line);
    EntityId object = requireEntity(r.fields[3], r.line);
    std::string fact = "(" + r.fields[1] + ", " + r.fields[2] + ", " + r.fields[3] + ")";
    if (!o.isInstanceOf(subject, rel.sourceClass)) {
      throw LoadError(sourceName, r.line,
                      "fact " + fact + ": subject is not an instance of '" +
                          o.className(rel.sourceClass) + "'");
    }
    if (!o.isInstanceOf(object, rel.targetClass)) {
      throw LoadError(sourceName, r.line,
                      "fact " + fact + ": object is not an instance of '" +
                          o.className(rel.targetClass) + "'");
    }
    rel.forward.emplace_back(subject, object);
  }
  for (auto& rel : o.relations_) {
    std::sort(rel.forward.begin(), rel.forward.end());
    rel.forward.erase(std::unique(rel.forward.begin(), rel.forward.end()), rel.forward.end());
    rel.reverse.reserve(rel.forward.size());
    for (auto [s, t] : rel.forward) rel.reverse.emplace_back(t, s);
    std::sort(rel.reverse.begin(), rel.reverse.end());
  }

  o.genders_.assign(o.entityNames_.size(), Gender::Unknown);
  std::optional<ClassId> person = o.findClass("Person");
  const Relation* genderRel = o.findRelation(kGenderRelation);
  for (std::uint32_t i = 0; i < o.entityNames_.size(); ++i) {
    EntityId e{i};
    o.genders_[i] = (person && o.isInstanceOf(e, *person)) ? Gender::Unknown : Gender::Neuter;
  }
  if (genderRel != nullptr) {
    for (auto [s, t] : genderRel->forward) {
      auto value = text::toLower(o.entityName(t));
      if (value == "male") o.genders_[s.value] = Gender::Male;
      else if (value == "female") o.genders_[s.value] = Gender::Female;
      else if (value == "neuter") o.genders_[s.value] = Gender::Neuter;
    }
  }
  return o;
}

std::optional<EntityId> Ontology::findEntity(std::string_view name) const {
  if (auto id = lookup(entityByName_, entityByKey_, name)) return EntityId{*id};
  return std::nullopt;
}

std::optional<ClassId> Ontology::findClass(std::string_view name) const {
  if (auto id = lookup(classByName_, classByKey_, name)) return ClassId{*id};
  return std::nullopt;
}

std::vector<ClassId> Ontology::descendants(ClassId c) const {
  if (c.value >= classNames_.size()) throw Error("unknown class id " + std::to_string(c.value));
  std::vector<char> seen(classNames_.size(), 0);
  std::vector<ClassId> stack{c};
  std::vector<ClassId> out;
  seen[c.value] = 1;
  while (!stack.empty()) {
    ClassId cur = stack.back();
    stack.pop_back();
    for (ClassId child : children_[cur.value]) {
      if (!seen[child.value]) {
        seen[child.value] = 1;
        out.push_back(child);
        stack.push_back(child);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<EntityId> Ontology::instancesOf(ClassId c) const {
  if (c.value >= classNames_.size()) throw Error("unknown class id " + std::to_string(c.value));
  if (c == root_) {
    std::vector<EntityId> all(entityNames_.size());
    for (std::uint32_t i = 0; i < all.size(); ++i) all[i] = EntityId{i};
    return all;
  }
  std::vector<char> hit(entityNames_.size(), 0);
  auto mark = [&](ClassId cls) {
    for (EntityId e : members_[cls.value]) hit[e.value] = 1;
  };
  mark(c);
  for (ClassId d : descendants(c)) mark(d);
  std::vector<EntityId> out;
  for (std::uint32_t i = 0; i < hit.size(); ++i) {
    if (hit[i]) out.push_back(EntityId{i});
  }
  return out;
}

bool Ontology::isSubclassOf(ClassId c, ClassId ancestor) const {
  if (c == ancestor || ancestor == root_) return true;
  std::vector<char> seen(classNames_.size(), 0);
  std::vector<ClassId> stack{c};
  while (!stack.empty()) {
    ClassId cur = stack.back();
    stack.pop_back();
    for (ClassId p : parents_[cur.value]) {
      if (p == ancestor) return true;
      if (!seen[p.value]) {
        seen[p.value] = 1;
        stack.push_back(p);
      }
    }
  }
  return false;
}

bool Ontology::isInstanceOf(EntityId e, ClassId c) const {
  for (ClassId direct : memberOf_.at(e.value)) {
    if (isSubclassOf(direct, c)) return true;
  }
  return c == root_;
}

std::vector<ClassId> Ontology::classesOf(EntityId e) const {
  std::vector<char> seen(classNames_.size(), 0);
  std::vector<ClassId> stack(memberOf_.at(e.value));
  for (ClassId c : stack) seen[c.value] = 1;
  std::vector<ClassId> out = stack;
  while (!stack.empty()) {
    ClassId cur = stack.back();
    stack.pop_back();
    for (ClassId p : parents_[cur.value]) {
      if (!seen[p.value]) {
        seen[p.value] = 1;
        out.push_back(p);
        stack.push_back(p);
      }
    }
  }
  if (!seen[root_.value]) out.push_back(root_);
  std::sort(out.begin(), out.end());
  return out;
}

const Relation* Ontology::findRelation(std::string_view name) const {
  auto it = std::lower_bound(relations_.begin(), relations_.end(), name,
                             [](const Relation& r, std::string_view n) { return r.name < n; });
  if (it == relations_.end() || it->name != name) return nullptr;
  return &*it;
}

std::map<EntityId, std::vector<EntityId>> Ontology::relationImage(
    std::string_view relation, Direction direction,
    std::span<const EntityId> sources) const {
  const Relation* rel = findRelation(relation);
  if (rel == nullptr) throw Error("unknown relation '" + std::string(relation) + "'");
  const auto& pairs = direction == Direction::Forward ? rel->forward : rel->reverse;
  std::map<EntityId, std::vector<EntityId>> image;
  for (EntityId s : sources) {
    auto lo = std::lower_bound(pairs.begin(), pairs.end(), std::pair{s, EntityId{0}});
    for (auto it = lo; it != pairs.end() && it->first == s; ++it) {
      image[s].push_back(it->second);
    }
  }
  return image;
}

Gender Ontology::gender(EntityId e) const { return genders_.at(e.value); }

std::uint64_t Ontology::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  h = fnvMix(h, classNames_.size());
  for (const auto& n : classNames_) h = fnvMix(fnvMix(h, n), 0);
  h = fnvMix(h, entityNames_.size());
  for (const auto& n : entityNames_) h = fnvMix(fnvMix(h, n), 0);
  for (const auto& ps : parents_) {
    h = fnvMix(h, ps.size());
    for (ClassId p : ps) h = fnvMix(h, p.value);
  }
  for (const auto& cs : memberOf_) {
    h = fnvMix(h, cs.size());
    for (ClassId c : cs) h = fnvMix(h, c.value);
  }
  for (const auto& r : relations_) {
    h = fnvMix(fnvMix(h, r.name), 0);
    h = fnvMix(fnvMix(h, r.sourceClass.value), r.targetClass.value);
    h = fnvMix(h, r.forward.size());
    for (auto [s, t] : r.forward) h = fnvMix(fnvMix(h, s.value), t.value);
  }
  return h;
}

}  // namespace ctxsearch

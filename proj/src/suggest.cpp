#include "ctxsearch/suggest.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "ctxsearch/error.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

namespace {

bool nameMatches(std::string_view name, std::string_view typedKey) {
  if (typedKey.empty()) return true;
  std::string key = text::nameKey(name);
  if (text::startsWith(key, typedKey)) return true;
  for (std::size_t pos = key.find('_'); pos != std::string::npos; pos = key.find('_', pos + 1)) {
    if (text::startsWith(std::string_view(key).substr(pos + 1), typedKey)) return true;
  }
  return false;
}

void rankAndTrim(std::vector<Suggestion>& list, std::size_t length) {
  std::sort(list.begin(), list.end(), [](const Suggestion& a, const Suggestion& b) {
    return a.score != b.score ? a.score > b.score : a.label < b.label;
  });
  if (list.size() > length) list.resize(length);
}

bool typesMatch(const NodeRef& ref, ClassId cls, const Ontology& o) {
  if (ref.isClass()) {
    ClassId c{ref.id};
    return o.isSubclassOf(c, cls) || o.isSubclassOf(cls, c);
  }
  EntityId e{ref.id};
  if (o.isInstanceOf(e, cls)) return true;
  for (ClassId d : o.directClasses(e)) {
    if (o.isSubclassOf(cls, d)) return true;
  }
  return false;
}

struct Hits {
  std::vector<EntityId> ids;        // sorted
  std::vector<std::uint64_t> weight;  // max(1, score), aligned with ids
};

Hits hitsOf(const QueryTree& rooted, const Index& index, const Ontology& ontology,
            const EvalConfig& config) {
  Hits h;
  for (const auto& g : matchNode(rooted.root, index, ontology, config, false)) {
    h.ids.push_back(g.entity);
    h.weight.push_back(std::max<std::uint64_t>(1, g.score));
  }
  return h;
}

class Suggester {
 public:
  Suggester(const Index& index, const Ontology& ontology, const SuggestConfig& config)
      : index_(index), ontology_(ontology), config_(config) {}

  Suggestions run(const QueryTree& query, const FocusPath& focus, std::string_view typed) {
    FocusTarget target = locate(query, focus);
    Suggestions out;
    std::string typedKey = text::nameKey(text::trim(typed));

    if (target.kind == FocusKind::Node) {
      Hits hits = hitsOf(changeRoot(query, focus), index_, ontology_, config_.eval);
      if (hits.ids.empty()) return out;
      const NodeRef& ref = target.node->ref;
      if (ref.isClass()) out.classes = classes(query, focus, ClassId{ref.id}, hits, typedKey);
      out.instances = instances(ref, hits, typedKey);
      out.relations = relations(ref, hits, typedKey);
      out.words = words(hits, typed, nullptr);
    } else {
      QueryTree reduced = query;
      FocusPath owner{{focus.steps.begin(), focus.steps.end() - 1}};
      auto& node = nodeAt(reduced, owner);
      node.arcs.erase(node.arcs.begin() + static_cast<std::ptrdiff_t>(target.arcIndex));
      Hits hits = hitsOf(changeRoot(reduced, owner), index_, ontology_, config_.eval);
      if (hits.ids.empty()) return out;
      out.words = words(hits, typed, target.arc);
    }
    preselect(out, typedKey);
    return out;
  }

 private:
  std::vector<Suggestion> classes(const QueryTree& query, const FocusPath& focus, ClassId focusClass,
                                  const Hits& hits, const std::string& typedKey) {
    auto below = ontology_.descendants(focusClass);
    std::map<ClassId, std::uint64_t> weight;
    for (std::size_t i = 0; i < hits.ids.size(); ++i) {
      for (ClassId c : ontology_.classesOf(hits.ids[i])) {
        if (std::binary_search(below.begin(), below.end(), c)) weight[c] += hits.weight[i];
      }
    }
    std::vector<Suggestion> list;
    for (auto [c, w] : weight) {
      const auto& name = ontology_.className(c);
      if (!nameMatches(name, typedKey)) continue;
      Suggestion s{SuggestionKind::Class, name, w, false, {}, {}};
      // A subclass shared with a relation class only through multiple
      // inheritance can break the typing of the focus node's arcs.
      try {
        applySuggestion(query, focus, s, ontology_);
      } catch (const QueryError&) {
        continue;
      }
      list.push_back(std::move(s));
    }
    rankAndTrim(list, config_.listLength);
    return list;
  }

  std::vector<Suggestion> instances(const NodeRef& ref, const Hits& hits, const std::string& typedKey) {
    std::vector<Suggestion> list;
    for (std::size_t i = 0; i < hits.ids.size(); ++i) {
      if (!ref.isClass() && hits.ids[i].value == ref.id) continue;
      const auto& name = ontology_.entityName(hits.ids[i]);
      if (!nameMatches(name, typedKey)) continue;
      list.push_back({SuggestionKind::Instance, name, hits.weight[i], false, {}, {}});
    }
    rankAndTrim(list, config_.listLength);
    return list;
  }

  std::vector<Suggestion> relations(const NodeRef& ref, const Hits& hits, const std::string& typedKey) {
    std::vector<Suggestion> list;
    for (const auto& rel : ontology_.relations()) {
      if (!typedKey.empty() && !nameMatches(rel.name, typedKey)) continue;
      if (!typesMatch(ref, rel.sourceClass, ontology_)) continue;
      const RelationLists* lists = index_.relation(rel.name);
      if (lists == nullptr) continue;
      std::uint64_t count = 0;
      for (EntityId e : hits.ids) {
        auto lo = std::lower_bound(lists->forward.begin(), lists->forward.end(), std::pair{e, EntityId{0}});
        for (auto it = lo; it != lists->forward.end() && it->first == e; ++it) ++count;
      }
      if (count == 0) continue;
      list.push_back({SuggestionKind::Relation, rel.name, count, false, {},
                      ontology_.className(rel.targetClass)});
    }
    rankAndTrim(list, config_.listLength);
    return list;
  }

  std::vector<Suggestion> words(const Hits& hits, std::string_view typed, const Arc* arc) {
    std::vector<Suggestion> list;
    if (typed.empty() || std::isspace(static_cast<unsigned char>(typed.back()))) return list;
    auto tokens = text::split(text::trim(typed), ' ');
    std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
    if (tokens.empty()) return list;
    std::string last = text::normalizeWord(tokens.back());
    std::vector<std::string> complete;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) complete.push_back(text::normalizeWord(tokens[i]));

    std::vector<ContextList> lists{index_.fetchPrefix(last)};
    for (const auto& w : complete) lists.push_back(index_.fetchWord(w));
    std::vector<const QueryNode*> subqueries;
    if (arc != nullptr) {
      for (const auto& item : arc->items) {
        if (item.kind == OwItem::Kind::Word) lists.push_back(index_.fetchWord(item.text));
        else if (item.kind == OwItem::Kind::Prefix) lists.push_back(index_.fetchPrefix(item.text));
        else subqueries.push_back(&item.subquery.front());
      }
    }
    for (const auto& l : lists) {
      if (l.size() > config_.eval.maxIntermediatePostings) {
        throw QueryTooBroad("word suggestions for '" + std::string(typed) + "' are too broad");
      }
    }
    ContextList contexts = intersect(lists);
    for (const QueryNode* sub : subqueries) {
      std::vector<EntityId> ids;
      for (const auto& g : matchNode(*sub, index_, ontology_, config_.eval, false)) ids.push_back(g.entity);
      contexts = filterContextsByEntities(contexts, EntityList::fromIds(std::move(ids)));
    }
    EntityList allowed;
    allowed.ids = hits.ids;
    allowed.scores = hits.weight;
    contexts = filterContextsByEntities(contexts, allowed);

    auto [first, lastId] = index_.wordIdRange(last);
    std::unordered_map<std::uint64_t, std::uint64_t> counts;
    std::vector<std::uint64_t> seen;
    std::size_t i = 0;
    while (i < contexts.size()) {
      std::size_t j = i;
      seen.clear();
      for (; j < contexts.size() && contexts.contextIds[j] == contexts.contextIds[i]; ++j) {
        auto item = contexts.itemIds[j];
        if (isEntityItem(item) || item < first || item >= lastId) continue;
        if (std::find(seen.begin(), seen.end(), item) == seen.end()) seen.push_back(item);
      }
      for (auto w : seen) ++counts[w];
      i = j;
    }
    for (auto [w, count] : counts) {
      Suggestion s;
      s.kind = SuggestionKind::Word;
      s.words = complete;
      s.words.push_back(index_.word(w));
      for (std::size_t k = 0; k < s.words.size(); ++k) {
        if (k) s.label += ' ';
        s.label += s.words[k];
      }
      s.score = count;
      list.push_back(std::move(s));
    }
    rankAndTrim(list, config_.listLength);
    return list;
  }

  void preselect(Suggestions& s, const std::string& typedKey) {
    auto exact = [&](std::vector<Suggestion>& list) -> Suggestion* {
      if (typedKey.empty()) return nullptr;
      for (auto& e : list) {
        if (text::nameKey(e.label) == typedKey) return &e;
      }
      return nullptr;
    };
    auto top = [](std::vector<Suggestion>& list) -> Suggestion* {
      return list.empty() ? nullptr : &list.front();
    };
    for (auto rule : config_.preselectOrder) {
      Suggestion* pick = nullptr;
      switch (rule) {
        case PreselectRule::ExactClass: pick = exact(s.classes); break;
        case PreselectRule::ExactInstance: pick = exact(s.instances); break;
        case PreselectRule::TopRelation: pick = top(s.relations); break;
        case PreselectRule::TopWord: pick = top(s.words); break;
        case PreselectRule::TopClass: pick = top(s.classes); break;
        case PreselectRule::TopInstance: pick = top(s.instances); break;
      }
      if (pick != nullptr) {
        pick->preselected = true;
        return;
      }
    }
  }

  const Index& index_;
  const Ontology& ontology_;
  const SuggestConfig& config_;
};

}  // namespace

std::string_view kindName(SuggestionKind kind) {
  switch (kind) {
    case SuggestionKind::Word: return "word";
    case SuggestionKind::Class: return "class";
    case SuggestionKind::Instance: return "instance";
    case SuggestionKind::Relation: return "relation";
  }
  return "?";
}

const Suggestion* Suggestions::preselected() const {
  for (const auto* list : {&words, &classes, &instances, &relations}) {
    for (const auto& s : *list) {
      if (s.preselected) return &s;
    }
  }
  return nullptr;
}

Suggestions suggest(const QueryTree& query, const FocusPath& focus, std::string_view typed,
                    const Index& index, const Ontology& ontology, const SuggestConfig& config) {
  return Suggester(index, ontology, config).run(query, focus, typed);
}

AppliedSuggestion applySuggestion(const QueryTree& query, const FocusPath& focus,
                                  const Suggestion& suggestion, const Ontology& ontology) {
  AppliedSuggestion out{query, focus};
  FocusTarget target = locate(out.query, focus);
  switch (suggestion.kind) {
    case SuggestionKind::Class:
    case SuggestionKind::Instance: {
      auto& node = nodeAt(out.query, focus);
      node.ref.kind = suggestion.kind == SuggestionKind::Class ? NodeRef::Kind::Class
                                                               : NodeRef::Kind::Instance;
      node.ref.name = suggestion.label;
      break;
    }
    case SuggestionKind::Relation: {
      auto& node = nodeAt(out.query, focus);
      Arc arc;
      arc.kind = Arc::Kind::Ontology;
      arc.relation = suggestion.label;
      arc.target.push_back(QueryNode{{NodeRef::Kind::Class, suggestion.targetClass, 0}, {}});
      node.arcs.push_back(std::move(arc));
      out.focus.steps.push_back(node.arcs.size() - 1);
      break;
    }
    case SuggestionKind::Word: {
      std::vector<OwItem> items;
      for (const auto& w : suggestion.words) items.push_back({OwItem::Kind::Word, w, {}});
      if (target.kind == FocusKind::OccursWithArc) {
        FocusPath owner{{focus.steps.begin(), focus.steps.end() - 1}};
        auto& arc = nodeAt(out.query, owner).arcs[target.arcIndex];
        for (auto& item : items) {
          if (std::find(arc.items.begin(), arc.items.end(), item) == arc.items.end()) {
            arc.items.push_back(std::move(item));
          }
        }
      } else {
        Arc arc;
        arc.kind = Arc::Kind::OccursWith;
        arc.items = std::move(items);
        nodeAt(out.query, focus).arcs.push_back(std::move(arc));
      }
      out.focus = FocusPath{};
      break;
    }
  }
  resolve(out.query, ontology);
  return out;
}

}  // namespace ctxsearch

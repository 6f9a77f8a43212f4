#include "ctxsearch/entity_recognition.h"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_map>

#include "ctxsearch/text.h"

namespace ctxsearch {

namespace {

bool byPosition(const TokenAnnotation& a, const TokenAnnotation& b) {
  return std::tie(a.sentence, a.firstToken) < std::tie(b.sentence, b.firstToken);
}

std::vector<std::string> nameTokens(const std::string& name) {
  std::string spaced = name;
  std::replace(spaced.begin(), spaced.end(), '_', ' ');
  return text::tokenize(spaced);
}

struct NameForms {
  std::vector<std::string> full;
  std::vector<std::string> parts;
};

bool capitalized(const std::string& s) {
  return !s.empty() && std::isupper(static_cast<unsigned char>(s.front()));
}

Gender pronounGender(const std::string& token) {
  static const std::unordered_map<std::string, Gender> kPronouns{
      {"he", Gender::Male},     {"him", Gender::Male},     {"his", Gender::Male},
      {"himself", Gender::Male}, {"she", Gender::Female},  {"her", Gender::Female},
      {"hers", Gender::Female}, {"herself", Gender::Female}, {"it", Gender::Neuter},
      {"its", Gender::Neuter},  {"itself", Gender::Neuter}};
  auto it = kPronouns.find(text::toLower(token));
  return it == kPronouns.end() ? Gender::Unknown : it->second;
}

}  // namespace

std::vector<TokenAnnotation> recognizeEntities(const Document& document,
                                               const Ontology& ontology) {
  std::vector<TokenAnnotation> out;
  std::unordered_map<EntityId, NameForms> forms;
  auto formsOf = [&](EntityId e) -> const NameForms& {
    auto it = forms.find(e);
    if (it != forms.end()) return it->second;
    NameForms f;
    f.full = nameTokens(ontology.entityName(e));
    for (const auto& t : f.full) {
      if (capitalized(t)) f.parts.push_back(t);
    }
    return forms.emplace(e, std::move(f)).first->second;
  };

  std::size_t sentenceIndex = 0;
  for (const auto& section : document.sections) {
    // Most recently linked entity last.
    std::vector<EntityId> linked;
    for (const auto& sentence : section.sentences) {
      const auto& tokens = sentence.tokens;
      std::vector<int> linkAt(tokens.size(), -1);
      for (std::size_t l = 0; l < sentence.links.size(); ++l) {
        for (auto t = sentence.links[l].firstToken; t <= sentence.links[l].lastToken; ++t) {
          linkAt[t] = static_cast<int>(l);
        }
      }
      std::size_t i = 0;
      while (i < tokens.size()) {
        if (linkAt[i] >= 0) {
          const auto& link = sentence.links[linkAt[i]];
          out.push_back({sentenceIndex, link.firstToken, link.lastToken, link.entity,
                         Provenance::Link});
          std::erase(linked, link.entity);
          linked.push_back(link.entity);
          i = link.lastToken + 1;
          continue;
        }
        std::size_t bestLength = 0;
        std::optional<EntityId> best;
        auto fits = [&](std::size_t len) {
          if (i + len > tokens.size()) return false;
          for (std::size_t k = i; k < i + len; ++k) {
            if (linkAt[k] >= 0) return false;
          }
          return true;
        };
        for (auto it = linked.rbegin(); it != linked.rend(); ++it) {
          const auto& f = formsOf(*it);
          std::size_t len = f.full.size();
          if (len > bestLength && fits(len) &&
              std::equal(f.full.begin(), f.full.end(), tokens.begin() + i)) {
            bestLength = len;
            best = *it;
          }
          if (bestLength < 1 && fits(1) &&
              std::find(f.parts.begin(), f.parts.end(), tokens[i]) != f.parts.end()) {
            bestLength = 1;
            best = *it;
          }
        }
        if (best) {
          out.push_back({sentenceIndex, i, i + bestLength - 1, *best, Provenance::NameMatch});
          i += bestLength;
        } else {
          ++i;
        }
      }
      ++sentenceIndex;
    }
  }
  std::sort(out.begin(), out.end(), byPosition);
  return out;
}

std::vector<TokenAnnotation> resolveAnaphora(const Document& document,
                                             std::vector<TokenAnnotation> annotations,
                                             const Ontology& ontology) {
  std::sort(annotations.begin(), annotations.end(), byPosition);
  std::optional<EntityId> titleEntity;
  if (!document.title.empty()) titleEntity = ontology.findEntity(document.title);

  // Lowercased class name tokens -> class, longest names first.
  std::vector<std::pair<std::vector<std::string>, ClassId>> classNames;
  if (titleEntity) {
    for (ClassId c : ontology.classesOf(*titleEntity)) {
      if (c == ontology.rootClass()) continue;
      auto toks = nameTokens(ontology.className(c));
      for (auto& t : toks) t = text::toLower(t);
      if (!toks.empty()) classNames.emplace_back(std::move(toks), c);
    }
    std::stable_sort(classNames.begin(), classNames.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  }

  std::vector<TokenAnnotation> added;
  std::size_t next = 0;  // cursor into `annotations`
  std::size_t sentenceIndex = 0;
  for (const auto& section : document.sections) {
    std::vector<EntityId> history;
    for (const auto& sentence : section.sentences) {
      const auto& tokens = sentence.tokens;
      std::vector<char> taken(tokens.size(), 0);
      std::size_t first = next;
      while (next < annotations.size() && annotations[next].sentence == sentenceIndex) ++next;
      for (std::size_t a = first; a < next; ++a) {
        for (auto t = annotations[a].firstToken; t <= annotations[a].lastToken && t < tokens.size(); ++t) {
          taken[t] = 1;
        }
      }
      std::size_t cursor = first;
      for (std::size_t i = 0; i < tokens.size(); ++i) {
        while (cursor < next && annotations[cursor].firstToken <= i) {
          history.push_back(annotations[cursor].entity);
          ++cursor;
        }
        if (taken[i]) continue;
        Gender g = pronounGender(tokens[i]);
        if (g != Gender::Unknown) {
          for (auto it = history.rbegin(); it != history.rend(); ++it) {
            if (ontology.gender(*it) == g) {
              added.push_back({sentenceIndex, i, i, *it, Provenance::Pronoun});
              taken[i] = 1;
              history.push_back(*it);
              break;
            }
          }
          continue;
        }
        if (titleEntity && text::toLower(tokens[i]) == "the") {
          for (const auto& [toks, cls] : classNames) {
            std::size_t from = i + 1;
            if (from + toks.size() > tokens.size()) continue;
            bool match = true;
            for (std::size_t k = 0; k < toks.size() && match; ++k) {
              match = !taken[from + k] && text::toLower(tokens[from + k]) == toks[k];
            }
            if (!match) continue;
            added.push_back({sentenceIndex, from, from + toks.size() - 1, *titleEntity,
                             Provenance::TheClass});
            for (std::size_t k = 0; k < toks.size(); ++k) taken[from + k] = 1;
            history.push_back(*titleEntity);
            i = from + toks.size() - 1;
            break;
          }
        }
      }
      ++sentenceIndex;
    }
  }
  annotations.insert(annotations.end(), added.begin(), added.end());
  std::sort(annotations.begin(), annotations.end(), byPosition);
  return annotations;
}

}  // namespace ctxsearch

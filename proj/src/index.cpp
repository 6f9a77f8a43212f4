#include "ctxsearch/index.h"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "ctxsearch/error.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

namespace {

struct Hasher {
  std::uint64_t h = 1469598103934665603ULL;
  void bytes(std::string_view s) {
    word(s.size());
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
  }
  void word(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (8 * i)) & 0xFF;
      h *= 1099511628211ULL;
    }
  }
};

}  // namespace

std::vector<CharSpan> Excerpt::grayed() const {
  std::vector<CharSpan> out;
  std::uint32_t cursor = 0;
  for (const auto& span : active) {
    if (span.begin > cursor) out.push_back({cursor, span.begin});
    cursor = std::max(cursor, span.end);
  }
  if (cursor < text.size()) out.push_back({cursor, static_cast<std::uint32_t>(text.size())});
  return out;
}

std::string Index::blockKey(std::string_view word) const {
  return std::string(text::utf8Prefix(word, prefixLength_));
}

Index Index::build(std::span<const Context> contexts, const Ontology& ontology,
                   const IndexConfig& config) {
  if (config.prefixLength == 0) throw Error("prefix length must be positive");
  Index index;
  index.prefixLength_ = config.prefixLength;
  index.ontologyFingerprint_ = ontology.fingerprint();

  for (std::size_t i = 0; i < contexts.size(); ++i) {
    if (contexts[i].id != i) {
      throw Error("context stream not dense and sorted: expected id " + std::to_string(i) +
                  ", got " + std::to_string(contexts[i].id));
    }
  }

  std::vector<std::string> vocab;
  for (const auto& ctx : contexts) {
    for (const auto& item : ctx.items) {
      if (!item.isEntity()) vocab.push_back(item.word());
      else if (item.entity().value >= ontology.numEntities()) {
        throw Error("context " + std::to_string(ctx.id) + " references unknown entity id " +
                    std::to_string(item.entity().value));
      }
    }
  }
  std::sort(vocab.begin(), vocab.end());
  vocab.erase(std::unique(vocab.begin(), vocab.end()), vocab.end());
  if (vocab.size() >= kEntityBase) throw Error("word id space exhausted");
  index.vocabulary_ = std::move(vocab);
  std::unordered_map<std::string_view, std::uint64_t> wordIds;
  wordIds.reserve(index.vocabulary_.size());
  for (std::uint64_t i = 0; i < index.vocabulary_.size(); ++i) wordIds[index.vocabulary_[i]] = i;

  std::map<std::string, std::vector<Posting>> blocks;
  auto& entityBlock = blocks[std::string(kEntityBlock)];
  for (const auto& ctx : contexts) {
    std::vector<Posting> entityPostings;
    std::map<std::string_view, std::vector<Posting>> wordPostings;
    std::vector<std::string> keys;
    for (const auto& item : ctx.items) {
      if (item.isEntity()) {
        entityPostings.push_back({ctx.id, entityItem(item.entity()), 1, item.position});
      }
    }
    std::sort(entityPostings.begin(), entityPostings.end());
    for (const auto& item : ctx.items) {
      if (item.isEntity()) continue;
      auto key = text::utf8Prefix(item.word(), config.prefixLength);
      wordPostings[key].push_back({ctx.id, wordIds.at(item.word()), 1, item.position});
    }
    for (auto& [key, postings] : wordPostings) {
      std::sort(postings.begin(), postings.end());
      auto& dest = blocks[std::string(key)];
      dest.insert(dest.end(), postings.begin(), postings.end());
      dest.insert(dest.end(), entityPostings.begin(), entityPostings.end());
    }
    entityBlock.insert(entityBlock.end(), entityPostings.begin(), entityPostings.end());
  }
  for (auto& [key, postings] : blocks) {
    PrefixBlock b;
    b.prefix = key;
    b.postings.reserve(postings.size());
    for (const auto& p : postings) b.postings.push(p);
    index.blocks_.push_back(std::move(b));
  }

  for (const auto& rel : ontology.relations()) {
    index.relations_.push_back({rel.name, rel.forward, rel.reverse});
  }

  Hasher h;
  h.word(config.prefixLength);
  h.word(index.ontologyFingerprint_);
  index.excerpts_.reserve(contexts.size());
  for (const auto& ctx : contexts) {
    index.excerpts_.push_back(
        {ctx.id, ctx.docIndex, ctx.docId, ctx.title, ctx.sentence, ctx.text, ctx.active});
    h.word(ctx.id);
    h.bytes(ctx.docId);
    h.word(ctx.sentence);
    h.bytes(ctx.text);
    for (const auto& item : ctx.items) {
      h.word(item.position);
      if (item.isEntity()) h.word(entityItem(item.entity()));
      else h.bytes(item.word());
    }
  }
  index.generation_ = h.h;
  return index;
}

const PrefixBlock* Index::block(std::string_view key) const {
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), key,
                             [](const PrefixBlock& b, std::string_view k) { return b.prefix < k; });
  if (it == blocks_.end() || it->prefix != key) return nullptr;
  return &*it;
}

const ContextList& Index::entityOccurrences() const {
  const PrefixBlock* b = block(kEntityBlock);
  return b ? b->postings : emptyList_;
}

ContextList Index::filterWords(const ContextList& list, std::uint64_t first,
                               std::uint64_t last) const {
  ContextList out;
  std::size_t i = 0;
  while (i < list.size()) {
    std::size_t j = i;
    bool any = false;
    while (j < list.size() && list.contextIds[j] == list.contextIds[i]) {
      auto item = list.itemIds[j];
      if (!isEntityItem(item) && item >= first && item < last) any = true;
      ++j;
    }
    if (any) {
      for (std::size_t k = i; k < j; ++k) {
        auto item = list.itemIds[k];
        if (isEntityItem(item) || (item >= first && item < last)) out.push(list[k]);
      }
    }
    i = j;
  }
  return out;
}

ContextList Index::fetchPrefix(std::string_view rawPrefix) const {
  std::string prefix = text::normalizeWord(rawPrefix);
  if (prefix.empty()) return {};
  std::size_t length = text::utf8Length(prefix);
  if (length >= prefixLength_) {
    const PrefixBlock* b = block(blockKey(prefix));
    if (b == nullptr) return {};
    if (length == prefixLength_) return b->postings;
    auto [first, last] = wordIdRange(prefix);
    return filterWords(b->postings, first, last);
  }
  std::vector<ContextList> parts;
  auto it = std::lower_bound(blocks_.begin(), blocks_.end(), prefix,
                             [](const PrefixBlock& b, const std::string& k) { return b.prefix < k; });
  for (; it != blocks_.end() && text::startsWith(it->prefix, prefix); ++it) {
    parts.push_back(it->postings);
  }
  if (parts.empty()) return {};
  return merge(parts);
}

ContextList Index::fetchWord(std::string_view rawWord) const {
  std::string w = text::normalizeWord(rawWord);
  auto id = wordId(w);
  if (!id) return {};
  const PrefixBlock* b = block(blockKey(w));
  if (b == nullptr) return {};
  return filterWords(b->postings, *id, *id + 1);
}

ContextList Index::fetchBlock(std::string_view prefixOrWord) const {
  if (!prefixOrWord.empty() && prefixOrWord.back() == '*') {
    return fetchPrefix(prefixOrWord.substr(0, prefixOrWord.size() - 1));
  }
  return fetchWord(prefixOrWord);
}

Excerpt Index::excerpt(std::uint64_t contextId) const {
  if (contextId >= excerpts_.size()) {
    throw Error("unknown context id " + std::to_string(contextId));
  }
  return excerpts_[contextId];
}

std::optional<std::uint64_t> Index::wordId(std::string_view word) const {
  auto it = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), word);
  if (it == vocabulary_.end() || *it != word) return std::nullopt;
  return static_cast<std::uint64_t>(it - vocabulary_.begin());
}

std::pair<std::uint64_t, std::uint64_t> Index::wordIdRange(std::string_view prefix) const {
  auto lo = std::lower_bound(vocabulary_.begin(), vocabulary_.end(), prefix);
  auto hi = std::partition_point(lo, vocabulary_.end(), [&](const std::string& w) {
    return text::startsWith(w, prefix);
  });
  return {static_cast<std::uint64_t>(lo - vocabulary_.begin()),
          static_cast<std::uint64_t>(hi - vocabulary_.begin())};
}

const RelationLists* Index::relation(std::string_view name) const {
  auto it = std::lower_bound(relations_.begin(), relations_.end(), name,
                             [](const RelationLists& r, std::string_view n) { return r.name < n; });
  if (it == relations_.end() || it->name != name) return nullptr;
  return &*it;
}

IndexStats Index::stats() const {
  IndexStats s;
  s.contexts = excerpts_.size();
  s.words = vocabulary_.size();
  for (const auto& b : blocks_) {
    if (b.prefix == kEntityBlock) {
      std::vector<std::uint64_t> ids(b.postings.itemIds);
      std::sort(ids.begin(), ids.end());
      s.entities = static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
      continue;
    }
    ++s.blocks;
    s.postings += b.postings.size();
  }
  return s;
}

bool Index::validate(std::string* problem) const {
  auto fail = [&](const std::string& msg) {
    if (problem) *problem = msg;
    return false;
  };
  for (const auto& b : blocks_) {
    if (!b.postings.isSorted()) return fail("block '" + b.prefix + "' not sorted");
    if (b.prefix == kEntityBlock) {
      for (auto item : b.postings.itemIds) {
        if (!isEntityItem(item)) return fail("word posting in the entity block");
      }
      continue;
    }
    std::size_t i = 0;
    const auto& list = b.postings;
    while (i < list.size()) {
      std::size_t j = i;
      bool hasWord = false;
      while (j < list.size() && list.contextIds[j] == list.contextIds[i]) {
        auto item = list.itemIds[j];
        if (!isEntityItem(item)) {
          hasWord = true;
          if (blockKey(vocabulary_.at(item)) != b.prefix) {
            return fail("word '" + vocabulary_.at(item) + "' in block '" + b.prefix + "'");
          }
        }
        ++j;
      }
      if (!hasWord) {
        return fail("context " + std::to_string(list.contextIds[i]) + " in block '" + b.prefix +
                    "' has entity postings but no word posting");
      }
      i = j;
    }
  }
  return true;
}

}  // namespace ctxsearch

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxsearch/context.h"
#include "ctxsearch/context_list.h"
#include "ctxsearch/ontology.h"

namespace ctxsearch {

struct IndexConfig {
  // Words are grouped into blocks by their first `prefixLength` code points;
  // shorter words get a block of their own.
  std::size_t prefixLength = 4;
};

struct PrefixBlock {
  std::string prefix;
  ContextList postings;
};

// Forward and reverse fact pairs of one relation, both sorted.
struct RelationLists {
  std::string name;
  std::vector<std::pair<EntityId, EntityId>> forward;
  std::vector<std::pair<EntityId, EntityId>> reverse;
};

struct Excerpt {
  std::uint64_t contextId = 0;
  std::uint64_t docIndex = 0;
  std::string docId;
  std::string title;
  std::uint64_t sentence = 0;
  std::string text;
  std::vector<CharSpan> active;

  // Complement of `active` within the text.
  std::vector<CharSpan> grayed() const;
};

struct IndexStats {
  std::size_t contexts = 0;
  std::size_t postings = 0;
  std::size_t blocks = 0;
  std::size_t entities = 0;
  std::size_t words = 0;
};

// Context-list index: one block of postings per word prefix, where a block
// holds the word occurrences and every entity occurrence in the same
// contexts. Also carries the relation lists and the excerpt store.
// Immutable once built or read.
class Index {
 public:
  // Key of the block holding every entity posting of every context.
  static constexpr std::string_view kEntityBlock = "";

  // Context ids must be 0, 1, 2, ... in order.
  static Index build(std::span<const Context> contexts, const Ontology& ontology,
                     const IndexConfig& config = {});

  void write(const std::filesystem::path& directory) const;
  static Index read(const std::filesystem::path& directory);

  // "edib*" fetches a prefix, anything else an exact word.
  ContextList fetchBlock(std::string_view prefixOrWord) const;
  ContextList fetchPrefix(std::string_view prefix) const;
  ContextList fetchWord(std::string_view word) const;
  const ContextList& entityOccurrences() const;

  // Raw block for a stored key, nullptr if absent.
  const PrefixBlock* block(std::string_view key) const;
  const std::vector<PrefixBlock>& blocks() const { return blocks_; }

  Excerpt excerpt(std::uint64_t contextId) const;

  std::optional<std::uint64_t> wordId(std::string_view word) const;
  const std::string& word(std::uint64_t wordId) const { return vocabulary_.at(wordId); }
  // Ids of the words starting with `prefix`, as [first, last).
  std::pair<std::uint64_t, std::uint64_t> wordIdRange(std::string_view prefix) const;
  const std::vector<std::string>& vocabulary() const { return vocabulary_; }

  const RelationLists* relation(std::string_view name) const;
  const std::vector<RelationLists>& relations() const { return relations_; }

  std::uint64_t generation() const { return generation_; }
  std::uint64_t ontologyFingerprint() const { return ontologyFingerprint_; }
  std::size_t prefixLength() const { return prefixLength_; }
  std::size_t numContexts() const { return excerpts_.size(); }
  IndexStats stats() const;

  // Checks the sort and entity co-occurrence invariants of every block.
  bool validate(std::string* problem = nullptr) const;

  std::string blockKey(std::string_view word) const;

 private:
  friend class IndexFileIo;

  ContextList filterWords(const ContextList& block, std::uint64_t first, std::uint64_t last) const;

  std::uint64_t generation_ = 0;
  std::uint64_t ontologyFingerprint_ = 0;
  std::size_t prefixLength_ = 4;
  std::vector<std::string> vocabulary_;
  std::vector<PrefixBlock> blocks_;  // sorted by prefix; the entity block first
  std::vector<RelationLists> relations_;
  std::vector<Excerpt> excerpts_;
  ContextList emptyList_;
};

}  // namespace ctxsearch

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "ctxsearch/ontology.h"

namespace ctxsearch {

// Position (1-based, within the context) plus either a normalized word or an
// entity reference.
struct ContextItem {
  std::uint32_t position = 0;
  std::variant<std::string, EntityId> value;

  bool isEntity() const { return std::holds_alternative<EntityId>(value); }
  const std::string& word() const { return std::get<std::string>(value); }
  EntityId entity() const { return std::get<EntityId>(value); }
  bool operator==(const ContextItem&) const = default;
};

// Byte range [begin, end) into a context's source text.
struct CharSpan {
  std::uint32_t begin = 0;
  std::uint32_t end = 0;
  bool operator==(const CharSpan&) const = default;
};

// The unit within which co-occurrence counts: a part of a sentence (or a
// whole sentence/section for the baseline modes).
struct Context {
  std::uint64_t id = 0;
  std::uint64_t docIndex = 0;
  std::string docId;
  std::string title;
  std::uint64_t sentence = 0;
  std::vector<ContextItem> items;
  // Source text shown as excerpt, and the parts of it that belong to this
  // context.
  std::string text;
  std::vector<CharSpan> active;

  bool operator==(const Context&) const = default;
};

}  // namespace ctxsearch

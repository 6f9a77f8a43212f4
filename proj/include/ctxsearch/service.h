#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "ctxsearch/evaluator.h"
#include "ctxsearch/index.h"
#include "ctxsearch/ontology.h"
#include "ctxsearch/suggest.h"
#include "json.hpp"

namespace ctxsearch {

struct ServiceConfig {
  std::size_t pageSize = 20;
  // Evidence items shown per (entity, root arc) unless the request asks for more.
  std::size_t evidencePerArc = 3;
  SuggestConfig suggest;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  // Seconds, sent as Retry-After.
  std::optional<int> retryAfter;
};

// Request handlers over one immutable index. All state lives in the request:
//   search:  {"q": string | query JSON, "page": n, "evidence": n}
//   suggest: {"q", "focus": "0.1", "typed": text}
//   excerpt: {"cid": n}
// An empty or missing q means class:Entity. Safe for concurrent use.
class SearchService {
 public:
  SearchService(Index index, Ontology ontology, ServiceConfig config = {});

  ApiResponse search(const nlohmann::json& request) const;
  ApiResponse suggest(const nlohmann::json& request) const;
  ApiResponse excerpt(const nlohmann::json& request) const;
  ApiResponse meta() const;

  const Index& index() const { return index_; }
  const Ontology& ontology() const { return ontology_; }
  const ServiceConfig& config() const { return config_; }

 private:
  template <typename F>
  ApiResponse guarded(F&& handler) const;
  QueryTree queryOf(const nlohmann::json& request) const;
  nlohmann::json excerptJson(std::uint64_t contextId) const;
  nlohmann::json entityJson(EntityId e) const;

  Index index_;
  Ontology ontology_;
  ServiceConfig config_;
};

}  // namespace ctxsearch

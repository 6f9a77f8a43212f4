#include "ctxsearch/service.h"

#include <chrono>

#include "ctxsearch/error.h"
#include "ctxsearch/query.h"
#include "ctxsearch/text.h"

namespace ctxsearch {

using nlohmann::json;

namespace {

class BadRequest : public Error {
 public:
  using Error::Error;
};

class NotFound : public Error {
 public:
  using Error::Error;
};

std::size_t sizeParam(const json& request, const char* key, std::size_t fallback) {
  if (!request.contains(key) || request[key].is_null()) return fallback;
  const auto& v = request[key];
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::size_t>(v.get<std::int64_t>());
  if (v.is_string()) {
    const auto& s = v.get_ref<const std::string&>();
    std::size_t pos = 0;
    try {
      auto n = std::stoull(s, &pos);
      if (pos == s.size()) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
  }
  throw BadRequest(std::string("parameter '") + key + "' must be a non-negative integer");
}

std::string stringParam(const json& request, const char* key) {
  if (!request.contains(key) || request[key].is_null()) return {};
  if (!request[key].is_string()) throw BadRequest(std::string("parameter '") + key + "' must be a string");
  return request[key].get<std::string>();
}

json spans(const std::vector<CharSpan>& list) {
  json out = json::array();
  for (const auto& s : list) out.push_back({s.begin, s.end});
  return out;
}

}  // namespace

SearchService::SearchService(Index index, Ontology ontology, ServiceConfig config)
    : index_(std::move(index)), ontology_(std::move(ontology)), config_(std::move(config)) {
  if (index_.ontologyFingerprint() != ontology_.fingerprint()) {
    throw Error("index was built against a different ontology");
  }
}

template <typename F>
ApiResponse SearchService::guarded(F&& handler) const {
  auto start = std::chrono::steady_clock::now();
  ApiResponse response;
  try {
    response.body = handler();
  } catch (const SyntaxError& e) {
    response.status = 400;
    response.body = {{"error", e.what()}, {"position", e.position()}};
  } catch (const BadRequest& e) {
    response.status = 400;
    response.body = {{"error", e.what()}};
  } catch (const NotFound& e) {
    response.status = 404;
    response.body = {{"error", e.what()}};
  } catch (const QueryError& e) {
    response.status = 422;
    response.body = {{"error", e.what()}};
  } catch (const QueryTooBroad& e) {
    response.status = 503;
    response.retryAfter = 1;
    response.body = {{"error", e.what()}, {"retry_after", 1}};
  } catch (const json::exception& e) {
    response.status = 400;
    response.body = {{"error", e.what()}};
  }
  response.body["generation"] = index_.generation();
  response.body["timing_ms"] =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return response;
}

QueryTree SearchService::queryOf(const json& request) const {
  QueryTree query;
  const json* q = request.contains("q") ? &request["q"] : nullptr;
  if (q == nullptr || q->is_null() || (q->is_string() && text::trim(q->get_ref<const std::string&>()).empty())) {
    query = parseQuery("class:" + std::string(kRootClassName));
  } else if (q->is_string()) {
    const auto& s = q->get_ref<const std::string&>();
    auto body = text::trim(s);
    query = body.front() == '{' ? queryFromJson(json::parse(body)) : parseQuery(s);
  } else if (q->is_object()) {
    query = queryFromJson(*q);
  } else {
    throw BadRequest("parameter 'q' must be a query string or query object");
  }
  resolve(query, ontology_);
  return query;
}

json SearchService::entityJson(EntityId e) const {
  return {{"name", ontology_.entityName(e)}, {"id", e.value}};
}

json SearchService::excerptJson(std::uint64_t contextId) const {
  auto ex = index_.excerpt(contextId);
  return {{"cid", ex.contextId}, {"doc", ex.docId}, {"doc_index", ex.docIndex},
          {"title", ex.title}, {"sentence", ex.sentence}, {"text", ex.text},
          {"active", spans(ex.active)}, {"grayed", spans(ex.grayed())}};
}

ApiResponse SearchService::search(const json& request) const {
  return guarded([&] {
    auto query = queryOf(request);
    auto page = sizeParam(request, "page", 0);
    auto perArc = sizeParam(request, "evidence", config_.evidencePerArc);
    auto results = evaluate(query, index_, ontology_, config_.suggest.eval);
    const std::size_t pageSize = std::max<std::size_t>(1, config_.pageSize);

    json groups = json::array();
    std::size_t first = std::min(results.groups.size(), page * pageSize);
    std::size_t last = std::min(results.groups.size(), first + pageSize);
    for (std::size_t i = first; i < last; ++i) {
      const auto& g = results.groups[i];
      json facts = json::array();
      json excerpts = json::array();
      std::vector<std::size_t> shown(query.root.arcs.size(), 0);
      for (const auto& ev : g.evidence) {
        if (shown[ev.arc] >= perArc) continue;
        ++shown[ev.arc];
        if (ev.kind == Evidence::Kind::Fact) {
          const auto& arc = query.root.arcs[ev.arc];
          facts.push_back({{"arc", ev.arc}, {"relation", arc.relation},
                           {"reversed", arc.reversed}, {"object", entityJson(ev.object)}});
        } else {
          auto ex = excerptJson(ev.contextId);
          ex["arc"] = ev.arc;
          excerpts.push_back(std::move(ex));
        }
      }
      auto group = entityJson(g.entity);
      group["rank"] = i + 1;
      group["score"] = g.score;
      group["evidence_total"] = g.evidence.size();
      group["facts"] = std::move(facts);
      group["excerpts"] = std::move(excerpts);
      groups.push_back(std::move(group));
    }
    return json{{"query", toString(query)},
                {"query_json", toJson(query)},
                {"total", results.total},
                {"page", page},
                {"page_size", pageSize},
                {"pages", (results.total + pageSize - 1) / pageSize},
                {"groups", std::move(groups)}};
  });
}

ApiResponse SearchService::suggest(const json& request) const {
  return guarded([&] {
    auto query = queryOf(request);
    auto focus = FocusPath::parse(stringParam(request, "focus"));
    auto typed = stringParam(request, "typed");
    auto suggestions = ctxsearch::suggest(query, focus, typed, index_, ontology_, config_.suggest);

    json preselected = nullptr;
    auto listJson = [&](const std::vector<Suggestion>& list) {
      json out = json::array();
      for (const auto& s : list) {
        json item = {{"kind", kindName(s.kind)}, {"label", s.label}, {"score", s.score},
                     {"preselected", s.preselected}};
        if (s.kind == SuggestionKind::Class) {
          item["id"] = ontology_.findClass(s.label)->value;
        } else if (s.kind == SuggestionKind::Instance) {
          item["id"] = ontology_.findEntity(s.label)->value;
        } else if (s.kind == SuggestionKind::Relation) {
          item["target_class"] = s.targetClass;
        } else {
          item["words"] = s.words;
        }
        auto applied = applySuggestion(query, focus, s, ontology_);
        item["apply"] = {{"q", toString(applied.query)}, {"focus", applied.focus.toString()}};
        if (s.preselected) preselected = item;
        out.push_back(std::move(item));
      }
      return out;
    };
    return json{{"query", toString(query)},
                {"focus", focus.toString()},
                {"typed", typed},
                {"words", listJson(suggestions.words)},
                {"classes", listJson(suggestions.classes)},
                {"instances", listJson(suggestions.instances)},
                {"relations", listJson(suggestions.relations)},
                {"preselected", preselected}};
  });
}

ApiResponse SearchService::excerpt(const json& request) const {
  return guarded([&] {
    if (!request.contains("cid")) throw BadRequest("parameter 'cid' is required");
    auto cid = sizeParam(request, "cid", 0);
    if (cid >= index_.numContexts()) throw NotFound("unknown context id " + std::to_string(cid));
    return excerptJson(cid);
  });
}

ApiResponse SearchService::meta() const {
  return guarded([&] {
    auto stats = index_.stats();
    json relations = json::array();
    for (const auto& r : ontology_.relations()) {
      relations.push_back({{"name", r.name},
                           {"source_class", ontology_.className(r.sourceClass)},
                           {"target_class", ontology_.className(r.targetClass)}});
    }
    return json{{"ontology_fingerprint", index_.ontologyFingerprint()},
                {"prefix_length", index_.prefixLength()},
                {"contexts", stats.contexts},
                {"postings", stats.postings},
                {"blocks", stats.blocks},
                {"entities", stats.entities},
                {"words", stats.words},
                {"classes", ontology_.numClasses()},
                {"relations", std::move(relations)},
                {"page_size", config_.pageSize},
                {"suggestion_length", config_.suggest.listLength}};
  });
}

}  // namespace ctxsearch

#include <gtest/gtest.h>

#include <thread>

#include "ctxsearch/server.h"
#include "ctxsearch/service.h"
#include "httplib.h"
#include "support/fixtures.h"

using namespace ctxsearch;
using nlohmann::json;

namespace {

SearchService makeService(ServiceConfig config = {}) {
  auto ontology = test::plantsOntology();
  auto index = test::buildIndex(test::plantsCorpus(ontology), ontology, DecompositionMode::Contexts);
  return SearchService(std::move(index), std::move(ontology), config);
}

const SearchService& service() {
  static const SearchService s = makeService();
  return s;
}

json withoutTiming(json j) {
  j.erase("timing_ms");
  return j;
}

class Http : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    server_ = new Server(service(), ServerConfig{"127.0.0.1", 0, "*", 4});
    port_ = server_->bind();
    thread_ = new std::thread([] { server_->run(); });
  }
  static void TearDownTestSuite() {
    server_->stop();
    thread_->join();
    delete thread_;
    delete server_;
  }
  httplib::Client client() { return httplib::Client("127.0.0.1", port_); }

  static Server* server_;
  static std::thread* thread_;
  static int port_;
};

Server* Http::server_ = nullptr;
std::thread* Http::thread_ = nullptr;
int Http::port_ = 0;

}  // namespace

TEST(Service, SearchFigureOneHasEdibleExcerpt) {
  auto r = service().search({{"q", test::kFig1Query}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  ASSERT_EQ(r.body["groups"].size(), 1u);
  const auto& g = r.body["groups"][0];
  EXPECT_EQ(g["name"], "Broccoli");
  EXPECT_TRUE(g["id"].is_number());
  bool edible = false;
  for (const auto& ex : g["excerpts"]) {
    std::string text = ex["text"];
    for (const auto& span : ex["active"]) {
      auto part = text.substr(span[0].get<std::size_t>(), span[1].get<std::size_t>() - span[0].get<std::size_t>());
      if (part.find("edible") != std::string::npos) edible = true;
    }
  }
  EXPECT_TRUE(edible) << g.dump();
  EXPECT_EQ(g["facts"].size(), 1u);
  EXPECT_EQ(g["facts"][0]["object"]["name"], "Europe");
  EXPECT_EQ(r.body["generation"], service().index().generation());
}

TEST(Service, ErrorStatuses) {
  auto syntax = service().search({{"q", "class:Plant (native-to"}});
  EXPECT_EQ(syntax.status, 400);
  EXPECT_TRUE(syntax.body.contains("position"));
  EXPECT_EQ(service().search({{"q", "class:Tree"}}).status, 422);
  EXPECT_EQ(service().search({{"q", "class:Location (native-to entity:Europe)"}}).status, 422);
  EXPECT_EQ(service().search({{"q", "class:Plant"}, {"page", "x"}}).status, 400);
  EXPECT_EQ(service().excerpt({{"cid", 999}}).status, 404);
  EXPECT_EQ(service().excerpt(json::object()).status, 400);
}

TEST(Service, TooBroadIs503WithRetryHint) {
  ServiceConfig config;
  config.suggest.eval.maxIntermediatePostings = 1;
  auto tight = makeService(config);
  auto r = tight.search({{"q", "class:Plant (occurs-with e*)"}});
  EXPECT_EQ(r.status, 503);
  ASSERT_TRUE(r.retryAfter.has_value());
}

TEST(Service, PagingIsStable) {
  ServiceConfig config;
  config.pageSize = 2;
  auto small = makeService(config);
  std::set<std::string> seen;
  std::size_t total = 0;
  for (std::size_t page = 0;; ++page) {
    auto r = small.search({{"q", "class:Entity"}, {"page", page}});
    ASSERT_EQ(r.status, 200);
    total = r.body["total"];
    if (r.body["groups"].empty()) break;
    EXPECT_LE(r.body["groups"].size(), 2u);
    for (const auto& g : r.body["groups"]) EXPECT_TRUE(seen.insert(g["name"]).second);
    EXPECT_EQ(withoutTiming(small.search({{"q", "class:Entity"}, {"page", page}}).body), withoutTiming(r.body));
  }
  EXPECT_EQ(seen.size(), total);
}

TEST(Service, EmptyQueryMeansAllEntities) {
  auto r = service().search(json::object());
  EXPECT_EQ(r.body["query"], "class:Entity");
  EXPECT_EQ(r.body["total"], service().ontology().numEntities());
}

TEST(Service, EvidenceCap) {
  auto capped = service().search({{"q", "class:Vegetable (occurs-with edible)"}, {"evidence", 0}});
  for (const auto& g : capped.body["groups"]) EXPECT_TRUE(g["excerpts"].empty());
}

TEST(Service, SuggestPlan) {
  auto r = service().suggest({{"q", ""}, {"typed", "plant"}});
  ASSERT_EQ(r.status, 200) << r.body.dump();
  bool plant = false;
  for (const auto& c : r.body["classes"]) plant |= c["label"] == "Plant";
  EXPECT_TRUE(plant);
  EXPECT_EQ(r.body["preselected"]["label"], "Plant");
  EXPECT_EQ(r.body["preselected"]["apply"]["q"], "class:Plant");
}

TEST(Service, QueryAsJsonObject) {
  auto r = service().search({{"q", toJson(parseQuery(test::kFig1Query))}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body["query"], test::kFig1Query);
}

TEST(Service, Meta) {
  auto r = service().meta();
  EXPECT_EQ(r.body["prefix_length"], 4);
  EXPECT_EQ(r.body["page_size"], 20);
  EXPECT_EQ(r.body["suggestion_length"], 8);
  EXPECT_EQ(r.body["relations"].size(), 3u);
}

TEST(Service, RejectsForeignOntology) {
  auto ontology = test::plantsOntology();
  auto index = test::buildIndex(test::plantsCorpus(ontology), ontology, DecompositionMode::Contexts);
  EXPECT_ANY_THROW(SearchService(std::move(index), Ontology::parseString("instance\tx\tis-a\tEntity\n")));
}

TEST_F(Http, SearchOverHttp) {
  auto c = client();
  auto res = c.Get("/search", httplib::Params{{"q", "entity:Broccoli"}}, httplib::Headers{});
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
  auto body = json::parse(res->body);
  ASSERT_EQ(body["groups"].size(), 1u);
  EXPECT_EQ(body["groups"][0]["name"], "Broccoli");
}

TEST_F(Http, PostJsonAndErrors) {
  auto c = client();
  auto res = c.Post("/suggest", json{{"q", "class:Entity"}, {"typed", "plan"}}.dump(), "application/json");
  ASSERT_TRUE(res);
  EXPECT_EQ(res->status, 200);
  auto bad = c.Post("/search", "{oops", "application/json");
  ASSERT_TRUE(bad);
  EXPECT_EQ(bad->status, 400);
  auto syntax = c.Get("/search?q=class%3APlant%20(");
  ASSERT_TRUE(syntax);
  EXPECT_EQ(syntax->status, 400);
  EXPECT_TRUE(json::parse(syntax->body).contains("position"));
}

TEST_F(Http, ExcerptAndMeta) {
  auto c = client();
  auto ex = c.Get("/excerpt?cid=0");
  ASSERT_TRUE(ex);
  EXPECT_EQ(ex->status, 200);
  EXPECT_TRUE(json::parse(ex->body).contains("grayed"));
  auto meta = c.Get("/meta");
  ASSERT_TRUE(meta);
  EXPECT_EQ(json::parse(meta->body)["contexts"], service().index().numContexts());
  auto options = c.Options("/search");
  ASSERT_TRUE(options);
  EXPECT_EQ(options->status, 204);
}

TEST_F(Http, IdenticalRequestsIdenticalBodies) {
  auto c = client();
  auto a = c.Get("/suggest?q=class%3APlant&typed=edible%20l");
  auto b = c.Get("/suggest?q=class%3APlant&typed=edible%20l");
  ASSERT_TRUE(a && b);
  EXPECT_EQ(withoutTiming(json::parse(a->body)), withoutTiming(json::parse(b->body)));
}

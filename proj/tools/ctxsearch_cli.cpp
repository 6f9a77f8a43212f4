#include <csignal>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "CLI11.hpp"
#include "ctxsearch/compare_modes.h"
#include "ctxsearch/corpus.h"
#include "ctxsearch/decompose.h"
#include "ctxsearch/error.h"
#include "ctxsearch/evaluator.h"
#include "ctxsearch/index.h"
#include "ctxsearch/metrics.h"
#include "ctxsearch/ontology.h"
#include "ctxsearch/query.h"
#include "ctxsearch/server.h"
#include "ctxsearch/service.h"

using namespace ctxsearch;

namespace {

struct InputOptions {
  std::string corpus;
  std::string ontology;
  std::string rules;
  bool listItems = false;
};

void addInputs(CLI::App* cmd, InputOptions& in) {
  cmd->add_option("--corpus", in.corpus, "corpus JSONL")->required()->check(CLI::ExistingFile);
  cmd->add_option("--ontology", in.ontology, "ontology TSV")->required()->check(CLI::ExistingFile);
  cmd->add_option("--rules", in.rules, "sub-clause trigger word file")->check(CLI::ExistingFile);
  cmd->add_flag("--list-items", in.listItems, "append list-item sentences to the previous sentence");
}

DecomposeOptions decomposeOptions(const InputOptions& in) {
  DecomposeOptions o;
  if (!in.rules.empty()) o.rules = SciRules::load(in.rules);
  return o;
}

Corpus readCorpus(const InputOptions& in, const Ontology& ontology) {
  CorpusOptions o;
  o.appendListItems = in.listItems;
  auto corpus = loadCorpus(in.corpus, ontology, o);
  for (const auto& w : corpus.warnings) std::cerr << "warning: " << w << '\n';
  return corpus;
}

int serve(const std::string& indexDir, const std::string& ontologyPath, ServerConfig serverConfig,
          ServiceConfig serviceConfig, std::optional<std::size_t> prefixLength) {
  auto ontology = Ontology::load(ontologyPath);
  auto index = Index::read(indexDir);
  if (prefixLength && *prefixLength != index.prefixLength()) {
    throw Error("prefix length " + std::to_string(*prefixLength) + " does not match the index (" +
                std::to_string(index.prefixLength()) + ")");
  }
  SearchService service(std::move(index), std::move(ontology), serviceConfig);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Server server(service, serverConfig);
  int port = server.bind();
  std::cout << "listening on " << serverConfig.host << ':' << port << std::endl;
  std::thread worker([&] { server.run(); });
  int sig = 0;
  sigwait(&signals, &sig);
  std::cout << "shutting down" << std::endl;
  server.stop();
  worker.join();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Entity search over sentence contexts"};
  app.require_subcommand(1);

  InputOptions in;
  std::string mode = "contexts";
  std::string out;
  std::size_t prefixLength = 4;

  auto* build = app.add_subcommand("build", "decompose a corpus and write the index files");
  addInputs(build, in);
  build->add_option("--out", out, "index directory")->required();
  build->add_option("--mode", mode, "contexts, sentences or sections");
  build->add_option("--prefix-length", prefixLength, "block prefix length")->check(CLI::Range(1, 64));

  auto* decomposeCmd = app.add_subcommand("decompose", "print the contexts of a corpus as JSONL");
  addInputs(decomposeCmd, in);
  decomposeCmd->add_option("--mode", mode, "contexts, sentences or sections");
  decomposeCmd->add_option("--out", out, "output file (default stdout)");

  std::string indexDir;
  std::string ontologyPath;
  ServerConfig serverConfig;
  ServiceConfig serviceConfig;
  std::optional<std::size_t> servePrefix;
  auto* serveCmd = app.add_subcommand("serve", "serve the HTTP API");
  serveCmd->add_option("--index", indexDir, "index directory")->required()->envname("CTXSEARCH_INDEX");
  serveCmd->add_option("--ontology", ontologyPath, "ontology TSV")->required()->envname("CTXSEARCH_ONTOLOGY");
  serveCmd->add_option("--host", serverConfig.host)->envname("CTXSEARCH_HOST");
  serveCmd->add_option("--port", serverConfig.port)->envname("CTXSEARCH_PORT");
  serveCmd->add_option("--prefix-length", servePrefix, "must match the index")->envname("CTXSEARCH_PREFIX_LENGTH");
  serveCmd->add_option("--page-size", serviceConfig.pageSize)->envname("CTXSEARCH_PAGE_SIZE")->check(CLI::PositiveNumber);
  serveCmd->add_option("--suggestion-length", serviceConfig.suggest.listLength)
      ->envname("CTXSEARCH_SUGGESTION_LENGTH")->check(CLI::PositiveNumber);
  serveCmd->add_option("--cors-origin", serverConfig.corsOrigin)->envname("CTXSEARCH_CORS_ORIGIN");

  std::string queriesPath;
  std::string qrelsPath;
  bool asJson = false;
  auto* evalCmd = app.add_subcommand("eval", "compare contexts, sentences and sections on a query set");
  addInputs(evalCmd, in);
  evalCmd->add_option("--queries", queriesPath, "topic<TAB>query TSV")->required()->check(CLI::ExistingFile);
  evalCmd->add_option("--qrels", qrelsPath, "topic<TAB>entity TSV")->required()->check(CLI::ExistingFile);
  evalCmd->add_flag("--json", asJson, "print the report as JSON");

  std::string queryText;
  std::size_t limit = 20;
  auto* queryCmd = app.add_subcommand("query", "run one query and print the ranked entities");
  queryCmd->add_option("--index", indexDir, "index directory")->required();
  queryCmd->add_option("--ontology", ontologyPath, "ontology TSV")->required()->check(CLI::ExistingFile);
  queryCmd->add_option("--limit", limit, "rows to print");
  queryCmd->add_option("query", queryText, "query string")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      auto ontology = Ontology::load(in.ontology);
      auto corpus = readCorpus(in, ontology);
      auto contexts = decomposeCorpus(corpus, ontology, parseMode(mode), decomposeOptions(in));
      auto index = Index::build(contexts, ontology, IndexConfig{prefixLength});
      index.write(out);
      auto s = index.stats();
      std::cout << "contexts: " << s.contexts << "\npostings: " << s.postings
                << "\nblocks: " << s.blocks << "\nentities: " << s.entities
                << "\nwords: " << s.words << '\n';
    } else if (*decomposeCmd) {
      auto ontology = Ontology::load(in.ontology);
      auto corpus = readCorpus(in, ontology);
      auto contexts = decomposeCorpus(corpus, ontology, parseMode(mode), decomposeOptions(in));
      std::ofstream file;
      if (!out.empty()) {
        file.open(out);
        if (!file) throw Error("cannot write " + out);
      }
      std::ostream& os = out.empty() ? std::cout : file;
      for (const auto& c : contexts) {
        nlohmann::json items = nlohmann::json::array();
        for (const auto& item : c.items) {
          if (item.isEntity()) {
            items.push_back({{"pos", item.position}, {"entity", ontology.entityName(item.entity())}});
          } else {
            items.push_back({{"pos", item.position}, {"word", item.word()}});
          }
        }
        os << nlohmann::json{{"cid", c.id}, {"doc", c.docId}, {"sentence", c.sentence}, {"items", items}}.dump()
           << '\n';
      }
    } else if (*serveCmd) {
      return serve(indexDir, ontologyPath, serverConfig, serviceConfig, servePrefix);
    } else if (*evalCmd) {
      auto ontology = Ontology::load(in.ontology);
      auto corpus = readCorpus(in, ontology);
      CompareOptions options;
      options.decompose = decomposeOptions(in);
      auto report = compareModes(loadQueries(queriesPath), loadQrels(qrelsPath), corpus, ontology, options);
      if (asJson) {
        std::cout << report.toJson().dump(2) << '\n';
      } else {
        std::cout << report.toTsv() << '\n' << report.toTable();
      }
    } else if (*queryCmd) {
      auto ontology = Ontology::load(ontologyPath);
      auto index = Index::read(indexDir);
      auto query = parseAndResolve(queryText, ontology);
      auto results = evaluate(query, index, ontology);
      std::cout << "query: " << toString(query) << "\nresults: " << results.total << '\n';
      std::cout << std::left << std::setw(6) << "rank" << std::setw(32) << "entity" << std::setw(8)
                << "score" << "evidence\n";
      for (std::size_t i = 0; i < results.groups.size() && i < limit; ++i) {
        const auto& g = results.groups[i];
        std::string evidence;
        for (const auto& ev : g.evidence) {
          if (ev.kind == Evidence::Kind::Context) {
            evidence = index.excerpt(ev.contextId).text;
            break;
          }
        }
        std::cout << std::setw(6) << i + 1 << std::setw(32) << ontology.entityName(g.entity)
                  << std::setw(8) << g.score << evidence << '\n';
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

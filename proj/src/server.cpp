#include "ctxsearch/server.h"

#include "ctxsearch/error.h"
#include "httplib.h"

namespace ctxsearch {

using nlohmann::json;

struct Server::Impl {
  const SearchService& service;
  httplib::Server http;
  explicit Impl(const SearchService& s) : service(s) {}
};

namespace {

json requestJson(const httplib::Request& req) {
  if (req.method == "POST" && !req.body.empty()) return json::parse(req.body);
  json out = json::object();
  for (const auto& [key, value] : req.params) out[key] = value;
  return out;
}

void reply(httplib::Response& res, const ApiResponse& api) {
  res.status = api.status;
  if (api.retryAfter) res.set_header("Retry-After", std::to_string(*api.retryAfter));
  res.set_content(api.body.dump(), "application/json");
}

}  // namespace

Server::Server(const SearchService& service, ServerConfig config)
    : impl_(std::make_unique<Impl>(service)), config_(std::move(config)) {
  auto& http = impl_->http;
  const SearchService* svc = &service;
  auto threads = config_.threads;
  http.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  http.set_default_headers({{"Access-Control-Allow-Origin", config_.corsOrigin},
                            {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                            {"Access-Control-Allow-Headers", "Content-Type"}});
  http.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  auto route = [&http](const std::string& path, auto handler) {
    auto wrapped = [handler](const httplib::Request& req, httplib::Response& res) {
      json request;
      try {
        request = requestJson(req);
      } catch (const json::exception& e) {
        reply(res, ApiResponse{400, {{"error", std::string("malformed JSON body: ") + e.what()}}, {}});
        return;
      }
      reply(res, handler(request));
    };
    http.Get(path, wrapped);
    http.Post(path, wrapped);
  };
  route("/search", [svc](const json& r) { return svc->search(r); });
  route("/suggest", [svc](const json& r) { return svc->suggest(r); });
  route("/excerpt", [svc](const json& r) { return svc->excerpt(r); });
  route("/meta", [svc](const json&) { return svc->meta(); });
}

Server::~Server() { stop(); }

int Server::bind() {
  if (config_.port == 0) {
    port_ = impl_->http.bind_to_any_port(config_.host);
  } else {
    port_ = impl_->http.bind_to_port(config_.host, config_.port) ? config_.port : -1;
  }
  if (port_ < 0) throw Error("cannot bind " + config_.host + ":" + std::to_string(config_.port));
  return port_;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::stop() {
  if (impl_->http.is_running()) impl_->http.stop();
}

}  // namespace ctxsearch

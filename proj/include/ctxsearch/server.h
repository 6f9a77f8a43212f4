#pragma once

#include <memory>
#include <string>

#include "ctxsearch/service.h"

namespace ctxsearch {

struct ServerConfig {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::string corsOrigin = "*";
  std::size_t threads = 8;
};

// HTTP front end: GET or POST /search, /suggest, /excerpt, /meta. GET
// parameters map onto the request fields of SearchService; a POST body is
// the request JSON itself.
class Server {
 public:
  Server(const SearchService& service, ServerConfig config = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Binds the socket; returns the bound port. Throws Error on failure.
  int bind();
  // Serves until stop(); bind() must have succeeded.
  void run();
  // Stops accepting connections and lets running handlers finish.
  void stop();
  int port() const { return port_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  ServerConfig config_;
  int port_ = -1;
};

}  // namespace ctxsearch

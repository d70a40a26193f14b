#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace fibersurf {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::filesystem::path datasets_dir = ".";
  unsigned workers = 4;
};

/// HTTP exploration backend.
///
///   POST /sessions                  {path}
///   GET  /sessions/{id}/jacobi
///   GET  /sessions/{id}/density?w&h
///   POST /sessions/{id}/query       {edge}
///   POST /sessions/{id}/extract     {edge, jacobi_edge_id?}
///
/// Dataset paths are resolved inside `datasets_dir`.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  /// Binds and serves on a background thread; returns the bound port.
  int start();
  /// Binds and serves on the calling thread until stop().
  void run();
  void stop();
  int port() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace fibersurf

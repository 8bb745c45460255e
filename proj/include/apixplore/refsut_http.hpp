#pragma once

/// @file refsut_http.hpp
/// Serves a reference system under test over local HTTP, so the HTTP
/// translation and adapter stack can be exercised end to end against the
/// same behaviour the in-process adapter sees.

#include <memory>
#include <string>

#include "apixplore/executor.hpp"

namespace apix {

/// Local HTTP frontend for one in-process system.  Binds an ephemeral
/// 127.0.0.1 port on construction and serves until destroyed.  Every request
/// advances the system's simulated clock by 1 ms, mirroring the in-process
/// adapter's dispatch tick; requests are serialized through a mutex.
///
/// Routes: the persons surface (POST/GET /persons, DELETE /persons/{name}),
/// the groups surface (POST/GET /groups, DELETE /groups/{id}), and
/// POST /__reset accepting {"key": ...}.  The system behind the server
/// answers whichever of these its handlers implement.
class RefSutServer {
 public:
  explicit RefSutServer(InProcessSut& sut);
  ~RefSutServer();

  RefSutServer(const RefSutServer&) = delete;
  RefSutServer& operator=(const RefSutServer&) = delete;

  int port() const;
  std::string base_url() const;  ///< "http://127.0.0.1:<port>"

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace apix

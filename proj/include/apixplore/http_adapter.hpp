#pragma once

/// @file http_adapter.hpp
/// Adapter that sends operations to a live HTTP endpoint.

#include <string>

#include "apixplore/executor.hpp"

namespace apix {

/// Talks to a system under test over HTTP.  Each invocation opens a fresh
/// connection, so a system restarted between trials is picked up without
/// stale-socket trouble.  reset() posts the reset key to /__reset; sleeping
/// is real wall-clock time.
class HttpAdapter final : public Adapter {
 public:
  /// base_url: scheme, host, and port, e.g. "http://127.0.0.1:8080".
  explicit HttpAdapter(std::string base_url, std::int64_t timeout_ms = 5000);

  Observation invoke(const OperationSpec& op,
                     const std::optional<Json>& params) override;
  Observation reset(const std::string& key) override;
  void sleep_ms(std::int64_t ms) override;

  /// Sends a prepared request as-is.  Exposed for request-level tests.
  Observation send(const WireRequest& req);

 private:
  std::string base_url_;
  std::int64_t timeout_ms_;
};

}  // namespace apix

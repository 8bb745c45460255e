#include "apixplore/http_adapter.hpp"

#include <chrono>
#include <thread>

#include "httplib.h"

namespace apix {

HttpAdapter::HttpAdapter(std::string base_url, std::int64_t timeout_ms)
    : base_url_(std::move(base_url)), timeout_ms_(timeout_ms) {}

Observation HttpAdapter::send(const WireRequest& req) {
  httplib::Client client(base_url_);
  client.set_connection_timeout(std::chrono::milliseconds(timeout_ms_));
  client.set_read_timeout(std::chrono::milliseconds(timeout_ms_));

  std::string target = req.path;
  for (std::size_t i = 0; i < req.query.size(); ++i) {
    target += i == 0 ? '?' : '&';
    target += req.query[i].first;
    target += '=';
    target += httplib::detail::encode_query_param(req.query[i].second);
  }

  httplib::Request wire;
  wire.method = req.method;
  wire.path = target;
  if (!req.body.empty()) {
    wire.body = req.body;
    wire.set_header("Content-Type", req.content_type);
  }

  auto res = client.send(wire);
  if (!res) {
    throw TransportError("HTTP " + req.method + " " + target + " failed: " +
                         httplib::to_string(res.error()));
  }
  return {res->status, res->body};
}

Observation HttpAdapter::invoke(const OperationSpec& op,
                                const std::optional<Json>& params) {
  const auto* t = std::get_if<HttpTranslation>(&op.translation);
  if (t == nullptr) {
    throw TranslateError("operation \"" + op.key + "\" has no HTTP translation");
  }
  return send(translate_http(*t, params));
}

Observation HttpAdapter::reset(const std::string& key) {
  WireRequest req;
  req.method = "POST";
  req.path = "/__reset";
  req.body = Json{{"key", key}}.dump();
  req.content_type = "application/json";
  return send(req);
}

void HttpAdapter::sleep_ms(std::int64_t ms) {
  if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
}

}  // namespace apix

#include "apixplore/refsut_http.hpp"

#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "httplib.h"

namespace apix {

namespace {

Json parse_body(const std::string& body) {
  Json parsed = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  return parsed.is_discarded() ? Json() : parsed;
}

// "42" -> 42; anything else (sign junk, overflow, trailing text) stays a
// string so the system under test rejects it the same way it would reject a
// mistyped in-process parameter.
Json wire_scalar(const std::string& raw) {
  if (raw.empty()) return Json(raw);
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(raw.c_str(), &end, 10);
  if (errno == 0 && end != nullptr && *end == '\0') return Json(v);
  return Json(raw);
}

}  // namespace

struct RefSutServer::Impl {
  explicit Impl(InProcessSut& s) : sut(s) {}

  InProcessSut& sut;
  std::mutex mu;
  httplib::Server server;
  std::thread thread;
  int port = 0;

  void reply(httplib::Response& res, const std::string& handler, const Json& params) {
    Observation obs;
    {
      std::lock_guard<std::mutex> lock(mu);
      sut.advance_clock(1);
      obs = sut.handle(handler, params);
    }
    res.status = obs.status;
    res.set_content(obs.body, "application/json");
  }
};

RefSutServer::RefSutServer(InProcessSut& sut) : impl_(std::make_unique<Impl>(sut)) {
  Impl& impl = *impl_;
  httplib::Server& server = impl.server;

  server.Post("/persons", [&impl](const httplib::Request& req, httplib::Response& res) {
    impl.reply(res, "post-person", parse_body(req.body));
  });
  server.Get("/persons", [&impl](const httplib::Request&, httplib::Response& res) {
    impl.reply(res, "get-persons", Json());
  });
  server.Delete(R"(/persons/(.*))",
                [&impl](const httplib::Request& req, httplib::Response& res) {
                  impl.reply(res, "delete-person", Json{{"name", req.matches[1].str()}});
                });

  server.Post("/groups", [&impl](const httplib::Request& req, httplib::Response& res) {
    impl.reply(res, "post-groups", parse_body(req.body));
  });
  server.Get("/groups", [&impl](const httplib::Request& req, httplib::Response& res) {
    Json params = Json::object();
    if (req.has_param("page")) params["page"] = wire_scalar(req.get_param_value("page"));
    impl.reply(res, "get-groups", params);
  });
  server.Delete(R"(/groups/(.*))",
                [&impl](const httplib::Request& req, httplib::Response& res) {
                  impl.reply(res, "delete-groups",
                             Json{{"id", wire_scalar(req.matches[1].str())}});
                });

  server.Post("/__reset", [&impl](const httplib::Request& req, httplib::Response& res) {
    const Json body = parse_body(req.body);
    if (!body.is_object() || !body.contains("key") || !body["key"].is_string()) {
      res.status = 400;
      res.set_content(Json{{"error", "bad-request"}}.dump(), "application/json");
      return;
    }
    impl.reply(res, body["key"].get<std::string>(), Json::object());
  });

  impl.port = server.bind_to_any_port("127.0.0.1");
  if (impl.port <= 0) throw std::runtime_error("could not bind a local port");
  impl.thread = std::thread([&server] { server.listen_after_bind(); });
  server.wait_until_ready();
}

RefSutServer::~RefSutServer() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int RefSutServer::port() const { return impl_->port; }

std::string RefSutServer::base_url() const {
  return "http://127.0.0.1:" + std::to_string(impl_->port);
}

}  // namespace apix

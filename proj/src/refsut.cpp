#include "apixplore/refsut.hpp"

#include <algorithm>

namespace apix {

namespace {

// Lenient field access: the services answer 400s (or fall back to defaults)
// instead of throwing when a caller sends something off-schema.
std::string read_string(const Json& params, const char* field) {
  if (params.is_object()) {
    auto it = params.find(field);
    if (it != params.end() && it->is_string()) return it->get<std::string>();
  }
  return {};
}

bool has_string(const Json& params, const char* field) {
  if (!params.is_object()) return false;
  auto it = params.find(field);
  return it != params.end() && it->is_string();
}

std::optional<std::int64_t> read_int(const Json& params, const char* field) {
  if (params.is_object()) {
    auto it = params.find(field);
    if (it != params.end() && it->is_number_integer()) return it->get<std::int64_t>();
  }
  return std::nullopt;
}

Observation error_response(int status, const char* reason) {
  return {status, Json{{"error", reason}}.dump()};
}

}  // namespace

std::optional<PersonsVariant> persons_variant_from_string(const std::string& label) {
  std::string tail = label;
  if (tail.rfind("persons-", 0) == 0) tail = tail.substr(8);
  if (tail == "v1") return PersonsVariant::kV1;
  if (tail == "v2") return PersonsVariant::kV2;
  if (tail == "v3") return PersonsVariant::kV3;
  return std::nullopt;
}

Observation PersonsSut::handle(const std::string& handler, const Json& params) {
  if (handler == "post-person") {
    const std::string name = read_string(params, "name");
    const std::int64_t age = read_int(params, "age").value_or(0);
    if (variant_ == PersonsVariant::kV3 && (age <= 64 || name.empty())) {
      return error_response(400, "invalid-person");
    }
    if (variant_ != PersonsVariant::kV1 && store_.count(name) != 0) {
      return error_response(409, "duplicate-name");
    }
    store_[name] = age;
    return {200, Json{{"stored", name}}.dump()};
  }
  if (handler == "get-persons") {
    Json list = Json::array();
    for (const auto& [name, age] : store_) {
      list.push_back(Json{{"age", age}, {"name", name}});
    }
    return {200, list.dump()};
  }
  if (handler == "delete-person") {
    // Succeeds with the same answer whether or not the person exists.
    const std::string name = read_string(params, "name");
    store_.erase(name);
    return {200, Json{{"deleted", name}}.dump()};
  }
  if (handler == "reset") {
    store_.clear();
    return {200, Json{{"reset", true}}.dump()};
  }
  return error_response(500, "unknown-operation");
}

void GroupsSut::purge() {
  std::erase_if(entities_, [this](const Entity& e) {
    return e.delete_at && *e.delete_at <= now_;
  });
}

Observation GroupsSut::post(const Json& params) {
  if (!has_string(params, "name") || !has_string(params, "path")) {
    return error_response(400, "bad-request");
  }
  const std::string name = read_string(params, "name");
  const std::string path = read_string(params, "path");
  if (name.empty() || path.empty()) {
    return error_response(400, "empty-name-or-path");
  }
  // Pending-delete entities still occupy their (name, path) slot.
  for (const Entity& e : entities_) {
    if (e.name == name && e.path == path) {
      return error_response(400, "has-already-been-taken");
    }
  }
  Entity e;
  e.id = next_id_++;
  e.name = name;
  e.path = path;
  entities_.push_back(e);
  return {201, Json{{"id", e.id}, {"name", name}, {"path", path}}.dump()};
}

Observation GroupsSut::get(const Json& params) {
  std::int64_t page = 1;
  if (params.is_object() && params.contains("page")) {
    const auto p = read_int(params, "page");
    if (!p || *p < 1) return error_response(400, "bad-request");
    page = *p;
  }
  const std::size_t begin =
      static_cast<std::size_t>(page - 1) * static_cast<std::size_t>(config_.page_size);
  const std::size_t end =
      std::min(entities_.size(), begin + static_cast<std::size_t>(config_.page_size));
  Json list = Json::array();
  for (std::size_t i = begin; i < end && i < entities_.size(); ++i) {
    const Entity& e = entities_[i];
    list.push_back(Json{{"id", e.id}, {"name", e.name}, {"path", e.path}});
  }
  return {200, list.dump()};
}

Observation GroupsSut::erase(const Json& params) {
  const auto id = read_int(params, "id");
  if (!id || *id < 1) return error_response(400, "bad-request");
  for (Entity& e : entities_) {
    if (e.id != *id) continue;
    const std::int64_t at = now_ + config_.delete_latency_ms;
    // Deleting an already dying entity never extends its life.
    e.delete_at = e.delete_at ? std::min(*e.delete_at, at) : at;
    return {202, Json{{"accepted", *id}}.dump()};
  }
  return error_response(404, "not-found");
}

Observation GroupsSut::reset() {
  for (Entity& e : entities_) {
    if (e.fixture) continue;
    const std::int64_t at = now_ + config_.delete_latency_ms;
    e.delete_at = e.delete_at ? std::min(*e.delete_at, at) : at;
  }
  return {200, Json{{"reset", true}}.dump()};
}

Observation GroupsSut::handle(const std::string& handler, const Json& params) {
  purge();
  if (handler == "post-groups") return post(params);
  if (handler == "get-groups") return get(params);
  if (handler == "delete-groups") return erase(params);
  if (handler == "reset") return reset();
  return error_response(500, "unknown-operation");
}

void GroupsSut::seed(int count) {
  for (int i = 1; i <= count; ++i) {
    Entity e;
    e.id = next_id_++;
    e.name = "seed-" + std::to_string(i);
    e.path = e.name;
    e.fixture = true;
    entities_.push_back(e);
  }
}

namespace {

Json translation_node(AdapterKind kind, const char* handler, const char* method,
                      const char* path, const Json& placement) {
  if (kind == AdapterKind::kInProcess) {
    return Json{{"in-process", Json{{"handler", handler}}}};
  }
  Json http = Json{{"method", method}, {"path", path}};
  if (!placement.empty()) http["placement"] = placement;
  return Json{{"http", http}};
}

Json invocation_node(AdapterKind kind) {
  return Json{{"method", kind == AdapterKind::kInProcess ? "in-process" : "http"},
              {"config", Json::object()}};
}

Json reset_node(std::int64_t sleep_ms) {
  return Json{{"strategy", "operation"}, {"key", "reset"}, {"sleep-ms", sleep_ms}};
}

Json string_schema(std::int64_t min_len, std::int64_t max_len) {
  return Json{{"type", "string"}, {"min-len", min_len}, {"max-len", max_len}};
}

Json required_field(const Json& schema) {
  return Json{{"schema", schema}, {"required", true}};
}

}  // namespace

Amos persons_amos(AdapterKind kind, bool with_reset, std::int64_t reset_sleep_ms) {
  Json doc;
  doc["amos-version"] = 1;
  doc["invocation"] = invocation_node(kind);
  doc["schemas"] = Json{
      {"person",
       Json{{"type", "map"},
            {"fields",
             Json{{"age", required_field(Json{{"type", "int"}, {"min", 60}, {"max", 130}})},
                  {"name", required_field(string_schema(0, 20))}}}}}};
  doc["operations"] = Json::array({
      Json{{"key", "post-person"},
           {"parameters", Json{{"type", "ref"}, {"name", "person"}}},
           {"annotations", Json{{"state-changing-hint", true}}},
           {"translation",
            translation_node(kind, "post-person", "POST", "/persons",
                             Json{{"age", "body"}, {"name", "body"}})}},
      Json{{"key", "get-persons"},
           {"parameters", nullptr},
           {"annotations", Json{{"query-candidate", true}}},
           {"translation",
            translation_node(kind, "get-persons", "GET", "/persons", Json::object())}},
      Json{{"key", "delete-person"},
           {"parameters",
            Json{{"type", "map"},
                 {"fields", Json{{"name", required_field(string_schema(0, 20))}}}}},
           {"annotations", Json{{"state-changing-hint", true}}},
           {"translation",
            translation_node(kind, "delete-person", "DELETE", "/persons/{name}",
                             Json{{"name", "path"}})}},
  });
  if (with_reset) doc["reset"] = reset_node(reset_sleep_ms);
  return parse_amos(doc.dump());
}

Amos persons_tiny_amos(AdapterKind kind) {
  const Json tiny_name = Json{{"type", "enum"}, {"values", Json::array({"", "x"})}};
  Json doc;
  doc["amos-version"] = 1;
  doc["invocation"] = invocation_node(kind);
  doc["schemas"] = Json::object();
  doc["operations"] = Json::array({
      Json{{"key", "post-person"},
           {"parameters",
            Json{{"type", "map"}, {"fields", Json{{"name", required_field(tiny_name)}}}}},
           {"translation",
            translation_node(kind, "post-person", "POST", "/persons",
                             Json{{"name", "body"}})}},
      Json{{"key", "get-persons"},
           {"parameters", nullptr},
           {"annotations", Json{{"query-candidate", true}}},
           {"translation",
            translation_node(kind, "get-persons", "GET", "/persons", Json::object())}},
      Json{{"key", "delete-person"},
           {"parameters",
            Json{{"type", "map"}, {"fields", Json{{"name", required_field(tiny_name)}}}}},
           {"translation",
            translation_node(kind, "delete-person", "DELETE", "/persons/{name}",
                             Json{{"name", "path"}})}},
  });
  doc["reset"] = reset_node(0);
  return parse_amos(doc.dump());
}

Amos groups_amos(const GroupsAmosOptions& options) {
  Json doc;
  doc["amos-version"] = 1;
  doc["invocation"] = invocation_node(options.kind);
  doc["schemas"] = Json{
      {"group-out",
       Json{{"type", "map"},
            {"fields",
             Json{{"id", required_field(Json{{"type", "int"}, {"min", 1}})},
                  {"name", required_field(Json{{"type", "string"}})},
                  {"path", required_field(Json{{"type", "string"}})}}}}}};

  Json get_annotations = Json{{"query-candidate", true}};
  if (options.ranged) {
    get_annotations["ranged"] = true;
    get_annotations["page-param"] = "page";
    get_annotations["page-size"] = options.page_size;
  }

  doc["operations"] = Json::array({
      Json{{"key", "post-groups"},
           {"parameters",
            Json{{"type", "map"},
                 {"fields",
                  Json{{"name", required_field(string_schema(0, 20))},
                       {"path", required_field(string_schema(0, 20))}}}}},
           {"annotations", Json{{"state-changing-hint", true}}},
           {"translation",
            translation_node(options.kind, "post-groups", "POST", "/groups",
                             Json{{"name", "body"}, {"path", "body"}})}},
      Json{{"key", "get-groups"},
           {"parameters",
            Json{{"type", "map"},
                 {"fields",
                  Json{{"page",
                        Json{{"schema", Json{{"type", "int"},
                                             {"min", 1},
                                             {"max", options.page_max}}},
                             {"required", false}}}}}}},
           {"response-schema",
            Json{{"type", "vector"}, {"of", Json{{"type", "ref"}, {"name", "group-out"}}}}},
           {"annotations", get_annotations},
           {"translation",
            translation_node(options.kind, "get-groups", "GET", "/groups",
                             Json{{"page", "query"}})}},
      Json{{"key", "delete-groups"},
           {"parameters",
            Json{{"type", "map"},
                 {"fields",
                  Json{{"id", required_field(Json{{"type", "int"}, {"min", 1}})}}}}},
           {"annotations", Json{{"state-changing-hint", true}}},
           {"translation",
            translation_node(options.kind, "delete-groups", "DELETE", "/groups/{id}",
                             Json{{"id", "path"}})}},
  });
  if (options.with_reset) doc["reset"] = reset_node(options.reset_sleep_ms);
  return parse_amos(doc.dump());
}

}  // namespace apix

#include "apixplore/openapi.hpp"

#include <algorithm>

#include "doctest.h"

using namespace apix;

namespace {

// Small but representative document: component schema, path + query + body
// parameters, a response schema, and a server url.
const char* kPetDoc = R"({
  "openapi": "3.0.3",
  "servers": [{"url": "http://localhost:9000"}],
  "components": {"schemas": {
    "pet": {
      "type": "object",
      "required": ["name"],
      "properties": {
        "name": {"type": "string", "maxLength": 20},
        "weight": {"type": "integer", "minimum": 0, "maximum": 500}
      }
    }
  }},
  "paths": {
    "/pets": {
      "get": {
        "parameters": [
          {"name": "limit", "in": "query", "schema": {"type": "integer", "minimum": 1}}
        ],
        "responses": {"200": {"content": {"application/json": {"schema":
          {"type": "array", "items": {"$ref": "#/components/schemas/pet"}}}}}}
      },
      "post": {
        "requestBody": {"content": {"application/json": {"schema":
          {"$ref": "#/components/schemas/pet"}}}},
        "responses": {"201": {"content": {"application/json": {"schema":
          {"$ref": "#/components/schemas/pet"}}}}}
      }
    },
    "/pets/{id}": {
      "delete": {
        "operationId": "remove-pet",
        "parameters": [
          {"name": "id", "in": "path", "required": true, "schema": {"type": "integer"}}
        ],
        "responses": {"204": {"description": "gone"}}
      }
    }
  }
})";

const OperationSpec* find(const Amos& amos, const std::string& key) {
  return amos.find_operation(key);
}

bool has_warning(const MappingReport& report, const std::string& fragment) {
  return std::any_of(report.warnings.begin(), report.warnings.end(),
                     [&](const MappingWarning& w) {
                       return w.reason.find(fragment) != std::string::npos;
                     });
}

}  // namespace

TEST_CASE("maps paths, parameters and responses onto a catalogue") {
  const MappingReport report = map_openapi(kPetDoc);
  const Amos& amos = report.amos;

  CHECK(report.warnings.empty());
  CHECK(amos.invocation_method == "http");
  CHECK(amos.invocation_config.at("base-url") == Json("http://localhost:9000"));
  CHECK(validate_amos(amos).empty());

  REQUIRE(amos.schemas.count("pet") == 1);
  const ParamSchema& pet = amos.schemas.at("pet");
  CHECK(pet.kind == SchemaKind::kMap);
  REQUIRE(pet.find_field("name") != nullptr);
  CHECK(pet.find_field("name")->required);
  CHECK(pet.find_field("name")->get().max_len == 20);
  REQUIRE(pet.find_field("weight") != nullptr);
  CHECK(!pet.find_field("weight")->required);
  CHECK(pet.find_field("weight")->get().min == 0);
  CHECK(pet.find_field("weight")->get().max == 500);

  REQUIRE(amos.operations.size() == 3);

  SUBCASE("query parameter") {
    const OperationSpec* get = find(amos, "get-pets");
    REQUIRE(get != nullptr);
    REQUIRE(get->parameters);
    REQUIRE(get->parameters->find_field("limit") != nullptr);
    CHECK(!get->parameters->find_field("limit")->required);
    const auto& http = std::get<HttpTranslation>(get->translation);
    CHECK(http.method == "GET");
    CHECK(http.path == "/pets");
    CHECK(http.placement.at("limit") == "query");
    REQUIRE(get->response_schema);
    CHECK(get->response_schema->kind == SchemaKind::kVector);
    CHECK(get->response_schema->element().kind == SchemaKind::kRef);
    CHECK(get->response_schema->element().name == "pet");
  }

  SUBCASE("referenced request body flattens into named fields") {
    const OperationSpec* post = find(amos, "post-pets");
    REQUIRE(post != nullptr);
    REQUIRE(post->parameters);
    CHECK(post->parameters->find_field("name") != nullptr);
    CHECK(post->parameters->find_field("weight") != nullptr);
    const auto& http = std::get<HttpTranslation>(post->translation);
    CHECK(http.placement.at("name") == "body");
    CHECK(http.placement.at("weight") == "body");
    REQUIRE(post->response_schema);  // taken from 201
    CHECK(post->response_schema->name == "pet");
  }

  SUBCASE("operationId wins over the derived key; path params are required") {
    const OperationSpec* del = find(amos, "remove-pet");
    REQUIRE(del != nullptr);
    REQUIRE(del->parameters);
    CHECK(del->parameters->find_field("id")->required);
    const auto& http = std::get<HttpTranslation>(del->translation);
    CHECK(http.method == "DELETE");
    CHECK(http.path == "/pets/{id}");
    CHECK(http.placement.at("id") == "path");
    CHECK(!del->response_schema);  // 204 carries no mapped schema
  }
}

TEST_CASE("lossy corners become warnings, not guesses") {
  const char* doc = R"({
    "openapi": "3.1.0",
    "paths": {
      "/things/{id}": {
        "get": {
          "parameters": [
            {"name": "depth", "in": "query", "schema": {"type": "number"}},
            {"name": "token", "in": "header", "schema": {"type": "string"}},
            {"name": "shape", "in": "query", "schema":
              {"oneOf": [{"type": "string"}, {"type": "integer"}]}}
          ],
          "responses": {}
        }
      }
    }
  })";
  const MappingReport report = map_openapi(doc);

  CHECK(has_warning(report, "mapped as integer"));
  CHECK(has_warning(report, "not supported; skipped"));     // header parameter
  CHECK(has_warning(report, "first alternative only"));     // oneOf
  CHECK(has_warning(report, "has no path parameter"));      // {id} unfilled
  for (const MappingWarning& w : report.warnings) {
    CHECK(w.location.rfind("paths./things/{id}.get", 0) == 0);
  }

  const OperationSpec* get = report.amos.find_operation("get-things-id");
  REQUIRE(get != nullptr);
  CHECK(get->parameters->find_field("depth")->get().kind == SchemaKind::kInt);
  CHECK(get->parameters->find_field("token") == nullptr);
  CHECK(get->parameters->find_field("shape")->get().kind == SchemaKind::kString);
}

TEST_CASE("duplicate derived keys are renamed with a warning") {
  const char* doc = R"({
    "openapi": "3.0.0",
    "paths": {
      "/a-b": {"get": {"responses": {}}},
      "/a/b": {"get": {"responses": {}}}
    }
  })";
  const MappingReport report = map_openapi(doc);
  REQUIRE(report.amos.operations.size() == 2);
  CHECK(report.amos.find_operation("get-a-b") != nullptr);
  CHECK(report.amos.find_operation("get-a-b-2") != nullptr);
  CHECK(has_warning(report, "already taken"));
}

TEST_CASE("rejects documents it cannot map at all") {
  CHECK_THROWS_AS(map_openapi("not json"), OpenApiError);
  CHECK_THROWS_AS(map_openapi(R"({"swagger":"2.0","paths":{"/x":{}}})"), OpenApiError);
  CHECK_THROWS_AS(map_openapi(R"({"openapi":"3.0.0"})"), OpenApiError);
  CHECK_THROWS_AS(map_openapi(R"({"openapi":"3.0.0","paths":{}})"), OpenApiError);
}

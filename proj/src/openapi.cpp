#include "apixplore/openapi.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>

namespace apix {

namespace {

constexpr const char* kSchemaRefPrefix = "#/components/schemas/";

bool is_http_method(const std::string& name) {
  static const std::set<std::string> methods = {
      "delete", "get", "head", "options", "patch", "post", "put", "trace"};
  return methods.contains(name);
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

/// "get" + "/groups/{id}" -> "get-groups-id"
std::string slug_key(const std::string& method, const std::string& path) {
  std::string out = method;
  bool pending_dash = !path.empty();
  for (char c : path) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      if (pending_dash) out += '-';
      pending_dash = false;
      out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    } else {
      pending_dash = true;
    }
  }
  return out;
}

ParamSchema string_schema() {
  ParamSchema s;
  s.kind = SchemaKind::kString;
  return s;
}

struct Mapper {
  std::vector<MappingWarning> warnings;
  Amos amos;

  void warn(const std::string& location, const std::string& reason) {
    warnings.push_back({location, reason});
  }

  ParamSchema convert(const Json& node, const std::string& loc) {
    if (!node.is_object()) {
      warn(loc, "schema is not an object; mapped as unconstrained string");
      return string_schema();
    }
    if (auto it = node.find("$ref"); it != node.end()) {
      const std::string target = it->is_string() ? it->get<std::string>() : "";
      if (target.starts_with(kSchemaRefPrefix)) {
        ParamSchema s;
        s.kind = SchemaKind::kRef;
        s.name = target.substr(std::string(kSchemaRefPrefix).size());
        return s;
      }
      warn(loc, "$ref \"" + target + "\" is not a component schema reference; "
                "mapped as unconstrained string");
      return string_schema();
    }
    for (const char* combinator : {"oneOf", "anyOf", "allOf"}) {
      auto it = node.find(combinator);
      if (it == node.end()) continue;
      if (it->is_array() && !it->empty()) {
        warn(loc, std::string(combinator) + " is not supported; mapped from its "
                  "first alternative only");
        return convert(it->front(), loc + "." + combinator + "[0]");
      }
      warn(loc, std::string(combinator) + " is empty; mapped as unconstrained string");
      return string_schema();
    }
    if (auto it = node.find("enum"); it != node.end() && it->is_array() && !it->empty()) {
      ParamSchema s;
      s.kind = SchemaKind::kEnum;
      for (const Json& v : *it) s.values.push_back(v);
      return s;
    }

    std::string type;
    if (auto it = node.find("type"); it != node.end() && it->is_string()) {
      type = it->get<std::string>();
    } else if (node.contains("properties")) {
      type = "object";  // common shorthand: properties imply an object
    }

    if (type == "string") {
      ParamSchema s = string_schema();
      if (auto it = node.find("minLength"); it != node.end() && it->is_number_integer()) {
        s.min_len = it->get<std::int64_t>();
      }
      if (auto it = node.find("maxLength"); it != node.end() && it->is_number_integer()) {
        s.max_len = it->get<std::int64_t>();
      }
      return s;
    }
    if (type == "integer" || type == "number") {
      if (type == "number") {
        warn(loc, "number has no direct counterpart; mapped as integer");
      }
      ParamSchema s;
      s.kind = SchemaKind::kInt;
      if (auto it = node.find("minimum"); it != node.end() && it->is_number()) {
        s.min = static_cast<std::int64_t>(std::ceil(it->get<double>()));
      }
      if (auto it = node.find("maximum"); it != node.end() && it->is_number()) {
        s.max = static_cast<std::int64_t>(std::floor(it->get<double>()));
      }
      return s;
    }
    if (type == "boolean") {
      ParamSchema s;
      s.kind = SchemaKind::kBool;
      return s;
    }
    if (type == "array") {
      ParamSchema s;
      s.kind = SchemaKind::kVector;
      if (auto it = node.find("items"); it != node.end()) {
        s.of.push_back(convert(*it, loc + ".items"));
      } else {
        warn(loc, "array without items; element mapped as unconstrained string");
        s.of.push_back(string_schema());
      }
      return s;
    }
    if (type == "object") {
      ParamSchema s;
      s.kind = SchemaKind::kMap;
      std::set<std::string> required;
      if (auto it = node.find("required"); it != node.end() && it->is_array()) {
        for (const Json& r : *it) {
          if (r.is_string()) required.insert(r.get<std::string>());
        }
      }
      if (auto it = node.find("properties"); it != node.end() && it->is_object()) {
        for (auto p = it->begin(); p != it->end(); ++p) {
          ParamSchema::MapField field;
          field.name = p.key();
          field.required = required.contains(p.key());
          field.schema.push_back(convert(p.value(), loc + ".properties." + p.key()));
          s.fields.push_back(std::move(field));
        }
      }
      if (auto it = node.find("additionalProperties");
          it != node.end() && it->is_object()) {
        warn(loc, "additionalProperties schema ignored; declared fields kept");
      }
      std::sort(s.fields.begin(), s.fields.end(),
                [](const auto& a, const auto& b) { return a.name < b.name; });
      return s;
    }

    warn(loc, type.empty() ? "schema without type; mapped as unconstrained string"
                           : "type \"" + type + "\" is not supported; mapped as "
                             "unconstrained string");
    return string_schema();
  }

  std::optional<ParamSchema> json_content_schema(const Json& owner,
                                                 const std::string& loc) {
    auto content = owner.find("content");
    if (content == owner.end() || !content->is_object()) return std::nullopt;
    auto media = content->find("application/json");
    if (media == content->end()) {
      if (!content->empty()) {
        warn(loc, "no application/json content; other media types skipped");
      }
      return std::nullopt;
    }
    auto schema = media->find("schema");
    if (schema == media->end()) return std::nullopt;
    return convert(*schema, loc + ".content.application/json.schema");
  }

  void map_operation(const std::string& path, const std::string& method,
                     const Json& path_item, const Json& op,
                     std::set<std::string>& used_keys) {
    const std::string loc = "paths." + path + "." + method;

    OperationSpec spec;
    if (auto it = op.find("operationId"); it != op.end() && it->is_string()) {
      spec.key = it->get<std::string>();
    } else {
      spec.key = slug_key(method, path);
    }
    if (used_keys.contains(spec.key)) {
      const std::string base = spec.key;
      for (int suffix = 2; used_keys.contains(spec.key); ++suffix) {
        spec.key = base + "-" + std::to_string(suffix);
      }
      warn(loc, "operation key \"" + base + "\" already taken; renamed to \"" +
                    spec.key + "\"");
    }
    used_keys.insert(spec.key);

    HttpTranslation http;
    http.method = upper(method);
    http.path = path;

    std::vector<ParamSchema::MapField> fields;
    auto add_field = [&](ParamSchema::MapField field, const std::string& placement,
                         const std::string& field_loc) {
      const auto clash = std::find_if(fields.begin(), fields.end(), [&](const auto& f) {
        return f.name == field.name;
      });
      if (clash != fields.end()) {
        warn(field_loc, "parameter \"" + field.name + "\" declared twice; "
                        "later declaration skipped");
        return;
      }
      http.placement[field.name] = placement;
      fields.push_back(std::move(field));
    };

    auto add_parameters = [&](const Json& owner, const std::string& owner_loc) {
      auto params = owner.find("parameters");
      if (params == owner.end() || !params->is_array()) return;
      for (std::size_t i = 0; i < params->size(); ++i) {
        const Json& p = (*params)[i];
        const std::string p_loc = owner_loc + ".parameters[" + std::to_string(i) + "]";
        if (!p.is_object() || !p.contains("name") || !p["name"].is_string()) {
          warn(p_loc, "parameter without a name skipped");
          continue;
        }
        const std::string name = p["name"].get<std::string>();
        const std::string in = p.contains("in") && p["in"].is_string()
                                   ? p["in"].get<std::string>()
                                   : "";
        if (in != "path" && in != "query") {
          warn(p_loc, "parameter location \"" + in + "\" is not supported; skipped");
          continue;
        }
        ParamSchema::MapField field;
        field.name = name;
        field.required = in == "path" ||
                         (p.contains("required") && p["required"].is_boolean() &&
                          p["required"].get<bool>());
        field.schema.push_back(p.contains("schema")
                                   ? convert(p["schema"], p_loc + ".schema")
                                   : string_schema());
        add_field(std::move(field), in, p_loc);
      }
    };
    add_parameters(path_item, "paths." + path);
    add_parameters(op, loc);

    if (auto body = op.find("requestBody"); body != op.end() && body->is_object()) {
      const std::string body_loc = loc + ".requestBody";
      if (auto schema = json_content_schema(*body, body_loc)) {
        const ParamSchema* structural = &*schema;
        if (structural->kind == SchemaKind::kRef) {
          auto named = amos.schemas.find(structural->name);
          if (named != amos.schemas.end()) structural = &named->second;
        }
        if (structural->kind == SchemaKind::kMap) {
          for (const ParamSchema::MapField& field : structural->fields) {
            add_field(field, "body", body_loc);
          }
        } else {
          warn(body_loc, "request body is not an object; wrapped as field \"body\"");
          ParamSchema::MapField field;
          field.name = "body";
          field.required = body->contains("required") &&
                           (*body)["required"].is_boolean() &&
                           (*body)["required"].get<bool>();
          field.schema.push_back(std::move(*schema));
          add_field(std::move(field), "body", body_loc);
        }
      }
    }

    if (!fields.empty()) {
      ParamSchema params;
      params.kind = SchemaKind::kMap;
      std::sort(fields.begin(), fields.end(),
                [](const auto& a, const auto& b) { return a.name < b.name; });
      params.fields = std::move(fields);
      spec.parameters = std::move(params);
    }

    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
      if (path[i] != '{') continue;
      const auto close = path.find('}', i);
      if (close == std::string::npos) break;
      const std::string var = path.substr(i + 1, close - i - 1);
      if (auto it = http.placement.find(var);
          it == http.placement.end() || it->second != "path") {
        warn(loc, "path template variable {" + var + "} has no path parameter");
      }
      i = close;
    }

    if (auto responses = op.find("responses");
        responses != op.end() && responses->is_object()) {
      for (const char* status : {"200", "201"}) {
        auto r = responses->find(status);
        if (r == responses->end() || !r->is_object()) continue;
        if (auto schema = json_content_schema(*r, loc + ".responses." + status)) {
          spec.response_schema = std::move(*schema);
          break;
        }
      }
    }

    spec.translation = std::move(http);
    amos.operations.push_back(std::move(spec));
  }
};

}  // namespace

MappingReport map_openapi(const std::string& doc_text) {
  const Json doc = Json::parse(doc_text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw OpenApiError("document is not a JSON object");
  }
  const auto version = doc.find("openapi");
  if (version == doc.end() || !version->is_string() ||
      !version->get<std::string>().starts_with("3")) {
    throw OpenApiError("document does not declare an OpenAPI 3.x version");
  }
  const auto paths = doc.find("paths");
  if (paths == doc.end() || !paths->is_object() || paths->empty()) {
    throw OpenApiError("document declares no paths");
  }

  Mapper mapper;
  mapper.amos.version = 1;
  mapper.amos.invocation_method = "http";
  Json config = Json::object();
  if (auto servers = doc.find("servers");
      servers != doc.end() && servers->is_array() && !servers->empty() &&
      servers->front().is_object() && servers->front().contains("url") &&
      servers->front()["url"].is_string()) {
    config["base-url"] = servers->front()["url"];
  }
  mapper.amos.invocation_config = std::move(config);

  if (auto components = doc.find("components");
      components != doc.end() && components->is_object()) {
    if (auto schemas = components->find("schemas");
        schemas != components->end() && schemas->is_object()) {
      for (auto it = schemas->begin(); it != schemas->end(); ++it) {
        mapper.amos.schemas[it.key()] =
            mapper.convert(it.value(), "components.schemas." + it.key());
      }
    }
  }

  std::set<std::string> used_keys;
  for (auto item = paths->begin(); item != paths->end(); ++item) {
    if (!item.value().is_object()) {
      mapper.warn("paths." + item.key(), "path item is not an object; skipped");
      continue;
    }
    if (item.value().contains("$ref")) {
      mapper.warn("paths." + item.key(), "$ref path items are not supported; skipped");
      continue;
    }
    for (auto method = item.value().begin(); method != item.value().end(); ++method) {
      if (!is_http_method(method.key())) continue;
      if (!method.value().is_object()) {
        mapper.warn("paths." + item.key() + "." + method.key(),
                    "operation is not an object; skipped");
        continue;
      }
      mapper.map_operation(item.key(), method.key(), item.value(), method.value(),
                           used_keys);
    }
  }

  return {std::move(mapper.amos), std::move(mapper.warnings)};
}

}  // namespace apix

#include "apixplore/amos.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace apix {

namespace {

[[noreturn]] void fail(const std::string& message) { throw AmosError(message); }

const Json& require_field(const Json& obj, const char* field,
                          const std::string& where) {
  auto it = obj.find(field);
  if (it == obj.end()) {
    fail("missing required field \"" + std::string(field) + "\" in " + where);
  }
  return *it;
}

std::int64_t require_int(const Json& j, const char* field,
                         const std::string& where) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) {
    fail("field \"" + std::string(field) + "\" in " + where +
         " must be an integer");
  }
  return j.get<std::int64_t>();
}

std::string require_string(const Json& j, const char* field,
                           const std::string& where) {
  if (!j.is_string()) {
    fail("field \"" + std::string(field) + "\" in " + where +
         " must be a string");
  }
  return j.get<std::string>();
}

ParamSchema parse_schema(const Json& node, const std::string& where);

ParamSchema::MapField parse_field(const std::string& name, const Json& node,
                                  const std::string& where) {
  ParamSchema::MapField field;
  field.name = name;
  if (!node.is_object()) fail("field \"" + name + "\" in " + where + " must be an object");
  field.schema.push_back(
      parse_schema(require_field(node, "schema", where + "." + name), where + "." + name));
  if (auto it = node.find("required"); it != node.end()) {
    if (!it->is_boolean()) fail("\"required\" in " + where + "." + name + " must be a boolean");
    field.required = it->get<bool>();
  }
  return field;
}

ParamSchema parse_schema(const Json& node, const std::string& where) {
  if (!node.is_object()) fail("schema node in " + where + " must be an object");
  ParamSchema schema;
  const std::string type = require_string(require_field(node, "type", where), "type", where);
  if (type == "string") {
    schema.kind = SchemaKind::kString;
    if (auto it = node.find("min-len"); it != node.end())
      schema.min_len = require_int(*it, "min-len", where);
    if (auto it = node.find("max-len"); it != node.end())
      schema.max_len = require_int(*it, "max-len", where);
  } else if (type == "int") {
    schema.kind = SchemaKind::kInt;
    if (auto it = node.find("min"); it != node.end())
      schema.min = require_int(*it, "min", where);
    if (auto it = node.find("max"); it != node.end())
      schema.max = require_int(*it, "max", where);
  } else if (type == "bool") {
    schema.kind = SchemaKind::kBool;
  } else if (type == "enum") {
    schema.kind = SchemaKind::kEnum;
    const Json& values = require_field(node, "values", where);
    if (!values.is_array() || values.empty())
      fail("\"values\" in " + where + " must be a non-empty array");
    for (const auto& v : values) schema.values.push_back(v);
  } else if (type == "map") {
    schema.kind = SchemaKind::kMap;
    const Json& fields = require_field(node, "fields", where);
    if (!fields.is_object()) fail("\"fields\" in " + where + " must be an object");
    for (auto it = fields.begin(); it != fields.end(); ++it) {
      schema.fields.push_back(parse_field(it.key(), it.value(), where));
    }
    // nlohmann iterates sorted; keep the invariant explicit anyway.
    std::sort(schema.fields.begin(), schema.fields.end(),
              [](const auto& a, const auto& b) { return a.name < b.name; });
  } else if (type == "vector") {
    schema.kind = SchemaKind::kVector;
    schema.of.push_back(parse_schema(require_field(node, "of", where), where + "[]"));
  } else if (type == "ref") {
    schema.kind = SchemaKind::kRef;
    schema.name = require_string(require_field(node, "name", where), "name", where);
  } else {
    fail("unknown schema kind \"" + type + "\" in " + where);
  }
  return schema;
}

Translation parse_translation(const Json& node, const std::string& where) {
  if (!node.is_object()) fail("\"translation\" in " + where + " must be an object");
  if (auto it = node.find("in-process"); it != node.end()) {
    InProcessTranslation t;
    t.handler = require_string(require_field(*it, "handler", where), "handler", where);
    return t;
  }
  if (auto it = node.find("http"); it != node.end()) {
    HttpTranslation t;
    t.method = require_string(require_field(*it, "method", where), "method", where);
    t.path = require_string(require_field(*it, "path", where), "path", where);
    if (auto p = it->find("placement"); p != it->end()) {
      if (!p->is_object()) fail("\"placement\" in " + where + " must be an object");
      for (auto pit = p->begin(); pit != p->end(); ++pit) {
        const std::string v = pit.value().get<std::string>();
        if (v != "path" && v != "query" && v != "body") {
          fail("placement for \"" + pit.key() + "\" in " + where +
               " must be path, query, or body");
        }
        t.placement[pit.key()] = v;
      }
    }
    return t;
  }
  fail("\"translation\" in " + where + " must contain \"in-process\" or \"http\"");
}

Annotations parse_annotations(const Json& node, const std::string& where) {
  Annotations a;
  if (!node.is_object()) fail("\"annotations\" in " + where + " must be an object");
  if (auto it = node.find("query-candidate"); it != node.end())
    a.query_candidate = it->get<bool>();
  if (auto it = node.find("ranged"); it != node.end()) a.ranged = it->get<bool>();
  if (auto it = node.find("state-changing-hint"); it != node.end())
    a.state_changing_hint = it->get<bool>();
  if (auto it = node.find("page-param"); it != node.end())
    a.page_param = require_string(*it, "page-param", where);
  if (auto it = node.find("page-size"); it != node.end())
    a.page_size = require_int(*it, "page-size", where);
  return a;
}

OperationSpec parse_operation(const Json& node) {
  if (!node.is_object()) fail("operation entries must be objects");
  OperationSpec op;
  op.key = require_string(require_field(node, "key", "operation"), "key", "operation");
  const std::string where = "operation \"" + op.key + "\"";
  const Json& params = require_field(node, "parameters", where);
  if (!params.is_null()) op.parameters = parse_schema(params, where + " parameters");
  if (auto it = node.find("response-schema"); it != node.end() && !it->is_null()) {
    op.response_schema = parse_schema(*it, where + " response-schema");
  }
  if (auto it = node.find("annotations"); it != node.end() && !it->is_null()) {
    op.annotations = parse_annotations(*it, where);
  }
  op.translation = parse_translation(require_field(node, "translation", where), where);
  return op;
}

Json schema_to_json(const ParamSchema& schema) {
  Json node = Json::object();
  switch (schema.kind) {
    case SchemaKind::kString:
      node["type"] = "string";
      if (schema.min_len) node["min-len"] = *schema.min_len;
      if (schema.max_len) node["max-len"] = *schema.max_len;
      break;
    case SchemaKind::kInt:
      node["type"] = "int";
      if (schema.min) node["min"] = *schema.min;
      if (schema.max) node["max"] = *schema.max;
      break;
    case SchemaKind::kBool:
      node["type"] = "bool";
      break;
    case SchemaKind::kEnum:
      node["type"] = "enum";
      node["values"] = schema.values;
      break;
    case SchemaKind::kMap: {
      node["type"] = "map";
      Json fields = Json::object();
      for (const auto& f : schema.fields) {
        fields[f.name] = Json{{"schema", schema_to_json(f.get())},
                              {"required", f.required}};
      }
      node["fields"] = fields;
      break;
    }
    case SchemaKind::kVector:
      node["type"] = "vector";
      node["of"] = schema_to_json(schema.element());
      break;
    case SchemaKind::kRef:
      node["type"] = "ref";
      node["name"] = schema.name;
      break;
  }
  return node;
}

Json translation_to_json(const Translation& t) {
  Json node = Json::object();
  if (std::holds_alternative<InProcessTranslation>(t)) {
    node["in-process"] = Json{{"handler", std::get<InProcessTranslation>(t).handler}};
  } else {
    const auto& h = std::get<HttpTranslation>(t);
    Json inner = Json{{"method", h.method}, {"path", h.path}};
    if (!h.placement.empty()) {
      Json placement = Json::object();
      for (const auto& [k, v] : h.placement) placement[k] = v;
      inner["placement"] = placement;
    }
    node["http"] = inner;
  }
  return node;
}

/// Walks a schema tree, calling fn on every node (named refs not followed).
void walk_schema(const ParamSchema& schema,
                 const std::function<void(const ParamSchema&)>& fn) {
  fn(schema);
  for (const auto& f : schema.fields) walk_schema(f.get(), fn);
  if (!schema.of.empty()) walk_schema(schema.element(), fn);
}

}  // namespace

std::string to_string(SchemaKind kind) {
  switch (kind) {
    case SchemaKind::kString: return "string";
    case SchemaKind::kInt: return "int";
    case SchemaKind::kBool: return "bool";
    case SchemaKind::kEnum: return "enum";
    case SchemaKind::kMap: return "map";
    case SchemaKind::kVector: return "vector";
    case SchemaKind::kRef: return "ref";
  }
  return "unknown";
}

const ParamSchema::MapField* ParamSchema::find_field(
    const std::string& field_name) const {
  for (const auto& f : fields) {
    if (f.name == field_name) return &f;
  }
  return nullptr;
}

const OperationSpec* Amos::find_operation(const std::string& key) const {
  for (const auto& op : operations) {
    if (op.key == key) return &op;
  }
  return nullptr;
}

Amos parse_amos(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(std::string("catalogue syntax error: ") + e.what());
  }
  if (!doc.is_object()) fail("catalogue root must be an object");

  static const std::set<std::string> known = {
      "amos-version", "invocation", "schemas", "operations", "reset"};
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!known.contains(it.key())) {
      fail("unknown top-level field \"" + it.key() + "\"");
    }
  }

  Amos amos;
  amos.version = require_int(require_field(doc, "amos-version", "catalogue"),
                             "amos-version", "catalogue");
  const Json& invocation = require_field(doc, "invocation", "catalogue");
  amos.invocation_method = require_string(
      require_field(invocation, "method", "invocation"), "method", "invocation");
  if (auto it = invocation.find("config"); it != invocation.end()) {
    amos.invocation_config = *it;
  }
  if (auto it = doc.find("schemas"); it != doc.end()) {
    if (!it->is_object()) fail("\"schemas\" must be an object");
    for (auto sit = it->begin(); sit != it->end(); ++sit) {
      amos.schemas.emplace(sit.key(),
                           parse_schema(sit.value(), "schema \"" + sit.key() + "\""));
    }
  }
  const Json& operations = require_field(doc, "operations", "catalogue");
  if (!operations.is_array()) fail("\"operations\" must be an array");
  for (const auto& node : operations) amos.operations.push_back(parse_operation(node));
  if (auto it = doc.find("reset"); it != doc.end() && !it->is_null()) {
    const std::string strategy = require_string(
        require_field(*it, "strategy", "reset"), "strategy", "reset");
    if (strategy != "operation") fail("unsupported reset strategy \"" + strategy + "\"");
    ResetSpec reset;
    reset.key = require_string(require_field(*it, "key", "reset"), "key", "reset");
    if (auto sit = it->find("sleep-ms"); sit != it->end()) {
      reset.sleep_ms = require_int(*sit, "sleep-ms", "reset");
      if (reset.sleep_ms < 0) fail("\"sleep-ms\" in reset must be >= 0");
    }
    amos.reset = reset;
  }
  return amos;
}

std::vector<Violation> validate_amos(const Amos& amos) {
  std::vector<Violation> out;
  const auto add = [&out](std::string op, std::string kind, std::string message) {
    out.push_back({std::move(op), std::move(kind), std::move(message)});
  };

  if (amos.invocation_method != "in-process" && amos.invocation_method != "http") {
    add("", "invocation",
        "invocation method \"" + amos.invocation_method +
            "\" does not name a registered adapter kind");
  }

  const auto check_tree = [&](const std::string& op_key, const ParamSchema& root) {
    walk_schema(root, [&](const ParamSchema& s) {
      if (s.kind == SchemaKind::kRef && !amos.schemas.contains(s.name)) {
        add(op_key, "unresolved-ref", "named schema \"" + s.name + "\" is not defined");
      }
      if (s.kind == SchemaKind::kInt && s.min && s.max && *s.min > *s.max) {
        add(op_key, "bounds", "int schema has min > max");
      }
      if (s.kind == SchemaKind::kString && s.min_len && s.max_len &&
          *s.min_len > *s.max_len) {
        add(op_key, "bounds", "string schema has min-len > max-len");
      }
    });
  };

  for (const auto& [name, schema] : amos.schemas) check_tree("", schema);

  std::set<std::string> seen_keys;
  for (const auto& op : amos.operations) {
    if (!seen_keys.insert(op.key).second) {
      add(op.key, "duplicate-key", "operation key appears more than once");
    }
    if (op.parameters) check_tree(op.key, *op.parameters);
    if (op.response_schema) check_tree(op.key, *op.response_schema);
    if (op.annotations.ranged &&
        (op.annotations.page_param.empty() || op.annotations.page_size <= 0)) {
      add(op.key, "ranged-config",
          "ranged operation needs a page-param and a positive page-size");
    }
  }

  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.op_key, a.kind, a.message) < std::tie(b.op_key, b.kind, b.message);
  });
  return out;
}

const ParamSchema& resolve_schema(const ParamSchema& schema,
                                  const std::map<std::string, ParamSchema>& schemas) {
  const ParamSchema* cur = &schema;
  int guard = 0;
  while (cur->kind == SchemaKind::kRef) {
    auto it = schemas.find(cur->name);
    if (it == schemas.end()) {
      throw AmosError("named schema \"" + cur->name + "\" is not defined");
    }
    cur = &it->second;
    if (++guard > 32) throw AmosError("named schema reference cycle");
  }
  return *cur;
}

bool conforms(const Json& value, const ParamSchema& schema,
              const std::map<std::string, ParamSchema>& schemas) {
  switch (schema.kind) {
    case SchemaKind::kRef: {
      auto it = schemas.find(schema.name);
      if (it == schemas.end()) return false;
      return conforms(value, it->second, schemas);
    }
    case SchemaKind::kString: {
      if (!value.is_string()) return false;
      const auto len = static_cast<std::int64_t>(value.get<std::string>().size());
      if (schema.min_len && len < *schema.min_len) return false;
      if (schema.max_len && len > *schema.max_len) return false;
      return true;
    }
    case SchemaKind::kInt: {
      if (!value.is_number_integer() && !value.is_number_unsigned()) return false;
      const auto v = value.get<std::int64_t>();
      if (schema.min && v < *schema.min) return false;
      if (schema.max && v > *schema.max) return false;
      return true;
    }
    case SchemaKind::kBool:
      return value.is_boolean();
    case SchemaKind::kEnum:
      return std::any_of(schema.values.begin(), schema.values.end(),
                         [&value](const Json& v) { return v == value; });
    case SchemaKind::kMap: {
      if (!value.is_object()) return false;
      for (const auto& field : schema.fields) {
        auto it = value.find(field.name);
        if (it == value.end()) {
          if (field.required) return false;
          continue;
        }
        if (!conforms(*it, field.get(), schemas)) return false;
      }
      return true;  // extra fields tolerated
    }
    case SchemaKind::kVector: {
      if (!value.is_array()) return false;
      return std::all_of(value.begin(), value.end(), [&](const Json& item) {
        return conforms(item, schema.element(), schemas);
      });
    }
  }
  return false;
}

std::string render_amos(const Amos& amos) {
  Json doc = Json::object();
  doc["amos-version"] = amos.version;
  doc["invocation"] =
      Json{{"method", amos.invocation_method}, {"config", amos.invocation_config}};
  Json schemas = Json::object();
  for (const auto& [name, schema] : amos.schemas) schemas[name] = schema_to_json(schema);
  doc["schemas"] = schemas;
  Json ops = Json::array();
  for (const auto& op : amos.operations) {
    Json node = Json::object();
    node["key"] = op.key;
    node["parameters"] = op.parameters ? schema_to_json(*op.parameters) : Json();
    if (op.response_schema) node["response-schema"] = schema_to_json(*op.response_schema);
    const Annotations& a = op.annotations;
    if (a.query_candidate || a.ranged || a.state_changing_hint) {
      Json ann = Json::object();
      if (a.query_candidate) ann["query-candidate"] = true;
      if (a.state_changing_hint) ann["state-changing-hint"] = true;
      if (a.ranged) {
        ann["ranged"] = true;
        ann["page-param"] = a.page_param;
        ann["page-size"] = a.page_size;
      }
      node["annotations"] = ann;
    }
    node["translation"] = translation_to_json(op.translation);
    ops.push_back(node);
  }
  doc["operations"] = ops;
  if (amos.reset) {
    doc["reset"] = Json{{"strategy", "operation"},
                        {"key", amos.reset->key},
                        {"sleep-ms", amos.reset->sleep_ms}};
  }
  return doc.dump(2) + "\n";
}

}  // namespace apix

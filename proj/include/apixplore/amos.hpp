#pragma once

/// @file amos.hpp
/// Abstract method and operation catalogue: what an API offers and how to call
/// it, deliberately free of any behavioural description.
///
/// A catalogue names the invocation method, a table of named schemas, the
/// operations (key, parameter schema, optional response schema, optional
/// annotations, translation data), and an optional reset operation.  The
/// external format is JSON; see parse_amos / render_amos.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "apixplore/value.hpp"

namespace apix {

enum class SchemaKind : std::uint8_t {
  kString,
  kInt,
  kBool,
  kEnum,
  kMap,
  kVector,
  kRef,
};

std::string to_string(SchemaKind kind);

/// Parameter/response schema node.  Which members are meaningful depends on
/// kind:
///   string  -> min_len / max_len
///   int     -> min / max
///   enum    -> values (allowed literals, order as listed)
///   map     -> fields (sorted by name; open world, extra fields tolerated)
///   vector  -> element() (homogeneous)
///   ref     -> name (target in the catalogue's schema table)
struct ParamSchema {
  struct MapField {
    std::string name;
    bool required = true;
    std::vector<ParamSchema> schema;  ///< exactly one element

    const ParamSchema& get() const { return schema.front(); }
    bool operator==(const MapField&) const = default;
  };

  SchemaKind kind = SchemaKind::kString;
  std::optional<std::int64_t> min, max;          ///< int bounds
  std::optional<std::int64_t> min_len, max_len;  ///< string length bounds
  std::vector<Json> values;                      ///< enum literals
  std::vector<MapField> fields;                  ///< map fields, sorted
  std::vector<ParamSchema> of;                   ///< vector element (0 or 1)
  std::string name;                              ///< ref target

  const ParamSchema& element() const { return of.front(); }
  const MapField* find_field(const std::string& field_name) const;
  bool operator==(const ParamSchema&) const = default;
};

struct HttpTranslation {
  std::string method;  ///< uppercase verb
  std::string path;    ///< may contain {var} template segments
  /// parameter name -> "path" | "query" | "body"; parameters without an entry
  /// never reach the wire.
  std::map<std::string, std::string> placement;
  bool operator==(const HttpTranslation&) const = default;
};

struct InProcessTranslation {
  std::string handler;  ///< dispatch key for the in-process adapter
  bool operator==(const InProcessTranslation&) const = default;
};

using Translation = std::variant<InProcessTranslation, HttpTranslation>;

/// Optional per-operation enrichment.  ranged marks paged reads the executor
/// must aggregate; query_candidate and state_changing_hint are advisory.
struct Annotations {
  bool query_candidate = false;
  bool ranged = false;
  bool state_changing_hint = false;
  std::string page_param;      ///< ranged only
  std::int64_t page_size = 0;  ///< ranged only
  bool operator==(const Annotations&) const = default;
};

struct OperationSpec {
  std::string key;
  std::optional<ParamSchema> parameters;
  std::optional<ParamSchema> response_schema;
  Annotations annotations;
  Translation translation;
  bool operator==(const OperationSpec&) const = default;
};

/// Reset is special-cased, not a regular operation: the key is handed to the
/// adapter, which decides how to honour it.
struct ResetSpec {
  std::string key;
  std::int64_t sleep_ms = 0;  ///< settle time after the reset call
  bool operator==(const ResetSpec&) const = default;
};

struct Amos {
  std::int64_t version = 1;
  std::string invocation_method;  ///< "in-process" | "http"
  Json invocation_config = Json::object();
  std::map<std::string, ParamSchema> schemas;
  std::vector<OperationSpec> operations;
  std::optional<ResetSpec> reset;

  const OperationSpec* find_operation(const std::string& key) const;
  bool operator==(const Amos&) const = default;
};

/// Raised on malformed catalogue text; the message names the offending field
/// or byte position.
struct AmosError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One validation finding.  op_key is empty for catalogue-level findings.
struct Violation {
  std::string op_key;
  std::string kind;  ///< "unresolved-ref" | "duplicate-key" | "ranged-config"
                     ///< | "bounds" | "invocation"
  std::string message;
  bool operator==(const Violation&) const = default;
};

/// Parses catalogue JSON text.  Unknown top-level fields, unknown schema
/// kinds, and missing required fields are rejected with AmosError.
Amos parse_amos(const std::string& text);

/// Structural validation of a parsed catalogue.  Returns all findings sorted
/// by operation key, then kind.  An empty result means the catalogue is usable
/// by the generator and executor.
std::vector<Violation> validate_amos(const Amos& amos);

/// Open-world conformance: does `value` satisfy `schema`?  Map values may
/// carry extra fields beyond the declared ones; declared fields that are
/// present must conform, required ones must be present.  Named refs resolve
/// through `schemas`.
bool conforms(const Json& value, const ParamSchema& schema,
              const std::map<std::string, ParamSchema>& schemas);

/// Follows named references until a structural schema node is reached.
/// Throws AmosError on undefined names and reference cycles.
const ParamSchema& resolve_schema(const ParamSchema& schema,
                                  const std::map<std::string, ParamSchema>& schemas);

/// Canonical JSON rendering (sorted keys, 2-space indent, trailing newline).
/// parse_amos(render_amos(a)) == a for every valid catalogue.
std::string render_amos(const Amos& amos);

}  // namespace apix

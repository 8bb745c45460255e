#pragma once

/// @file value.hpp
/// Shared value plumbing: JSON alias, paths into values, stable hashing.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace apix {

/// Concrete values (parameters, bodies, schema literals) are JSON.  nlohmann's
/// default object representation keeps keys sorted, which doubles as the
/// canonical rendering used for observation equality.
using Json = nlohmann::json;

/// One step of a path into a JSON value: map key or vector index.
using PathStep = std::variant<std::string, std::size_t>;
using Path = std::vector<PathStep>;

/// Renders a path as a compact human-readable suffix, e.g. `[0].id`.
std::string path_to_string(const Path& path);

/// Path as a JSON array (strings and integers), for report documents.
Json path_to_json(const Path& path);
Path path_from_json(const Json& j);

/// Navigates `value` along `path`.  Returns nullopt when a key is missing, an
/// index is out of bounds, or the path descends into a scalar.
std::optional<Json> value_at_path(const Json& value, const Path& path);

/// Enumerates `value` itself plus every map/vector member reachable from it,
/// in deterministic order (preorder; map keys sorted, vector indices
/// ascending).
std::vector<std::pair<Path, Json>> enumerate_subvalues(const Json& value);

/// FNV-1a over bytes; used for canonical keys so files are identical across
/// platforms and runs.
std::uint64_t fnv1a(std::uint64_t h, const std::string& bytes);
constexpr std::uint64_t kFnvBasis = 0xcbf29ce484222325ULL;

}  // namespace apix

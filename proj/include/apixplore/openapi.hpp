#pragma once

/// @file openapi.hpp
/// One-way mapping from an OpenAPI 3.x document (JSON form) to an operation
/// catalogue.  Lossy corners are surfaced as warnings rather than guessed at.

#include <stdexcept>
#include <string>
#include <vector>

#include "apixplore/amos.hpp"

namespace apix {

struct MappingWarning {
  std::string location;  ///< dotted path into the document, e.g. "paths./x.get"
  std::string reason;
  bool operator==(const MappingWarning&) const = default;
};

struct MappingReport {
  Amos amos;
  std::vector<MappingWarning> warnings;
};

struct OpenApiError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Maps an OpenAPI 3.x JSON document to a catalogue.  One operation per
/// (path, method) pair; path/query/body parameters merge into a single map
/// schema with wire placement recorded in the translation.  Unsupported
/// constructs are replaced by the closest supported node and reported in
/// warnings.  Throws OpenApiError when the document does not parse, is not
/// OpenAPI 3.x, or declares no paths.
MappingReport map_openapi(const std::string& doc_text);

}  // namespace apix

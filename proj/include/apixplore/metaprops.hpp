#pragma once

/// @file metaprops.hpp
/// The seven meta-properties: behaviour-independent predicates over execution
/// traces, plus the sequence shapes that make candidates eligible for each.
///
/// Response properties (MP-R-*) compare per-step responses.  State properties
/// (MP-S-*) compare instrumentation snapshots taken with a query operation;
/// MP-S-4/5 additionally compare snapshot sizes under a fixed compression
/// metric, so growth is visible even when bodies are large.

#include <cstdint>
#include <string>
#include <vector>

#include "apixplore/observation.hpp"

namespace apix {

enum class MetaProperty : std::uint8_t {
  kR1,  ///< repeated identical calls answer identically
  kR2,  ///< identical first and last calls answer differently
  kS1,  ///< state identical before and after, no observed change
  kS2,  ///< state differs before vs after
  kS3,  ///< state restored, but visibly changed in between
  kS4,  ///< state differs and its compressed size grew
  kS5,  ///< after setup, state differs and its compressed size shrank
};

std::string to_string(MetaProperty prop);
/// Parses "MP-R-1" .. "MP-S-5"; throws std::invalid_argument otherwise.
MetaProperty meta_property_from_string(const std::string& text);
std::vector<MetaProperty> all_meta_properties();

/// Structural requirements a candidate must satisfy for a property.
struct SequenceShape {
  MetaProperty prop = MetaProperty::kR1;
  int min_len = 2;
  bool fixed_len = false;    ///< length is exactly min_len (repetition pairs)
  bool duplicate_all = false;  ///< every step repeats step 1 (op + params)
  bool pin_ends = false;     ///< first and last step identical (op + params)
  bool instrumented = false;  ///< needs a query context and snapshots
  int min_setup = 0;         ///< leading setup steps required (MP-S-5)
  bool operator==(const SequenceShape&) const = default;
};

SequenceShape shape_constraints(MetaProperty prop);

/// Size of a state body under the pinned compression configuration (gzip
/// container, fixed level, zeroed header metadata).  Deterministic across
/// platforms; used by MP-S-4/5 to order states by information content.
std::size_t state_size(const std::string& body);

/// Does the trace satisfy the property?  Incomplete (aborted) traces never
/// conform.  Throws std::invalid_argument when a state property is evaluated
/// on a trace without instrumentation snapshots.
bool evaluate(MetaProperty prop, const ExecutionTrace& trace);

}  // namespace apix

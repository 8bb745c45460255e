#pragma once

/// @file observation.hpp
/// What came back from the system under test: per-step observations, state
/// snapshots taken by instrumentation, and the full execution trace.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apixplore/value.hpp"

namespace apix {

/// A single response: status code plus canonical body bytes.  Two
/// observations are equal iff status and body are equal; bodies are
/// canonicalized (JSON re-serialized with sorted keys) before they get here.
struct Observation {
  int status = 0;
  std::string body;
  bool operator==(const Observation&) const = default;
  bool operator<(const Observation& other) const {
    if (status != other.status) return status < other.status;
    return body < other.body;
  }
};

/// Result of one instrumentation query, plus the size of its body under the
/// fixed compression metric.
struct StateSnapshot {
  Observation observation;
  std::size_t size = 0;
  bool operator==(const StateSnapshot&) const = default;
};

/// How to observe state between steps: which operation to query and with what
/// (concrete) parameters.  Absent context means no instrumentation.
struct QueryContext {
  std::string query_op;
  std::optional<Json> query_params;
  bool operator==(const QueryContext&) const = default;
};

/// One executed step: the operation, the fully resolved parameters, what the
/// system answered, and any symbol bindings this step created.
struct TraceStep {
  std::string op_key;
  std::optional<Json> params;
  Observation observation;
  std::map<std::string, Json> bindings;
  bool operator==(const TraceStep&) const = default;
};

/// Execution record of a whole candidate.  With instrumentation there are
/// exactly steps.size() + 1 snapshots: one before the first step, one after
/// each step.  A resolution or transport failure aborts the trace; `error`
/// then describes the failing step and no further steps are recorded.
struct ExecutionTrace {
  std::vector<TraceStep> steps;
  std::vector<StateSnapshot> snapshots;
  int setup_len = 0;  ///< leading setup steps (state-decrease searches)
  std::optional<std::string> error;
  bool complete() const { return !error.has_value(); }
  bool operator==(const ExecutionTrace&) const = default;
};

}  // namespace apix

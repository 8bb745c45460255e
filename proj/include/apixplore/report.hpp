#pragma once

/// @file report.hpp
/// Three renderings of an exploration result: a canonical data document that
/// parses back losslessly, fixed-template human-readable text, and
/// self-contained replayable test cases that keep references symbolic.

#include <optional>
#include <string>
#include <vector>

#include "apixplore/explorer.hpp"

namespace apix {

/// Canonical report document: JSON text with sorted keys, property blocks in
/// meta-property id order, examples in discovery order.  Ends with a newline.
std::string render_data(const ExplorationResult& result);

/// Inverse of render_data.  Throws std::runtime_error on malformed input.
ExplorationResult parse_report(const std::string& text);

/// Fixed-template text: per example a "<prop> <first-op>" header and one
/// numbered "call" line per step; properties without examples report
/// "No example found".  Symbolic parameters show their letter, the sample
/// value the discovering run bound, and where the value comes from.
std::vector<std::string> render_human(const ExplorationResult& result);

/// A replayable test case parsed back from its document form.
struct TestCase {
  MetaProperty prop = MetaProperty::kR1;
  CandidateSequence sequence;
  std::optional<QueryContext> ctx;  ///< instrumentation for state properties
  bool reset_first = true;          ///< soft-reset before replaying
  bool operator==(const TestCase&) const = default;
};

/// Emits one example as a test-case document.  Parameter trees stay
/// symbolic: values the discovering run bound from responses never appear,
/// so a replay resolves references against the fresh system's own answers.
/// `ctx` must be the query context the example was explored under (state
/// properties need it to take snapshots when replayed).
Json emit_test_case(const GeneratedExample& ex, const std::optional<QueryContext>& ctx);

/// Inverse of emit_test_case.  Throws std::runtime_error on malformed input.
TestCase parse_test_case(const Json& doc);

}  // namespace apix

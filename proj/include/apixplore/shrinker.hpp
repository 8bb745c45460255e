#pragma once

/// @file shrinker.hpp
/// Greedy reduction of a property-conforming sequence to a 1-minimal example:
/// no single step-closure removal and no single listed value simplification
/// preserves the property any further.
///
/// Every attempt keeps the sequence shape valid (pinned endpoints, duplicate
/// mirroring, setup prefix) and reference-closed (removing a step takes every
/// dependent step with it).  Attempts re-execute from a reset state; progress
/// is strictly monotone in (step count, then total value size), so the loop
/// terminates even without a budget.

#include <cstdint>
#include <optional>
#include <vector>

#include "apixplore/executor.hpp"
#include "apixplore/genseq.hpp"

namespace apix {

struct ShrinkBudget {
  int max_reexecutions = 500;
};

/// Step positions that must leave together with `index`: the step itself plus
/// the transitive closure of later steps referencing any removed step's
/// bindings.  Sorted ascending.  nullopt when the step is pinned by the
/// sequence shape and cannot be removed.
std::optional<std::vector<std::size_t>> removal_closure(const CandidateSequence& cand,
                                                        std::size_t index);

/// Ordered simplification candidates for a concrete value, most aggressive
/// first; all conform to `schema`.  Ints halve toward the schema lower bound
/// (0 when unbounded), strings drop chunks of characters down to min-len,
/// enums move toward the first literal, maps drop optional fields and shrink
/// fields recursively, vectors drop items and shrink them recursively.
std::vector<Json> shrink_value(const Json& value, const ParamSchema& schema,
                               const std::map<std::string, ParamSchema>& schemas);

struct ShrinkResult {
  CandidateSequence sequence;  ///< symbols renamed to first-use order a, b, ...
  ExecutionTrace trace;        ///< trace of the accepted sequence's execution
  bool conforming = false;     ///< the initial execution satisfied the property
  bool truncated = false;      ///< budget ran out before the fixpoint
  int reexecutions = 0;
};

/// Shrinks `cand` (which conformed when the caller executed it) against the
/// live adapter.  Each attempt soft-resets, re-executes, and is kept only if
/// the property still holds.  Removal attempts go largest-chunk-first with
/// halving chunk sizes, left to right, then single steps; value attempts walk
/// steps in order and each parameter tree top-down.  A symbolic reference is
/// offered the literal it resolved to: references survive only where the
/// literal breaks the property (server-minted identifiers do).  On budget
/// exhaustion the best form found so far is returned with `truncated` set.
ShrinkResult shrink_example(const CandidateSequence& cand, const std::optional<QueryContext>& ctx,
                            Adapter& adapter, const Amos& amos, const ShrinkBudget& budget);

}  // namespace apix

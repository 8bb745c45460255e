#pragma once

/// @file explorer.hpp
/// The exploration loop: per meta-property, generate candidate sequences,
/// execute them, keep the conforming ones, shrink, and collect structurally
/// novel examples until the iteration budget runs out.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apixplore/executor.hpp"
#include "apixplore/genseq.hpp"
#include "apixplore/metaprops.hpp"
#include "apixplore/shrinker.hpp"

namespace apix {

struct ExplorationConfig {
  std::vector<MetaProperty> props;
  int tests_per_iteration = 100;
  int iterations = 5;
  std::uint64_t seed = 0;
  ModePolicy mode_policy = ModePolicy::kReferencesAllowed;
  std::optional<QueryContext> ctx;  ///< required for state properties
  ShrinkBudget shrink;
};

/// A minimal relevant example: the shrunken symbolic sequence, plus the
/// concrete values its symbols took in the run that established it (so
/// reports can show "a = 7 (sample)" next to the reference).
struct GeneratedExample {
  MetaProperty prop = MetaProperty::kR1;
  CandidateSequence sequence;
  std::map<std::string, Json> samples;
  std::uint64_t key = 0;
  bool truncated = false;  ///< shrinking hit its budget before the fixpoint
  bool operator==(const GeneratedExample&) const = default;
};

struct PropResult {
  MetaProperty prop = MetaProperty::kR1;
  std::vector<GeneratedExample> examples;  ///< pairwise distinct keys
  std::int64_t trials = 0;                 ///< candidates generated and executed
  bool operator==(const PropResult&) const = default;
};

struct ExplorationResult {
  std::vector<PropResult> props;  ///< one entry per configured property, in order
  std::vector<std::string> warnings;
  bool operator==(const ExplorationResult&) const = default;
};

/// Structural identity of an example: operation keys in order, the setup
/// split, and for every parameter slot whether it is a concrete value or a
/// reference (and for references, their full declaration and path shape).
/// Concrete values and symbol names are excluded, so two discoveries that
/// differ only in data collapse to one key.
std::uint64_t canonical_key(const CandidateSequence& cand);

/// Runs the exploration.  For each property: `iterations` rounds of up to
/// `tests_per_iteration` trials each (soft reset before every trial); a round
/// ends early when a conforming candidate shrinks to a structure not seen
/// before.  Known structures keep consuming the round's budget.  Throws
/// std::invalid_argument when a state property is configured without a query
/// context.
ExplorationResult explore(const Amos& amos, Adapter& adapter,
                          const ExplorationConfig& config);

}  // namespace apix

#pragma once

/// @file genseq.hpp
/// Candidate sequence generation: pick operations, fill parameter trees leaf
/// by leaf, and wire in symbolic references to earlier values.
///
/// Each tree node is filled in one of three modes: a fresh random value, a
/// reference to an earlier step's parameter value, or a reference to an
/// earlier step's response.  Reference modes are only eligible when something
/// referencable exists, and the choice among eligible modes is uniform.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "apixplore/amos.hpp"
#include "apixplore/metaprops.hpp"
#include "apixplore/paramtree.hpp"
#include "apixplore/rng.hpp"

namespace apix {

enum class ParamMode : std::uint8_t {
  kRandomValue,
  kParamReference,
  kResponseReference,
};

enum class ModePolicy : std::uint8_t {
  kRandomOnly,         ///< every leaf is a fresh random value
  kReferencesAllowed,  ///< all eligible modes, chosen uniformly per leaf
};

/// Declares where a symbol's value comes from at execution time: a step's
/// response, or the node at `anchor` inside a step's parameter tree.
struct BindingDecl {
  std::string symbol;
  int step = 0;
  RefSource source = RefSource::kParameter;
  Path anchor;
  bool operator==(const BindingDecl&) const = default;
};

struct Step {
  std::string op_key;
  std::optional<ParamTree> params;
  bool mirrored = false;  ///< literal copy of the pinned first step
  bool operator==(const Step&) const = default;
};

struct CandidateSequence {
  MetaProperty prop = MetaProperty::kR1;
  std::vector<Step> steps;
  int setup_len = 0;
  std::vector<BindingDecl> bindings;  ///< in symbol order a, b, c, ...

  const BindingDecl* find_binding(const std::string& symbol) const;
  bool operator==(const CandidateSequence&) const = default;
};

/// Symbol for binding index i: a, b, ..., z, aa, ab, ...
std::string symbol_name(std::size_t index);

/// Random concrete value for a schema.  Magnitudes and lengths scale with
/// `size`; size 0 produces the schema's minimal value (empty or shortest
/// string, lower bound, false, first enum literal, empty vector, map with
/// only required fields at minimal values).
Json generate_value(const ParamSchema& schema, Rng& rng, int size,
                    const std::map<std::string, ParamSchema>& schemas);

/// Which fill modes are eligible for steps generated after `prefix`:
/// random-value always; parameter references once an earlier step carries a
/// non-empty parameter tree; response references once any earlier step exists
/// (its response will have been observed by the time the reference resolves).
std::vector<ParamMode> eligible_modes(const std::vector<Step>& prefix,
                                      const Amos& amos);

/// An already-bound value offered to select_reference.
struct PoolBinding {
  std::string symbol;
  Json value;
};

struct SelectedReference {
  std::size_t binding_index = 0;
  Path path;  ///< into the binding's value
};

/// Picks a backward reference from a pool of bound values.  With a target
/// schema, only sub-values conforming to it are considered; without one, any
/// sub-value may be chosen.  Uniform over the candidate set; nullopt when the
/// (filtered) pool is empty.
std::optional<SelectedReference> select_reference(
    const std::vector<PoolBinding>& pool,
    const std::optional<ParamSchema>& target, Rng& rng,
    const std::map<std::string, ParamSchema>& schemas);

/// Generates one candidate conforming to `shape`.  Sequence length falls in
/// [shape.min_len, shape.min_len + size] (fixed-length shapes always use the
/// minimum).  Throws AmosError when the catalogue has no operations.
CandidateSequence generate_candidate(const Amos& amos, const SequenceShape& shape,
                                     Rng& rng, int size, ModePolicy policy);

/// Raised when a symbolic reference cannot be resolved against the
/// environment built up during execution.
struct ResolveError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Replaces every symbolic reference with the referenced value.  `env` maps
/// symbols to bound values; unknown symbols and paths that do not exist in
/// the bound value raise ResolveError.
Json resolve_params(const ParamTree& tree, const std::map<std::string, Json>& env);

/// Structural shape check used by tests and the shrinker: length bounds,
/// duplication/pinning, setup prefix, and strictly-backward references with
/// declared bindings.  Returns human-readable violations; empty means valid.
std::vector<std::string> check_shape(const CandidateSequence& cand,
                                     const SequenceShape& shape);

}  // namespace apix

#include "apixplore/explorer.hpp"

#include <algorithm>
#include <set>

#include "apixplore/rng.hpp"

namespace apix {

namespace {

void hash_tree(std::uint64_t& h, const ParamTree& tree, const CandidateSequence& cand) {
  if (const auto* ref = std::get_if<SymbolicRef>(&tree.node())) {
    h = fnv1a(h, "r");
    h = fnv1a(h, to_string(ref->source));
    h = fnv1a(h, path_to_string(ref->path));
    // Identify the binding by position and anchor, never by its letter.
    const BindingDecl* binding = cand.find_binding(ref->symbol);
    if (binding != nullptr) {
      h = fnv1a(h, "@" + std::to_string(binding->step));
      h = fnv1a(h, to_string(binding->source));
      h = fnv1a(h, path_to_string(binding->anchor));
    } else {
      h = fnv1a(h, "@?");
    }
    return;
  }
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    h = fnv1a(h, "m");
    for (const auto& [name, child] : map->fields) {
      h = fnv1a(h, name);
      h = fnv1a(h, "=");
      hash_tree(h, child, cand);
    }
    h = fnv1a(h, ";");
    return;
  }
  if (const auto* vec = std::get_if<ParamTree::VecNode>(&tree.node())) {
    h = fnv1a(h, "s");
    for (const ParamTree& child : vec->items) hash_tree(h, child, cand);
    h = fnv1a(h, ";");
    return;
  }
  h = fnv1a(h, "v");  // concrete subtree: shape only, value excluded
}

/// Query context with defaulted parameters: when the query operation takes
/// parameters and none were supplied, use the schema's minimal values so the
/// instrumentation call is identical everywhere.
QueryContext effective_context(const QueryContext& ctx, const Amos& amos) {
  QueryContext out = ctx;
  if (out.query_params) return out;
  const OperationSpec* op = amos.find_operation(ctx.query_op);
  if (op == nullptr) {
    throw std::invalid_argument("query operation \"" + ctx.query_op +
                                "\" is not in the catalogue");
  }
  if (op->parameters) {
    Rng throwaway(0);  // size 0 draws nothing from it
    out.query_params = generate_value(*op->parameters, throwaway, 0, amos.schemas);
  }
  return out;
}

}  // namespace

std::uint64_t canonical_key(const CandidateSequence& cand) {
  std::uint64_t h = kFnvBasis;
  h = fnv1a(h, to_string(cand.prop));
  h = fnv1a(h, "#" + std::to_string(cand.setup_len));
  for (const Step& step : cand.steps) {
    h = fnv1a(h, step.op_key);
    h = fnv1a(h, step.mirrored ? "'" : "");
    if (step.params) {
      hash_tree(h, *step.params, cand);
    } else {
      h = fnv1a(h, "-");
    }
    h = fnv1a(h, "|");
  }
  return h;
}

ExplorationResult explore(const Amos& amos, Adapter& adapter,
                          const ExplorationConfig& config) {
  if (config.tests_per_iteration < 1 || config.iterations < 1) {
    throw std::invalid_argument("tests per iteration and iterations must be positive");
  }

  std::optional<QueryContext> ctx;
  for (const MetaProperty prop : config.props) {
    if (!shape_constraints(prop).instrumented) continue;
    if (!config.ctx) {
      throw std::invalid_argument(std::string(to_string(prop)) +
                                  " needs a query context to observe state");
    }
    if (!ctx) ctx = effective_context(*config.ctx, amos);
  }

  ExplorationResult result;
  const auto note_warning = [&result](const std::optional<std::string>& warning) {
    if (!warning) return;
    if (std::find(result.warnings.begin(), result.warnings.end(), *warning) ==
        result.warnings.end()) {
      result.warnings.push_back(*warning);
    }
  };

  Rng master(config.seed);
  for (const MetaProperty prop : config.props) {
    Rng prop_rng = master.split();
    const SequenceShape shape = shape_constraints(prop);
    const std::optional<QueryContext>& trace_ctx =
        shape.instrumented ? ctx : std::nullopt;

    PropResult pr;
    pr.prop = prop;
    std::set<std::uint64_t> seen;

    for (int iteration = 0; iteration < config.iterations; ++iteration) {
      Rng iter_rng = prop_rng.split();
      for (int trial = 0; trial < config.tests_per_iteration; ++trial) {
        Rng trial_rng = iter_rng.split();
        const int size = trial % 10;
        const CandidateSequence cand =
            generate_candidate(amos, shape, trial_rng, size, config.mode_policy);

        note_warning(soft_reset(adapter, amos).warning);
        const ExecutionTrace trace = execute_candidate(cand, adapter, amos, trace_ctx);
        ++pr.trials;
        if (!trace.complete() || !evaluate(prop, trace)) continue;

        const ShrinkResult shrunk =
            shrink_example(cand, trace_ctx, adapter, amos, config.shrink);
        if (!shrunk.conforming) continue;  // did not hold from a fresh reset

        const std::uint64_t key = canonical_key(shrunk.sequence);
        if (!seen.insert(key).second) continue;  // known structure; keep trying

        GeneratedExample example;
        example.prop = prop;
        example.sequence = shrunk.sequence;
        example.key = key;
        example.truncated = shrunk.truncated;
        for (const TraceStep& step : shrunk.trace.steps) {
          for (const auto& [symbol, value] : step.bindings) {
            example.samples[symbol] = value;
          }
        }
        pr.examples.push_back(std::move(example));
        break;  // the round found something new
      }
    }
    result.props.push_back(std::move(pr));
  }
  return result;
}

}  // namespace apix

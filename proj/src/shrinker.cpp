#include "apixplore/shrinker.hpp"

#include <algorithm>
#include <set>

namespace apix {

namespace {

bool step_pinned(const CandidateSequence& cand, std::size_t index) {
  const SequenceShape shape = shape_constraints(cand.prop);
  if (shape.duplicate_all) return true;
  if (shape.pin_ends && (index == 0 || index + 1 == cand.steps.size())) return true;
  return false;
}

/// Pinned duplicates repeat step 1's call; keep their trees literal copies.
void apply_mirrors(CandidateSequence& cand) {
  for (std::size_t i = 1; i < cand.steps.size(); ++i) {
    if (cand.steps[i].mirrored) cand.steps[i].params = cand.steps[0].params;
  }
}

CandidateSequence remove_steps(const CandidateSequence& cand,
                               const std::set<std::size_t>& removed) {
  CandidateSequence out;
  out.prop = cand.prop;
  std::vector<int> newidx(cand.steps.size(), -1);
  for (std::size_t i = 0; i < cand.steps.size(); ++i) {
    if (removed.count(i) != 0) continue;
    newidx[i] = static_cast<int>(out.steps.size());
    out.steps.push_back(cand.steps[i]);
    if (static_cast<int>(i) < cand.setup_len) ++out.setup_len;
  }

  std::set<std::string> used;
  for (const Step& step : out.steps) {
    if (!step.params) continue;
    for (const SymbolicRef& ref : step.params->collect_refs()) used.insert(ref.symbol);
  }
  for (BindingDecl binding : cand.bindings) {
    if (newidx[static_cast<std::size_t>(binding.step)] < 0) continue;
    if (used.count(binding.symbol) == 0) continue;
    binding.step = newidx[static_cast<std::size_t>(binding.step)];
    out.bindings.push_back(std::move(binding));
  }
  return out;
}

/// Renames symbols to a, b, c, ... in first-reference order and drops
/// bindings nothing references, so structurally equal shrink results are
/// literally equal.  The applied renaming is reported through `rename_out`.
CandidateSequence normalize_symbols(const CandidateSequence& cand,
                                    std::map<std::string, std::string>* rename_out) {
  std::map<std::string, std::string> rename;
  std::vector<std::string> order;
  for (const Step& step : cand.steps) {
    if (!step.params) continue;
    for (const SymbolicRef& ref : step.params->collect_refs()) {
      if (rename.count(ref.symbol) != 0) continue;
      rename[ref.symbol] = symbol_name(order.size());
      order.push_back(ref.symbol);
    }
  }

  CandidateSequence out = cand;
  out.bindings.clear();
  for (const std::string& old : order) {
    const BindingDecl* binding = cand.find_binding(old);
    if (binding == nullptr) continue;  // check_shape rejects this earlier
    BindingDecl renamed = *binding;
    renamed.symbol = rename[old];
    out.bindings.push_back(std::move(renamed));
  }

  const std::function<void(ParamTree&)> rewrite = [&](ParamTree& tree) {
    if (auto* ref = std::get_if<SymbolicRef>(&tree.node())) {
      auto it = rename.find(ref->symbol);
      if (it != rename.end()) ref->symbol = it->second;
      return;
    }
    if (auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
      for (auto& [name, child] : map->fields) rewrite(child);
      return;
    }
    if (auto* vec = std::get_if<ParamTree::VecNode>(&tree.node())) {
      for (ParamTree& child : vec->items) rewrite(child);
    }
  };
  for (Step& step : out.steps) {
    if (step.params) rewrite(*step.params);
  }
  if (rename_out != nullptr) *rename_out = std::move(rename);
  return out;
}

/// Rekeys the per-step binding records of a trace after symbol renaming.
void rename_trace_bindings(ExecutionTrace& trace,
                           const std::map<std::string, std::string>& rename) {
  for (TraceStep& step : trace.steps) {
    std::map<std::string, Json> renamed;
    for (auto& [symbol, value] : step.bindings) {
      auto it = rename.find(symbol);
      renamed.emplace(it != rename.end() ? it->second : symbol, std::move(value));
    }
    step.bindings = std::move(renamed);
  }
}

/// Schema of the node reached by `path` from an operation's parameter
/// schema, or nullptr when the path leaves the declared shape.
const ParamSchema* schema_at(const ParamSchema* root, const Path& path,
                             const std::map<std::string, ParamSchema>& schemas) {
  if (root == nullptr) return nullptr;
  const ParamSchema* cur = &resolve_schema(*root, schemas);
  for (const PathStep& ps : path) {
    if (const auto* field = std::get_if<std::string>(&ps)) {
      if (cur->kind != SchemaKind::kMap) return nullptr;
      const auto* f = cur->find_field(*field);
      if (f == nullptr) return nullptr;
      cur = &resolve_schema(f->get(), schemas);
    } else {
      if (cur->kind != SchemaKind::kVector) return nullptr;
      cur = &resolve_schema(cur->element(), schemas);
    }
  }
  return cur;
}

void int_candidates(std::int64_t v, std::int64_t target, std::vector<Json>& out) {
  if (v == target) return;
  std::set<std::int64_t> seen{v};
  const auto push = [&](std::int64_t c) {
    if (seen.insert(c).second) out.push_back(Json(c));
  };
  push(target);
  const __int128 d = static_cast<__int128>(v) - target;
  for (__int128 step = d / 2; step != 0; step /= 2) {
    push(static_cast<std::int64_t>(v - step));
  }
  push(v - (d > 0 ? 1 : -1));
}

void string_candidates(const std::string& s, std::int64_t min_len,
                       std::vector<Json>& out) {
  const std::size_t n = s.size();
  const std::size_t keep = min_len > 0 ? static_cast<std::size_t>(min_len) : 0;
  std::set<std::string> seen{s};
  for (std::size_t chunk = n; chunk >= 1; chunk /= 2) {
    if (n - chunk < keep) continue;
    for (std::size_t pos = n - chunk;; --pos) {
      std::string cand = s;
      cand.erase(pos, chunk);
      if (seen.insert(cand).second) out.push_back(Json(cand));
      if (pos == 0) break;
    }
  }
}

}  // namespace

std::optional<std::vector<std::size_t>> removal_closure(const CandidateSequence& cand,
                                                        std::size_t index) {
  if (index >= cand.steps.size()) {
    throw std::invalid_argument("removal index out of range");
  }
  if (step_pinned(cand, index)) return std::nullopt;

  std::set<std::size_t> closure{index};
  bool grew = true;
  while (grew) {
    grew = false;
    // A binding declared on a removed step drags every referencing step along.
    std::set<std::string> doomed;
    for (const BindingDecl& b : cand.bindings) {
      if (closure.count(static_cast<std::size_t>(b.step)) != 0) doomed.insert(b.symbol);
    }
    for (std::size_t j = 0; j < cand.steps.size(); ++j) {
      if (closure.count(j) != 0 || !cand.steps[j].params) continue;
      for (const SymbolicRef& ref : cand.steps[j].params->collect_refs()) {
        if (doomed.count(ref.symbol) != 0) {
          if (step_pinned(cand, j)) return std::nullopt;  // would tear a pinned end
          closure.insert(j);
          grew = true;
          break;
        }
      }
    }
  }
  return std::vector<std::size_t>(closure.begin(), closure.end());
}

std::vector<Json> shrink_value(const Json& value, const ParamSchema& schema0,
                               const std::map<std::string, ParamSchema>& schemas) {
  const ParamSchema& schema = resolve_schema(schema0, schemas);
  std::vector<Json> out;
  switch (schema.kind) {
    case SchemaKind::kInt: {
      if (!value.is_number_integer()) break;
      const std::int64_t v = value.get<std::int64_t>();
      const std::int64_t target =
          schema.min ? *schema.min : std::min<std::int64_t>(0, schema.max.value_or(0));
      int_candidates(v, target, out);
      break;
    }
    case SchemaKind::kString: {
      if (!value.is_string()) break;
      string_candidates(value.get<std::string>(), schema.min_len.value_or(0), out);
      break;
    }
    case SchemaKind::kBool: {
      if (value.is_boolean() && value.get<bool>()) out.push_back(Json(false));
      break;
    }
    case SchemaKind::kEnum: {
      for (const Json& literal : schema.values) {
        if (literal == value) break;
        out.push_back(literal);
      }
      break;
    }
    case SchemaKind::kMap: {
      if (!value.is_object()) break;
      for (const auto& field : schema.fields) {
        if (field.required || !value.contains(field.name)) continue;
        Json dropped = value;
        dropped.erase(field.name);
        out.push_back(std::move(dropped));
      }
      for (const auto& field : schema.fields) {
        if (!value.contains(field.name)) continue;
        for (Json& sub : shrink_value(value.at(field.name), field.get(), schemas)) {
          Json replaced = value;
          replaced[field.name] = std::move(sub);
          out.push_back(std::move(replaced));
        }
      }
      break;
    }
    case SchemaKind::kVector: {
      if (!value.is_array()) break;
      const std::size_t n = value.size();
      for (std::size_t chunk = n; chunk >= 1; chunk /= 2) {
        for (std::size_t pos = n - chunk;; --pos) {
          Json dropped = Json::array();
          for (std::size_t i = 0; i < n; ++i) {
            if (i < pos || i >= pos + chunk) dropped.push_back(value.at(i));
          }
          out.push_back(std::move(dropped));
          if (pos == 0) break;
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        for (Json& sub : shrink_value(value.at(i), schema.element(), schemas)) {
          Json replaced = value;
          replaced[i] = std::move(sub);
          out.push_back(std::move(replaced));
        }
      }
      break;
    }
    case SchemaKind::kRef:
      break;  // unreachable: resolved above
  }
  return out;
}

namespace {

struct ShrinkSession {
  Adapter& adapter;
  const Amos& amos;
  const std::optional<QueryContext>& ctx;
  int remaining;
  bool truncated = false;
  int used = 0;

  std::optional<ExecutionTrace> try_execute(const CandidateSequence& cand) {
    if (remaining <= 0) {
      truncated = true;
      return std::nullopt;
    }
    --remaining;
    ++used;
    soft_reset(adapter, amos);
    return execute_candidate(cand, adapter, amos, ctx);
  }
};

// One removal accepted per call; the caller restarts the fixpoint loop.
bool removal_pass(CandidateSequence& best, ExecutionTrace& best_trace,
                  ShrinkSession& session) {
  const std::size_t n = best.steps.size();
  const SequenceShape shape = shape_constraints(best.prop);
  for (std::size_t chunk = n / 2; chunk >= 1; chunk /= 2) {
    for (std::size_t start = 0; start + chunk <= n; ++start) {
      std::set<std::size_t> closure;
      bool removable = true;
      for (std::size_t i = start; i < start + chunk; ++i) {
        const auto c = removal_closure(best, i);
        if (!c) {
          removable = false;
          break;
        }
        closure.insert(c->begin(), c->end());
      }
      if (!removable || closure.size() >= n) continue;
      CandidateSequence attempt = remove_steps(best, closure);
      if (!check_shape(attempt, shape).empty()) continue;
      const auto trace = session.try_execute(attempt);
      if (!trace) return false;
      if (!trace->complete() || !evaluate(attempt.prop, *trace)) continue;
      best = std::move(attempt);
      best_trace = *trace;
      return true;
    }
  }
  return false;
}

void collect_paths(const ParamTree& tree, Path& cur, std::vector<Path>& out) {
  out.push_back(cur);
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    for (const auto& [name, child] : map->fields) {
      cur.push_back(name);
      collect_paths(child, cur, out);
      cur.pop_back();
    }
    return;
  }
  if (const auto* vec = std::get_if<ParamTree::VecNode>(&tree.node())) {
    for (std::size_t i = 0; i < vec->items.size(); ++i) {
      cur.push_back(i);
      collect_paths(vec->items[i], cur, out);
      cur.pop_back();
    }
  }
}

/// Structural tree for a resolved value, mirroring what generation builds:
/// maps and vectors become structural nodes, scalars (and values the schema
/// treats as atoms, like enum literals) stay concrete leaves.
ParamTree tree_of_value(const Json& value, const ParamSchema* schema0,
                        const std::map<std::string, ParamSchema>& schemas) {
  const ParamSchema* schema =
      schema0 != nullptr ? &resolve_schema(*schema0, schemas) : nullptr;
  if (value.is_object() && (schema == nullptr || schema->kind == SchemaKind::kMap)) {
    ParamTree::MapNode map;
    for (const auto& [name, sub] : value.items()) {
      const auto* field = schema != nullptr ? schema->find_field(name) : nullptr;
      map.fields.emplace(name,
                         tree_of_value(sub, field != nullptr ? &field->get() : nullptr,
                                       schemas));
    }
    return ParamTree(ParamTree::Node(std::move(map)));
  }
  if (value.is_array() &&
      (schema == nullptr || schema->kind == SchemaKind::kVector)) {
    ParamTree::VecNode vec;
    const ParamSchema* element =
        schema != nullptr && schema->kind == SchemaKind::kVector ? &schema->element()
                                                                 : nullptr;
    for (const auto& sub : value) vec.items.push_back(tree_of_value(sub, element, schemas));
    return ParamTree(ParamTree::Node(std::move(vec)));
  }
  return ParamTree::concrete(value);
}

/// Replacement candidates for one tree node, in attempt order.
/// `resolved_root` is the step's resolved parameter value from the accepted
/// trace; it supplies the literal a symbolic reference stood for.
std::vector<ParamTree::Node> node_candidates(const CandidateSequence& cand,
                                             std::size_t step_index, const Path& path,
                                             const ParamTree& node,
                                             const ParamSchema* root_schema,
                                             const Json* resolved_root,
                                             const Amos& amos) {
  std::vector<ParamTree::Node> out;
  const ParamSchema* schema = schema_at(root_schema, path, amos.schemas);

  if (node.is_ref()) {
    // A literal is simpler than a reference: offer the value the reference
    // resolved to.  References the behaviour genuinely needs (server-minted
    // identifiers) survive because the literal attempt fails on re-execution.
    if (resolved_root != nullptr) {
      if (const auto value = value_at_path(*resolved_root, path)) {
        out.push_back(tree_of_value(*value, schema, amos.schemas).node());
      }
    }
    return out;
  }

  if (const auto* map = std::get_if<ParamTree::MapNode>(&node.node())) {
    if (schema == nullptr || schema->kind != SchemaKind::kMap) return out;
    // Fields the schema does not declare (a dereferenced value can carry
    // them) go first: dropping them is pure normalization.
    for (const auto& [name, child] : map->fields) {
      if (schema->find_field(name) != nullptr) continue;
      ParamTree::MapNode dropped = *map;
      dropped.fields.erase(name);
      out.push_back(ParamTree::Node(std::move(dropped)));
    }
    for (const auto& field : schema->fields) {
      if (field.required || map->fields.count(field.name) == 0) continue;
      ParamTree::MapNode dropped = *map;
      dropped.fields.erase(field.name);
      out.push_back(ParamTree::Node(std::move(dropped)));
    }
    return out;
  }

  if (const auto* vec = std::get_if<ParamTree::VecNode>(&node.node())) {
    // Dropping items shifts indices; leave the vector alone when a binding
    // anchors through it, so anchors keep denoting the same node.
    for (const BindingDecl& b : cand.bindings) {
      if (b.source != RefSource::kParameter ||
          b.step != static_cast<int>(step_index) || b.anchor.size() <= path.size()) {
        continue;
      }
      if (std::equal(path.begin(), path.end(), b.anchor.begin())) return out;
    }
    const std::size_t n = vec->items.size();
    for (std::size_t chunk = n; chunk >= 1; chunk /= 2) {
      for (std::size_t pos = n - chunk;; --pos) {
        ParamTree::VecNode dropped;
        for (std::size_t i = 0; i < n; ++i) {
          if (i < pos || i >= pos + chunk) dropped.items.push_back(vec->items[i]);
        }
        out.push_back(ParamTree::Node(std::move(dropped)));
        if (pos == 0) break;
      }
    }
    return out;
  }

  if (const auto* value = std::get_if<Json>(&node.node())) {
    if (schema == nullptr) return out;
    for (Json& cand_value : shrink_value(*value, *schema, amos.schemas)) {
      out.push_back(ParamTree::Node(std::move(cand_value)));
    }
  }
  return out;
}

// One value simplification accepted per call.
bool value_pass(CandidateSequence& best, ExecutionTrace& best_trace,
                ShrinkSession& session, const Amos& amos) {
  const SequenceShape shape = shape_constraints(best.prop);
  for (std::size_t si = 0; si < best.steps.size(); ++si) {
    const Step& step = best.steps[si];
    if (step.mirrored || !step.params) continue;
    const OperationSpec* op = amos.find_operation(step.op_key);
    const ParamSchema* root_schema =
        (op != nullptr && op->parameters) ? &*op->parameters : nullptr;
    const Json* resolved_root =
        si < best_trace.steps.size() && best_trace.steps[si].params
            ? &*best_trace.steps[si].params
            : nullptr;

    std::vector<Path> paths;
    Path cur;
    collect_paths(*step.params, cur, paths);
    for (const Path& path : paths) {
      const ParamTree* node = step.params->subtree(path);
      if (node == nullptr) continue;
      for (ParamTree::Node& replacement :
           node_candidates(best, si, path, *node, root_schema, resolved_root, amos)) {
        CandidateSequence attempt = best;
        *attempt.steps[si].params->subtree(path) = ParamTree(std::move(replacement));
        apply_mirrors(attempt);
        // Replacing a reference can strand its binding; drop declarations
        // nothing references before executing.
        std::set<std::string> live;
        for (const Step& s : attempt.steps) {
          if (!s.params) continue;
          for (const SymbolicRef& r : s.params->collect_refs()) live.insert(r.symbol);
        }
        std::erase_if(attempt.bindings, [&](const BindingDecl& b) {
          return live.count(b.symbol) == 0;
        });
        if (!check_shape(attempt, shape).empty()) continue;
        const auto trace = session.try_execute(attempt);
        if (!trace) return false;
        if (!trace->complete() || !evaluate(attempt.prop, *trace)) continue;
        best = std::move(attempt);
        best_trace = *trace;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

ShrinkResult shrink_example(const CandidateSequence& cand,
                            const std::optional<QueryContext>& ctx, Adapter& adapter,
                            const Amos& amos, const ShrinkBudget& budget) {
  ShrinkSession session{adapter, amos, ctx, budget.max_reexecutions};

  CandidateSequence best = cand;
  apply_mirrors(best);

  ShrinkResult result;
  std::map<std::string, std::string> rename;
  const auto baseline = session.try_execute(best);
  if (!baseline) {
    result.sequence = normalize_symbols(best, &rename);
    result.truncated = true;
    result.reexecutions = session.used;
    return result;
  }
  if (!baseline->complete() || !evaluate(best.prop, *baseline)) {
    result.sequence = normalize_symbols(best, &rename);
    result.trace = *baseline;
    rename_trace_bindings(result.trace, rename);
    result.reexecutions = session.used;
    return result;
  }
  result.conforming = true;

  ExecutionTrace best_trace = *baseline;
  while (!session.truncated) {
    if (removal_pass(best, best_trace, session)) continue;
    if (session.truncated) break;
    if (value_pass(best, best_trace, session, amos)) continue;
    if (!session.truncated) break;  // fixpoint reached
  }

  result.sequence = normalize_symbols(best, &rename);
  result.trace = std::move(best_trace);
  rename_trace_bindings(result.trace, rename);
  result.truncated = session.truncated;
  result.reexecutions = session.used;
  return result;
}

}  // namespace apix

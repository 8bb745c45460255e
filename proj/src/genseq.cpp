#include "apixplore/genseq.hpp"

#include <algorithm>

namespace apix {

namespace {

constexpr char kAlphabet[] = "abcdefghijklmnopqrstuvwxyz0123456789";
constexpr std::uint64_t kAlphabetLen = 36;

std::int64_t spread_for(int size) {
  const int bits = std::min(size, 40);
  return std::int64_t(1) << bits;
}

const ParamSchema& resolve_ref(const ParamSchema& schema,
                               const std::map<std::string, ParamSchema>& schemas) {
  return resolve_schema(schema, schemas);
}

bool has_leaf(const ParamTree& tree) {
  if (tree.is_concrete() || tree.is_ref()) return true;
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    return std::any_of(map->fields.begin(), map->fields.end(),
                       [](const auto& f) { return has_leaf(f.second); });
  }
  const auto& vec = std::get<ParamTree::VecNode>(tree.node());
  return std::any_of(vec.items.begin(), vec.items.end(),
                     [](const ParamTree& t) { return has_leaf(t); });
}

}  // namespace

const BindingDecl* CandidateSequence::find_binding(const std::string& symbol) const {
  for (const auto& b : bindings) {
    if (b.symbol == symbol) return &b;
  }
  return nullptr;
}

std::string symbol_name(std::size_t index) {
  // Bijective base 26: a..z, aa, ab, ...
  std::string out;
  std::size_t n = index + 1;
  while (n > 0) {
    n -= 1;
    out.insert(out.begin(), static_cast<char>('a' + n % 26));
    n /= 26;
  }
  return out;
}

Json generate_value(const ParamSchema& schema0, Rng& rng, int size,
                    const std::map<std::string, ParamSchema>& schemas) {
  const ParamSchema& schema = resolve_ref(schema0, schemas);
  switch (schema.kind) {
    case SchemaKind::kString: {
      const std::int64_t lo = std::max<std::int64_t>(0, schema.min_len.value_or(0));
      std::int64_t hi = schema.max_len ? std::min(*schema.max_len, lo + size) : lo + size;
      if (hi < lo) hi = lo;
      const std::int64_t len = hi;
      std::string s;
      s.reserve(static_cast<std::size_t>(len));
      for (std::int64_t i = 0; i < len; ++i) s += kAlphabet[rng.below(kAlphabetLen)];
      return Json(s);
    }
    case SchemaKind::kInt: {
      if (schema.min && schema.max) {
        return size == 0 ? Json(*schema.min) : Json(rng.range(*schema.min, *schema.max));
      }
      if (schema.min) {
        return size == 0 ? Json(*schema.min)
                         : Json(rng.range(*schema.min, *schema.min + spread_for(size)));
      }
      if (schema.max) {
        const std::int64_t top = std::min<std::int64_t>(*schema.max, 0);
        if (size == 0) return Json(top);
        const std::int64_t hi = std::min(*schema.max, spread_for(size));
        return Json(rng.range(top - spread_for(size), std::max(top - spread_for(size), hi)));
      }
      return size == 0 ? Json(0) : Json(rng.range(-spread_for(size), spread_for(size)));
    }
    case SchemaKind::kBool:
      return Json(size != 0 && rng.chance(1, 2));
    case SchemaKind::kEnum:
      return size == 0 ? schema.values.front()
                       : schema.values[rng.below(schema.values.size())];
    case SchemaKind::kMap: {
      Json obj = Json::object();
      for (const auto& field : schema.fields) {
        if (field.required || (size > 0 && rng.chance(1, 3))) {
          obj[field.name] = generate_value(field.get(), rng, size, schemas);
        }
      }
      return obj;
    }
    case SchemaKind::kVector: {
      const std::int64_t len = size == 0 ? 0 : rng.range(0, size);
      Json arr = Json::array();
      for (std::int64_t i = 0; i < len; ++i) {
        arr.push_back(generate_value(schema.element(), rng, size, schemas));
      }
      return arr;
    }
    case SchemaKind::kRef:
      break;  // unreachable: resolved above
  }
  throw AmosError("cannot generate a value for this schema");
}

std::vector<ParamMode> eligible_modes(const std::vector<Step>& prefix,
                                      const Amos& /*amos*/) {
  std::vector<ParamMode> modes{ParamMode::kRandomValue};
  const bool any_params =
      std::any_of(prefix.begin(), prefix.end(), [](const Step& s) {
        return s.params.has_value() && has_leaf(*s.params);
      });
  if (any_params) modes.push_back(ParamMode::kParamReference);
  if (!prefix.empty()) modes.push_back(ParamMode::kResponseReference);
  return modes;
}

std::optional<SelectedReference> select_reference(
    const std::vector<PoolBinding>& pool,
    const std::optional<ParamSchema>& target, Rng& rng,
    const std::map<std::string, ParamSchema>& schemas) {
  std::vector<SelectedReference> candidates;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (const auto& [path, sub] : enumerate_subvalues(pool[i].value)) {
      if (!target || conforms(sub, *target, schemas)) {
        candidates.push_back({i, path});
      }
    }
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[rng.below(candidates.size())];
}

namespace {

struct GenContext {
  const Amos& amos;
  Rng& rng;
  int size;
  ModePolicy policy;
  std::vector<Step> steps;
  std::vector<BindingDecl> bindings;
};

std::string declare_binding(GenContext& ctx, int step, RefSource source,
                            const Path& anchor) {
  for (const auto& b : ctx.bindings) {
    if (b.step == step && b.source == source && b.anchor == anchor) return b.symbol;
  }
  std::string sym = symbol_name(ctx.bindings.size());
  ctx.bindings.push_back({sym, step, source, anchor});
  return sym;
}

struct GenPoolEntry {
  int step = 0;
  Path anchor;
  Json value;
};

void gather_concrete_nodes(const ParamTree& tree, int step, Path& prefix,
                           std::vector<GenPoolEntry>& out) {
  if (const auto* value = std::get_if<Json>(&tree.node())) {
    out.push_back({step, prefix, *value});
    return;
  }
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    for (const auto& [name, child] : map->fields) {
      prefix.emplace_back(name);
      gather_concrete_nodes(child, step, prefix, out);
      prefix.pop_back();
    }
    return;
  }
  if (const auto* vec = std::get_if<ParamTree::VecNode>(&tree.node())) {
    for (std::size_t i = 0; i < vec->items.size(); ++i) {
      prefix.emplace_back(i);
      gather_concrete_nodes(vec->items[i], step, prefix, out);
      prefix.pop_back();
    }
  }
}

std::vector<GenPoolEntry> build_param_pool(const std::vector<Step>& steps) {
  std::vector<GenPoolEntry> pool;
  static const std::map<std::string, Json> kEmptyEnv;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Step& step = steps[i];
    if (step.mirrored || !step.params) continue;
    Path prefix;
    gather_concrete_nodes(*step.params, static_cast<int>(i), prefix, pool);
    // The assembled whole-parameter value is referencable too, when nothing
    // in it is itself a reference.
    if (!step.params->is_concrete() && step.params->fully_concrete()) {
      pool.push_back({static_cast<int>(i), {}, resolve_params(*step.params, kEmptyEnv)});
    }
  }
  return pool;
}

struct SchemaPathEntry {
  Path path;
  const ParamSchema* schema;
};

void schema_paths_rec(const ParamSchema& schema,
                      const std::map<std::string, ParamSchema>& schemas,
                      Path& prefix, int depth, std::vector<SchemaPathEntry>& out) {
  const ParamSchema& r = resolve_ref(schema, schemas);
  out.push_back({prefix, &r});
  if (depth == 0) return;
  if (r.kind == SchemaKind::kMap) {
    for (const auto& field : r.fields) {
      if (!field.required) continue;  // optional fields may be absent at runtime
      prefix.emplace_back(field.name);
      schema_paths_rec(field.get(), schemas, prefix, depth - 1, out);
      prefix.pop_back();
    }
  } else if (r.kind == SchemaKind::kVector) {
    prefix.emplace_back(std::size_t{0});
    schema_paths_rec(r.element(), schemas, prefix, depth - 1, out);
    prefix.pop_back();
  }
}

bool schema_matches(const ParamSchema& sub0, const ParamSchema& target0,
                    const std::map<std::string, ParamSchema>& schemas, int depth) {
  if (depth == 0) return false;
  const ParamSchema& sub = resolve_ref(sub0, schemas);
  const ParamSchema& target = resolve_ref(target0, schemas);
  if (sub.kind != target.kind) return false;
  switch (target.kind) {
    case SchemaKind::kString: {
      const std::int64_t sub_lo = sub.min_len.value_or(0);
      const std::int64_t sub_hi = sub.max_len.value_or(INT64_MAX);
      const std::int64_t tgt_lo = target.min_len.value_or(0);
      const std::int64_t tgt_hi = target.max_len.value_or(INT64_MAX);
      return sub_lo <= tgt_hi && tgt_lo <= sub_hi;
    }
    case SchemaKind::kInt: {
      const std::int64_t sub_lo = sub.min.value_or(INT64_MIN);
      const std::int64_t sub_hi = sub.max.value_or(INT64_MAX);
      const std::int64_t tgt_lo = target.min.value_or(INT64_MIN);
      const std::int64_t tgt_hi = target.max.value_or(INT64_MAX);
      return sub_lo <= tgt_hi && tgt_lo <= sub_hi;
    }
    case SchemaKind::kBool:
      return true;
    case SchemaKind::kEnum:
      return std::all_of(sub.values.begin(), sub.values.end(), [&](const Json& v) {
        return std::any_of(target.values.begin(), target.values.end(),
                           [&](const Json& t) { return t == v; });
      });
    case SchemaKind::kMap:
      return std::all_of(
          target.fields.begin(), target.fields.end(), [&](const auto& tf) {
            if (!tf.required) return true;
            const auto* sf = sub.find_field(tf.name);
            return sf != nullptr && sf->required &&
                   schema_matches(sf->get(), tf.get(), schemas, depth - 1);
          });
    case SchemaKind::kVector:
      return schema_matches(sub.element(), target.element(), schemas, depth - 1);
    case SchemaKind::kRef:
      return false;  // unreachable: resolved above
  }
  return false;
}

struct RespCandidate {
  int step = 0;
  Path path;
};

/// Response references are chosen before anything has executed, so the pick
/// is driven by response schemas: paths into them whose sub-schema is
/// compatible with the target.  Steps whose operation declares no response
/// schema are skipped; without a schema there is no typed path to offer.
std::optional<RespCandidate> select_response_reference(GenContext& ctx,
                                                       const ParamSchema& target) {
  std::vector<RespCandidate> candidates;
  for (std::size_t i = 0; i < ctx.steps.size(); ++i) {
    if (ctx.steps[i].mirrored) continue;
    const OperationSpec* op = ctx.amos.find_operation(ctx.steps[i].op_key);
    if (op == nullptr || !op->response_schema) continue;
    std::vector<SchemaPathEntry> entries;
    Path prefix;
    schema_paths_rec(*op->response_schema, ctx.amos.schemas, prefix, 6, entries);
    for (const auto& entry : entries) {
      if (schema_matches(*entry.schema, target, ctx.amos.schemas, 8)) {
        candidates.push_back({static_cast<int>(i), entry.path});
      }
    }
  }
  if (candidates.empty()) return std::nullopt;
  return candidates[ctx.rng.below(candidates.size())];
}

ParamTree gen_tree(GenContext& ctx, const ParamSchema& schema0,
                   const std::vector<ParamMode>& modes) {
  const ParamSchema& schema = resolve_ref(schema0, ctx.amos.schemas);
  ParamMode mode = ParamMode::kRandomValue;
  if (ctx.policy == ModePolicy::kReferencesAllowed && modes.size() > 1) {
    mode = modes[ctx.rng.below(modes.size())];
  }
  if (mode == ParamMode::kParamReference) {
    const auto entries = build_param_pool(ctx.steps);
    std::vector<PoolBinding> pool;
    pool.reserve(entries.size());
    for (const auto& e : entries) pool.push_back({"", e.value});
    const auto sel = select_reference(pool, schema, ctx.rng, ctx.amos.schemas);
    if (sel) {
      const auto& e = entries[sel->binding_index];
      std::string sym = declare_binding(ctx, e.step, RefSource::kParameter, e.anchor);
      return ParamTree::ref({std::move(sym), sel->path, RefSource::kParameter});
    }
    // Nothing conforming to reference; fall through to a fresh value.
  } else if (mode == ParamMode::kResponseReference) {
    const auto sel = select_response_reference(ctx, schema);
    if (sel) {
      std::string sym = declare_binding(ctx, sel->step, RefSource::kResponse, {});
      return ParamTree::ref({std::move(sym), sel->path, RefSource::kResponse});
    }
  }
  switch (schema.kind) {
    case SchemaKind::kMap: {
      ParamTree::MapNode map;
      for (const auto& field : schema.fields) {
        if (field.required || (ctx.size > 0 && ctx.rng.chance(1, 3))) {
          map.fields.emplace(field.name, gen_tree(ctx, field.get(), modes));
        }
      }
      return ParamTree(ParamTree::Node(std::move(map)));
    }
    case SchemaKind::kVector: {
      const std::int64_t len = ctx.size == 0 ? 0 : ctx.rng.range(0, ctx.size);
      ParamTree::VecNode vec;
      for (std::int64_t i = 0; i < len; ++i) {
        vec.items.push_back(gen_tree(ctx, schema.element(), modes));
      }
      return ParamTree(ParamTree::Node(std::move(vec)));
    }
    default:
      return ParamTree::concrete(generate_value(schema, ctx.rng, ctx.size, ctx.amos.schemas));
  }
}

Step gen_step(GenContext& ctx) {
  const auto& ops = ctx.amos.operations;
  const OperationSpec& op = ops[ctx.rng.below(ops.size())];
  Step step;
  step.op_key = op.key;
  if (op.parameters) {
    const auto modes = eligible_modes(ctx.steps, ctx.amos);
    step.params = gen_tree(ctx, *op.parameters, modes);
  }
  return step;
}

}  // namespace

CandidateSequence generate_candidate(const Amos& amos, const SequenceShape& shape,
                                     Rng& rng, int size, ModePolicy policy) {
  if (amos.operations.empty()) throw AmosError("catalogue has no operations");
  GenContext ctx{amos, rng, size, policy, {}, {}};

  int len = shape.min_len;
  if (!shape.fixed_len && size > 0) {
    len += static_cast<int>(rng.below(static_cast<std::uint64_t>(size) + 1));
  }

  CandidateSequence cand;
  cand.prop = shape.prop;
  if (shape.duplicate_all) {
    Step first = gen_step(ctx);
    ctx.steps.push_back(first);
    for (int i = 1; i < len; ++i) {
      Step copy = first;
      copy.mirrored = true;
      ctx.steps.push_back(std::move(copy));
    }
  } else if (shape.pin_ends) {
    Step first = gen_step(ctx);
    ctx.steps.push_back(std::move(first));
    for (int i = 0; i < len - 2; ++i) ctx.steps.push_back(gen_step(ctx));
    Step last = ctx.steps.front();
    last.mirrored = true;
    ctx.steps.push_back(std::move(last));
  } else {
    for (int i = 0; i < len; ++i) ctx.steps.push_back(gen_step(ctx));
    if (shape.min_setup > 0) {
      cand.setup_len = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(len - 1)));
    }
  }
  cand.steps = std::move(ctx.steps);
  cand.bindings = std::move(ctx.bindings);
  return cand;
}

Json resolve_params(const ParamTree& tree, const std::map<std::string, Json>& env) {
  if (const auto* value = std::get_if<Json>(&tree.node())) return *value;
  if (const auto* ref = std::get_if<SymbolicRef>(&tree.node())) {
    auto it = env.find(ref->symbol);
    if (it == env.end()) {
      throw ResolveError("unbound symbol \"" + ref->symbol + "\"");
    }
    auto value = value_at_path(it->second, ref->path);
    if (!value) {
      throw ResolveError("path " + path_to_string(ref->path) +
                         " does not exist in the value bound to \"" + ref->symbol + "\"");
    }
    return *value;
  }
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    Json obj = Json::object();
    for (const auto& [name, child] : map->fields) obj[name] = resolve_params(child, env);
    return obj;
  }
  const auto& vec = std::get<ParamTree::VecNode>(tree.node());
  Json arr = Json::array();
  for (const auto& child : vec.items) arr.push_back(resolve_params(child, env));
  return arr;
}

std::vector<std::string> check_shape(const CandidateSequence& cand,
                                     const SequenceShape& shape) {
  std::vector<std::string> out;
  const int n = static_cast<int>(cand.steps.size());
  if (n < shape.min_len) out.push_back("sequence shorter than the shape minimum");
  if (shape.fixed_len && n != shape.min_len) {
    out.push_back("sequence length must be exactly the shape minimum");
  }
  const auto same_call = [](const Step& a, const Step& b) {
    return a.op_key == b.op_key && a.params == b.params;
  };
  if (shape.duplicate_all && n > 0) {
    for (int i = 1; i < n; ++i) {
      if (!same_call(cand.steps[0], cand.steps[i])) {
        out.push_back("step " + std::to_string(i + 1) + " does not repeat step 1");
      }
    }
  }
  if (shape.pin_ends && n >= 2 && !same_call(cand.steps.front(), cand.steps.back())) {
    out.push_back("first and last step are not the identical call");
  }
  if (shape.min_setup > 0) {
    if (cand.setup_len < shape.min_setup || cand.setup_len >= n) {
      out.push_back("setup prefix length out of range");
    }
  } else if (cand.setup_len != 0) {
    out.push_back("unexpected setup prefix");
  }
  for (int i = 0; i < n; ++i) {
    if (!cand.steps[i].params) continue;
    for (const auto& ref : cand.steps[i].params->collect_refs()) {
      const BindingDecl* binding = cand.find_binding(ref.symbol);
      if (binding == nullptr) {
        out.push_back("reference to undeclared symbol \"" + ref.symbol + "\"");
        continue;
      }
      if (binding->source != ref.source) {
        out.push_back("reference source disagrees with binding for \"" + ref.symbol + "\"");
      }
      if (binding->step >= i) {
        out.push_back("reference in step " + std::to_string(i + 1) +
                      " is not strictly backward");
      }
    }
  }
  for (const auto& binding : cand.bindings) {
    if (binding.step < 0 || binding.step >= n) {
      out.push_back("binding for \"" + binding.symbol + "\" names a missing step");
      continue;
    }
    if (binding.source == RefSource::kParameter) {
      const Step& step = cand.steps[binding.step];
      if (!step.params || step.params->subtree(binding.anchor) == nullptr) {
        out.push_back("binding for \"" + binding.symbol +
                      "\" anchors to a missing parameter node");
      }
    }
  }
  return out;
}

}  // namespace apix

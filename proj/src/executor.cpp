#include "apixplore/executor.hpp"

#include <sstream>

namespace apix {

namespace {

std::string scalar_to_wire(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  return value.dump();
}

Observation invoke_with_retry(Adapter& adapter, const OperationSpec& op,
                              const std::optional<Json>& params) {
  try {
    return invoke_operation(adapter, op, params);
  } catch (const TransportError&) {
    // One retry; a second failure propagates and aborts the trace.
    return invoke_operation(adapter, op, params);
  }
}

}  // namespace

std::string canonicalize_body(const std::string& body) {
  if (body.empty()) return body;
  Json parsed = Json::parse(body, nullptr, /*allow_exceptions=*/false);
  if (parsed.is_discarded()) return body;
  return parsed.dump();
}

WireRequest translate_http(const HttpTranslation& translation,
                           const std::optional<Json>& params) {
  const Json obj = params.value_or(Json::object());
  if (!obj.is_object() && !translation.placement.empty()) {
    throw TranslateError("placement requires map-shaped parameters");
  }

  WireRequest req;
  req.method = translation.method;

  // Path template substitution: {var} pulls the parameter of that name.
  std::string path;
  const std::string& tmpl = translation.path;
  for (std::size_t i = 0; i < tmpl.size();) {
    if (tmpl[i] != '{') {
      path += tmpl[i++];
      continue;
    }
    const auto end = tmpl.find('}', i);
    if (end == std::string::npos) throw TranslateError("unterminated path template");
    const std::string var = tmpl.substr(i + 1, end - i - 1);
    auto it = obj.is_object() ? obj.find(var) : obj.end();
    if (!obj.is_object() || it == obj.end()) {
      throw TranslateError("path template variable \"" + var + "\" has no parameter");
    }
    path += scalar_to_wire(*it);
    i = end + 1;
  }
  req.path = path;

  Json body = Json::object();
  if (obj.is_object()) {
    for (const auto& [name, where] : translation.placement) {
      auto it = obj.find(name);
      if (it == obj.end()) continue;  // optional parameter not supplied
      if (where == "query") {
        req.query.emplace_back(name, scalar_to_wire(*it));
      } else if (where == "body") {
        body[name] = *it;
      }
      // "path" parameters were consumed by the template above.
    }
  }
  if (!body.empty()) {
    req.body = body.dump();
    req.content_type = "application/json";
  }
  return req;
}

Observation fetch_ranged(Adapter& adapter, const OperationSpec& op,
                         const std::optional<Json>& params) {
  const Annotations& ann = op.annotations;
  Json base = params.value_or(Json::object());
  if (!base.is_object()) base = Json::object();
  base.erase(ann.page_param);  // the executor owns the page counter

  int status = 0;
  Json items = Json::array();
  for (std::int64_t page = 1;; ++page) {
    Json page_params = base;
    page_params[ann.page_param] = page;
    const Observation obs = adapter.invoke(op, page_params);
    if (page == 1) status = obs.status;
    Json parsed = Json::parse(obs.body, nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_array()) {
      // Not a paged collection after all; the first response stands alone.
      if (page == 1) return {status, canonicalize_body(obs.body)};
      break;
    }
    for (auto& item : parsed) items.push_back(std::move(item));
    if (static_cast<std::int64_t>(parsed.size()) < ann.page_size) break;
    if (page > 100000) throw TransportError("pagination did not terminate");
  }
  return {status, canonicalize_body(items.dump())};
}

Observation invoke_operation(Adapter& adapter, const OperationSpec& op,
                             const std::optional<Json>& params) {
  if (op.annotations.ranged) return fetch_ranged(adapter, op, params);
  Observation obs = adapter.invoke(op, params);
  obs.body = canonicalize_body(obs.body);
  return obs;
}

ResetOutcome soft_reset(Adapter& adapter, const Amos& amos) {
  if (!amos.reset) {
    return {false,
            "catalogue declares no reset; trials run against leftover state"};
  }
  adapter.reset(amos.reset->key);
  if (amos.reset->sleep_ms > 0) adapter.sleep_ms(amos.reset->sleep_ms);
  return {true, std::nullopt};
}

ExecutionTrace execute_candidate(const CandidateSequence& cand, Adapter& adapter,
                                 const Amos& amos,
                                 const std::optional<QueryContext>& ctx) {
  ExecutionTrace trace;
  trace.setup_len = cand.setup_len;

  const OperationSpec* query_op = nullptr;
  if (ctx) {
    query_op = amos.find_operation(ctx->query_op);
    if (query_op == nullptr) {
      throw std::invalid_argument("query operation \"" + ctx->query_op +
                                  "\" is not in the catalogue");
    }
  }

  std::map<std::string, Json> env;
  const auto snapshot = [&]() {
    const Observation obs = invoke_with_retry(adapter, *query_op, ctx->query_params);
    trace.snapshots.push_back({obs, state_size(obs.body)});
  };

  const auto abort_with = [&trace](std::size_t step_index, const std::string& what) {
    std::ostringstream msg;
    msg << "step " << (step_index + 1) << ": " << what;
    trace.error = msg.str();
  };

  try {
    if (ctx) snapshot();
  } catch (const TransportError& e) {
    abort_with(0, std::string("snapshot failed: ") + e.what());
    return trace;
  }

  for (std::size_t i = 0; i < cand.steps.size(); ++i) {
    const Step& step = cand.steps[i];
    const OperationSpec* op = amos.find_operation(step.op_key);
    if (op == nullptr) {
      abort_with(i, "operation \"" + step.op_key + "\" is not in the catalogue");
      return trace;
    }

    TraceStep ts;
    ts.op_key = step.op_key;
    try {
      if (step.params) ts.params = resolve_params(*step.params, env);
      ts.observation = invoke_with_retry(adapter, *op, ts.params);
    } catch (const ResolveError& e) {
      abort_with(i, e.what());
      return trace;
    } catch (const TranslateError& e) {
      abort_with(i, e.what());
      return trace;
    } catch (const TransportError& e) {
      abort_with(i, e.what());
      return trace;
    }

    for (const BindingDecl& binding : cand.bindings) {
      if (binding.step != static_cast<int>(i)) continue;
      if (binding.source == RefSource::kParameter) {
        if (!ts.params) {
          abort_with(i, "parameter binding on a step without parameters");
          return trace;
        }
        auto value = value_at_path(*ts.params, binding.anchor);
        if (!value) {
          abort_with(i, "parameter binding anchor does not resolve");
          return trace;
        }
        env[binding.symbol] = *value;
        ts.bindings[binding.symbol] = *value;
      } else {
        Json value = Json::parse(ts.observation.body, nullptr,
                                 /*allow_exceptions=*/false);
        if (value.is_discarded()) value = Json(ts.observation.body);
        env[binding.symbol] = value;
        ts.bindings[binding.symbol] = value;
      }
    }

    trace.steps.push_back(std::move(ts));
    try {
      if (ctx) snapshot();
    } catch (const TransportError& e) {
      abort_with(i, std::string("snapshot failed: ") + e.what());
      return trace;
    }
  }
  return trace;
}

Observation InProcessAdapter::invoke(const OperationSpec& op,
                                     const std::optional<Json>& params) {
  const auto* t = std::get_if<InProcessTranslation>(&op.translation);
  if (t == nullptr) {
    throw TranslateError("operation \"" + op.key +
                         "\" has no in-process translation");
  }
  sut_.advance_clock(op_tick_ms_);
  return sut_.handle(t->handler, params.value_or(Json::object()));
}

Observation InProcessAdapter::reset(const std::string& key) {
  sut_.advance_clock(op_tick_ms_);
  return sut_.handle(key, Json::object());
}

}  // namespace apix

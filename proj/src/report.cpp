#include "apixplore/report.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace apix {

namespace {

RefSource ref_source_from_string(const std::string& s) {
  if (s == "parameter") return RefSource::kParameter;
  if (s == "response") return RefSource::kResponse;
  throw std::runtime_error("unknown reference source \"" + s + "\"");
}

Json steps_to_json(const std::vector<Step>& steps) {
  Json out = Json::array();
  for (const Step& step : steps) {
    out.push_back(Json{{"op", step.op_key},
                       {"params", step.params ? param_tree_to_json(*step.params) : Json()},
                       {"mirrored", step.mirrored}});
  }
  return out;
}

Json bindings_to_json(const std::vector<BindingDecl>& bindings) {
  Json out = Json::array();
  for (const BindingDecl& b : bindings) {
    out.push_back(Json{{"symbol", b.symbol},
                       {"step", b.step},
                       {"source", to_string(b.source)},
                       {"anchor", path_to_json(b.anchor)}});
  }
  return out;
}

CandidateSequence sequence_from_json(MetaProperty prop, const Json& steps,
                                     const Json& setup_len, const Json& bindings) {
  CandidateSequence seq;
  seq.prop = prop;
  for (const Json& s : steps) {
    Step step;
    step.op_key = s.at("op").get<std::string>();
    if (!s.at("params").is_null()) step.params = param_tree_from_json(s.at("params"));
    step.mirrored = s.at("mirrored").get<bool>();
    seq.steps.push_back(std::move(step));
  }
  seq.setup_len = setup_len.get<int>();
  for (const Json& b : bindings) {
    BindingDecl decl;
    decl.symbol = b.at("symbol").get<std::string>();
    decl.step = b.at("step").get<int>();
    decl.source = ref_source_from_string(b.at("source").get<std::string>());
    decl.anchor = path_from_json(b.at("anchor"));
    seq.bindings.push_back(std::move(decl));
  }
  return seq;
}

Json example_to_json(const GeneratedExample& ex) {
  Json samples = Json::object();
  for (const auto& [symbol, value] : ex.samples) samples[symbol] = value;
  return Json{{"steps", steps_to_json(ex.sequence.steps)},
              {"setup-len", ex.sequence.setup_len},
              {"bindings", bindings_to_json(ex.sequence.bindings)},
              {"samples", samples},
              {"key", ex.key},
              {"truncated", ex.truncated}};
}

GeneratedExample example_from_json(MetaProperty prop, const Json& doc) {
  GeneratedExample ex;
  ex.prop = prop;
  ex.sequence = sequence_from_json(prop, doc.at("steps"), doc.at("setup-len"),
                                   doc.at("bindings"));
  for (auto it = doc.at("samples").begin(); it != doc.at("samples").end(); ++it) {
    ex.samples[it.key()] = it.value();
  }
  ex.key = doc.at("key").get<std::uint64_t>();
  ex.truncated = doc.at("truncated").get<bool>();
  return ex;
}

}  // namespace

std::string render_data(const ExplorationResult& result) {
  std::vector<std::size_t> order(result.props.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return static_cast<int>(result.props[a].prop) < static_cast<int>(result.props[b].prop);
  });

  Json props = Json::array();
  for (const std::size_t i : order) {
    const PropResult& pr = result.props[i];
    Json examples = Json::array();
    for (const GeneratedExample& ex : pr.examples) examples.push_back(example_to_json(ex));
    props.push_back(Json{{"prop", to_string(pr.prop)},
                         {"trials", pr.trials},
                         {"examples", examples}});
  }
  const Json doc = Json{{"report-version", 1},
                        {"properties", props},
                        {"warnings", result.warnings}};
  return doc.dump(2) + "\n";
}

ExplorationResult parse_report(const std::string& text) {
  Json doc = Json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw std::runtime_error("report is not a JSON document");
  }
  try {
    if (doc.at("report-version").get<int>() != 1) {
      throw std::runtime_error("unsupported report version");
    }
    ExplorationResult result;
    for (const Json& p : doc.at("properties")) {
      PropResult pr;
      pr.prop = meta_property_from_string(p.at("prop").get<std::string>());
      pr.trials = p.at("trials").get<std::int64_t>();
      for (const Json& e : p.at("examples")) {
        pr.examples.push_back(example_from_json(pr.prop, e));
      }
      result.props.push_back(std::move(pr));
    }
    for (const Json& w : doc.at("warnings")) {
      result.warnings.push_back(w.get<std::string>());
    }
    return result;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed report: ") + e.what());
  }
}

namespace {

std::string render_tree(const ParamTree& tree, const GeneratedExample& ex);

std::string render_ref(const SymbolicRef& ref, const GeneratedExample& ex) {
  std::string out = ref.symbol;
  const BindingDecl* binding = ex.sequence.find_binding(ref.symbol);

  std::string sample = "?";
  auto it = ex.samples.find(ref.symbol);
  if (it != ex.samples.end()) {
    const auto leaf = value_at_path(it->second, ref.path);
    sample = leaf ? leaf->dump() : it->second.dump();
  }

  out += " (= " + sample;
  if (binding != nullptr &&
      binding->step < static_cast<int>(ex.sequence.steps.size())) {
    const std::string& origin = ex.sequence.steps[binding->step].op_key;
    const char* what =
        binding->source == RefSource::kResponse ? "response" : "parameters";
    Path shown = binding->anchor;
    shown.insert(shown.end(), ref.path.begin(), ref.path.end());
    out += ", from " + origin + " " + what;
    if (!shown.empty()) out += " at " + path_to_string(shown);
  }
  out += ")";
  return out;
}

std::string render_tree(const ParamTree& tree, const GeneratedExample& ex) {
  if (const auto* value = std::get_if<Json>(&tree.node())) return value->dump();
  if (const auto* ref = std::get_if<SymbolicRef>(&tree.node())) {
    return render_ref(*ref, ex);
  }
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    std::string out = "{";
    bool first = true;
    for (const auto& [name, child] : map->fields) {
      if (!first) out += ", ";
      first = false;
      out += name + ": " + render_tree(child, ex);
    }
    return out + "}";
  }
  const auto& vec = std::get<ParamTree::VecNode>(tree.node());
  std::string out = "[";
  for (std::size_t i = 0; i < vec.items.size(); ++i) {
    if (i > 0) out += ", ";
    out += render_tree(vec.items[i], ex);
  }
  return out + "]";
}

}  // namespace

std::vector<std::string> render_human(const ExplorationResult& result) {
  std::vector<std::string> lines;
  for (const PropResult& pr : result.props) {
    if (pr.examples.empty()) {
      lines.push_back(std::string(to_string(pr.prop)) + ": No example found");
      lines.push_back("");
      continue;
    }
    for (const GeneratedExample& ex : pr.examples) {
      std::string header = to_string(ex.prop);
      if (!ex.sequence.steps.empty()) header += " " + ex.sequence.steps.front().op_key;
      lines.push_back(header);
      for (std::size_t i = 0; i < ex.sequence.steps.size(); ++i) {
        const Step& step = ex.sequence.steps[i];
        std::string line = std::to_string(i + 1) + ". call " + step.op_key;
        if (step.params) line += " with " + render_tree(*step.params, ex);
        lines.push_back(std::move(line));
      }
      lines.push_back("");
    }
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

Json emit_test_case(const GeneratedExample& ex, const std::optional<QueryContext>& ctx) {
  Json query;
  if (ctx) {
    query = Json{{"op", ctx->query_op},
                 {"params", ctx->query_params ? *ctx->query_params : Json()}};
  }
  return Json{{"case-version", 1},
              {"prop", to_string(ex.prop)},
              {"query", query},
              {"reset-first", true},
              {"steps", steps_to_json(ex.sequence.steps)},
              {"setup-len", ex.sequence.setup_len},
              {"bindings", bindings_to_json(ex.sequence.bindings)}};
}

TestCase parse_test_case(const Json& doc) {
  if (!doc.is_object()) throw std::runtime_error("test case is not a JSON object");
  try {
    if (doc.at("case-version").get<int>() != 1) {
      throw std::runtime_error("unsupported test-case version");
    }
    TestCase tc;
    tc.prop = meta_property_from_string(doc.at("prop").get<std::string>());
    tc.sequence = sequence_from_json(tc.prop, doc.at("steps"), doc.at("setup-len"),
                                     doc.at("bindings"));
    if (!doc.at("query").is_null()) {
      QueryContext ctx;
      ctx.query_op = doc.at("query").at("op").get<std::string>();
      if (!doc.at("query").at("params").is_null()) {
        ctx.query_params = doc.at("query").at("params");
      }
      tc.ctx = ctx;
    }
    tc.reset_first = doc.at("reset-first").get<bool>();
    return tc;
  } catch (const Json::exception& e) {
    throw std::runtime_error(std::string("malformed test case: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("malformed test case: ") + e.what());
  }
}

}  // namespace apix

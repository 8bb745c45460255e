#include "apixplore/paramtree.hpp"

#include <stdexcept>

namespace apix {

std::string to_string(RefSource source) {
  return source == RefSource::kParameter ? "parameter" : "response";
}

bool ParamTree::fully_concrete() const {
  if (is_ref()) return false;
  if (is_concrete()) return true;
  if (const auto* map = std::get_if<MapNode>(&node_)) {
    for (const auto& [name, child] : map->fields) {
      if (!child.fully_concrete()) return false;
    }
    return true;
  }
  const auto& vec = std::get<VecNode>(node_);
  for (const auto& child : vec.items) {
    if (!child.fully_concrete()) return false;
  }
  return true;
}

namespace {

void collect_rec(const ParamTree& tree, std::vector<SymbolicRef>& out) {
  if (const auto* ref = std::get_if<SymbolicRef>(&tree.node())) {
    out.push_back(*ref);
    return;
  }
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    for (const auto& [name, child] : map->fields) collect_rec(child, out);
    return;
  }
  if (const auto* vec = std::get_if<ParamTree::VecNode>(&tree.node())) {
    for (const auto& child : vec->items) collect_rec(child, out);
  }
}

}  // namespace

std::vector<SymbolicRef> ParamTree::collect_refs() const {
  std::vector<SymbolicRef> out;
  collect_rec(*this, out);
  return out;
}

const ParamTree* ParamTree::subtree(const Path& path) const {
  const ParamTree* cur = this;
  for (const auto& step : path) {
    if (std::holds_alternative<std::string>(step)) {
      const auto* map = std::get_if<MapNode>(&cur->node_);
      if (map == nullptr) return nullptr;
      auto it = map->fields.find(std::get<std::string>(step));
      if (it == map->fields.end()) return nullptr;
      cur = &it->second;
    } else {
      const auto* vec = std::get_if<VecNode>(&cur->node_);
      if (vec == nullptr) return nullptr;
      const auto idx = std::get<std::size_t>(step);
      if (idx >= vec->items.size()) return nullptr;
      cur = &vec->items[idx];
    }
  }
  return cur;
}

ParamTree* ParamTree::subtree(const Path& path) {
  return const_cast<ParamTree*>(static_cast<const ParamTree*>(this)->subtree(path));
}

Json param_tree_to_json(const ParamTree& tree) {
  if (const auto* value = std::get_if<Json>(&tree.node())) {
    return Json{{"kind", "value"}, {"value", *value}};
  }
  if (const auto* ref = std::get_if<SymbolicRef>(&tree.node())) {
    return Json{{"kind", "ref"},
                {"symbol", ref->symbol},
                {"path", path_to_json(ref->path)},
                {"source", to_string(ref->source)}};
  }
  if (const auto* map = std::get_if<ParamTree::MapNode>(&tree.node())) {
    Json fields = Json::object();
    for (const auto& [name, child] : map->fields) {
      fields[name] = param_tree_to_json(child);
    }
    return Json{{"kind", "map"}, {"fields", fields}};
  }
  const auto& vec = std::get<ParamTree::VecNode>(tree.node());
  Json items = Json::array();
  for (const auto& child : vec.items) items.push_back(param_tree_to_json(child));
  return Json{{"kind", "vec"}, {"items", items}};
}

ParamTree param_tree_from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "value") return ParamTree::concrete(j.at("value"));
  if (kind == "ref") {
    SymbolicRef ref;
    ref.symbol = j.at("symbol").get<std::string>();
    ref.path = path_from_json(j.at("path"));
    ref.source = j.at("source").get<std::string>() == "response"
                     ? RefSource::kResponse
                     : RefSource::kParameter;
    return ParamTree::ref(std::move(ref));
  }
  if (kind == "map") {
    ParamTree::MapNode map;
    const Json& fields = j.at("fields");
    for (auto it = fields.begin(); it != fields.end(); ++it) {
      map.fields.emplace(it.key(), param_tree_from_json(it.value()));
    }
    return ParamTree(ParamTree::Node(std::move(map)));
  }
  if (kind == "vec") {
    ParamTree::VecNode vec;
    for (const auto& item : j.at("items")) {
      vec.items.push_back(param_tree_from_json(item));
    }
    return ParamTree(ParamTree::Node(std::move(vec)));
  }
  throw std::invalid_argument("unknown parameter tree node kind \"" + kind + "\"");
}

}  // namespace apix

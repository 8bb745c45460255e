#pragma once

/// @file paramtree.hpp
/// Parameter trees whose leaves are either concrete values or symbolic
/// references to values bound earlier in the same sequence.
///
/// References stay symbolic all the way into reports and emitted test cases:
/// re-executing a sequence resolves them against fresh bindings, which is what
/// makes examples replayable when the system generates its own identifiers.

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "apixplore/value.hpp"

namespace apix {

enum class RefSource : std::uint8_t { kParameter, kResponse };

std::string to_string(RefSource source);

/// Reference to a sub-value of a previously bound value.  `symbol` names the
/// binding (a, b, c, ... in first-use order); `path` descends into the bound
/// value; `source` records whether the binding is a parameter or a response.
struct SymbolicRef {
  std::string symbol;
  Path path;
  RefSource source = RefSource::kParameter;
  bool operator==(const SymbolicRef&) const = default;
};

/// A parameter tree node: concrete subtree, symbolic reference, or structural
/// map/vector whose children are again trees.
class ParamTree {
 public:
  struct MapNode {
    std::map<std::string, ParamTree> fields;
    bool operator==(const MapNode&) const = default;
  };
  struct VecNode {
    std::vector<ParamTree> items;
    bool operator==(const VecNode&) const = default;
  };
  using Node = std::variant<Json, SymbolicRef, MapNode, VecNode>;

  ParamTree() : node_(Json()) {}
  explicit ParamTree(Node node) : node_(std::move(node)) {}
  static ParamTree concrete(Json value) { return ParamTree(Node(std::move(value))); }
  static ParamTree ref(SymbolicRef r) { return ParamTree(Node(std::move(r))); }

  const Node& node() const { return node_; }
  Node& node() { return node_; }

  bool is_concrete() const { return std::holds_alternative<Json>(node_); }
  bool is_ref() const { return std::holds_alternative<SymbolicRef>(node_); }

  /// True when no symbolic reference occurs anywhere in the tree.
  bool fully_concrete() const;

  /// Every symbolic reference in the tree, in deterministic traversal order.
  std::vector<SymbolicRef> collect_refs() const;

  /// The node at `path` (paths address map fields and vector items), or
  /// nullptr when the path does not exist structurally.
  const ParamTree* subtree(const Path& path) const;
  ParamTree* subtree(const Path& path);

  bool operator==(const ParamTree&) const = default;

 private:
  Node node_;
};

/// Serialization for reports and test cases.  Nodes are tagged objects:
///   {"kind":"value","value":...} | {"kind":"ref","symbol":...,"path":[...],
///   "source":...} | {"kind":"map","fields":{...}} | {"kind":"vec",
///   "items":[...]}
Json param_tree_to_json(const ParamTree& tree);
ParamTree param_tree_from_json(const Json& j);

}  // namespace apix

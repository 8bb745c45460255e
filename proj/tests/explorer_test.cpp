#include "apixplore/explorer.hpp"

#include <set>

#include "apixplore/refsut.hpp"
#include "doctest.h"

using namespace apix;

namespace {

ParamTree leaf_map(const Json& object) {
  ParamTree::MapNode fields;
  for (const auto& [name, value] : object.items())
    fields.fields.emplace(name, ParamTree::concrete(value));
  return ParamTree(ParamTree::Node(std::move(fields)));
}

Step structured_step(std::string op, std::optional<Json> params = {}) {
  Step s;
  s.op_key = std::move(op);
  if (params) s.params = leaf_map(*params);
  return s;
}

CandidateSequence two_step(std::optional<Json> second_params = {}) {
  CandidateSequence cand;
  cand.prop = MetaProperty::kS2;
  cand.steps.push_back(structured_step("get-groups"));
  cand.steps.push_back(structured_step("post-groups", std::move(second_params)));
  return cand;
}

}  // namespace

TEST_CASE("canonical keys abstract values but preserve structure") {
  const std::uint64_t base =
      canonical_key(two_step(Json{{"name", "a"}, {"path", "a"}}));

  // concrete values do not participate in the identity
  CHECK(canonical_key(two_step(Json{{"name", "zz"}, {"path", "qq"}})) == base);

  // operation keys, field names and setup splits do
  CandidateSequence other_op = two_step(Json{{"name", "a"}, {"path", "a"}});
  other_op.steps[0].op_key = "delete-groups";
  CHECK(canonical_key(other_op) != base);

  CHECK(canonical_key(two_step(Json{{"name", "a"}})) != base);

  CandidateSequence with_setup = two_step(Json{{"name", "a"}, {"path", "a"}});
  with_setup.setup_len = 1;
  CHECK(canonical_key(with_setup) != base);

  // a reference in a slot differs from a concrete value in the same slot
  CandidateSequence with_ref = two_step();
  ParamTree::MapNode fields;
  fields.fields.emplace("name", ParamTree::ref({"a", {}, RefSource::kParameter}));
  fields.fields.emplace("path", ParamTree::concrete(Json("a")));
  with_ref.steps[1].params = ParamTree(ParamTree::Node(std::move(fields)));
  with_ref.bindings.push_back(
      {"a", 0, RefSource::kParameter, {PathStep{std::string("name")}}});
  CHECK(canonical_key(with_ref) != base);

  // two references differing only in their path differ
  CandidateSequence other_path = with_ref;
  std::get<ParamTree::MapNode>(other_path.steps[1].params->node())
      .fields.at("name") =
      ParamTree::ref({"a", {PathStep{std::string("x")}}, RefSource::kParameter});
  CHECK(canonical_key(other_path) != canonical_key(with_ref));

  // mirrored markers matter, symbol spelling does not
  CandidateSequence renamed = with_ref;
  std::get<ParamTree::MapNode>(renamed.steps[1].params->node()).fields.at("name") =
      ParamTree::ref({"zz", {}, RefSource::kParameter});
  renamed.bindings[0].symbol = "zz";
  CHECK(canonical_key(renamed) == canonical_key(with_ref));
}

TEST_CASE("exploration is deterministic and its examples are distinct") {
  const Amos amos = persons_amos(AdapterKind::kInProcess);

  ExplorationConfig config;
  config.props = {MetaProperty::kR1, MetaProperty::kR2};
  config.tests_per_iteration = 40;
  config.iterations = 3;
  config.seed = 7;

  PersonsSut one(PersonsVariant::kV1);
  InProcessAdapter adapter1(one);
  const ExplorationResult first = explore(amos, adapter1, config);

  PersonsSut two(PersonsVariant::kV1);
  InProcessAdapter adapter2(two);
  const ExplorationResult second = explore(amos, adapter2, config);

  CHECK(first == second);
  REQUIRE(first.props.size() == 2);
  CHECK(first.props[0].prop == MetaProperty::kR1);
  CHECK(first.props[1].prop == MetaProperty::kR2);

  for (const PropResult& pr : first.props) {
    CHECK(pr.trials > 0);
    std::set<std::uint64_t> keys;
    for (const GeneratedExample& ex : pr.examples) {
      CHECK(keys.insert(ex.key).second);  // pairwise distinct structures
      CHECK(ex.key == canonical_key(ex.sequence));
      CHECK(ex.sequence.steps.size() >= 2);
      for (const BindingDecl& decl : ex.sequence.bindings)
        CHECK(ex.samples.count(decl.symbol) == 1);
    }
  }
}

TEST_CASE("state properties demand a query context") {
  const Amos amos = groups_amos({});
  GroupsSut sut;
  InProcessAdapter adapter(sut);

  ExplorationConfig config;
  config.props = {MetaProperty::kS2};
  config.seed = 1;
  CHECK_THROWS_AS(explore(amos, adapter, config), std::invalid_argument);

  config.ctx = QueryContext{"get-groups", std::nullopt};
  config.tests_per_iteration = 10;
  config.iterations = 1;
  const ExplorationResult result = explore(amos, adapter, config);
  CHECK(result.props.size() == 1);
}

TEST_CASE("a catalogue without reset is explored under a warning") {
  const Amos amos = persons_amos(AdapterKind::kInProcess, /*with_reset=*/false);
  PersonsSut sut(PersonsVariant::kV1);
  InProcessAdapter adapter(sut);

  ExplorationConfig config;
  config.props = {MetaProperty::kR1};
  config.tests_per_iteration = 10;
  config.iterations = 2;
  config.seed = 3;

  const ExplorationResult result = explore(amos, adapter, config);
  REQUIRE(result.warnings.size() == 1);  // deduplicated across trials
  CHECK(result.warnings[0].find("no reset") != std::string::npos);
}

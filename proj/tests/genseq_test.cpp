#include "apixplore/genseq.hpp"

#include <algorithm>
#include <set>

#include "apixplore/refsut.hpp"
#include "doctest.h"

using namespace apix;

namespace {

ParamSchema int_schema(std::optional<std::int64_t> min = {},
                       std::optional<std::int64_t> max = {}) {
  ParamSchema s;
  s.kind = SchemaKind::kInt;
  s.min = min;
  s.max = max;
  return s;
}

ParamSchema string_schema(std::optional<std::int64_t> min_len = {},
                          std::optional<std::int64_t> max_len = {}) {
  ParamSchema s;
  s.kind = SchemaKind::kString;
  s.min_len = min_len;
  s.max_len = max_len;
  return s;
}

const std::map<std::string, ParamSchema> kNoSchemas;

}  // namespace

TEST_CASE("symbol names count in bijective base 26") {
  CHECK(symbol_name(0) == "a");
  CHECK(symbol_name(1) == "b");
  CHECK(symbol_name(25) == "z");
  CHECK(symbol_name(26) == "aa");
  CHECK(symbol_name(27) == "ab");
  CHECK(symbol_name(51) == "az");
  CHECK(symbol_name(52) == "ba");
  CHECK(symbol_name(701) == "zz");
  CHECK(symbol_name(702) == "aaa");
}

TEST_CASE("generated values conform to their schema across seeds and sizes") {
  ParamSchema person;
  person.kind = SchemaKind::kMap;
  {
    ParamSchema::MapField req;
    req.name = "name";
    req.required = true;
    req.schema.push_back(string_schema(1, 8));
    ParamSchema::MapField opt;
    opt.name = "age";
    opt.required = false;
    opt.schema.push_back(int_schema(60, 130));
    person.fields = {opt, req};
  }
  ParamSchema vec;
  vec.kind = SchemaKind::kVector;
  vec.of.push_back(int_schema(0, 9));
  ParamSchema choice;
  choice.kind = SchemaKind::kEnum;
  choice.values = {Json("low"), Json("high")};
  ParamSchema flag;
  flag.kind = SchemaKind::kBool;

  const ParamSchema battery[] = {
      int_schema(60, 130), int_schema(1, {}), int_schema({}, -5), int_schema({}, 100),
      int_schema(), string_schema(), string_schema(2, 6), person, vec, choice, flag,
  };
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    for (int size = 0; size <= 8; ++size) {
      for (const ParamSchema& schema : battery) {
        const Json v = generate_value(schema, rng, size, kNoSchemas);
        CAPTURE(seed);
        CAPTURE(size);
        CAPTURE(v.dump());
        CHECK(conforms(v, schema, kNoSchemas));
      }
    }
  }
}

TEST_CASE("size zero produces the minimal value") {
  Rng rng(1);
  CHECK(generate_value(int_schema(60, 130), rng, 0, kNoSchemas) == Json(60));
  CHECK(generate_value(int_schema(3, {}), rng, 0, kNoSchemas) == Json(3));
  CHECK(generate_value(int_schema(), rng, 0, kNoSchemas) == Json(0));
  CHECK(generate_value(string_schema(), rng, 0, kNoSchemas) == Json(""));
  CHECK(generate_value(string_schema(2, 9), rng, 0, kNoSchemas).get<std::string>().size() == 2);

  ParamSchema choice;
  choice.kind = SchemaKind::kEnum;
  choice.values = {Json("first"), Json("second")};
  CHECK(generate_value(choice, rng, 0, kNoSchemas) == Json("first"));

  ParamSchema flag;
  flag.kind = SchemaKind::kBool;
  CHECK(generate_value(flag, rng, 0, kNoSchemas) == Json(false));

  ParamSchema vec;
  vec.kind = SchemaKind::kVector;
  vec.of.push_back(int_schema(0, 5));
  CHECK(generate_value(vec, rng, 0, kNoSchemas) == Json::array());
}

TEST_CASE("string length is a function of size alone") {
  // len = min(min_len + size, max_len): equal-length draws keep the collision
  // rate between independently generated strings low and predictable.
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    for (int size = 0; size <= 12; ++size) {
      const auto free_len =
          generate_value(string_schema(), rng, size, kNoSchemas).get<std::string>().size();
      CHECK(free_len == static_cast<std::size_t>(size));
      const auto capped =
          generate_value(string_schema(1, 4), rng, size, kNoSchemas).get<std::string>().size();
      CHECK(capped == static_cast<std::size_t>(std::min<std::int64_t>(1 + size, 4)));
    }
  }
}

TEST_CASE("generation is deterministic in the seed") {
  const Amos amos = groups_amos({});
  for (const MetaProperty prop : all_meta_properties()) {
    const SequenceShape shape = shape_constraints(prop);
    for (int size : {0, 3, 7}) {
      Rng a(991), b(991);
      const auto one = generate_candidate(amos, shape, a, size, ModePolicy::kReferencesAllowed);
      const auto two = generate_candidate(amos, shape, b, size, ModePolicy::kReferencesAllowed);
      CHECK(one == two);
    }
  }
}

TEST_CASE("every candidate satisfies its shape") {
  const Amos catalogues[] = {persons_amos(AdapterKind::kInProcess), groups_amos({}),
                             persons_tiny_amos(AdapterKind::kInProcess)};
  for (const Amos& amos : catalogues) {
    for (const MetaProperty prop : all_meta_properties()) {
      const SequenceShape shape = shape_constraints(prop);
      for (std::uint64_t seed = 0; seed < 40; ++seed) {
        Rng rng(seed * 7 + 1);
        const int size = static_cast<int>(seed % 9);
        const auto cand =
            generate_candidate(amos, shape, rng, size, ModePolicy::kReferencesAllowed);
        CAPTURE(to_string(prop));
        CAPTURE(seed);
        const auto violations = check_shape(cand, shape);
        CHECK_MESSAGE(violations.empty(),
                      (violations.empty() ? std::string() : violations.front()));
        CHECK(cand.steps.size() >= static_cast<std::size_t>(shape.min_len));
        if (shape.fixed_len) {
          CHECK(cand.steps.size() == static_cast<std::size_t>(shape.min_len));
        }
        if (shape.min_setup > 0) CHECK(cand.setup_len >= shape.min_setup);
      }
    }
  }
}

TEST_CASE("references are declared, strictly backward, and off under random-only") {
  const Amos amos = groups_amos({});
  const SequenceShape shape = shape_constraints(MetaProperty::kS2);

  int refs_seen = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(seed);
    const auto cand = generate_candidate(amos, shape, rng, 6, ModePolicy::kReferencesAllowed);
    for (std::size_t i = 0; i < cand.steps.size(); ++i) {
      if (!cand.steps[i].params) continue;
      for (const SymbolicRef& ref : cand.steps[i].params->collect_refs()) {
        ++refs_seen;
        const BindingDecl* decl = cand.find_binding(ref.symbol);
        REQUIRE(decl != nullptr);
        CHECK(decl->step < static_cast<int>(i));
        CHECK(decl->source == ref.source);
      }
    }

    Rng rng2(seed);
    const auto plain = generate_candidate(amos, shape, rng2, 6, ModePolicy::kRandomOnly);
    for (const Step& step : plain.steps) {
      if (step.params) CHECK(step.params->fully_concrete());
    }
    CHECK(plain.bindings.empty());
  }
  CHECK(refs_seen > 0);  // the policy actually exercises reference modes
}

TEST_CASE("eligible modes grow with the prefix") {
  const Amos amos = persons_amos(AdapterKind::kInProcess);

  const auto none = eligible_modes({}, amos);
  CHECK(none == std::vector<ParamMode>{ParamMode::kRandomValue});

  Step get;
  get.op_key = "get-persons";  // no parameters
  const auto after_get = eligible_modes({get}, amos);
  CHECK(after_get == std::vector<ParamMode>{ParamMode::kRandomValue,
                                            ParamMode::kResponseReference});

  Step post;
  post.op_key = "post-person";
  ParamTree::MapNode fields;
  fields.fields.emplace("name", ParamTree::concrete(Json("x")));
  post.params = ParamTree(ParamTree::Node(std::move(fields)));
  const auto after_post = eligible_modes({post}, amos);
  CHECK(after_post == std::vector<ParamMode>{ParamMode::kRandomValue,
                                             ParamMode::kParamReference,
                                             ParamMode::kResponseReference});
}

TEST_CASE("select_reference only offers conforming sub-values") {
  const std::vector<PoolBinding> pool = {
      {"a", Json::parse(R"({"id":7,"name":"x"})")},
      {"b", Json::parse(R"([90,200])")},
  };
  const ParamSchema target = int_schema(0, 100);

  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(seed);
    const auto sel = select_reference(pool, target, rng, kNoSchemas);
    REQUIRE(sel.has_value());
    const auto value = value_at_path(pool[sel->binding_index].value, sel->path);
    REQUIRE(value.has_value());
    CHECK(conforms(*value, target, kNoSchemas));  // 7 or 90, never 200 or "x"
  }

  Rng rng(1);
  const ParamSchema impossible = int_schema(1000, 2000);
  CHECK(!select_reference(pool, impossible, rng, kNoSchemas).has_value());
  CHECK(!select_reference({}, std::nullopt, rng, kNoSchemas).has_value());

  // without a target, any sub-value qualifies, including whole structures
  const auto any = select_reference(pool, std::nullopt, rng, kNoSchemas);
  REQUIRE(any.has_value());
}

TEST_CASE("resolve_params substitutes references and reports failures") {
  std::map<std::string, Json> env;
  env["a"] = Json::parse(R"({"items":[{"id":5}]})");

  SUBCASE("nested substitution") {
    ParamTree::MapNode root;
    root.fields.emplace("id", ParamTree::ref({"a",
                                              {PathStep{std::string("items")},
                                               PathStep{std::size_t{0}},
                                               PathStep{std::string("id")}},
                                              RefSource::kResponse}));
    root.fields.emplace("note", ParamTree::concrete(Json("hi")));
    const Json out = resolve_params(ParamTree(ParamTree::Node(root)), env);
    CHECK(out == Json::parse(R"({"id":5,"note":"hi"})"));
  }

  SUBCASE("vector nodes resolve item-wise") {
    ParamTree::VecNode vec;
    vec.items.push_back(ParamTree::concrete(Json(1)));
    vec.items.push_back(ParamTree::ref({"a", {PathStep{std::string("items")}},
                                        RefSource::kResponse}));
    const Json out = resolve_params(ParamTree(ParamTree::Node(vec)), env);
    CHECK(out == Json::parse(R"([1,[{"id":5}]])"));
  }

  SUBCASE("unknown symbol") {
    const ParamTree tree = ParamTree::ref({"ghost", {}, RefSource::kResponse});
    CHECK_THROWS_AS(resolve_params(tree, env), ResolveError);
  }

  SUBCASE("path missing from the bound value") {
    const ParamTree tree =
        ParamTree::ref({"a", {PathStep{std::string("nope")}}, RefSource::kResponse});
    CHECK_THROWS_AS(resolve_params(tree, env), ResolveError);
  }
}

TEST_CASE("check_shape flags broken sequences") {
  const SequenceShape shape = shape_constraints(MetaProperty::kR2);

  CandidateSequence cand;
  cand.prop = MetaProperty::kR2;
  Step get;
  get.op_key = "get-persons";
  Step post;
  post.op_key = "post-person";
  post.params = ParamTree::concrete(Json::parse(R"({"name":"x"})"));

  SUBCASE("too short") {
    cand.steps = {get};
    CHECK(!check_shape(cand, shape).empty());
  }
  SUBCASE("unpinned ends") {
    Step last = post;
    last.mirrored = true;
    cand.steps = {get, post, last};
    CHECK(!check_shape(cand, shape).empty());
  }
  SUBCASE("undeclared reference") {
    Step probe = post;
    probe.params = ParamTree::ref({"a", {}, RefSource::kResponse});
    Step end = get;
    end.mirrored = true;
    cand.steps = {get, probe, end};
    CHECK(!check_shape(cand, shape).empty());
  }
  SUBCASE("well formed") {
    Step end = get;
    end.mirrored = true;
    cand.steps = {get, post, end};
    CHECK(check_shape(cand, shape).empty());
  }
}

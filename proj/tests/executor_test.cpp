#include "apixplore/executor.hpp"

#include <vector>

#include "apixplore/http_adapter.hpp"
#include "apixplore/refsut.hpp"
#include "apixplore/refsut_http.hpp"
#include "doctest.h"

using namespace apix;

namespace {

const HttpTranslation& http_of(const Amos& amos, const std::string& key) {
  return std::get<HttpTranslation>(amos.find_operation(key)->translation);
}

/// Counts invocations so paging behaviour is observable.
class CountingAdapter final : public Adapter {
 public:
  explicit CountingAdapter(Adapter& inner) : inner_(inner) {}

  Observation invoke(const OperationSpec& op, const std::optional<Json>& params) override {
    ++invocations;
    if (params) last_params = *params;
    return inner_.invoke(op, params);
  }
  Observation reset(const std::string& key) override { return inner_.reset(key); }
  void sleep_ms(std::int64_t ms) override { inner_.sleep_ms(ms); }

  int invocations = 0;
  Json last_params;

 private:
  Adapter& inner_;
};

Step concrete_step(std::string op, std::optional<Json> params = {}) {
  Step s;
  s.op_key = std::move(op);
  if (params) s.params = ParamTree::concrete(std::move(*params));
  return s;
}

}  // namespace

TEST_CASE("canonicalize_body sorts object keys and keeps array order") {
  CHECK(canonicalize_body(R"({"b":1,"a":2})") == R"({"a":2,"b":1})");
  CHECK(canonicalize_body(R"([3,1,{"z":0,"a":1}])") == R"([3,1,{"a":1,"z":0}])");
  CHECK(canonicalize_body("not json at all") == "not json at all");
  CHECK(canonicalize_body("") == "");
}

TEST_CASE("http translation places parameters on the wire") {
  const Amos persons = persons_amos(AdapterKind::kHttp);
  const Amos groups = groups_amos({AdapterKind::kHttp});

  SUBCASE("body placement") {
    const WireRequest req = translate_http(
        http_of(persons, "post-person"), Json{{"age", 70}, {"name", "ada"}});
    CHECK(req.method == "POST");
    CHECK(req.path == "/persons");
    CHECK(req.query.empty());
    CHECK(req.body == R"({"age":70,"name":"ada"})");
    CHECK(req.content_type == "application/json");
  }

  SUBCASE("path template substitution") {
    const WireRequest req =
        translate_http(http_of(persons, "delete-person"), Json{{"name", "ada"}});
    CHECK(req.method == "DELETE");
    CHECK(req.path == "/persons/ada");
    CHECK(req.body.empty());

    const WireRequest by_id =
        translate_http(http_of(groups, "delete-groups"), Json{{"id", 5}});
    CHECK(by_id.path == "/groups/5");
  }

  SUBCASE("query placement") {
    const WireRequest req =
        translate_http(http_of(groups, "get-groups"), Json{{"page", 2}});
    CHECK(req.method == "GET");
    CHECK(req.path == "/groups");
    REQUIRE(req.query.size() == 1);
    CHECK(req.query[0] == std::pair<std::string, std::string>("page", "2"));
    CHECK(req.body.empty());
  }

  SUBCASE("omitted optional parameter stays off the wire") {
    const WireRequest req = translate_http(http_of(groups, "get-groups"), Json::object());
    CHECK(req.query.empty());
  }

  SUBCASE("parameters without a placement entry never reach the wire") {
    HttpTranslation t;
    t.method = "POST";
    t.path = "/x";
    t.placement = {{"kept", "body"}};
    const WireRequest req = translate_http(t, Json{{"kept", 1}, {"dropped", 2}});
    CHECK(req.body == R"({"kept":1})");
  }

  SUBCASE("missing path variable") {
    CHECK_THROWS_AS(
        translate_http(http_of(persons, "delete-person"), Json::object()),
        TranslateError);
  }
}

TEST_CASE("ranged operations aggregate page by page") {
  const Amos amos = groups_amos({AdapterKind::kInProcess, /*ranged=*/true});
  const OperationSpec& get = *amos.find_operation("get-groups");
  REQUIRE(get.annotations.ranged);

  GroupsSut sut;
  InProcessAdapter inner(sut);
  CountingAdapter adapter(inner);

  SUBCASE("25 entities, page size 20: two requests, 25 items") {
    sut.seed(25);
    const Observation obs = fetch_ranged(adapter, get, std::nullopt);
    CHECK(adapter.invocations == 2);
    CHECK(obs.status == 200);
    const Json items = Json::parse(obs.body);
    REQUIRE(items.is_array());
    CHECK(items.size() == 25);
    CHECK(items[24]["name"] == Json("seed-25"));
  }

  SUBCASE("a full final page needs one empty look-ahead request") {
    sut.seed(20);
    const Observation obs = fetch_ranged(adapter, get, std::nullopt);
    CHECK(adapter.invocations == 2);
    CHECK(Json::parse(obs.body).size() == 20);
  }

  SUBCASE("the caller's page parameter is ignored; the executor owns paging") {
    sut.seed(25);
    const Observation all = fetch_ranged(adapter, get, Json{{"page", 2}});
    CHECK(Json::parse(all.body).size() == 25);
  }

  SUBCASE("aggregation is independent of the page-size partitioning") {
    GroupsSut seven({0, 7});
    seven.seed(25);
    InProcessAdapter adapter7(seven);
    const Amos amos7 = groups_amos({AdapterKind::kInProcess, true, true, 0, 7, 9});
    const Observation by7 =
        fetch_ranged(adapter7, *amos7.find_operation("get-groups"), std::nullopt);

    sut.seed(25);
    const Observation by20 = fetch_ranged(adapter, get, std::nullopt);
    CHECK(canonicalize_body(by7.body) == canonicalize_body(by20.body));
  }

  SUBCASE("invoke_operation dispatches through aggregation") {
    sut.seed(25);
    const Observation obs = invoke_operation(adapter, get, std::nullopt);
    CHECK(Json::parse(obs.body).size() == 25);
    CHECK(adapter.invocations == 2);
  }
}

TEST_CASE("soft reset honours the catalogue") {
  PersonsSut sut(PersonsVariant::kV1);
  InProcessAdapter adapter(sut);

  sut.handle("post-person", Json{{"name", "x"}, {"age", 70}});
  REQUIRE(sut.stored_count() == 1);

  const ResetOutcome with = soft_reset(adapter, persons_amos(AdapterKind::kInProcess));
  CHECK(with.applied);
  CHECK(!with.warning);
  CHECK(sut.stored_count() == 0);

  const ResetOutcome without =
      soft_reset(adapter, persons_amos(AdapterKind::kInProcess, /*with_reset=*/false));
  CHECK(!without.applied);
  REQUIRE(without.warning);
  CHECK(without.warning->find("no reset") != std::string::npos);
}

TEST_CASE("execute_candidate records steps, bindings and snapshots") {
  const Amos amos = persons_amos(AdapterKind::kInProcess);
  PersonsSut sut(PersonsVariant::kV1);
  InProcessAdapter adapter(sut);

  CandidateSequence cand;
  cand.prop = MetaProperty::kS2;
  cand.steps.push_back(concrete_step("get-persons"));
  cand.steps.push_back(
      concrete_step("post-person", Json{{"age", 77}, {"name", "ada"}}));

  SUBCASE("without instrumentation") {
    const ExecutionTrace trace = execute_candidate(cand, adapter, amos, std::nullopt);
    REQUIRE(trace.complete());
    REQUIRE(trace.steps.size() == 2);
    CHECK(trace.snapshots.empty());
    CHECK(trace.steps[0].observation == Observation{200, "[]"});
    CHECK(trace.steps[1].observation.status == 200);
    CHECK(trace.steps[1].params == Json{{"age", 77}, {"name", "ada"}});
  }

  SUBCASE("with instrumentation: steps + 1 snapshots bracketing every step") {
    const QueryContext ctx{"get-persons", std::nullopt};
    const ExecutionTrace trace = execute_candidate(cand, adapter, amos, ctx);
    REQUIRE(trace.complete());
    REQUIRE(trace.snapshots.size() == cand.steps.size() + 1);
    CHECK(trace.snapshots[0].observation.body == "[]");
    CHECK(trace.snapshots[1].observation.body == "[]");  // get changed nothing
    CHECK(trace.snapshots[2].observation.body == R"([{"age":77,"name":"ada"}])");
    CHECK(trace.snapshots[2].size == state_size(trace.snapshots[2].observation.body));
  }

  SUBCASE("unknown query operation") {
    const QueryContext ctx{"no-such-op", std::nullopt};
    CHECK_THROWS_AS(execute_candidate(cand, adapter, amos, ctx), std::invalid_argument);
  }
}

TEST_CASE("response bindings are registered and resolvable") {
  const Amos amos = groups_amos({});
  GroupsSut sut;
  InProcessAdapter adapter(sut);

  // post creates an entity; get's response binds as symbol a; delete
  // dereferences the server-minted id out of it.
  CandidateSequence cand;
  cand.prop = MetaProperty::kS3;
  cand.steps.push_back(
      concrete_step("post-groups", Json{{"name", "dev"}, {"path", "dev"}}));
  cand.steps.push_back(concrete_step("get-groups"));
  Step del;
  del.op_key = "delete-groups";
  ParamTree::MapNode fields;
  fields.fields.emplace(
      "id", ParamTree::ref({"a",
                            {PathStep{std::size_t{0}}, PathStep{std::string("id")}},
                            RefSource::kResponse}));
  del.params = ParamTree(ParamTree::Node(std::move(fields)));
  cand.steps.push_back(del);
  cand.bindings.push_back({"a", 1, RefSource::kResponse, {}});

  const ExecutionTrace trace = execute_candidate(cand, adapter, amos, std::nullopt);
  REQUIRE(trace.complete());
  REQUIRE(trace.steps.size() == 3);
  REQUIRE(trace.steps[1].bindings.count("a") == 1);
  CHECK(trace.steps[1].bindings.at("a")[0]["name"] == Json("dev"));
  CHECK(trace.steps[2].params == Json{{"id", 1}});  // resolved, not symbolic
  CHECK(trace.steps[2].observation.status == 202);
}

TEST_CASE("a reference into a missing response path aborts the trace") {
  const Amos amos = persons_amos(AdapterKind::kInProcess);
  PersonsSut sut(PersonsVariant::kV1);
  InProcessAdapter adapter(sut);

  CandidateSequence cand;
  cand.prop = MetaProperty::kS2;
  cand.steps.push_back(concrete_step("get-persons"));  // responds []
  Step post;
  post.op_key = "post-person";
  ParamTree::MapNode fields;
  fields.fields.emplace("name",
                        ParamTree::ref({"a",
                                        {PathStep{std::size_t{0}}, PathStep{std::string("name")}},
                                        RefSource::kResponse}));
  post.params = ParamTree(ParamTree::Node(std::move(fields)));
  cand.steps.push_back(post);
  cand.bindings.push_back({"a", 0, RefSource::kResponse, {}});

  const ExecutionTrace trace = execute_candidate(cand, adapter, amos, std::nullopt);
  CHECK(!trace.complete());
  REQUIRE(trace.error);
  CHECK(trace.error->find("step 2") != std::string::npos);
  CHECK(trace.steps.size() == 1);  // completed prefix is kept
}

TEST_CASE("in-process dispatches advance the simulated clock") {
  GroupsSut sut({5, 20});
  InProcessAdapter adapter(sut);
  const Amos amos = groups_amos({});

  const auto t0 = sut.now();
  adapter.invoke(*amos.find_operation("get-groups"), std::nullopt);
  CHECK(sut.now() == t0 + 1);
  adapter.sleep_ms(7);
  CHECK(sut.now() == t0 + 8);
}

TEST_CASE("http adapter round trips through a live server") {
  PersonsSut sut(PersonsVariant::kV1);
  RefSutServer server(sut);
  HttpAdapter adapter(server.base_url());
  const Amos amos = persons_amos(AdapterKind::kHttp);

  CandidateSequence cand;
  cand.prop = MetaProperty::kR2;
  cand.steps.push_back(concrete_step("get-persons"));
  cand.steps.push_back(
      concrete_step("post-person", Json{{"age", 66}, {"name", "bo"}}));
  Step last = concrete_step("get-persons");
  last.mirrored = true;
  cand.steps.push_back(last);

  const ExecutionTrace trace = execute_candidate(cand, adapter, amos, std::nullopt);
  REQUIRE(trace.complete());
  CHECK(trace.steps[0].observation == Observation{200, "[]"});
  CHECK(trace.steps[2].observation.body == R"([{"age":66,"name":"bo"}])");
  CHECK(evaluate(MetaProperty::kR2, trace));

  soft_reset(adapter, amos);
  CHECK(sut.stored_count() == 0);

  const Observation direct = adapter.send({"GET", "/persons", {}, "", ""});
  CHECK(direct.status == 200);
}

TEST_CASE("unreachable endpoints raise transport errors") {
  HttpAdapter adapter("http://127.0.0.1:9", 200);  // discard port, nothing listens
  const Amos amos = persons_amos(AdapterKind::kHttp);
  const OperationSpec& get = *amos.find_operation("get-persons");
  CHECK_THROWS_AS(adapter.invoke(get, std::nullopt), TransportError);
}

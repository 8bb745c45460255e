#include "apixplore/refsut.hpp"

#include "doctest.h"

using namespace apix;

namespace {

Json person(const char* name, std::int64_t age) {
  return Json{{"age", age}, {"name", name}};
}

}  // namespace

TEST_CASE("persons variants differ only in how post treats its input") {
  SUBCASE("v1 overwrites silently") {
    PersonsSut sut(PersonsVariant::kV1);
    CHECK(sut.handle("post-person", person("ada", 70)).status == 200);
    CHECK(sut.handle("post-person", person("ada", 80)).status == 200);
    CHECK(sut.stored_count() == 1);
    CHECK(sut.handle("get-persons", {}).body == R"([{"age":80,"name":"ada"}])");
    // even the degenerate empty name is accepted
    CHECK(sut.handle("post-person", person("", 0)).status == 200);
  }

  SUBCASE("v2 rejects duplicate names") {
    PersonsSut sut(PersonsVariant::kV2);
    CHECK(sut.handle("post-person", person("ada", 70)).status == 200);
    const Observation dup = sut.handle("post-person", person("ada", 80));
    CHECK(dup.status == 409);
    CHECK(dup.body.find("duplicate-name") != std::string::npos);
    CHECK(sut.handle("get-persons", {}).body == R"([{"age":70,"name":"ada"}])");
    CHECK(sut.handle("post-person", person("", 10)).status == 200);  // no validation yet
  }

  SUBCASE("v3 additionally validates the input") {
    PersonsSut sut(PersonsVariant::kV3);
    CHECK(sut.handle("post-person", person("ada", 64)).status == 400);  // boundary: 64 is out
    CHECK(sut.handle("post-person", person("ada", 65)).status == 200);  // 65 is in
    CHECK(sut.handle("post-person", person("", 70)).status == 400);
    CHECK(sut.handle("post-person", person("ada", 99)).status == 409);  // still duplicate-checked
    CHECK(sut.stored_count() == 1);
  }
}

TEST_CASE("persons delete and reset behave uniformly across variants") {
  for (const PersonsVariant v :
       {PersonsVariant::kV1, PersonsVariant::kV2, PersonsVariant::kV3}) {
    PersonsSut sut(v);
    sut.handle("post-person", person("ada", 70));
    // deleting an absent person answers exactly like deleting a present one
    const Observation absent = sut.handle("delete-person", Json{{"name", "ghost"}});
    const Observation present = sut.handle("delete-person", Json{{"name", "ada"}});
    CHECK(absent.status == 200);
    CHECK(present.status == 200);
    CHECK(sut.stored_count() == 0);

    sut.handle("post-person", person("bob", 70));
    CHECK(sut.handle("reset", {}).status == 200);
    CHECK(sut.stored_count() == 0);
    CHECK(sut.handle("nonsense", {}).status == 500);
  }
}

TEST_CASE("groups post mints increasing ids and rejects bad input") {
  GroupsSut sut;
  const Observation first = sut.handle("post-groups", Json{{"name", "a"}, {"path", "a"}});
  CHECK(first.status == 201);
  CHECK(Json::parse(first.body)["id"] == Json(1));
  const Observation second = sut.handle("post-groups", Json{{"name", "b"}, {"path", "b"}});
  CHECK(Json::parse(second.body)["id"] == Json(2));

  CHECK(sut.handle("post-groups", Json{{"name", "a"}, {"path", "a"}}).status == 400);
  CHECK(sut.handle("post-groups", Json{{"name", ""}, {"path", "x"}}).status == 400);
  CHECK(sut.handle("post-groups", Json{{"name", "x"}}).status == 400);
  CHECK(sut.handle("post-groups", Json{{"name", 3}, {"path", "x"}}).status == 400);

  // same name under a different path is a different slot
  CHECK(sut.handle("post-groups", Json{{"name", "a"}, {"path", "other"}}).status == 201);
}

TEST_CASE("groups deletion completes after the configured latency") {
  GroupsSut sut({/*delete_latency_ms=*/3, /*page_size=*/20});
  sut.handle("post-groups", Json{{"name", "a"}, {"path", "a"}});

  const Observation accepted = sut.handle("delete-groups", Json{{"id", 1}});
  CHECK(accepted.status == 202);

  // the entity stays visible, and keeps blocking its slot, until the clock
  // passes the deletion instant
  CHECK(Json::parse(sut.handle("get-groups", {}).body).size() == 1);
  CHECK(sut.handle("post-groups", Json{{"name", "a"}, {"path", "a"}}).status == 400);

  sut.advance_clock(3);
  CHECK(Json::parse(sut.handle("get-groups", {}).body).empty());
  CHECK(sut.handle("post-groups", Json{{"name", "a"}, {"path", "a"}}).status == 201);

  // deleting again never extends a pending deletion's life
  GroupsSut again({5, 20});
  again.handle("post-groups", Json{{"name", "a"}, {"path", "a"}});
  again.handle("delete-groups", Json{{"id", 1}});
  again.advance_clock(3);
  again.handle("delete-groups", Json{{"id", 1}});  // would re-mark at now + 5
  again.advance_clock(2);
  CHECK(Json::parse(again.handle("get-groups", {}).body).empty());

  CHECK(sut.handle("delete-groups", Json{{"id", 999}}).status == 404);
  CHECK(sut.handle("delete-groups", Json{{"id", 0}}).status == 400);
}

TEST_CASE("groups get pages the id-ordered listing") {
  GroupsSut sut({0, /*page_size=*/3});
  for (int i = 1; i <= 7; ++i) {
    const std::string n = "g" + std::to_string(i);
    sut.handle("post-groups", Json{{"name", n}, {"path", n}});
  }

  const Json page1 = Json::parse(sut.handle("get-groups", {}).body);
  REQUIRE(page1.size() == 3);
  CHECK(page1[0]["id"] == Json(1));
  const Json page3 = Json::parse(sut.handle("get-groups", Json{{"page", 3}}).body);
  CHECK(page3.size() == 1);
  CHECK(page3[0]["id"] == Json(7));
  CHECK(Json::parse(sut.handle("get-groups", Json{{"page", 4}}).body).empty());
  CHECK(sut.handle("get-groups", Json{{"page", 0}}).status == 400);
}

TEST_CASE("groups reset clears trial state but keeps seeded fixtures") {
  GroupsSut sut;
  sut.seed(2);
  sut.handle("post-groups", Json{{"name", "extra"}, {"path", "extra"}});
  CHECK(sut.entity_count() == 3);

  sut.handle("reset", {});
  sut.advance_clock(1);
  sut.handle("get-groups", {});  // dispatch purges elapsed deletions
  CHECK(Json::parse(sut.handle("get-groups", {}).body).size() == 2);

  // ids continue after a reset: nothing is ever re-minted
  const Observation fresh = sut.handle("post-groups", Json{{"name", "x"}, {"path", "x"}});
  CHECK(Json::parse(fresh.body)["id"] == Json(4));

  // an explicit delete does remove a fixture
  sut.handle("delete-groups", Json{{"id", 1}});
  sut.advance_clock(1);
  CHECK(Json::parse(sut.handle("get-groups", {}).body).size() == 2);  // fixture 2 + x
}

TEST_CASE("built-in catalogues describe their systems faithfully") {
  const Amos persons = persons_amos(AdapterKind::kInProcess);
  CHECK(persons.operations.size() == 3);
  CHECK(persons.reset);
  CHECK(persons.find_operation("get-persons")->annotations.query_candidate);
  const auto& age =
      persons.find_operation("post-person")->parameters->find_field("age")->get();
  CHECK(age.min == 60);
  CHECK(age.max == 130);

  const Amos tiny = persons_tiny_amos(AdapterKind::kInProcess);
  const auto& name =
      tiny.find_operation("post-person")->parameters->find_field("name")->get();
  CHECK(name.kind == SchemaKind::kEnum);
  CHECK(name.values == std::vector<Json>{Json(""), Json("x")});

  const Amos groups = groups_amos({});
  CHECK(!groups.find_operation("get-groups")->annotations.ranged);
  CHECK(groups.find_operation("get-groups")->response_schema);
  CHECK(!groups.find_operation("post-groups")->response_schema);

  const Amos ranged = groups_amos({AdapterKind::kInProcess, true});
  const auto& ann = ranged.find_operation("get-groups")->annotations;
  CHECK(ann.ranged);
  CHECK(ann.page_param == "page");
  CHECK(ann.page_size == 20);

  const Amos bare = groups_amos({AdapterKind::kInProcess, false, false});
  CHECK(!bare.reset);
}

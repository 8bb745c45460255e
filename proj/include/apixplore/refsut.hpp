#pragma once

/// @file refsut.hpp
/// In-process reference systems under exploration, plus builders for the
/// catalogues describing them.  Both systems run on a simulated clock so
/// time-dependent behaviour replays identically everywhere.
///
/// The persons service is a name-indexed store in three behavioural variants
/// that share one API surface.  The groups service mimics a hosted
/// collection API: server-generated ids, duplicate rejection, paged reads,
/// and asynchronous deletion that completes a configurable latency after the
/// request was accepted.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "apixplore/amos.hpp"
#include "apixplore/executor.hpp"

namespace apix {

/// Persons-service behaviour variants.  All three expose post-person,
/// get-persons, delete-person, and reset; they differ only in how post
/// treats its input.
enum class PersonsVariant {
  kV1,  ///< post always succeeds, overwriting any person of the same name
  kV2,  ///< post fails when the name is already stored
  kV3,  ///< kV2 plus input validation: accepts only age > 64 and name != ""
};

/// Maps labels like "persons-v1" (or bare "v1") onto a variant.
std::optional<PersonsVariant> persons_variant_from_string(const std::string& label);

class PersonsSut final : public InProcessSut {
 public:
  explicit PersonsSut(PersonsVariant variant) : variant_(variant) {}

  Observation handle(const std::string& handler, const Json& params) override;
  void advance_clock(std::int64_t) override {}  // no time-dependent behaviour

  std::size_t stored_count() const { return store_.size(); }

 private:
  PersonsVariant variant_;
  std::map<std::string, std::int64_t> store_;  // name -> age
};

struct GroupsConfig {
  std::int64_t delete_latency_ms = 0;  ///< delete completes this long after acceptance
  std::int64_t page_size = 20;         ///< entities per page served by get-groups
};

class GroupsSut final : public InProcessSut {
 public:
  explicit GroupsSut(GroupsConfig config = {}) : config_(config) {}

  Observation handle(const std::string& handler, const Json& params) override;
  void advance_clock(std::int64_t ms) override { now_ += ms; }

  /// Pre-populates count fixture entities (names "seed-1", "seed-2", ...),
  /// bypassing the API.  Fixtures model baseline data the service ships with:
  /// reset leaves them alone, so a scenario that starts from a filled store
  /// restarts from the same filled store after every reset.
  void seed(int count);

  std::int64_t now() const { return now_; }
  std::size_t entity_count() const { return entities_.size(); }

 private:
  // delete_at set marks a pending delete; the entity stays visible (and
  // blocks recreation) until the clock reaches that instant.
  struct Entity {
    std::int64_t id = 0;
    std::string name;
    std::string path;
    std::optional<std::int64_t> delete_at;
    bool fixture = false;  // seeded baseline row; reset does not schedule it
  };

  void purge();
  Observation post(const Json& params);
  Observation get(const Json& params);
  Observation erase(const Json& params);
  Observation reset();

  GroupsConfig config_;
  std::int64_t now_ = 0;
  std::int64_t next_id_ = 1;  // ids strictly increase, never reused
  std::vector<Entity> entities_;  // id-ascending
};

/// Which invocation method a built catalogue declares, and therefore which
/// translation each operation carries.
enum class AdapterKind { kInProcess, kHttp };

/// Catalogue for the persons service (any variant; the surface is shared).
/// Persons: a map of age (int 60..130) and name (string up to 20 chars).
Amos persons_amos(AdapterKind kind, bool with_reset = true,
                  std::int64_t reset_sleep_ms = 0);

/// Persons catalogue with the name domain restricted to the two values ""
/// and "x" and no age parameter.  Small enough that every sequence up to a
/// handful of steps can be enumerated exhaustively.
Amos persons_tiny_amos(AdapterKind kind);

struct GroupsAmosOptions {
  AdapterKind kind = AdapterKind::kInProcess;
  bool ranged = false;       ///< annotate get-groups for page aggregation
  bool with_reset = true;
  std::int64_t reset_sleep_ms = 0;
  std::int64_t page_size = 20;  ///< page-size annotation (ranged only)
  std::int64_t page_max = 5;    ///< upper bound of the page parameter
};

/// Catalogue for the groups service: post-groups (name, path), get-groups
/// (optional page), delete-groups (id), reset.  get-groups is the only
/// operation with a declared response schema (a vector of group entities),
/// making its responses referenceable by path.
Amos groups_amos(const GroupsAmosOptions& options = {});

}  // namespace apix

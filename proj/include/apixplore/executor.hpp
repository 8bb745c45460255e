#pragma once

/// @file executor.hpp
/// Runs candidate sequences against an adapter: resolves symbolic parameters,
/// dispatches operations, aggregates paged reads, takes instrumentation
/// snapshots, and records the whole trace.
///
/// Error model: responses with failure statuses are ordinary observations
/// (they are behaviour, not faults); transport problems raise TransportError
/// and are retried once before the trace is aborted.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "apixplore/amos.hpp"
#include "apixplore/genseq.hpp"
#include "apixplore/metaprops.hpp"
#include "apixplore/observation.hpp"

namespace apix {

/// The connection to the system under test failed (as opposed to the system
/// answering with an error response).
struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Translation data cannot be applied to the resolved parameters.
struct TranslateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Pluggable transport.  Adapters also carry the reset passthrough (the reset
/// key is interpreted adapter-side) and the sleep used to let resets settle;
/// in-process adapters map sleeping onto a simulated clock.
class Adapter {
 public:
  virtual ~Adapter() = default;
  virtual Observation invoke(const OperationSpec& op,
                             const std::optional<Json>& params) = 0;
  virtual Observation reset(const std::string& key) = 0;
  virtual void sleep_ms(std::int64_t ms) = 0;
};

/// JSON bodies re-serialized with sorted keys (array order kept); anything
/// that does not parse as JSON is passed through byte-wise.
std::string canonicalize_body(const std::string& body);

/// A concrete HTTP request, ready for a transport to send.
struct WireRequest {
  std::string method;
  std::string path;
  std::vector<std::pair<std::string, std::string>> query;  ///< in param order
  std::string body;          ///< empty means no body
  std::string content_type;  ///< set when body is non-empty
  bool operator==(const WireRequest&) const = default;
};

/// Applies an operation's HTTP translation to resolved parameters: path
/// template substitution, query parameters, and a JSON body assembled from
/// body-placed fields.  Parameters without a placement entry stay off the
/// wire.  Throws TranslateError when a path template variable has no value.
WireRequest translate_http(const HttpTranslation& translation,
                           const std::optional<Json>& params);

/// Fetches a ranged operation page by page (1, 2, ...) until a page holds
/// fewer items than the page size, and returns one aggregated observation:
/// the first page's status with the concatenated items as body.
Observation fetch_ranged(Adapter& adapter, const OperationSpec& op,
                         const std::optional<Json>& params);

/// Dispatches one operation (through fetch_ranged when annotated ranged) and
/// canonicalizes the response body.
Observation invoke_operation(Adapter& adapter, const OperationSpec& op,
                             const std::optional<Json>& params);

struct ResetOutcome {
  bool applied = false;
  std::optional<std::string> warning;
};

/// Dispatches the catalogue's reset key through the adapter, then sleeps the
/// declared settle time.  Without a declared reset this is a no-op that
/// returns a warning; trials then run against whatever state is left over.
ResetOutcome soft_reset(Adapter& adapter, const Amos& amos);

/// Executes a candidate from the current state.  With a query context the
/// trace carries exactly steps + 1 snapshots (one before the first step, one
/// after each).  Resolution, translation, and repeated transport failures
/// abort the trace with the error recorded; completed prefixes stay in it.
ExecutionTrace execute_candidate(const CandidateSequence& cand, Adapter& adapter,
                                 const Amos& amos,
                                 const std::optional<QueryContext>& ctx);

/// Host-side system under test reachable without any transport.  The clock
/// hook drives simulated time for systems with asynchronous behaviour.
class InProcessSut {
 public:
  virtual ~InProcessSut() = default;
  virtual Observation handle(const std::string& handler, const Json& params) = 0;
  virtual void advance_clock(std::int64_t ms) = 0;
};

/// Adapter over an in-process system.  Every dispatch advances the simulated
/// clock by a fixed tick so time-dependent behaviour unfolds deterministically;
/// sleep_ms advances the same clock instead of waiting.
class InProcessAdapter final : public Adapter {
 public:
  explicit InProcessAdapter(InProcessSut& sut, std::int64_t op_tick_ms = 1)
      : sut_(sut), op_tick_ms_(op_tick_ms) {}

  Observation invoke(const OperationSpec& op,
                     const std::optional<Json>& params) override;
  Observation reset(const std::string& key) override;
  void sleep_ms(std::int64_t ms) override { sut_.advance_clock(ms); }

 private:
  InProcessSut& sut_;
  std::int64_t op_tick_ms_;
};

}  // namespace apix

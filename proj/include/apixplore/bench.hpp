#pragma once

/// @file bench.hpp
/// Search-cost experiment: how many candidates does it take to find a
/// state-restoring example on the persons system, with and without symbolic
/// references, with and without input validation?
///
/// Four configurations:
///   A  random-only parameters, no input validation (v1)
///   B  references allowed,     no input validation (v1)
///   C  random-only parameters, input validation (v3)
///   D  references allowed,     input validation (v3)
/// Each run generates candidates for the state-restored property until one
/// conforms or the budget is exhausted; shrinking never runs and is never
/// counted.

#include <cstdint>
#include <string>
#include <vector>

#include "apixplore/genseq.hpp"
#include "apixplore/refsut.hpp"

namespace apix {

struct BenchConfig {
  char label = 'A';
  ModePolicy mode_policy = ModePolicy::kRandomOnly;
  PersonsVariant variant = PersonsVariant::kV1;
  int runs = 200;
  int budget = 1000;
  bool operator==(const BenchConfig&) const = default;
};

/// Config for one of the labels A-D.  Throws std::invalid_argument on any
/// other label.
BenchConfig bench_config(char label, int runs = 200, int budget = 1000);
std::vector<BenchConfig> default_bench_configs(int runs = 200, int budget = 1000);

/// found = false means the budget ran out; tests_used is then the budget.
struct BenchSample {
  int run = 0;
  int tests_used = 0;
  bool found = false;
  bool operator==(const BenchSample&) const = default;
};

struct ConfigSamples {
  BenchConfig config;
  std::vector<BenchSample> samples;  ///< ordered by run index
};

struct SummaryRow {
  char label = 'A';
  int found_count = 0;
  double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
};

/// Rank statistics for one ordered pair of configurations, computed on
/// tests_used: a_measure is the chance a run of `first` needs more tests than
/// one of `second` (ties half), p the two-sided test p-value.
struct PairStats {
  char first = 'A';
  char second = 'B';
  double a_measure = 0.5;
  double p = 1.0;
};

struct BenchResult {
  std::vector<ConfigSamples> configs;
  std::vector<SummaryRow> rows;
  std::vector<PairStats> pairs;  ///< A-B, C-D, B-D when those labels are present
};

/// Runs every configuration.  Each run gets a fresh system instance and a
/// seed derived from (master_seed, label, run index), so results do not
/// depend on scheduling; runs execute in parallel on `threads` workers
/// (0 = hardware concurrency).
BenchResult run_experiment(const std::vector<BenchConfig>& configs,
                           std::uint64_t master_seed, int threads = 0);

/// "config,run,tests_used,found" rows, one line per run.
std::string bench_csv(const BenchResult& result);

/// Human-readable summary and pair tables.
std::vector<std::string> bench_tables(const BenchResult& result);

}  // namespace apix

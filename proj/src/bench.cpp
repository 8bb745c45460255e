#include "apixplore/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

#include "apixplore/executor.hpp"
#include "apixplore/stats.hpp"

namespace apix {

namespace {

std::uint64_t derive_seed(std::uint64_t master, char label, int run) {
  Rng mixer(master ^ (static_cast<std::uint64_t>(label) << 32) ^
            static_cast<std::uint64_t>(static_cast<std::uint32_t>(run)));
  return mixer.next();
}

BenchSample run_one(const BenchConfig& cfg, const Amos& amos,
                    std::uint64_t master_seed, int run) {
  PersonsSut sut(cfg.variant);
  InProcessAdapter adapter(sut);
  const QueryContext ctx{"get-persons", std::nullopt};
  const SequenceShape shape = shape_constraints(MetaProperty::kS3);

  Rng run_rng(derive_seed(master_seed, cfg.label, run));
  BenchSample sample{run, cfg.budget, false};
  for (int trial = 0; trial < cfg.budget; ++trial) {
    Rng trial_rng = run_rng.split();
    CandidateSequence cand =
        generate_candidate(amos, shape, trial_rng, 1 + trial % 9, cfg.mode_policy);
    soft_reset(adapter, amos);
    const ExecutionTrace trace = execute_candidate(cand, adapter, amos, ctx);
    if (trace.complete() && evaluate(MetaProperty::kS3, trace)) {
      sample.tests_used = trial + 1;
      sample.found = true;
      break;
    }
  }
  return sample;
}

double quantile(std::vector<double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const double frac = pos - static_cast<double>(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

SummaryRow summarize(const ConfigSamples& cs) {
  std::vector<double> used;
  SummaryRow row;
  row.label = cs.config.label;
  for (const BenchSample& s : cs.samples) {
    used.push_back(static_cast<double>(s.tests_used));
    if (s.found) ++row.found_count;
  }
  std::sort(used.begin(), used.end());
  row.min = used.front();
  row.q1 = quantile(used, 0.25);
  row.median = quantile(used, 0.5);
  row.q3 = quantile(used, 0.75);
  row.max = used.back();
  double sum = 0;
  for (double v : used) sum += v;
  row.mean = sum / static_cast<double>(used.size());
  return row;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

BenchConfig bench_config(char label, int runs, int budget) {
  BenchConfig cfg;
  cfg.label = label;
  cfg.runs = runs;
  cfg.budget = budget;
  switch (label) {
    case 'A':
      cfg.mode_policy = ModePolicy::kRandomOnly;
      cfg.variant = PersonsVariant::kV1;
      break;
    case 'B':
      cfg.mode_policy = ModePolicy::kReferencesAllowed;
      cfg.variant = PersonsVariant::kV1;
      break;
    case 'C':
      cfg.mode_policy = ModePolicy::kRandomOnly;
      cfg.variant = PersonsVariant::kV3;
      break;
    case 'D':
      cfg.mode_policy = ModePolicy::kReferencesAllowed;
      cfg.variant = PersonsVariant::kV3;
      break;
    default:
      throw std::invalid_argument(std::string("unknown configuration label '") +
                                  label + "'");
  }
  return cfg;
}

std::vector<BenchConfig> default_bench_configs(int runs, int budget) {
  std::vector<BenchConfig> out;
  for (char label : {'A', 'B', 'C', 'D'}) out.push_back(bench_config(label, runs, budget));
  return out;
}

BenchResult run_experiment(const std::vector<BenchConfig>& configs,
                           std::uint64_t master_seed, int threads) {
  for (const BenchConfig& cfg : configs) {
    if (cfg.runs <= 0 || cfg.budget <= 0) {
      throw std::invalid_argument("runs and budget must be positive");
    }
  }

  BenchResult result;
  const Amos amos = persons_amos(AdapterKind::kInProcess);
  struct Job {
    std::size_t config = 0;
    int run = 0;
  };
  std::vector<Job> jobs;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    result.configs.push_back({configs[i], std::vector<BenchSample>(configs[i].runs)});
    for (int run = 0; run < configs[i].runs; ++run) jobs.push_back({i, run});
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs.size()) return;
      const Job job = jobs[j];
      result.configs[job.config].samples[job.run] =
          run_one(configs[job.config], amos, master_seed, job.run);
    }
  };

  int n_threads = threads > 0 ? threads
                              : static_cast<int>(std::thread::hardware_concurrency());
  if (n_threads <= 0) n_threads = 4;
  n_threads = std::min<std::size_t>(n_threads, jobs.size());
  std::vector<std::thread> pool;
  for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (const ConfigSamples& cs : result.configs) result.rows.push_back(summarize(cs));

  auto samples_of = [&](char label) -> const ConfigSamples* {
    for (const ConfigSamples& cs : result.configs) {
      if (cs.config.label == label) return &cs;
    }
    return nullptr;
  };
  for (auto [first, second] : {std::pair{'A', 'B'}, {'C', 'D'}, {'B', 'D'}}) {
    const ConfigSamples* lhs = samples_of(first);
    const ConfigSamples* rhs = samples_of(second);
    if (lhs == nullptr || rhs == nullptr) continue;
    std::vector<double> xs, ys;
    for (const BenchSample& s : lhs->samples) xs.push_back(s.tests_used);
    for (const BenchSample& s : rhs->samples) ys.push_back(s.tests_used);
    PairStats pair;
    pair.first = first;
    pair.second = second;
    pair.a_measure = vargha_delaney_a(xs, ys);
    pair.p = mann_whitney_u(xs, ys).p;
    result.pairs.push_back(pair);
  }
  return result;
}

std::string bench_csv(const BenchResult& result) {
  std::string out = "config,run,tests_used,found\n";
  for (const ConfigSamples& cs : result.configs) {
    for (const BenchSample& s : cs.samples) {
      out += cs.config.label;
      out += ',' + std::to_string(s.run) + ',' + std::to_string(s.tests_used) + ',' +
             (s.found ? "true" : "false") + '\n';
    }
  }
  return out;
}

std::vector<std::string> bench_tables(const BenchResult& result) {
  std::vector<std::string> lines;
  lines.push_back("config  runs  found  min  q1  median  mean  q3  max");
  for (std::size_t i = 0; i < result.rows.size(); ++i) {
    const SummaryRow& r = result.rows[i];
    const int runs = static_cast<int>(result.configs[i].samples.size());
    lines.push_back(std::string(1, r.label) + "  " + std::to_string(runs) + "  " +
                    std::to_string(r.found_count) + "  " + fmt(r.min) + "  " +
                    fmt(r.q1) + "  " + fmt(r.median) + "  " + fmt(r.mean) + "  " +
                    fmt(r.q3) + "  " + fmt(r.max));
  }
  if (!result.pairs.empty()) {
    lines.push_back("");
    lines.push_back("pair  a-measure  p-value");
    for (const PairStats& p : result.pairs) {
      lines.push_back(std::string(1, p.first) + "-" + p.second + "  " +
                      fmt(p.a_measure) + "  " + fmt(p.p));
    }
  }
  return lines;
}

}  // namespace apix

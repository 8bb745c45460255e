// apixplore: explore an API's behaviour through meta-properties, map OpenAPI
// documents onto the catalogue format, benchmark the search, replay emitted
// test cases.
//
// Exit codes: 0 success, 1 the requested check failed (map-openapi parse
// failure, replay property violation), 2 configuration error (nothing
// written), 3 runtime failure (adapter unreachable and kin).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "apixplore/bench.hpp"
#include "apixplore/executor.hpp"
#include "apixplore/explorer.hpp"
#include "apixplore/http_adapter.hpp"
#include "apixplore/openapi.hpp"
#include "apixplore/refsut.hpp"
#include "apixplore/report.hpp"

namespace {

using namespace apix;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::vector<MetaProperty> parse_props(const std::string& list) {
  std::vector<MetaProperty> props;
  std::stringstream ss(list);
  std::string id;
  while (std::getline(ss, id, ',')) {
    if (id.empty()) continue;
    try {
      props.push_back(meta_property_from_string(id));
    } catch (const std::invalid_argument&) {
      std::string valid;
      for (const MetaProperty p : all_meta_properties()) {
        if (!valid.empty()) valid += ", ";
        valid += to_string(p);
      }
      throw ConfigError("unknown property \"" + id + "\" (valid: " + valid + ")");
    }
  }
  if (props.empty()) throw ConfigError("--props lists no properties");
  return props;
}

// Common adapter/catalogue surface shared by explore and replay.
struct TargetFlags {
  std::string amos_path;
  std::string adapter_spec;
  std::string base_url;
  std::int64_t sut_latency = 0;
  std::int64_t sut_page_size = 20;
  int sut_seed_entities = 0;
  std::int64_t reset_sleep = -1;  // -1: latency for groups builtins, else 0
};

void add_target_flags(CLI::App& cmd, TargetFlags& t, bool amos_required) {
  auto* amos = cmd.add_option(
      "--amos", t.amos_path,
      "catalogue file, or builtin:persons|persons-tiny|groups|groups-ranged");
  if (amos_required) amos->required();
  cmd.add_option("--adapter", t.adapter_spec,
                 "in-process:<persons-v1|persons-v2|persons-v3|groups> or http")
      ->required();
  cmd.add_option("--base-url", t.base_url,
                 "http adapter target (default: APIXPLORE_BASE_URL)");
  cmd.add_option("--sut-latency", t.sut_latency,
                 "groups only: delete completion latency, ms");
  cmd.add_option("--sut-page-size", t.sut_page_size,
                 "groups only: entities per served page");
  cmd.add_option("--sut-seed-entities", t.sut_seed_entities,
                 "groups only: pre-populate this many entities");
  cmd.add_option("--reset-sleep", t.reset_sleep,
                 "builtin catalogues: reset settle time, ms");
}

struct Target {
  Amos amos;
  std::unique_ptr<InProcessSut> sut;  // null for http
  std::unique_ptr<Adapter> adapter;
};

Target make_target(const TargetFlags& t) {
  Target target;

  AdapterKind kind = AdapterKind::kInProcess;
  std::string sut_id;
  if (t.adapter_spec == "http") {
    kind = AdapterKind::kHttp;
  } else if (t.adapter_spec.rfind("in-process:", 0) == 0) {
    sut_id = t.adapter_spec.substr(11);
  } else {
    throw ConfigError("unknown adapter \"" + t.adapter_spec +
                      "\" (use in-process:<sut-id> or http)");
  }

  const bool groups_sut = sut_id == "groups";
  const std::int64_t sleep =
      t.reset_sleep >= 0 ? t.reset_sleep : (groups_sut ? t.sut_latency : 0);
  if (t.amos_path.rfind("builtin:", 0) == 0) {
    const std::string which = t.amos_path.substr(8);
    if (which == "persons") {
      target.amos = persons_amos(kind, true, sleep);
    } else if (which == "persons-tiny") {
      target.amos = persons_tiny_amos(kind);
    } else if (which == "groups" || which == "groups-ranged") {
      GroupsAmosOptions opt;
      opt.kind = kind;
      opt.ranged = which == "groups-ranged";
      opt.reset_sleep_ms = sleep;
      opt.page_size = t.sut_page_size;
      target.amos = groups_amos(opt);
    } else {
      throw ConfigError("unknown builtin catalogue \"" + which + "\"");
    }
  } else {
    try {
      target.amos = parse_amos(read_file(t.amos_path));
    } catch (const AmosError& e) {
      throw ConfigError(t.amos_path + ": " + e.what());
    }
  }
  const auto violations = validate_amos(target.amos);
  if (!violations.empty()) {
    std::string msg = "catalogue fails validation:";
    for (const Violation& v : violations) msg += "\n  " + v.message;
    throw ConfigError(msg);
  }

  if (kind == AdapterKind::kHttp) {
    std::string url = t.base_url;
    if (url.empty()) {
      const char* env = std::getenv("APIXPLORE_BASE_URL");
      if (env != nullptr) url = env;
    }
    if (url.empty()) {
      throw ConfigError("http adapter needs --base-url or APIXPLORE_BASE_URL");
    }
    target.adapter = std::make_unique<HttpAdapter>(url);
    return target;
  }

  if (const auto variant = persons_variant_from_string(sut_id)) {
    target.sut = std::make_unique<PersonsSut>(*variant);
  } else if (groups_sut) {
    GroupsConfig config;
    config.delete_latency_ms = t.sut_latency;
    config.page_size = t.sut_page_size;
    auto groups = std::make_unique<GroupsSut>(config);
    if (t.sut_seed_entities > 0) groups->seed(t.sut_seed_entities);
    target.sut = std::move(groups);
  } else {
    throw ConfigError("unknown in-process system \"" + sut_id + "\"");
  }
  target.adapter = std::make_unique<InProcessAdapter>(*target.sut);
  return target;
}

int cmd_explore(const TargetFlags& tf, const std::string& props_list,
                int tests, int iterations, std::uint64_t seed,
                const std::string& query_op, const std::string& query_params,
                const std::string& mode, int shrink_budget,
                const std::string& out_dir) {
  ExplorationConfig config;
  config.props = parse_props(props_list);
  config.tests_per_iteration = tests;
  config.iterations = iterations;
  config.seed = seed;
  config.shrink.max_reexecutions = shrink_budget;
  if (mode == "refs") {
    config.mode_policy = ModePolicy::kReferencesAllowed;
  } else if (mode == "random") {
    config.mode_policy = ModePolicy::kRandomOnly;
  } else {
    throw ConfigError("unknown mode \"" + mode + "\" (use refs or random)");
  }
  if (!query_op.empty()) {
    QueryContext ctx;
    ctx.query_op = query_op;
    if (!query_params.empty()) {
      const Json parsed = Json::parse(query_params, nullptr, false);
      if (parsed.is_discarded()) {
        throw ConfigError("--query-params is not valid JSON");
      }
      ctx.query_params = parsed;
    }
    config.ctx = ctx;
  }
  for (const MetaProperty prop : config.props) {
    if (shape_constraints(prop).instrumented && !config.ctx) {
      throw ConfigError(std::string(to_string(prop)) +
                        " needs --query-op to observe state");
    }
  }

  Target target = make_target(tf);

  ExplorationResult result;
  try {
    result = explore(target.amos, *target.adapter, config);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const auto under = [&](const std::string& name) {
    return (fs::path(out_dir) / name).string();
  };

  write_file(under("report.json"), render_data(result));
  std::string text;
  for (const std::string& line : render_human(result)) text += line + "\n";
  write_file(under("report.txt"), text);

  for (const PropResult& pr : result.props) {
    for (std::size_t i = 0; i < pr.examples.size(); ++i) {
      const std::string name = std::string(to_string(pr.prop)) + "." +
                               std::to_string(i + 1) + ".case.json";
      write_file(under(name),
                 emit_test_case(pr.examples[i], config.ctx).dump(2) + "\n");
    }
  }

  for (const std::string& warning : result.warnings) {
    std::cerr << "warning: " << warning << "\n";
  }
  for (const PropResult& pr : result.props) {
    std::cout << to_string(pr.prop) << ": " << pr.examples.size()
              << (pr.examples.size() == 1 ? " example" : " examples") << " in "
              << pr.trials << " trials\n";
  }
  std::cout << "wrote " << under("report.json") << ", " << under("report.txt")
            << "\n";
  return 0;
}

int cmd_map_openapi(const std::string& in_path, const std::string& out_path) {
  std::string doc;
  try {
    doc = read_file(in_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  MappingReport report;
  try {
    report = map_openapi(doc);
  } catch (const OpenApiError& e) {
    std::cerr << "error: " << in_path << ": " << e.what() << "\n";
    return 1;
  }
  for (const MappingWarning& w : report.warnings) {
    std::cerr << "warning: " << w.location << ": " << w.reason << "\n";
  }
  write_file(out_path, render_amos(report.amos));
  std::cout << "wrote " << out_path << " (" << report.amos.operations.size()
            << " operations, " << report.warnings.size() << " warnings)\n";
  return 0;
}

int cmd_bench(int runs, int budget, std::uint64_t seed, const std::string& out,
              int threads) {
  const BenchResult result =
      run_experiment(default_bench_configs(runs, budget), seed, threads);
  if (!out.empty()) write_file(out, bench_csv(result));
  for (const std::string& line : bench_tables(result)) std::cout << line << "\n";
  if (!out.empty()) std::cout << "wrote " << out << "\n";
  return 0;
}

int cmd_replay(const TargetFlags& tf, const std::string& case_path) {
  const Json doc = Json::parse(read_file(case_path), nullptr, false);
  if (doc.is_discarded()) throw ConfigError(case_path + ": not valid JSON");
  TestCase test;
  try {
    test = parse_test_case(doc);
  } catch (const std::runtime_error& e) {
    throw ConfigError(case_path + ": " + e.what());
  }

  Target target = make_target(tf);
  for (const Step& step : test.sequence.steps) {
    if (target.amos.find_operation(step.op_key) == nullptr) {
      throw ConfigError("case step operation \"" + step.op_key +
                        "\" is not in the catalogue");
    }
  }
  if (test.ctx && target.amos.find_operation(test.ctx->query_op) == nullptr) {
    throw ConfigError("case query operation \"" + test.ctx->query_op +
                      "\" is not in the catalogue");
  }
  if (test.reset_first) soft_reset(*target.adapter, target.amos);
  const ExecutionTrace trace =
      execute_candidate(test.sequence, *target.adapter, target.amos, test.ctx);
  if (!trace.complete()) {
    std::cerr << to_string(test.prop) << " replay aborted: " << *trace.error
              << "\n";
    return 1;
  }
  if (!evaluate(test.prop, trace)) {
    std::cout << to_string(test.prop) << " does not hold on this system\n";
    return 1;
  }
  std::cout << to_string(test.prop) << " holds (" << trace.steps.size()
            << " steps)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"meta-property explorer for JSON APIs"};
  app.require_subcommand(1);

  TargetFlags explore_target;
  std::string props_list;
  int tests = 100;
  int iterations = 5;
  std::uint64_t seed = 0;
  std::string query_op;
  std::string query_params;
  std::string mode = "refs";
  int shrink_budget = 500;
  std::string out_dir;
  auto* explore = app.add_subcommand(
      "explore", "search for minimal examples of the chosen properties");
  add_target_flags(*explore, explore_target, true);
  explore->add_option("--props", props_list, "comma-separated property ids")
      ->required();
  explore->add_option("--tests", tests, "trials per iteration");
  explore->add_option("--iterations", iterations, "iterations per property");
  explore->add_option("--seed", seed, "master random seed");
  explore->add_option("--query-op", query_op,
                      "operation whose response is the observed state");
  explore->add_option("--query-params", query_params,
                      "JSON parameters for the query operation");
  explore->add_option("--mode", mode, "parameter modes: refs or random");
  explore->add_option("--shrink-budget", shrink_budget,
                      "re-executions allowed per shrink");
  explore->add_option("--out", out_dir, "directory for report and case files")
      ->required();

  std::string map_in;
  std::string map_out;
  auto* map = app.add_subcommand("map-openapi",
                                 "derive a catalogue from an OpenAPI document");
  map->add_option("--in", map_in, "OpenAPI 3.x JSON document")->required();
  map->add_option("--out", map_out, "catalogue file to write")->required();

  int bench_runs = 200;
  int bench_budget = 1000;
  std::uint64_t bench_seed = 0;
  std::string bench_out;
  int bench_threads = 0;
  auto* bench = app.add_subcommand(
      "bench", "measure search cost with and without references");
  bench->add_option("--runs", bench_runs, "runs per configuration");
  bench->add_option("--budget", bench_budget, "max trials per run");
  bench->add_option("--seed", bench_seed, "master random seed");
  bench->add_option("--out", bench_out, "CSV file for the raw samples");
  bench->add_option("--threads", bench_threads,
                    "worker threads (0: hardware concurrency)");

  TargetFlags replay_target;
  std::string case_path;
  auto* replay =
      app.add_subcommand("replay", "re-execute an emitted test case");
  add_target_flags(*replay, replay_target, true);
  replay->add_option("--case", case_path, "test case file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (explore->parsed()) {
      return cmd_explore(explore_target, props_list, tests, iterations, seed,
                         query_op, query_params, mode, shrink_budget, out_dir);
    }
    if (map->parsed()) return cmd_map_openapi(map_in, map_out);
    if (bench->parsed()) {
      return cmd_bench(bench_runs, bench_budget, bench_seed, bench_out,
                       bench_threads);
    }
    if (replay->parsed()) return cmd_replay(replay_target, case_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const TransportError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptd/harness.hpp"

using namespace ptd;

namespace {

Trace trace_of(std::vector<std::vector<ObjectId>> per_slot) {
  Trace t;
  t.method = "x";
  for (std::size_t i = 0; i < per_slot.size(); ++i) {
    SlotRecord s;
    s.slot = i;
    s.ptd = per_slot[i];
    t.slots.push_back(s);
  }
  return t;
}

ExperimentConfig tiny() {
  ExperimentConfig c;
  c.u = 240;
  c.n = 2;
  c.d = 3;
  c.m = 2;
  c.swj = 80;
  c.k = 6;
  c.delta = 4;
  c.seeds = {3};
  return c;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST_CASE("defaults and monitoring period") {
  ExperimentConfig c;
  CHECK(c.u == 10000);
  CHECK(c.m == 10);
  CHECK(c.swj == 960);
  CHECK(c.protocol().global_window() == 9600);
  CHECK(monitoring_period(c) == 40);
  c.u = 2000;
  c.m = 4;
  c.swj = 500;
  CHECK(monitoring_period(c) == 1);
  c.swj = 200;
  CHECK(monitoring_period(c) == 300);
}

TEST_CASE("config parsing") {
  std::istringstream in("# desk run\nu = 2000\nm=4\n delta = 10 \nseed=1,2,3\nmethod=ptdmus,ptdbf\nmct=forced\n");
  const auto c = parse_config(in);
  CHECK(c.u == 2000);
  CHECK(c.m == 4);
  CHECK(c.delta == 10);
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3});
  CHECK(c.methods == std::vector<std::string>{"ptdmus", "ptdbf"});
  CHECK(c.force_rescore);

  std::istringstream bad_key("w=3\n");
  CHECK_THROWS_AS(parse_config(bad_key), ConfigError);
  std::istringstream bad_value("k=ten\n");
  CHECK_THROWS_AS(parse_config(bad_value), ConfigError);
  std::istringstream no_eq("k\n");
  CHECK_THROWS_AS(parse_config(no_eq), ConfigError);

  ExperimentConfig all;
  all.set("method", "all");
  CHECK(all.methods.size() == 3);
}

TEST_CASE("validation names the broken invariant") {
  ExperimentConfig c;
  c.delta = 200;
  try {
    c.validate();
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("delta") != std::string::npos);
  }
  c = {};
  c.m = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.methods = {"fast"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = {};
  c.margin = 2500;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("precision and recall") {
  const auto same = trace_of({{1, 2}, {3}});
  auto pr = precision_recall(same, same);
  CHECK(pr.precision == 100.0);
  CHECK(pr.recall == 100.0);

  pr = precision_recall(trace_of({{1, 2}, {1, 2}}), trace_of({{1, 3}, {1, 3}}));
  CHECK(pr.precision == 50.0);
  CHECK(pr.recall == 50.0);

  pr = precision_recall(trace_of({{1, 2}, {3, 4}}), trace_of({{1}, {4}}));
  CHECK(pr.precision == 100.0);
  CHECK(pr.recall == 50.0);

  // degenerate rules
  pr = precision_recall(trace_of({{}, {1}}), trace_of({{}, {}}));
  CHECK(pr.precision == 50.0);
  CHECK(pr.recall == 50.0);
  pr = precision_recall(trace_of({{}}), trace_of({{5}}));
  CHECK(pr.precision == 0.0);
  CHECK(pr.recall == 0.0);

  CHECK_THROWS_AS(precision_recall(trace_of({{1}}), trace_of({{1}, {1}})), ComparisonError);
}

TEST_CASE("experiment rows, cost decomposition and the self-comparison") {
  auto c = tiny();
  const auto result = run_experiment(c);
  REQUIRE(result.rows.size() == 3);
  REQUIRE(result.runs.size() == 1);
  for (const auto& row : result.rows) {
    CHECK(row.precision >= 0.0);
    CHECK(row.precision <= 100.0);
    CHECK(row.recall <= 100.0);
  }
  const auto& bf = result.rows[2];
  CHECK(bf.method == "ptdbf");
  CHECK(bf.precision == 100.0);
  CHECK(bf.recall == 100.0);
  CHECK(bf.cost_avg == 0.0);

  const Trace& mus = result.runs[0].traces[0];
  const auto cost = cost_breakdown(mus);
  std::size_t raw = 0;
  for (const auto& s : mus.slots)
    for (const auto& m : s.messages) raw += m.entries * m.recipients;
  CHECK(cost.initial + cost.update == raw);
  CHECK(cost.initial == mus.slots[0].cost());
  std::size_t kinds = 0;
  for (const auto& [k, v] : cost.by_kind) kinds += v;
  CHECK(kinds == raw);
  CHECK(result.rows[0].cost_avg == doctest::Approx(static_cast<double>(raw) / mus.slots.size()));
}

TEST_CASE("sweep expands to one row per point, method and seed") {
  auto c = tiny();
  c.seeds = {1, 2};
  c.k = 50;
  const auto points = expand_sweep(c, {{"delta", {"10", "20", "30", "40", "50"}}});
  REQUIRE(points.size() == 5);
  CHECK(points[4].delta == 50);
  CHECK_THROWS_AS(expand_sweep(c, {{"delta", {"60"}}}), ConfigError);
  const auto grid = expand_sweep(c, {{"m", {"1", "2"}}, {"k", {"10", "20", "30"}}});
  REQUIRE(grid.size() == 6);
  CHECK(grid[1].m == 1);
  CHECK(grid[1].k == 20);
}

TEST_CASE("outputs are reproducible and traces read back") {
  namespace fs = std::filesystem;
  const auto base = fs::temp_directory_path() / "ptd_harness_test";
  fs::remove_all(base);
  auto c = tiny();
  c.seeds = {4, 5};
  const auto a = run_to_directory({c}, (base / "a").string());
  const auto b = run_to_directory({c}, (base / "b").string());
  CHECK(slurp(a.csv) == slurp(b.csv));
  CHECK(slurp(a.jsonl) == slurp(b.jsonl));
  CHECK(slurp(a.csv).rfind("u,n,d,m,swj,rdeg,delta,k,margin,method,seed,precision,recall,cost_avg_objects,", 0) == 0);
  const auto manifest = slurp(a.manifest);
  CHECK(manifest.find(sha256_hex(c.canonical())) != std::string::npos);

  std::ifstream in(a.jsonl);
  const auto traces = read_trace_jsonl(in);
  REQUIRE(traces.size() == 6);
  const auto direct = run_experiment(c);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& orig = direct.runs[0].traces[i];
    const auto& back = traces[i].trace;
    CHECK(back.method == orig.method);
    CHECK(traces[i].seed == 4);
    REQUIRE(back.slots.size() == orig.slots.size());
    CHECK(back.total_cost() == orig.total_cost());
    CHECK(back.total_checks() == orig.total_checks());
    for (std::size_t t = 0; t < orig.slots.size(); ++t) CHECK(back.slots[t].ptd == orig.slots[t].ptd);
  }
  fs::remove_all(base);

  std::istringstream junk("{\"method\":1}\n");
  CHECK_THROWS_AS(read_trace_jsonl(junk), FormatError);
}

TEST_CASE("sha256 of known strings") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("dataset file input overrides generation") {
  namespace fs = std::filesystem;
  const auto path = (fs::temp_directory_path() / "ptd_harness_dataset.txt").string();
  auto c = tiny();
  const auto objs = load_objects(c, 3);
  write_dataset_file(path, objs);
  auto from_file = c;
  from_file.dataset = path;
  const auto a = run_experiment(c);
  const auto b = run_experiment(from_file);
  CHECK(a.runs[0].dataset_sha256 == b.runs[0].dataset_sha256);
  CHECK(a.rows[0].cost_avg == b.rows[0].cost_avg);
  fs::remove(path);
}

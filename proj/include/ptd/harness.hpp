#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptd/datagen.hpp"
#include "ptd/protocol.hpp"

namespace ptd {

// Flat experiment configuration. Defaults are the standard simulation settings.
struct ExperimentConfig {
  std::size_t u = 10000;
  std::size_t n = 5;
  std::size_t d = 9;
  std::size_t m = 10;
  std::size_t swj = 960;
  std::size_t rdeg = 6;
  std::size_t delta = 30;
  std::size_t k = 100;
  double margin = 160.0;
  std::string distribution = "uniform";
  std::vector<std::string> methods{"ptdmus", "ptdsky", "ptdbf"};
  std::vector<std::uint64_t> seeds{1};
  bool force_rescore = false;  // mct=forced
  std::string dataset;         // optional dataset file instead of generation

  void validate() const;
  // Sets one key from its text form; unknown keys and bad values throw
  // ConfigError naming the key.
  void set(std::string_view key, std::string_view value);
  ProtocolParams protocol() const;
  GeneratorConfig generator(std::uint64_t seed) const;
  // key=value lines in a fixed order; hashed into the manifest.
  std::string canonical() const;
};

// Reads `key = value` lines; '#' starts a comment.
ExperimentConfig parse_config(std::istream& in, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base = {});

// Number of monitored slots: the largest per-stream share minus |SW_j|,
// or 1 when that is not positive.
std::size_t monitoring_period(const ExperimentConfig& config);

struct PrecisionRecall {
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
};

// Slot-wise precision and recall of `compared` against `baseline`. A slot
// with an empty compared set scores precision 100 only when the baseline is
// empty too; an empty baseline likewise scores recall 100 only when both
// are empty.
PrecisionRecall precision_recall(const Trace& baseline, const Trace& compared);

struct CostBreakdown {
  std::size_t initial = 0;  // slot 0 uploads, broadcasts and score traffic
  std::size_t update = 0;   // every later slot
  std::size_t total = 0;
  double average = 0.0;     // total / slots, in object-sized entries
  std::map<std::string, std::size_t> by_kind;
};

CostBreakdown cost_breakdown(const Trace& trace);

// Counts (slot, id) pairs where a candidate deferred by its checking time
// is in the baseline result at that slot; stores the per-slot count.
std::size_t count_early_mct(const Trace& baseline, Trace& trace);

struct MetricsRecord {
  ExperimentConfig config;  // the point this row belongs to (single seed)
  std::string method;
  std::uint64_t seed = 0;
  double precision = 0.0;
  double recall = 0.0;
  double cost_avg = 0.0;
  double checks_avg = 0.0;
  double cs_size_avg = 0.0;
  std::size_t early_mct_count = 0;
  double wall_seconds = 0.0;  // manifest only
};

struct SeedRun {
  std::uint64_t seed = 0;
  std::string dataset_sha256;
  std::vector<Trace> traces;  // requested methods, in config order
};

struct ExperimentResult {
  std::vector<MetricsRecord> rows;
  std::vector<SeedRun> runs;
};

std::vector<ObjectPtr> load_objects(const ExperimentConfig& config, std::uint64_t seed);
ExperimentResult run_experiment(const ExperimentConfig& config);

// Cartesian product of axis values applied over `base`, in axis order with
// the last axis varying fastest.
std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base,
                                           const std::vector<std::pair<std::string, std::vector<std::string>>>& axes);

void write_csv_header(std::ostream& out);
void write_csv_row(std::ostream& out, const MetricsRecord& row);
void write_csv(std::ostream& out, const std::vector<MetricsRecord>& rows);

// One JSON object per slot. `point` numbers the sweep point.
void write_trace_jsonl(std::ostream& out, const Trace& trace, std::uint64_t seed, std::size_t point = 0);

struct LoadedTrace {
  std::size_t point = 0;
  std::uint64_t seed = 0;
  Trace trace;
};

// Groups records by (point, method, seed) in order of first appearance.
std::vector<LoadedTrace> read_trace_jsonl(std::istream& in);

std::string sha256_hex(std::string_view data);
std::string sha256_file(const std::string& path);

struct OutputPaths {
  std::string csv;
  std::string jsonl;
  std::string manifest;
};

// Runs every config, writes results.csv, traces.jsonl and manifest.json
// into `dir` and returns the paths.
OutputPaths run_to_directory(const std::vector<ExperimentConfig>& configs, const std::string& dir);

std::vector<std::string> split_list(std::string_view text);

}  // namespace ptd

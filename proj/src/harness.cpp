#include "ptd/harness.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include "json.hpp"
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace ptd {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw ConfigError("config key '" + std::string(key) + "': cannot parse '" + std::string(text) + "'");
  return value;
}

const std::vector<std::string> kAllMethods{"ptdmus", "ptdsky", "ptdbf"};

}  // namespace

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    const auto pos = text.find(',');
    const auto item = trim(text.substr(0, pos));
    if (!item.empty()) out.emplace_back(item);
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  return out;
}

void ExperimentConfig::validate() const {
  generator(seeds.empty() ? 0 : seeds.front()).validate();
  protocol().validate();
  if (seeds.empty()) throw ConfigError("at least one seed is required");
  if (methods.empty()) throw ConfigError("at least one method is required");
  for (const auto& m : methods) {
    if (std::find(kAllMethods.begin(), kAllMethods.end(), m) == kAllMethods.end())
      throw ConfigError("unknown method '" + m + "'");
  }
}

void ExperimentConfig::set(std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "u") u = parse_number<std::size_t>(key, value);
  else if (key == "n") n = parse_number<std::size_t>(key, value);
  else if (key == "d") d = parse_number<std::size_t>(key, value);
  else if (key == "m") m = parse_number<std::size_t>(key, value);
  else if (key == "swj") swj = parse_number<std::size_t>(key, value);
  else if (key == "rdeg") rdeg = parse_number<std::size_t>(key, value);
  else if (key == "delta") delta = parse_number<std::size_t>(key, value);
  else if (key == "k") k = parse_number<std::size_t>(key, value);
  else if (key == "margin") margin = parse_number<double>(key, value);
  else if (key == "distribution") distribution = std::string(value);
  else if (key == "dataset") dataset = std::string(value);
  else if (key == "seed") {
    seeds.clear();
    for (const auto& s : split_list(value)) seeds.push_back(parse_number<std::uint64_t>(key, s));
  } else if (key == "method") {
    methods.clear();
    for (const auto& s : split_list(value)) {
      if (s == "all") {
        methods = kAllMethods;
        break;
      }
      methods.push_back(s);
    }
  } else if (key == "mct") {
    if (value == "on") force_rescore = false;
    else if (value == "forced") force_rescore = true;
    else throw ConfigError("config key 'mct' must be 'on' or 'forced'");
  } else {
    throw ConfigError("unknown config key '" + std::string(key) + "'");
  }
}

ProtocolParams ExperimentConfig::protocol() const {
  ProtocolParams p;
  p.m = m;
  p.window = swj;
  p.degree = rdeg;
  p.delta = delta;
  p.k = k;
  p.instances = n;
  p.force_rescore = force_rescore;
  return p;
}

GeneratorConfig ExperimentConfig::generator(std::uint64_t seed) const {
  GeneratorConfig g;
  g.count = u;
  g.instances = n;
  g.dim = d;
  g.margin = margin;
  g.distribution = distribution;
  g.seed = seed;
  return g;
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "u=" << u << "\nn=" << n << "\nd=" << d << "\nm=" << m << "\nswj=" << swj << "\nrdeg=" << rdeg
      << "\ndelta=" << delta << "\nk=" << k << "\nmargin=" << format_real(margin) << "\ndistribution=" << distribution
      << "\nmethod=";
  for (std::size_t i = 0; i < methods.size(); ++i) out << (i ? "," : "") << methods[i];
  out << "\nseed=";
  for (std::size_t i = 0; i < seeds.size(); ++i) out << (i ? "," : "") << seeds[i];
  out << "\nmct=" << (force_rescore ? "forced" : "on") << "\ndataset=" << dataset << "\n";
  return out.str();
}

ExperimentConfig parse_config(std::istream& in, ExperimentConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    base.set(trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config_file(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in, std::move(base));
}

std::size_t monitoring_period(const ExperimentConfig& config) {
  if (config.m < 1) throw ConfigError("m must be at least 1");
  const std::size_t share = (config.u + config.m - 1) / config.m;
  return monitoring_period(share, config.swj);
}

// ---------------------------------------------------------------------------
// Metrics

PrecisionRecall precision_recall(const Trace& baseline, const Trace& compared) {
  if (baseline.slots.size() != compared.slots.size())
    throw ComparisonError("traces cover " + std::to_string(baseline.slots.size()) + " and " +
                          std::to_string(compared.slots.size()) + " slots");
  if (baseline.slots.empty()) throw ComparisonError("traces are empty");
  double p = 0.0, r = 0.0;
  for (std::size_t t = 0; t < baseline.slots.size(); ++t) {
    const auto& base = baseline.slots[t].ptd;
    const auto& cmp = compared.slots[t].ptd;
    const std::unordered_set<ObjectId> base_set(base.begin(), base.end());
    std::size_t hit = 0;
    for (ObjectId id : std::unordered_set<ObjectId>(cmp.begin(), cmp.end())) hit += base_set.count(id);
    const bool both_empty = base.empty() && cmp.empty();
    p += cmp.empty() ? (both_empty ? 100.0 : 0.0) : 100.0 * static_cast<double>(hit) / static_cast<double>(cmp.size());
    r += base.empty() ? (both_empty ? 100.0 : 0.0)
                      : 100.0 * static_cast<double>(hit) / static_cast<double>(base_set.size());
  }
  const double slots = static_cast<double>(baseline.slots.size());
  return {p / slots, r / slots};
}

CostBreakdown cost_breakdown(const Trace& trace) {
  CostBreakdown out;
  for (const auto& slot : trace.slots) {
    const std::size_t c = slot.cost();
    (slot.slot == 0 ? out.initial : out.update) += c;
    for (const auto& msg : slot.messages) out.by_kind[std::string(to_string(msg.kind))] += msg.cost();
  }
  out.total = out.initial + out.update;
  if (!trace.slots.empty()) out.average = static_cast<double>(out.total) / static_cast<double>(trace.slots.size());
  return out;
}

std::size_t count_early_mct(const Trace& baseline, Trace& trace) {
  if (baseline.slots.size() != trace.slots.size())
    throw ComparisonError("early-mct count needs traces of equal length");
  std::size_t total = 0;
  for (std::size_t t = 0; t < trace.slots.size(); ++t) {
    const auto& base = baseline.slots[t].ptd;
    const std::unordered_set<ObjectId> base_set(base.begin(), base.end());
    std::size_t early = 0;
    for (ObjectId id : trace.slots[t].deferred) early += base_set.count(id);
    trace.slots[t].early_mct_entries = early;
    total += early;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Experiments

std::vector<ObjectPtr> load_objects(const ExperimentConfig& config, std::uint64_t seed) {
  if (!config.dataset.empty()) return read_dataset_file(config.dataset);
  return assign_streams(generate(config.generator(seed)), config.m);
}

namespace {

Trace run_method(const std::string& method, const ProtocolParams& params, const StreamSet& streams) {
  if (method == "ptdmus") return run_ptdmus(params, streams);
  if (method == "ptdsky") return run_ptdsky(params, streams);
  if (method == "ptdbf") return run_ptdbf(params, streams);
  throw ConfigError("unknown method '" + method + "'");
}

double slot_mean(const Trace& trace, auto field) {
  if (trace.slots.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : trace.slots) total += static_cast<double>(field(s));
  return total / static_cast<double>(trace.slots.size());
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const ProtocolParams params = config.protocol();
  ExperimentResult result;
  for (std::uint64_t seed : config.seeds) {
    const auto objects = load_objects(config, seed);
    std::ostringstream text;
    write_dataset(text, objects);
    const auto streams = group_by_stream(objects, config.m);

    SeedRun run;
    run.seed = seed;
    run.dataset_sha256 = sha256_hex(text.str());
    const Trace baseline = run_ptdbf(params, streams);
    for (const auto& method : config.methods) {
      const auto start = std::chrono::steady_clock::now();
      Trace trace = method == "ptdbf" ? baseline : run_method(method, params, streams);
      const auto stop = std::chrono::steady_clock::now();

      MetricsRecord row;
      row.config = config;
      row.config.seeds = {seed};
      row.method = method;
      row.seed = seed;
      const auto pr = precision_recall(baseline, trace);
      row.precision = pr.precision;
      row.recall = pr.recall;
      row.early_mct_count = count_early_mct(baseline, trace);
      row.cost_avg = cost_breakdown(trace).average;
      row.checks_avg = slot_mean(trace, [](const SlotRecord& s) { return s.total_checks(); });
      row.cs_size_avg = slot_mean(trace, [](const SlotRecord& s) { return s.cs_size; });
      row.wall_seconds = std::chrono::duration<double>(stop - start).count();
      result.rows.push_back(std::move(row));
      run.traces.push_back(std::move(trace));
    }
    result.runs.push_back(std::move(run));
  }
  return result;
}

std::vector<ExperimentConfig> expand_sweep(const ExperimentConfig& base,
                                           const std::vector<std::pair<std::string, std::vector<std::string>>>& axes) {
  std::vector<ExperimentConfig> points{base};
  for (const auto& [key, values] : axes) {
    if (values.empty()) throw ConfigError("sweep axis '" + key + "' has no values");
    std::vector<ExperimentConfig> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        ExperimentConfig c = p;
        c.set(key, v);
        next.push_back(std::move(c));
      }
    }
    points = std::move(next);
  }
  for (const auto& p : points) p.validate();
  return points;
}

// ---------------------------------------------------------------------------
// Output

void write_csv_header(std::ostream& out) {
  out << "u,n,d,m,swj,rdeg,delta,k,margin,method,seed,precision,recall,cost_avg_objects,checks_avg,cs_size_avg,"
         "early_mct_count\n";
}

void write_csv_row(std::ostream& out, const MetricsRecord& r) {
  const auto& c = r.config;
  out << c.u << ',' << c.n << ',' << c.d << ',' << c.m << ',' << c.swj << ',' << c.rdeg << ',' << c.delta << ','
      << c.k << ',' << format_real(c.margin) << ',' << r.method << ',' << r.seed << ',' << format_real(r.precision)
      << ',' << format_real(r.recall) << ',' << format_real(r.cost_avg) << ',' << format_real(r.checks_avg) << ','
      << format_real(r.cs_size_avg) << ',' << r.early_mct_count << '\n';
}

void write_csv(std::ostream& out, const std::vector<MetricsRecord>& rows) {
  write_csv_header(out);
  for (const auto& r : rows) write_csv_row(out, r);
}

void write_trace_jsonl(std::ostream& out, const Trace& trace, std::uint64_t seed, std::size_t point) {
  for (const auto& s : trace.slots) {
    ordered_json j;
    j["point"] = point;
    j["method"] = trace.method;
    j["seed"] = seed;
    j["slot"] = s.slot;
    j["time"] = s.time;
    j["ptd"] = s.ptd;
    auto& msgs = j["messages"] = ordered_json::array();
    for (const auto& m : s.messages) {
      msgs.push_back({{"kind", std::string(to_string(m.kind))},
                      {"from", m.from},
                      {"entries", m.entries},
                      {"recipients", m.recipients}});
    }
    auto& by_kind = j["cost_by_kind"] = ordered_json::object();
    for (std::size_t i = 0; i < kMessageKindCount; ++i) {
      const auto kind = static_cast<MessageKind>(i);
      by_kind[std::string(to_string(kind))] = s.cost_of(kind);
    }
    auto& checks = j["checks"] = ordered_json::object();
    for (const auto& [node, c] : s.checks) checks[node] = c;
    j["cs_size"] = s.cs_size;
    j["tks_union_size"] = s.tks_union_size;
    j["ct_size"] = s.ct_size;
    j["rescored"] = s.rescored;
    j["scored_objects"] = s.scored_objects;
    j["deferred"] = s.deferred;
    j["early_mct_entries"] = s.early_mct_entries;
    out << j.dump() << '\n';
  }
}

std::vector<LoadedTrace> read_trace_jsonl(std::istream& in) {
  std::vector<LoadedTrace> out;
  std::map<std::tuple<std::size_t, std::string, std::uint64_t>, std::size_t> where;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    try {
      const auto j = ordered_json::parse(line);
      const std::size_t point = j.value("point", std::size_t{0});
      const auto method = j.at("method").get<std::string>();
      const auto seed = j.at("seed").get<std::uint64_t>();
      const auto key = std::make_tuple(point, method, seed);
      auto it = where.find(key);
      if (it == where.end()) {
        it = where.emplace(key, out.size()).first;
        out.push_back({point, seed, Trace{method, {}}});
      }
      SlotRecord s;
      s.slot = j.at("slot").get<std::size_t>();
      s.time = j.at("time").get<TimeSlot>();
      s.ptd = j.at("ptd").get<std::vector<ObjectId>>();
      for (const auto& m : j.at("messages")) {
        s.messages.push_back({message_kind_from_string(m.at("kind").get<std::string>()), m.at("from").get<NodeId>(),
                              m.at("entries").get<std::size_t>(), m.at("recipients").get<std::size_t>()});
      }
      for (const auto& [node, c] : j.at("checks").items()) s.checks.emplace_back(node, c.get<std::uint64_t>());
      s.cs_size = j.at("cs_size").get<std::size_t>();
      s.tks_union_size = j.at("tks_union_size").get<std::size_t>();
      s.ct_size = j.at("ct_size").get<std::size_t>();
      s.rescored = j.at("rescored").get<std::size_t>();
      s.scored_objects = j.at("scored_objects").get<std::size_t>();
      s.deferred = j.at("deferred").get<std::vector<ObjectId>>();
      s.early_mct_entries = j.at("early_mct_entries").get<std::size_t>();
      auto& slots = out[it->second].trace.slots;
      if (s.slot != slots.size())
        throw FormatError("slot " + std::to_string(s.slot) + " out of order");
      slots.push_back(std::move(s));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError("trace line " + std::to_string(lineno) + ": " + e.what());
    } catch (const FormatError& e) {
      throw FormatError("trace line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  std::ostringstream out;
  out << std::hex << std::setfill('0');
  for (unsigned int i = 0; i < len; ++i) out << std::setw(2) << static_cast<int>(digest[i]);
  return out.str();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return sha256_hex(buf.str());
}

OutputPaths run_to_directory(const std::vector<ExperimentConfig>& configs, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  OutputPaths paths{(fs::path(dir) / "results.csv").string(), (fs::path(dir) / "traces.jsonl").string(),
                    (fs::path(dir) / "manifest.json").string()};
  std::ofstream csv(paths.csv, std::ios::binary);
  std::ofstream jsonl(paths.jsonl, std::ios::binary);
  if (!csv || !jsonl) throw Error("cannot write results into " + dir);
  write_csv_header(csv);

  ordered_json manifest;
  manifest["tool"] = "ptdmon";
  manifest["rng"] = "mt19937_64, 53-bit reals";
  auto& points = manifest["points"] = ordered_json::array();
  for (std::size_t p = 0; p < configs.size(); ++p) {
    const auto result = run_experiment(configs[p]);
    for (const auto& row : result.rows) write_csv_row(csv, row);
    ordered_json point;
    point["point"] = p;
    point["config"] = configs[p].canonical();
    point["config_sha256"] = sha256_hex(configs[p].canonical());
    if (!configs[p].dataset.empty()) point["dataset_file_sha256"] = sha256_file(configs[p].dataset);
    auto& datasets = point["datasets"] = ordered_json::array();
    for (const auto& run : result.runs) {
      datasets.push_back({{"seed", run.seed}, {"sha256", run.dataset_sha256}});
      for (const auto& trace : run.traces) write_trace_jsonl(jsonl, trace, run.seed, p);
    }
    auto& timing = point["wall_seconds"] = ordered_json::array();
    for (const auto& row : result.rows)
      timing.push_back({{"method", row.method}, {"seed", row.seed}, {"seconds", row.wall_seconds}});
    points.push_back(std::move(point));
  }
  csv.close();
  jsonl.close();
  manifest["outputs"] = {{"results.csv", sha256_file(paths.csv)}, {"traces.jsonl", sha256_file(paths.jsonl)}};
  std::ofstream(paths.manifest) << manifest.dump(2) << '\n';
  return paths;
}

}  // namespace ptd

// ptdmon: generate datasets and run the monitoring experiments.
#include <fstream>
#include <iostream>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "ptd/datagen.hpp"
#include "ptd/errors.hpp"
#include "ptd/harness.hpp"

namespace {

// One flag per experiment parameter; each overrides the config file.
struct Overrides {
  std::string config_file;
  std::map<std::string, std::string> values;

  void add(CLI::App* app) {
    app->add_option("--config", config_file, "key=value config file")->check(CLI::ExistingFile);
    for (const char* key : {"u", "n", "d", "m", "swj", "rdeg", "delta", "k", "margin", "seed", "method", "mct",
                            "dataset"}) {
      app->add_option_function<std::string>(
          std::string("--") + key, [this, key](const std::string& v) { values[key] = v; }, key);
    }
  }

  ptd::ExperimentConfig resolve() const {
    ptd::ExperimentConfig config;
    if (!config_file.empty()) config = ptd::load_config_file(config_file);
    for (const auto& [k, v] : values) config.set(k, v);
    return config;
  }
};

void print_rows(const std::string& csv_path) {
  std::ifstream in(csv_path);
  std::cout << in.rdbuf();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous probabilistic top-k dominating monitoring over uncertain streams"};
  app.require_subcommand(1);

  Overrides gen_over;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "write a synthetic dataset laid out over m streams");
  gen_over.add(gen);
  gen->add_option("-o,--out", gen_out, "dataset file")->required();

  Overrides run_over;
  std::string run_dir = "results";
  auto* run = app.add_subcommand("run", "run one configuration over its seeds");
  run_over.add(run);
  run->add_option("--out-dir", run_dir, "results directory");

  Overrides sweep_over;
  std::string sweep_dir = "results";
  std::vector<std::string> axes;
  auto* sweep = app.add_subcommand("sweep", "cartesian sweep over parameter axes");
  sweep_over.add(sweep);
  sweep->add_option("--axis", axes, "key=v1,v2,... (repeatable)")->required();
  sweep->add_option("--out-dir", sweep_dir, "results directory");

  std::string base_path, cmp_path, base_method = "PTDBF";
  auto* compare = app.add_subcommand("compare", "precision/recall between traces in JSON-lines files");
  compare->add_option("baseline", base_path, "trace file holding the baseline")->required()->check(CLI::ExistingFile);
  compare->add_option("compared", cmp_path, "trace file to compare")->required()->check(CLI::ExistingFile);
  compare->add_option("--baseline-method", base_method, "method name of the baseline traces");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const auto config = gen_over.resolve();
      config.validate();
      const auto objects = ptd::load_objects(config, config.seeds.front());
      ptd::write_dataset_file(gen_out, objects);
      std::cout << "wrote " << objects.size() << " objects to " << gen_out << "\n";
    } else if (*run) {
      const auto config = run_over.resolve();
      const auto paths = ptd::run_to_directory({config}, run_dir);
      print_rows(paths.csv);
    } else if (*sweep) {
      std::vector<std::pair<std::string, std::vector<std::string>>> parsed;
      for (const auto& a : axes) {
        const auto eq = a.find('=');
        if (eq == std::string::npos) throw ptd::ConfigError("sweep axis '" + a + "' must be key=v1,v2,...");
        parsed.emplace_back(a.substr(0, eq), ptd::split_list(a.substr(eq + 1)));
      }
      const auto points = ptd::expand_sweep(sweep_over.resolve(), parsed);
      const auto paths = ptd::run_to_directory(points, sweep_dir);
      print_rows(paths.csv);
    } else if (*compare) {
      std::ifstream bin(base_path), cin_(cmp_path);
      const auto base = ptd::read_trace_jsonl(bin);
      const auto cmp = ptd::read_trace_jsonl(cin_);
      std::cout << "point,seed,method,precision,recall\n";
      for (const auto& c : cmp) {
        const ptd::LoadedTrace* match = nullptr;
        for (const auto& b : base) {
          if (b.point == c.point && b.seed == c.seed && b.trace.method == base_method) match = &b;
        }
        if (!match) {
          std::cerr << "no " << base_method << " trace for point " << c.point << " seed " << c.seed << "\n";
          return 1;
        }
        const auto pr = ptd::precision_recall(match->trace, c.trace);
        std::cout << c.point << ',' << c.seed << ',' << c.trace.method << ',' << ptd::format_real(pr.precision) << ','
                  << ptd::format_real(pr.recall) << "\n";
      }
    }
  } catch (const ptd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

/*
 * Copyright 2026 The fairpen Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// fairpen command-line tool. Talks to the library only through fairpen.h.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairpen/fairpen.h"

namespace {

using Json = nlohmann::json;
namespace fs = std::filesystem;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool audit_reduction = false;
  std::optional<std::string> drop_column;
  std::optional<std::string> output_dir;
  std::optional<std::string> model_path;
  std::optional<double> threshold;
};

// Throws with the library's message when a call fails.
void Check(fp_status status, const std::string& context) {
  if (status == FP_OK) return;
  std::string msg = fp_last_error();
  throw CliError(context.empty() ? msg : context + ": " + msg);
}

// Owns a char* returned by the library.
class LibString {
 public:
  LibString() = default;
  ~LibString() { fp_string_free(ptr_); }
  LibString(const LibString&) = delete;
  LibString& operator=(const LibString&) = delete;
  char** out() { return &ptr_; }
  std::string str() const { return ptr_ ? std::string(ptr_) : std::string(); }

 private:
  char* ptr_ = nullptr;
};

template <typename T, void (*Free)(T*)>
class Handle {
 public:
  Handle() = default;
  ~Handle() { Free(ptr_); }
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Dataset = Handle<fp_dataset, fp_dataset_free>;
using Model = Handle<fp_model, fp_model_free>;
using Search = Handle<fp_search, fp_search_free>;
using Simulation = Handle<fp_simulation, fp_simulation_free>;

std::string ReadFile(const fs::path& path, const std::string& what) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError(what + ": cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  out.close();
  if (!out) throw CliError("cannot write '" + path.string() + "'");
}

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string Hex(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

Json Block(const Json& config, const char* name) {
  return config.contains(name) ? config.at(name) : Json(nullptr);
}

Json Effective(const char* block, const Json& j) {
  LibString out;
  const std::string text = j.dump();
  Check(fp_config_effective(block, j.is_null() ? nullptr : text.c_str(), out.out()), "");
  return Json::parse(out.str());
}

// Top-level keys accepted per command.
const std::set<std::string>& KnownKeys(const std::string& command) {
  static const std::set<std::string> fit = {"data", "solver", "threshold", "lambdas", "output_dir"};
  static const std::set<std::string> search = {"data", "solver", "search", "threshold",
                                               "output_dir"};
  static const std::set<std::string> simulate = {"simulation", "solver", "search", "threshold",
                                                 "output_dir"};
  static const std::set<std::string> evaluate = {"data", "model", "threshold", "output_dir"};
  if (command == "fit") return fit;
  if (command == "search") return search;
  if (command == "simulate") return simulate;
  return evaluate;
}

// Parses the run configuration, applies command-line overrides and fills in
// every default so the result fully determines the run.
Json BuildConfig(const std::string& command, const Options& opt) {
  Json raw;
  if (!opt.config_path.empty()) {
    try {
      raw = Json::parse(ReadFile(opt.config_path, "--config"));
    } catch (const nlohmann::json::parse_error& e) {
      throw CliError("--config: invalid JSON in '" + opt.config_path + "': " + e.what());
    }
  } else {
    raw = Json::object();
  }
  if (!raw.is_object()) throw CliError("config: expected a JSON object");
  const auto& known = KnownKeys(command);
  for (const auto& [k, v] : raw.items()) {
    if (!known.count(k)) {
      throw CliError("config key '" + k + "': not used by the '" + command + "' command");
    }
  }

  Json cfg = Json::object();
  double threshold = 0.5;
  if (raw.contains("threshold")) {
    if (!raw.at("threshold").is_number()) throw CliError("config key 'threshold': expected a number");
    threshold = raw.at("threshold").get<double>();
  }
  if (opt.threshold) threshold = *opt.threshold;
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw CliError("config key 'threshold': must lie in (0, 1)");
  }
  cfg["threshold"] = threshold;

  if (known.count("data")) {
    if (!raw.contains("data")) throw CliError("config key 'data': missing");
    Json data = raw.at("data");
    if (opt.drop_column && data.is_object() && data.contains("features") &&
        data.at("features").is_array()) {
      auto& features = data["features"];
      auto it = std::find(features.begin(), features.end(), Json(*opt.drop_column));
      if (it == features.end()) {
        throw CliError("--drop-column: '" + *opt.drop_column + "' is not in data.features");
      }
      features.erase(it);
    }
    cfg["data"] = Effective("data", data);
    const std::string path = cfg["data"]["path"].get<std::string>();
    if (!fs::exists(path)) {
      throw CliError("config key 'data.path': file '" + path + "' does not exist");
    }
  }
  if (known.count("solver")) cfg["solver"] = Effective("solver", Block(raw, "solver"));
  if (known.count("search")) {
    Json search = Block(raw, "search");
    if (opt.seed) {
      if (search.is_null()) search = Json::object();
      if (search.is_object()) search["seed"] = *opt.seed;
    }
    cfg["search"] = Effective("search", search);
  }
  if (known.count("simulation")) {
    Json sim = Block(raw, "simulation");
    if (sim.is_null() && (opt.seed || opt.drop_column)) sim = Json::object();
    if (sim.is_object()) {
      if (opt.seed) sim["seed"] = *opt.seed;
      if (opt.drop_column) sim["drop_column"] = *opt.drop_column;
    }
    cfg["simulation"] = Effective("simulation", sim);
  }
  if (command == "fit") {
    if (!raw.contains("lambdas")) throw CliError("config key 'lambdas': missing");
    const Json& lam = raw.at("lambdas");
    const auto& groups = cfg["data"]["groups"];
    Json values = Json::array();
    if (lam.is_array()) {
      if (lam.size() != groups.size()) {
        throw CliError("config key 'lambdas': expected " + std::to_string(groups.size()) +
                       " values, one per group");
      }
      values = lam;
    } else if (lam.is_object()) {
      for (const auto& [k, v] : lam.items()) {
        if (std::find(groups.begin(), groups.end(), Json(k)) == groups.end()) {
          throw CliError("config key 'lambdas." + k + "': not a configured group");
        }
      }
      for (const auto& g : groups) {
        const std::string name = g.get<std::string>();
        if (!lam.contains(name)) throw CliError("config key 'lambdas." + name + "': missing");
        values.push_back(lam.at(name));
      }
    } else {
      throw CliError("config key 'lambdas': expected an array or an object keyed by group");
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!values[i].is_number()) {
        throw CliError("config key 'lambdas': entry " + std::to_string(i) + " is not a number");
      }
    }
    cfg["lambdas"] = values;
  }
  if (command == "evaluate") {
    std::string model;
    if (raw.contains("model")) {
      if (!raw.at("model").is_string()) throw CliError("config key 'model': expected a path");
      model = raw.at("model").get<std::string>();
    }
    if (opt.model_path) model = *opt.model_path;
    if (model.empty()) throw CliError("config key 'model': missing (or pass --model)");
    if (!fs::exists(model)) throw CliError("config key 'model': file '" + model + "' does not exist");
    cfg["model"] = model;
  }

  std::string out_dir = "fairpen_out";
  if (raw.contains("output_dir")) {
    if (!raw.at("output_dir").is_string()) {
      throw CliError("config key 'output_dir': expected a path");
    }
    out_dir = raw.at("output_dir").get<std::string>();
  }
  if (opt.output_dir) out_dir = *opt.output_dir;
  cfg["output_dir"] = out_dir;
  return cfg;
}

void WriteManifest(const fs::path& dir, const std::string& command, const Json& cfg,
                   const Json& seed, const std::vector<std::string>& outputs) {
  Json reproducible = cfg;
  reproducible.erase("output_dir");
  const std::string canonical = reproducible.dump();
  Json manifest = {{"command", command},
                   {"version", fp_version()},
                   {"seed", seed},
                   {"config_hash", "fnv1a64:" + Hex(Fnv1a(canonical))},
                   {"config", reproducible},
                   {"outputs", outputs}};
  WriteFile(dir / "manifest.json", manifest.dump(2) + "\n");
}

fs::path PrepareOutputDir(const Json& cfg) {
  const fs::path dir = cfg.at("output_dir").get<std::string>();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw CliError("config key 'output_dir': cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

void LoadData(const Json& cfg, Dataset& d) {
  const std::string text = cfg.at("data").dump();
  Check(fp_dataset_load_csv(text.c_str(), d.out()), "data");
}

void WriteReport(const fp_model* m, const fp_dataset* d, const fs::path& json_path,
                 const fs::path& table_path) {
  LibString json, table;
  Check(fp_model_evaluate(m, d, json.out(), table.out()), "report");
  WriteFile(json_path, json.str());
  WriteFile(table_path, table.str());
}

int RunFit(const Json& cfg, const Options& opt) {
  Dataset d;
  LoadData(cfg, d);
  const auto lambdas = cfg.at("lambdas").get<std::vector<double>>();
  const std::string solver = cfg.at("solver").dump();
  Model m;
  Check(fp_fit_reduction(d.get(), lambdas.data(), lambdas.size(), solver.c_str(),
                         cfg.at("threshold").get<double>(), m.out()),
        "fit");
  const fs::path dir = PrepareOutputDir(cfg);
  std::vector<std::string> outputs = {"model.json", "report.json", "report.txt"};
  LibString model_json;
  Check(fp_model_to_json(m.get(), model_json.out()), "model");
  WriteFile(dir / "model.json", model_json.str());
  WriteReport(m.get(), d.get(), dir / "report.json", dir / "report.txt");
  if (opt.audit_reduction) {
    LibString audit;
    Check(fp_reduction_audit_csv(d.get(), lambdas.data(), lambdas.size(), audit.out()),
          "--audit-reduction");
    WriteFile(dir / "reduction_audit.csv", audit.str());
    outputs.push_back("reduction_audit.csv");
  }
  WriteManifest(dir, "fit", cfg, nullptr, outputs);
  std::cout << ReadFile(dir / "report.txt", "report");
  return 0;
}

int RunSearch(const Json& cfg, const Options& opt) {
  Dataset d;
  LoadData(cfg, d);
  const std::string search = cfg.at("search").dump();
  const std::string solver = cfg.at("solver").dump();
  Search s;
  Check(fp_search_run(d.get(), search.c_str(), solver.c_str(), cfg.at("threshold").get<double>(),
                      opt.threads, s.out()),
        "search");
  const fs::path dir = PrepareOutputDir(cfg);
  fs::create_directories(dir / "models");
  fs::create_directories(dir / "reports");
  std::vector<std::string> outputs = {"search_result.json"};
  LibString result;
  Check(fp_search_to_json(s.get(), result.out()), "search");
  WriteFile(dir / "search_result.json", result.str());

  auto emit = [&](const std::string& name, const fp_model* m) {
    LibString json;
    Check(fp_model_to_json(m, json.out()), "model");
    WriteFile(dir / "models" / (name + ".json"), json.str());
    WriteReport(m, d.get(), dir / "reports" / (name + ".json"),
                dir / "reports" / (name + ".txt"));
    outputs.push_back("models/" + name + ".json");
    outputs.push_back("reports/" + name + ".json");
    outputs.push_back("reports/" + name + ".txt");
  };
  Model baseline;
  Check(fp_search_baseline_model(s.get(), baseline.out()), "search");
  emit("baseline", baseline.get());
  const std::size_t variants = fp_search_variant_count(s.get());
  for (std::size_t v = 0; v < variants; ++v) {
    LibString name;
    Check(fp_search_variant_name(s.get(), v, name.out()), "search");
    Model m;
    Check(fp_search_variant_model(s.get(), v, m.out()), "search");
    emit(name.str(), m.get());
  }
  WriteManifest(dir, "search", cfg, cfg.at("search").at("seed"), outputs);
  std::cout << "search finished: " << variants << " score variants written to " << dir.string()
            << "\n";
  return 0;
}

int RunSimulate(const Json& cfg, const Options& opt) {
  const std::string sim = cfg.at("simulation").dump();
  const std::string search = cfg.at("search").dump();
  const std::string solver = cfg.at("solver").dump();
  Simulation s;
  Check(fp_simulation_run(sim.c_str(), search.c_str(), solver.c_str(),
                          cfg.at("threshold").get<double>(), opt.threads, s.out()),
        "simulate");
  const fs::path dir = PrepareOutputDir(cfg);
  std::string lines;
  const std::size_t reps = fp_simulation_replication_count(s.get());
  for (std::size_t r = 0; r < reps; ++r) {
    LibString line;
    Check(fp_simulation_replication_json(s.get(), r, line.out()), "simulate");
    lines += line.str();
    lines += '\n';
  }
  WriteFile(dir / "replications.jsonl", lines);
  LibString summary, frontier;
  Check(fp_simulation_summary_csv(s.get(), summary.out()), "simulate");
  Check(fp_simulation_frontier_csv(s.get(), frontier.out()), "simulate");
  WriteFile(dir / "summary.csv", summary.str());
  WriteFile(dir / "frontier.csv", frontier.str());
  WriteManifest(dir, "simulate", cfg, cfg.at("simulation").at("seed"),
                {"replications.jsonl", "summary.csv", "frontier.csv"});
  std::cout << "simulation finished: " << reps << " replications written to " << dir.string()
            << "\n";
  return 0;
}

int RunEvaluate(const Json& cfg, const Options&) {
  Dataset d;
  LoadData(cfg, d);
  const std::string model_path = cfg.at("model").get<std::string>();
  Model m;
  Check(fp_model_from_json(ReadFile(model_path, "model").c_str(), m.out()),
        "model '" + model_path + "'");
  Check(fp_model_set_threshold(m.get(), cfg.at("threshold").get<double>()), "threshold");
  if (fp_model_num_features(m.get()) != fp_dataset_cols(d.get())) {
    throw CliError("model '" + model_path + "' has " +
                   std::to_string(fp_model_num_features(m.get())) + " features but the data has " +
                   std::to_string(fp_dataset_cols(d.get())));
  }
  const fs::path dir = PrepareOutputDir(cfg);
  WriteReport(m.get(), d.get(), dir / "report.json", dir / "report.txt");
  WriteManifest(dir, "evaluate", cfg, nullptr, {"report.json", "report.txt"});
  std::cout << ReadFile(dir / "report.txt", "report");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Penalized fair logistic regression for overlapping groups"};
  app.set_version_flag("--version", std::string(fp_version()));
  app.require_subcommand(1);

  Options opt;
  std::uint64_t seed = 0;
  std::string drop_column, output_dir, model_path;
  double threshold = 0.5;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Run configuration (JSON)")->check(CLI::ExistingFile);
    sub->add_option("--threads", opt.threads, "Maximum worker threads")
        ->check(CLI::PositiveNumber);
    sub->add_option("-o,--output-dir", output_dir, "Output directory (overrides output_dir)");
    sub->add_option("--threshold", threshold, "Decision threshold (overrides threshold)");
  };
  CLI::App* fit = app.add_subcommand("fit", "Fit one model with explicit penalty weights");
  CLI::App* search = app.add_subcommand("search", "Random search over penalty weights");
  CLI::App* simulate = app.add_subcommand("simulate", "Run the simulation study");
  CLI::App* evaluate = app.add_subcommand("evaluate", "Report a saved model on a dataset");
  for (CLI::App* sub : {fit, search, simulate, evaluate}) add_common(sub);
  for (CLI::App* sub : {search, simulate}) {
    sub->add_option("--seed", seed, "Random seed (overrides the config)");
  }
  for (CLI::App* sub : {fit, search, simulate, evaluate}) {
    sub->add_option("--drop-column", drop_column, "Exclude a feature column");
  }
  fit->add_flag("--audit-reduction", opt.audit_reduction,
                "Also write the weighted-classification problem as CSV");
  evaluate->add_option("--model", model_path, "Model JSON (overrides model)");

  CLI11_PARSE(app, argc, argv);

  CLI::App* chosen = app.get_subcommands().front();
  const std::string command = chosen->get_name();
  // Subcommands register different flags; an unregistered one counts as unset.
  auto given = [chosen](const std::string& name) {
    const CLI::Option* o = chosen->get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
  };
  if (given("--seed")) opt.seed = seed;
  if (given("--drop-column")) opt.drop_column = drop_column;
  if (given("--output-dir")) opt.output_dir = output_dir;
  if (given("--threshold")) opt.threshold = threshold;
  if (given("--model")) opt.model_path = model_path;

  try {
    const Json cfg = BuildConfig(command, opt);
    std::cout << "fairpen " << fp_version() << " " << command << "\neffective config:\n"
              << cfg.dump(2) << "\n";
    std::cout.flush();
    if (command == "fit") return RunFit(cfg, opt);
    if (command == "search") return RunSearch(cfg, opt);
    if (command == "simulate") return RunSimulate(cfg, opt);
    return RunEvaluate(cfg, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

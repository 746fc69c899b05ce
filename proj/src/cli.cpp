// Copyright 2026 The AutoSynth Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "autosynth/cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "autosynth/datasetgen.hpp"
#include "autosynth/mesh_io.hpp"
#include "autosynth/parallel.hpp"

namespace autosynth {

namespace fs = std::filesystem;
using nlohmann::json;

// --- Run configuration -----------------------------------------------------

namespace {

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

std::size_t line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find('"' + key + '"');
  return pos == std::string::npos ? 0 : line_of_offset(text, pos);
}

using FieldSetter = std::function<void(RunConfig&, const json&)>;

FieldSetter count_field(std::size_t RunConfig::*field) {
  return [field](RunConfig& c, const json& v) {
    if (!v.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
    c.*field = v.get<std::size_t>();
  };
}

const std::vector<std::pair<std::string, FieldSetter>>& config_fields() {
  static const std::vector<std::pair<std::string, FieldSetter>> fields = {
      {"seed",
       [](RunConfig& c, const json& v) {
         if (!v.is_number_unsigned()) throw std::invalid_argument("expected a non-negative integer");
         c.seed = v.get<std::uint64_t>();
       }},
      {"population", count_field(&RunConfig::population)},
      {"trials", count_field(&RunConfig::trials)},
      {"objects", count_field(&RunConfig::objects)},
      {"points", count_field(&RunConfig::points)},
      {"n_aug", count_field(&RunConfig::n_aug)},
      {"iterations", count_field(&RunConfig::iterations)},
      {"batch", count_field(&RunConfig::batch)},
      {"latent", count_field(&RunConfig::latent)},
      {"baseline_count", count_field(&RunConfig::baseline_count)},
      {"learning_rate",
       [](RunConfig& c, const json& v) {
         if (!v.is_number()) throw std::invalid_argument("expected a number");
         c.learning_rate = v.get<double>();
       }},
      {"precision",
       [](RunConfig& c, const json& v) {
         if (!v.is_string()) throw std::invalid_argument("expected a string");
         c.precision = v.get<std::string>();
       }},
      {"target",
       [](RunConfig& c, const json& v) {
         if (!v.is_string()) throw std::invalid_argument("expected a string");
         c.target = v.get<std::string>();
       }},
      {"output",
       [](RunConfig& c, const json& v) {
         if (!v.is_string()) throw std::invalid_argument("expected a string");
         c.output = v.get<std::string>();
       }},
      {"threads",
       [](RunConfig& c, const json& v) {
         if (!v.is_number_integer()) throw std::invalid_argument("expected an integer");
         c.threads = v.get<int>();
       }},
  };
  return fields;
}

}  // namespace

void RunConfig::validate() const {
  const auto need = [](bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
  };
  need(population >= 2, "population must be at least 2");
  need(trials >= 1, "trials must be at least 1");
  need(objects >= 1, "objects must be at least 1");
  need(points >= 8, "points must be at least 8");
  need(n_aug >= 1, "n_aug must be at least 1");
  need(iterations >= 1, "iterations must be at least 1");
  need(batch >= 1, "batch must be at least 1");
  need(latent >= 1, "latent must be at least 1");
  need(baseline_count >= 1, "baseline_count must be at least 1");
  need(learning_rate > 0 && std::isfinite(learning_rate), "learning_rate must be positive");
  need(precision == "float32" || precision == "float64",
       "precision must be float32 or float64, got '" + precision + "'");
  need(threads >= 0, "threads must be non-negative");
  need(!output.empty(), "output directory must not be empty");
  if (target != kDemoTarget) {
    need(fs::exists(target), "target mesh '" + target + "' does not exist");
  }
}

SearchConfig RunConfig::search() const { return {population, trials, seed}; }

EvaluatorConfig RunConfig::evaluator() const {
  EvaluatorConfig e;
  e.objects = objects;
  e.points = points;
  e.seed = seed;
  e.threads = threads;
  e.train.batch = batch;
  e.train.learning_rate = learning_rate;
  e.train.iterations = iterations;
  e.train.latent = latent;
  e.train.precision = precision == "float64" ? TrainPrecision::kFloat64 : TrainPrecision::kFloat32;
  return e;
}

RunConfig parse_run_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ":" + std::to_string(line_of_offset(text, e.byte)) +
                      ": malformed JSON: " + e.what());
  }
  if (!j.is_object()) throw ConfigError(origin + ":1: config must be a JSON object");
  RunConfig config;
  const auto& fields = config_fields();
  for (const auto& [key, value] : j.items()) {
    const auto where = origin + ":" + std::to_string(line_of_key(text, key)) + ": ";
    const auto it = std::find_if(fields.begin(), fields.end(),
                                 [&](const auto& f) { return f.first == key; });
    if (it == fields.end()) throw ConfigError(where + "unknown key '" + key + "'");
    try {
      it->second(config, value);
    } catch (const std::exception& e) {
      throw ConfigError(where + "key '" + key + "': " + e.what());
    }
  }
  return config;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str(), path.string());
}

std::string run_config_json(const RunConfig& c) {
  json j = {{"seed", c.seed},
            {"population", c.population},
            {"trials", c.trials},
            {"objects", c.objects},
            {"points", c.points},
            {"n_aug", c.n_aug},
            {"iterations", c.iterations},
            {"batch", c.batch},
            {"learning_rate", c.learning_rate},
            {"latent", c.latent},
            {"precision", c.precision},
            {"baseline_count", c.baseline_count},
            {"target", c.target},
            {"output", c.output.string()},
            {"threads", c.threads}};
  return j.dump(2);
}

Dataset load_target(const RunConfig& config) {
  const TriangleMesh mesh = config.target == kDemoTarget ? demo_target_mesh() : read_mesh(config.target);
  Dataset target = build_target_dataset(mesh, config.n_aug, config.points,
                                        derive_seed(config.seed, "target"), {config.threads, false});
  target.name = "target";
  return target;
}

// --- Commands --------------------------------------------------------------

namespace {

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw IoError("write failed for '" + path.string() + "'");
}

std::string six_digits(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Options shared by search, eval and baseline. Flags are bound to a scratch
// RunConfig so --help shows the defaults; only flags actually given are
// copied over the config file.
struct RunOptions {
  RunConfig flags;
  std::string config_path;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> overrides;

  template <class T>
  void bind(CLI::App* app, const std::string& name, T RunConfig::*field, const std::string& help) {
    CLI::Option* opt = app->add_option(name, flags.*field, help)->capture_default_str();
    overrides.emplace_back(opt, [this, field](RunConfig& c) { c.*field = flags.*field; });
  }

  void add(CLI::App* app, bool with_search) {
    app->add_option("--config", config_path, "JSON run config; flags given here override it");
    bind(app, "--seed", &RunConfig::seed, "Root seed for every random choice");
    if (with_search) {
      bind(app, "--population", &RunConfig::population, "Policies kept in the pool");
      bind(app, "--trials", &RunConfig::trials, "Mutation trials after the initial population");
    }
    bind(app, "--objects", &RunConfig::objects, "Objects generated per evaluated policy");
    bind(app, "--points", &RunConfig::points, "Points per cloud");
    bind(app, "--n-aug", &RunConfig::n_aug, "Rotated copies of the target mesh");
    bind(app, "--iterations", &RunConfig::iterations, "Surrogate training iterations");
    bind(app, "--batch", &RunConfig::batch, "Surrogate batch size");
    bind(app, "--lr", &RunConfig::learning_rate, "Adam learning rate");
    bind(app, "--latent", &RunConfig::latent, "Surrogate latent width");
    overrides.emplace_back(
        app->add_option("--precision", flags.precision, "Training arithmetic")
            ->check(CLI::IsMember({"float32", "float64"}))
            ->capture_default_str(),
        [this](RunConfig& c) { c.precision = flags.precision; });
    bind(app, "--target", &RunConfig::target, "Target mesh (OBJ/PLY) or builtin:demo");
    bind(app, "--output", &RunConfig::output, "Directory receiving every output file");
    bind(app, "--threads", &RunConfig::threads,
         "Worker threads; 0 uses AUTOSYNTH_THREADS, else the hardware count");
  }

  RunConfig resolve() const {
    RunConfig c = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    for (const auto& [opt, apply] : overrides) {
      if (opt->count() > 0) apply(c);
    }
    c.validate();
    c.threads = resolve_threads(c.threads);
    return c;
  }
};

json policy_labels(const Policy& p) {
  json a = json::array();
  for (auto l : p.labels) a.push_back(static_cast<int>(l));
  return a;
}

Policy policy_argument(const std::string& arg) {
  if (arg == "full-range") return full_range_policy();
  return read_policy(arg);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_search(const RunOptions& opts, bool resume, bool quiet, Streams io) {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = opts.resolve();
  fs::create_directories(cfg.output);
  write_file(cfg.output / "config.json", run_config_json(cfg) + "\n");

  const auto target = std::make_shared<const Dataset>(load_target(cfg));
  const EvaluatorConfig ecfg = cfg.evaluator();
  EvaluationCache cache(
      [&](const Policy& p) { return evaluate_policy(ecfg, *target, p).score; });
  std::size_t initial_done = 0;
  const Evaluator evaluator = [&](const Policy& p) {
    const double score = cache(p);
    if (!quiet && initial_done < cfg.population) {
      io.err << "initial " << ++initial_done << "/" << cfg.population << " " << p.digits()
             << " " << six_digits(score) << std::endl;
    }
    return score;
  };

  const SearchConfig scfg = cfg.search();
  const fs::path checkpoint = cfg.output / "checkpoint.json";
  const fs::path history_path = cfg.output / "history.csv";
  SearchState state;
  if (resume && fs::exists(checkpoint)) {
    state = load_checkpoint(checkpoint);
    if (state.seed != cfg.seed || state.population.size() != cfg.population) {
      throw ConfigError("checkpoint '" + checkpoint.string() +
                        "' was written with a different seed or population");
    }
    initial_done = cfg.population;
    if (!quiet) io.err << "resuming after trial " << state.trials_done << std::endl;
  } else {
    state = init_population(scfg, evaluator);
    write_population_csv(state.population, cfg.output / "initial_population.csv");
    save_checkpoint(state, checkpoint);
  }

  const TrialCallback on_trial = [&](const SearchState& s, const StepReport& r) {
    save_checkpoint(s, checkpoint);
    write_history_csv(s.history, history_path);
    if (!quiet) {
      io.err << "trial " << s.trials_done << "/" << cfg.trials << " " << s.history.back().child.digits()
             << " " << six_digits(r.child_score) << " best " << six_digits(s.best.score) << std::endl;
    }
  };
  try {
    continue_search(state, scfg, evaluator, on_trial);
  } catch (...) {
    write_history_csv(state.history, history_path);
    throw;
  }
  write_history_csv(state.history, history_path);
  write_policy(state.best.policy, cfg.output / "best_policy.json");

  json summary = {{"best_policy", policy_labels(state.best.policy)},
                  {"best_score", state.best.score},
                  {"best_trial", state.best.trial},
                  {"trials", state.trials_done},
                  {"population", cfg.population},
                  {"seed", cfg.seed},
                  {"evaluations", cache.evaluations()},
                  {"cache_hits", cache.hits()},
                  {"wall_time_seconds", seconds_since(t0)}};
  write_file(cfg.output / "summary.json", summary.dump(2) + "\n");
  io.out << "best " << state.best.policy.digits() << " " << six_digits(state.best.score)
         << " (trial " << state.best.trial << ")\n";
  return kExitOk;
}

struct GenOptions {
  std::string policy;
  std::size_t objects = 100;
  std::size_t points = kDefaultPointsPerCloud;
  std::uint64_t seed = 0;
  std::string out = "dataset";
  std::string mesh_format = "obj";
  std::string cloud_format = "ply";
  bool pairs = false;
  int threads = 0;
};

int cmd_gen(const GenOptions& o, Streams io) {
  if (o.objects < 1) throw ConfigError("objects must be at least 1");
  if (o.points < 8) throw ConfigError("points must be at least 8");
  const Policy policy = policy_argument(o.policy);
  const int threads = resolve_threads(o.threads);
  const Dataset data = generate_dataset(policy, o.objects, o.points, o.seed, {threads, true});
  const fs::path manifest =
      export_dataset(data, o.out, {"." + o.mesh_format, "." + o.cloud_format});
  if (o.pairs) {
    json gt = json::array();
    for (std::size_t i = 0; i < data.size(); ++i) {
      const RegistrationPair pair = render_pair(data.entries[i], derive_seed(o.seed, "pairs") + i);
      char name[32];
      std::snprintf(name, sizeof name, "pair_%05zu", i);
      write_cloud(pair.source, fs::path(o.out) / (std::string(name) + "_source.ply"));
      write_cloud(pair.target, fs::path(o.out) / (std::string(name) + "_target.ply"));
      json r = json::array();
      for (int row = 0; row < 3; ++row) {
        r.push_back({pair.rotation(row, 0), pair.rotation(row, 1), pair.rotation(row, 2)});
      }
      gt.push_back({{"name", name},
                    {"rotation", r},
                    {"translation", {pair.translation.x(), pair.translation.y(), pair.translation.z()}}});
    }
    write_file(fs::path(o.out) / "pairs.json", gt.dump(2) + "\n");
  }
  io.out << manifest.string() << "\n";
  return kExitOk;
}

int cmd_eval(const RunOptions& opts, const std::string& policy_arg, Streams io) {
  const RunConfig cfg = opts.resolve();
  const Policy policy = policy_argument(policy_arg);
  fs::create_directories(cfg.output);
  const Dataset target = load_target(cfg);
  const PolicyEvaluation ev = evaluate_policy(cfg.evaluator(), target, policy);
  json record = {{"policy", policy_labels(policy)},
                 {"score", ev.score},
                 {"generation_failed", ev.generation_failed},
                 {"policy_seed", ev.policy_seed},
                 {"final_train_loss", ev.final_train_loss},
                 {"seed", cfg.seed}};
  write_file(cfg.output / ("eval_" + policy.digits() + ".json"), record.dump(2) + "\n");
  io.out << six_digits(ev.score) << "\n";
  return kExitOk;
}

int cmd_baseline(const RunOptions& opts, const std::string& mode, Streams io) {
  const RunConfig cfg = opts.resolve();
  fs::create_directories(cfg.output);
  const Dataset target = load_target(cfg);
  const EvaluatorConfig ecfg = cfg.evaluator();

  std::vector<Policy> policies;
  if (mode == "full-range") {
    policies.push_back(full_range_policy());
  } else {
    Rng rng(derive_seed(cfg.seed, "baseline"));
    for (std::size_t i = 0; i < cfg.baseline_count; ++i) policies.push_back(random_policy(rng));
  }
  EvaluationCache cache([&](const Policy& p) { return evaluate_policy(ecfg, target, p).score; });
  std::vector<ScoredPolicy> scored;
  std::vector<double> scores;
  for (const Policy& p : policies) {
    const double s = cache(p);
    scored.push_back({p, s, 0});
    scores.push_back(s);
    io.out << p.digits() << " " << six_digits(s) << "\n";
  }
  write_population_csv(scored, cfg.output / ("baseline_" + mode + ".csv"));
  json summary = {{"mode", mode},
                  {"scores", scores},
                  {"min", quantile(scores, 0.0)},
                  {"median", quantile(scores, 0.5)},
                  {"seed", cfg.seed}};
  write_file(cfg.output / ("baseline_" + mode + ".json"), summary.dump(2) + "\n");
  if (mode == "random") {
    io.out << "min " << six_digits(quantile(scores, 0.0)) << "\n";
    io.out << "median " << six_digits(quantile(scores, 0.5)) << "\n";
  }
  return kExitOk;
}

int cmd_report(const std::string& history, std::string population, const std::string& out,
               Streams io) {
  const auto rows = read_history_csv(history);
  if (population.empty()) {
    const fs::path sibling = fs::path(history).parent_path() / "initial_population.csv";
    if (fs::exists(sibling)) population = sibling.string();
  }
  const std::vector<double> initial =
      population.empty() ? std::vector<double>{} : read_population_scores(population);
  const std::string csv = report_csv(build_report(initial, rows));
  if (out.empty()) {
    io.out << csv;
  } else {
    write_file(out, csv);
  }
  return kExitOk;
}

int exit_status(std::exception_ptr e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const EvaluationFailed& ex) {
    err << "error: " << ex.what() << "\n";
    if (ex.cause()) {
      std::ostringstream discard;
      return exit_status(ex.cause(), discard);
    }
    return 1;
  } catch (const NonFinite& ex) {
    err << "numeric failure: " << ex.what() << "\n";
    return kExitNumeric;
  } catch (const IoError& ex) {
    err << "I/O error: " << ex.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& ex) {
    err << "I/O error: " << ex.what() << "\n";
    return kExitIo;
  } catch (const ConfigError& ex) {
    err << "config error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    err << "internal error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Procedural shape synthesis and evolutionary search over generation policies",
               "autosynth"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "autosynth 0.1.0");
  Streams io{out, err};

  RunOptions search_opts, eval_opts, baseline_opts;
  bool resume = false, quiet = false;
  CLI::App* search = app.add_subcommand("search", "Evolve a generation policy against a target");
  search_opts.add(search, true);
  search->add_flag("--resume", resume, "Continue from <output>/checkpoint.json if present");
  search->add_flag("--quiet", quiet, "No per-trial progress on stderr");

  GenOptions gen_opts;
  CLI::App* gen = app.add_subcommand("gen", "Generate and export a dataset from a policy");
  gen->add_option("--policy", gen_opts.policy, "Policy JSON file, or full-range")->required();
  gen->add_option("--objects,-n", gen_opts.objects, "Objects to generate")->capture_default_str();
  gen->add_option("--points,-v", gen_opts.points, "Points per cloud")->capture_default_str();
  gen->add_option("--seed", gen_opts.seed, "Generation seed")->capture_default_str();
  gen->add_option("--out", gen_opts.out, "Output directory")->capture_default_str();
  gen->add_option("--mesh-format", gen_opts.mesh_format, "Mesh file format")
      ->check(CLI::IsMember({"obj", "ply"}))
      ->capture_default_str();
  gen->add_option("--cloud-format", gen_opts.cloud_format, "Cloud file format")
      ->check(CLI::IsMember({"ply", "xyz"}))
      ->capture_default_str();
  gen->add_flag("--pairs", gen_opts.pairs,
                "Also export a rendered source/target registration pair per object");
  gen->add_option("--threads", gen_opts.threads,
                  "Worker threads; 0 uses AUTOSYNTH_THREADS, else the hardware count")
      ->capture_default_str();

  std::string eval_policy;
  CLI::App* eval = app.add_subcommand("eval", "Score one policy against the target");
  eval->add_option("--policy", eval_policy, "Policy JSON file, or full-range")->required();
  eval_opts.add(eval, false);

  std::string baseline_mode = "random";
  CLI::App* baseline = app.add_subcommand("baseline", "Score the no-search baselines");
  baseline->add_option("--mode", baseline_mode, "random: best and median of N random policies; "
                                                "full-range: the all-maximum policy")
      ->check(CLI::IsMember({"random", "full-range"}))
      ->capture_default_str();
  baseline_opts.add(baseline, false);
  baseline_opts.bind(baseline, "--count", &RunConfig::baseline_count, "Random policies to score");

  std::string history, population, report_out;
  CLI::App* report = app.add_subcommand("report", "Turn a history CSV into a plot-ready series");
  report->add_option("--history", history, "History CSV written by search")->required();
  report->add_option("--population", population,
                     "Initial population CSV; defaults to initial_population.csv next to the history");
  report->add_option("--out", report_out, "Output CSV (stdout when omitted)");

  std::vector<const char*> argv;
  argv.push_back("autosynth");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (search->parsed()) return cmd_search(search_opts, resume, quiet, io);
    if (gen->parsed()) return cmd_gen(gen_opts, io);
    if (eval->parsed()) return cmd_eval(eval_opts, eval_policy, io);
    if (baseline->parsed()) return cmd_baseline(baseline_opts, baseline_mode, io);
    if (report->parsed()) return cmd_report(history, population, report_out, io);
  } catch (...) {
    return exit_status(std::current_exception(), err);
  }
  return kExitUsage;
}

int run_cli(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace autosynth

// Copyright 2026 The thermosched Authors
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

// Command-line front end. Every command writes its result to -o (stdout when
// absent or "-") and a run manifest next to it, or to stderr for stdout runs.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "thermosched/exact_search.hpp"
#include "thermosched/gantt.hpp"
#include "thermosched/instgen.hpp"
#include "thermosched/io.hpp"
#include "thermosched/methods.hpp"
#include "thermosched/power.hpp"
#include "thermosched/sweep.hpp"

namespace ts = thermosched;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

enum Exit : int {
  kOk = 0,
  kFailure = 1,
  kInfeasibleExit = 2,
  kUnknownExit = 3,
  kReplayMismatch = 4,
  kUsage = 64,
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

bool to_stdout(const std::string& path) { return path.empty() || path == "-"; }

void write_text(const std::string& path, const std::string& text) {
  if (to_stdout(path)) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

// Accepts a preset name or a platform JSON file.
ts::Platform load_platform(const std::string& spec) {
  const auto names = ts::preset_names();
  if (std::find(names.begin(), names.end(), spec) != names.end()) {
    return ts::platform_preset(spec);
  }
  json doc = ts::read_json_file(spec);
  if (doc.contains("platform")) return ts::platform_from_json(doc["platform"], "/platform");
  return ts::platform_from_json(doc);
}

// Accepts "preset:<name>" or a coefficients JSON file.
std::optional<ts::RegressionCoefficients> load_coefficients_flag(const std::string& spec) {
  if (spec.empty()) return std::nullopt;
  if (spec.rfind("preset:", 0) == 0) return ts::coefficients_preset(spec.substr(7));
  return ts::load_coefficients(spec);
}

std::vector<ts::Millis> parse_lengths(const std::string& text) {
  std::vector<ts::Millis> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoll(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("--window-lengths expects comma-separated integers, got '" + text + "'");
    }
  }
  return out;
}

std::vector<ts::Method> parse_methods(const std::vector<std::string>& names) {
  std::vector<ts::Method> out;
  for (const std::string& name : names) {
    auto m = ts::parse_method(name);
    if (!m) throw UsageError("unknown method '" + name + "'");
    out.push_back(*m);
  }
  return out;
}

int threads_cap() {
  const char* env = std::getenv("THERMOSCHED_THREADS");
  if (env == nullptr) return 1;
  try {
    return std::max(1, std::stoi(env));
  } catch (const std::exception&) {
    return 1;
  }
}

int exit_for(ts::SearchStatus status) {
  switch (status) {
    case ts::SearchStatus::kOptimal:
    case ts::SearchStatus::kFeasible:
    case ts::SearchStatus::kFeasibleTimeout:
      return kOk;
    case ts::SearchStatus::kInfeasible:
      return kInfeasibleExit;
    case ts::SearchStatus::kUnknownTimeout:
      return kUnknownExit;
  }
  return kFailure;
}

struct RunRecord {
  std::string command;
  std::vector<std::string> argv;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> inputs;
  std::string output;
  std::vector<std::string> extra_outputs;
};

class Cli {
 public:
  int run(std::vector<std::string> args);

 private:
  void add_generate(CLI::App& app);
  void add_import(CLI::App& app);
  void add_solve(CLI::App& app);
  void add_evaluate(CLI::App& app);
  void add_fit(CLI::App& app);
  void add_sweep(CLI::App& app);
  void add_export_gantt(CLI::App& app);
  void add_compare(CLI::App& app);
  void add_replay(CLI::App& app);

  std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed);
  void write_manifest(const CLI::App& sub, const std::string& started, int exit_code);

  int do_generate();
  int do_import();
  int do_solve();
  int do_evaluate();
  int do_fit();
  int do_sweep();
  int do_export_gantt();
  int do_compare();
  int do_replay();

  RunRecord record_;

  // Shared option storage; each subcommand binds the fields it uses.
  std::string output_;
  std::optional<std::uint64_t> seed_;
  std::string instance_path_;
  std::string assignment_path_;
  std::string platform_ = "imx8-mek";
  std::string kernels_;
  std::string coefficients_;
  std::string method_;
  std::vector<std::string> methods_;
  std::string model_ = "sm";
  std::string window_lengths_;
  std::string ga_config_;
  std::string trace_path_;
  std::string samples_path_;
  std::string characteristics_path_;
  std::string summary_path_;
  std::string format_ = "svg";
  std::string manifest_path_;
  std::int64_t time_limit_ms_ = 60'000;
  std::int64_t generations_ = 300;
  std::int64_t major_frame_ms_ = 0;
  int max_windows_ = 0;
  int n_ = 20;
  double kappa_ = 3.5;
  ts::Millis big_min_ = 40;
  ts::Millis big_max_ = 160;
  int big_cluster_ = 0;
  int reps_ = 1;
  std::vector<int> sizes_;
  bool temperature_ = false;
  bool check_ = false;
};

std::uint64_t Cli::resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) {
    record_.seed = *seed;
    return *seed;
  }
  std::random_device rd;
  const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  std::cerr << "seed: " << s << "\n";
  record_.seed = s;
  record_.argv.push_back("--seed");
  record_.argv.push_back(std::to_string(s));
  return s;
}

void Cli::write_manifest(const CLI::App& sub, const std::string& started, int exit_code) {
  json flags = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_name() == "--help" || opt->get_name() == "-h") continue;
    std::string name = opt->get_name();
    const auto results = opt->results();
    if (!results.empty()) {
      std::string joined;
      for (std::size_t i = 0; i < results.size(); ++i) {
        joined += (i ? "," : "") + results[i];
      }
      flags[name] = joined;
    } else {
      flags[name] = opt->get_default_str();
    }
  }
  json doc = {{"command", record_.command},
              {"argv", record_.argv},
              {"flags", flags},
              {"rng_seed", record_.seed ? json(*record_.seed) : json(nullptr)},
              {"tool_version", kVersion},
              {"started_at", started},
              {"finished_at", utc_now()},
              {"inputs", record_.inputs},
              {"output", to_stdout(record_.output) ? "-" : record_.output},
              {"extra_outputs", record_.extra_outputs},
              {"exit_code", exit_code}};
  if (to_stdout(record_.output)) {
    std::cerr << dump(doc);
  } else {
    write_text(record_.output + ".manifest.json", dump(doc));
  }
}

void Cli::add_generate(CLI::App& app) {
  auto* sub = app.add_subcommand("generate", "Generate a random instance");
  sub->add_option("--n", n_, "Number of tasks")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--kappa", kappa_, "Schedule tightness")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--kernels", kernels_, "Kernel pool CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--platform", platform_, "Platform preset or JSON file")->capture_default_str();
  sub->add_option("--big-min", big_min_, "Shortest big-cluster time (ms)")->capture_default_str();
  sub->add_option("--big-max", big_max_, "Longest big-cluster time (ms)")->capture_default_str();
  sub->add_option("--big-cluster", big_cluster_, "Big cluster id (default: highest frequency)");
  sub->add_option("--seed", seed_, "RNG seed");
  sub->add_option("-o,--output", output_, "Instance file");
  sub->callback([this] { record_.command = "generate"; });
}

void Cli::add_import(CLI::App& app) {
  auto* sub = app.add_subcommand("import", "Build an instance from a task characteristics CSV");
  sub->add_option("characteristics", characteristics_path_, "CSV kernel,cluster_id,exec_time_ms,activity_coef,offset_coef")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--platform", platform_, "Platform preset or JSON file")->capture_default_str();
  sub->add_option("--major-frame", major_frame_ms_, "Major frame (ms)")->required()->check(CLI::PositiveNumber);
  sub->add_option("--max-windows", max_windows_, "Window count (default: number of tasks)");
  sub->add_option("-o,--output", output_, "Instance file");
  sub->callback([this] { record_.command = "import"; });
}

void Cli::add_solve(CLI::App& app) {
  auto* sub = app.add_subcommand("solve", "Optimize an instance");
  sub->add_option("instance", instance_path_, "Instance file")->required()->check(CLI::ExistingFile);
  sub->add_option("--method", method_,
                  "ilp-sm, qp-lr-ub, bb-sm, bb-lr, heur, idle-min, idle-max or flow-fixed")
      ->required();
  sub->add_option("--time-limit", time_limit_ms_, "Time limit (ms)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", seed_, "RNG seed for the genetic methods");
  sub->add_option("--coefficients", coefficients_, "Coefficients file or preset:<name>");
  sub->add_option("--window-lengths", window_lengths_, "Fixed window lengths l1,l2,... (ms)");
  sub->add_option("--ga-config", ga_config_, "GA configuration JSON")->check(CLI::ExistingFile);
  sub->add_option("--generations", generations_,
                  "Generation cap for the genetic methods; 0 runs until the time limit")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--trace", trace_path_, "Fitness trace CSV for the genetic methods");
  sub->add_option("-o,--output", output_, "Search result file");
  sub->callback([this] { record_.command = "solve"; });
}

void Cli::add_evaluate(CLI::App& app) {
  auto* sub = app.add_subcommand("evaluate", "Predict the average power of a schedule");
  sub->add_option("instance", instance_path_, "Instance file")->required()->check(CLI::ExistingFile);
  sub->add_option("assignment", assignment_path_, "Assignment or search result file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--model", model_, "sm, lr or lr-ub")->capture_default_str();
  sub->add_option("--coefficients", coefficients_, "Coefficients file or preset:<name>");
  sub->add_flag("--temperature", temperature_, "Also report the steady-state temperature");
  sub->add_option("-o,--output", output_, "Report file");
  sub->callback([this] { record_.command = "evaluate"; });
}

void Cli::add_fit(CLI::App& app) {
  auto* sub = app.add_subcommand("fit", "Fit regression coefficients to measured intervals");
  sub->add_option("samples", samples_path_, "Samples CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--platform", platform_, "Platform preset or JSON file")->capture_default_str();
  sub->add_option("-o,--output", output_, "Coefficients file");
  sub->callback([this] { record_.command = "fit"; });
}

void Cli::add_sweep(CLI::App& app) {
  auto* sub = app.add_subcommand("sweep", "Scalability experiment over generated instances");
  sub->add_option("--sizes", sizes_, "Task counts")->delimiter(',')->required();
  sub->add_option("--reps", reps_, "Instances per size")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--methods", methods_, "Methods to run")->delimiter(',')->required();
  sub->add_option("--time-limit", time_limit_ms_, "Per-run time limit (ms)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--kernels", kernels_, "Kernel pool CSV")->required()->check(CLI::ExistingFile);
  sub->add_option("--platform", platform_, "Platform preset or JSON file")->capture_default_str();
  sub->add_option("--coefficients", coefficients_, "Coefficients file or preset:<name>");
  sub->add_option("--kappa", kappa_, "Schedule tightness")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--seed", seed_, "Base seed");
  sub->add_option("--summary", summary_path_, "Per (n, method) summary CSV");
  sub->add_option("-o,--output", output_, "Per-run CSV");
  sub->callback([this] { record_.command = "sweep"; });
}

void Cli::add_export_gantt(CLI::App& app) {
  auto* sub = app.add_subcommand("export-gantt", "Render a schedule as a Gantt chart");
  sub->add_option("instance", instance_path_, "Instance file")->required()->check(CLI::ExistingFile);
  sub->add_option("assignment", assignment_path_, "Assignment or search result file")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--format", format_, "svg or json")
      ->check(CLI::IsMember({"svg", "json"}))
      ->capture_default_str();
  sub->add_option("-o,--output", output_, "Chart file");
  sub->callback([this] { record_.command = "export-gantt"; });
}

void Cli::add_compare(CLI::App& app) {
  auto* sub = app.add_subcommand("compare", "Rank methods by predicted power on one instance");
  sub->add_option("instance", instance_path_, "Instance file")->required()->check(CLI::ExistingFile);
  sub->add_option("--methods", methods_, "Methods (default: all applicable)")->delimiter(',');
  sub->add_option("--model", model_, "sm, lr or lr-ub")->capture_default_str();
  sub->add_option("--coefficients", coefficients_, "Coefficients file or preset:<name>");
  sub->add_option("--window-lengths", window_lengths_, "Window lengths for flow-fixed");
  sub->add_option("--time-limit", time_limit_ms_, "Per-method time limit (ms)")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--generations", generations_, "Generation cap for the genetic methods")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--seed", seed_, "RNG seed");
  sub->add_option("-o,--output", output_, "Ranking CSV");
  sub->callback([this] { record_.command = "compare"; });
}

void Cli::add_replay(CLI::App& app) {
  auto* sub = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  sub->add_option("manifest", manifest_path_, "Manifest file")->required()->check(CLI::ExistingFile);
  sub->add_flag("--check", check_, "Fail unless the outputs are reproduced, ignoring elapsed times");
  sub->callback([this] { record_.command = "replay"; });
}

int Cli::run(std::vector<std::string> args) {
  CLI::App app{"Thermal-aware window scheduling toolkit", "thermosched"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  add_generate(app);
  add_import(app);
  add_solve(app);
  add_evaluate(app);
  add_fit(app);
  add_sweep(app);
  add_export_gantt(app);
  add_compare(app);
  add_replay(app);

  record_.argv = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(std::move(args));
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  record_.output = output_;
  const std::string started = utc_now();
  int code = kFailure;
  try {
    if (record_.command == "generate") code = do_generate();
    else if (record_.command == "import") code = do_import();
    else if (record_.command == "solve") code = do_solve();
    else if (record_.command == "evaluate") code = do_evaluate();
    else if (record_.command == "fit") code = do_fit();
    else if (record_.command == "sweep") code = do_sweep();
    else if (record_.command == "export-gantt") code = do_export_gantt();
    else if (record_.command == "compare") code = do_compare();
    else if (record_.command == "replay") return do_replay();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ts::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kFailure;
  } catch (const ts::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  write_manifest(*sub, started, code);
  return code;
}

int Cli::do_generate() {
  ts::GeneratorConfig config;
  config.n_tasks = n_;
  config.tightness_kappa = kappa_;
  config.big_exec_min_ms = big_min_;
  config.big_exec_max_ms = big_max_;
  if (big_cluster_ > 0) config.big_cluster = big_cluster_ - 1;
  config.rng_seed = resolve_seed(seed_);
  const ts::Platform platform = load_platform(platform_);
  const ts::KernelPool pool = ts::load_kernel_pool(kernels_);
  record_.inputs = {kernels_};
  const ts::Instance inst = ts::generate_instance(config, pool, platform);
  write_text(output_, dump(ts::instance_to_json(inst)));
  return kOk;
}

int Cli::do_import() {
  const ts::Platform platform = load_platform(platform_);
  std::ifstream in(characteristics_path_);
  record_.inputs = {characteristics_path_};
  ts::Instance inst;
  inst.platform = platform;
  inst.tasks = ts::load_task_characteristics(in, platform);
  inst.major_frame_ms = major_frame_ms_;
  inst.max_windows = max_windows_ > 0 ? max_windows_ : inst.task_count();
  const auto problems = ts::validate_instance(inst);
  if (!problems.empty()) throw ts::InputError(problems.front());
  write_text(output_, dump(ts::instance_to_json(inst)));
  return kOk;
}

namespace {

ts::Instance load_valid_instance(const std::string& path) {
  ts::Instance inst = ts::load_instance(std::filesystem::path(path));
  const auto problems = ts::validate_instance(inst);
  if (!problems.empty()) {
    std::string joined;
    for (const auto& p : problems) joined += "\n  " + p;
    throw ts::InputError("invalid instance:" + joined);
  }
  return inst;
}

ts::MethodOptions method_options(const std::string& coefficients, const std::string& lengths,
                                 std::int64_t time_limit_ms, std::int64_t generations,
                                 const std::string& ga_config) {
  ts::MethodOptions options;
  options.time_limit_ms = time_limit_ms;
  options.coefficients = load_coefficients_flag(coefficients);
  if (!lengths.empty()) options.window_lengths_ms = parse_lengths(lengths);
  if (!ga_config.empty()) options.ga = ts::ga_config_from_json(ts::read_json_file(ga_config));
  if (generations > 0) options.ga.generation_budget = generations;
  return options;
}

bool is_genetic(ts::Method m) { return m == ts::Method::kBbSm || m == ts::Method::kBbLr; }

}  // namespace

int Cli::do_solve() {
  const auto method = ts::parse_method(method_);
  if (!method) throw UsageError("unknown method '" + method_ + "'");
  if (ts::needs_window_lengths(*method) && window_lengths_.empty()) {
    throw UsageError(method_ + " requires --window-lengths");
  }
  if (ts::needs_coefficients(*method) && coefficients_.empty()) {
    throw UsageError(method_ + " requires --coefficients");
  }
  const ts::Instance inst = load_valid_instance(instance_path_);
  record_.inputs = {instance_path_};
  ts::MethodOptions options =
      method_options(coefficients_, window_lengths_, time_limit_ms_, generations_, ga_config_);
  if (is_genetic(*method)) options.seed = resolve_seed(seed_);
  const ts::MethodRun run = ts::run_method(inst, *method, options);
  json doc = ts::search_result_to_json(inst, run.result);
  doc["method"] = method_;
  write_text(output_, dump(doc));
  if (!trace_path_.empty() && is_genetic(*method)) {
    std::ostringstream os;
    ts::write_fitness_trace(run.trace, os);
    write_text(trace_path_, os.str());
    record_.extra_outputs.push_back(trace_path_);
  }
  std::cerr << "status: " << ts::to_string(run.result.status) << "\n";
  return exit_for(run.result.status);
}

namespace {

ts::PowerModel parse_model_flag(const std::string& text) {
  auto m = ts::parse_power_model(text);
  if (!m) throw UsageError("unknown power model '" + text + "'");
  return *m;
}

}  // namespace

int Cli::do_evaluate() {
  const ts::PowerModel model = parse_model_flag(model_);
  if (model != ts::PowerModel::kSM && coefficients_.empty()) {
    throw UsageError("--model " + model_ + " requires --coefficients");
  }
  const ts::Instance inst = load_valid_instance(instance_path_);
  const ts::Assignment asg = ts::load_assignment(inst, assignment_path_);
  record_.inputs = {instance_path_, assignment_path_};
  const auto report = ts::check_feasible(inst, asg);
  if (!report.feasible) {
    throw ts::InputError("assignment is infeasible: " + report.violations.front().message);
  }
  const auto coefficients = load_coefficients_flag(coefficients_);
  const ts::ScheduleEvaluation eval =
      ts::evaluate_schedule(inst, asg, model, coefficients ? &*coefficients : nullptr);
  json contributions = json::array();
  for (const auto& c : eval.contributions) {
    contributions.push_back({{"window", c.window + 1},
                             {"start_ms", c.start_ms},
                             {"length_ms", c.length_ms},
                             {"above_idle_watts", c.above_idle_watts},
                             {"weighted_watts", c.weighted_watts}});
  }
  json doc = {{"model", model_},
              {"watts", eval.power.watts},
              {"idle", eval.power.idle},
              {"activity", eval.power.activity},
              {"offset", eval.power.offset},
              {"contributions", contributions}};
  if (temperature_) {
    doc["temperature_celsius"] = ts::power_to_temperature(inst.platform, eval.power.watts);
  }
  write_text(output_, dump(doc));
  return kOk;
}

int Cli::do_fit() {
  const ts::Platform platform = load_platform(platform_);
  std::ifstream in(samples_path_);
  record_.inputs = {samples_path_};
  const auto samples = ts::load_fit_samples(in, platform.cluster_count());
  const ts::RegressionCoefficients c = ts::fit_regression_coefficients(samples, platform);
  write_text(output_, dump(ts::coefficients_to_json(c)));
  std::cerr << "r_squared: " << *c.r_squared << "\n";
  return kOk;
}

int Cli::do_sweep() {
  ts::SweepConfig config;
  config.sizes = sizes_;
  config.repetitions = reps_;
  config.methods = parse_methods(methods_);
  config.time_limit_ms = time_limit_ms_;
  config.seed = resolve_seed(seed_);
  config.platform = load_platform(platform_);
  config.pool = ts::load_kernel_pool(kernels_);
  config.coefficients = load_coefficients_flag(coefficients_);
  config.generator.tightness_kappa = kappa_;
  record_.inputs = {kernels_};
  for (ts::Method m : config.methods) {
    if (ts::needs_coefficients(m) && !config.coefficients) {
      throw UsageError(std::string(ts::to_string(m)) + " requires --coefficients");
    }
  }
  const auto rows = ts::scalability_sweep(config, [](const ts::SweepRow& r) {
    std::cerr << "n=" << r.n << " rep=" << r.rep << " " << r.method << " " << r.status << " "
              << r.elapsed_ms << " ms\n";
  });
  std::ostringstream os;
  ts::write_sweep_csv(rows, os);
  write_text(output_, os.str());
  if (!summary_path_.empty()) {
    std::ostringstream ss;
    ts::write_summary_csv(ts::summarize(rows), ss);
    write_text(summary_path_, ss.str());
    record_.extra_outputs.push_back(summary_path_);
  }
  return kOk;
}

int Cli::do_export_gantt() {
  const ts::Instance inst = load_valid_instance(instance_path_);
  const ts::Assignment asg = ts::load_assignment(inst, assignment_path_);
  record_.inputs = {instance_path_, assignment_path_};
  const ts::GanttChart chart = ts::build_gantt(inst, asg);
  write_text(output_, format_ == "svg" ? ts::gantt_to_svg(chart) : dump(ts::gantt_to_json(chart)));
  return kOk;
}

int Cli::do_compare() {
  const ts::PowerModel model = parse_model_flag(model_);
  std::vector<ts::Method> methods;
  if (methods_.empty()) {
    for (ts::Method m : ts::all_methods()) {
      if (ts::needs_coefficients(m) && coefficients_.empty()) continue;
      if (ts::needs_window_lengths(m) && window_lengths_.empty()) continue;
      methods.push_back(m);
    }
  } else {
    methods = parse_methods(methods_);
  }
  for (ts::Method m : methods) {
    if (ts::needs_coefficients(m) && coefficients_.empty()) {
      throw UsageError(std::string(ts::to_string(m)) + " requires --coefficients");
    }
    if (ts::needs_window_lengths(m) && window_lengths_.empty()) {
      throw UsageError(std::string(ts::to_string(m)) + " requires --window-lengths");
    }
  }
  if (model != ts::PowerModel::kSM && coefficients_.empty()) {
    throw UsageError("--model " + model_ + " requires --coefficients");
  }
  const ts::Instance inst = load_valid_instance(instance_path_);
  record_.inputs = {instance_path_};
  ts::MethodOptions options =
      method_options(coefficients_, window_lengths_, time_limit_ms_, generations_, "");
  options.seed = resolve_seed(seed_);

  std::vector<ts::MethodRun> runs(methods.size());
  std::size_t next = 0;
  std::mutex lock;
  std::exception_ptr failure;
  auto worker = [&] {
    while (true) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> guard(lock);
        if (next >= methods.size() || failure) return;
        i = next++;
      }
      try {
        runs[i] = ts::run_method(inst, methods[i], options);
      } catch (...) {
        std::lock_guard<std::mutex> guard(lock);
        failure = std::current_exception();
      }
    }
  };
  const int threads = std::min<int>(threads_cap(), static_cast<int>(methods.size()));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  const auto& coefficients = options.coefficients;
  struct Row {
    std::string method;
    std::string status;
    double elapsed_ms;
    std::optional<double> power;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    Row row{ts::to_string(methods[i]), ts::to_string(runs[i].result.status),
            runs[i].result.elapsed_ms, std::nullopt};
    if (runs[i].result.assignment) {
      row.power = ts::schedule_power(inst, *runs[i].result.assignment, model,
                                     coefficients ? &*coefficients : nullptr)
                      .watts;
    }
    rows.push_back(row);
  }
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (rows[a].power.has_value() != rows[b].power.has_value()) return rows[a].power.has_value();
    return rows[a].power && *rows[a].power < *rows[b].power;
  });

  std::ostringstream os;
  os.precision(12);
  os << "predicted_rank,method,status,elapsed_ms,predicted_power_watts\n";
  int rank = 0;
  for (std::size_t i : order) {
    const Row& r = rows[i];
    if (r.power) {
      os << ++rank;
    }
    os << ',' << r.method << ',' << r.status << ',' << r.elapsed_ms << ',';
    if (r.power) os << *r.power;
    os << '\n';
  }
  write_text(output_, os.str());
  return kOk;
}

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void drop_timings(json& doc) {
  if (doc.is_object()) {
    doc.erase("elapsed_ms");
    for (auto& [key, value] : doc.items()) drop_timings(value);
  } else if (doc.is_array()) {
    for (auto& value : doc) drop_timings(value);
  }
}

// Output text with wall-clock measurements blanked: `elapsed_ms` members of
// JSON documents and columns ending in `elapsed_ms` of CSV files.
std::string without_timings(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (!doc.is_discarded()) {
    drop_timings(doc);
    return doc.dump();
  }
  std::istringstream in(text);
  std::string line;
  std::vector<bool> timed;
  std::ostringstream out;
  bool header = true;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream row(line);
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (header) {
      for (const auto& c : cells) {
        timed.push_back(c.size() >= 10 && c.compare(c.size() - 10, 10, "elapsed_ms") == 0);
      }
      header = false;
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i < timed.size() && timed[i]) cells[i].clear();
      out << (i ? "," : "") << cells[i];
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

int Cli::do_replay() {
  const json manifest = ts::read_json_file(manifest_path_);
  if (!manifest.contains("argv") || !manifest["argv"].is_array()) {
    throw ts::ParseError("/argv", "manifest has no argv array");
  }
  const auto argv = manifest["argv"].get<std::vector<std::string>>();
  std::vector<std::string> outputs;
  if (manifest.value("output", "-") != "-") outputs.push_back(manifest["output"]);
  for (const auto& extra : manifest.value("extra_outputs", std::vector<std::string>{})) {
    outputs.push_back(extra);
  }
  std::vector<std::optional<std::string>> before;
  for (const auto& p : outputs) before.push_back(slurp(p));

  const int code = Cli().run(argv);
  if (!check_) return code;
  if (code != manifest.value("exit_code", 0)) {
    std::cerr << "replay exit code " << code << " differs from the recorded "
              << manifest.value("exit_code", 0) << "\n";
    return kReplayMismatch;
  }
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    const auto after = slurp(outputs[i]);
    const bool same = after && before[i] ? without_timings(*after) == without_timings(*before[i])
                                         : after == before[i];
    if (!same) {
      std::cerr << "replay output differs: " << outputs[i] << "\n";
      return kReplayMismatch;
    }
  }
  std::cerr << "replay reproduced " << outputs.size() << " output(s)\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return Cli().run(std::move(args));
}

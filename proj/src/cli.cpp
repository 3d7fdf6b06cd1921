#include "spoilage/cli.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spoilage/agents/checkpoint.hpp"
#include "spoilage/agents/dqn.hpp"
#include "spoilage/agents/evaluate.hpp"
#include "spoilage/agents/monte_carlo.hpp"
#include "spoilage/errors.hpp"
#include "spoilage/hardware.hpp"
#include "spoilage/metrics.hpp"
#include "spoilage/nnet/gradcheck.hpp"
#include "spoilage/report.hpp"
#include "spoilage/synthgen.hpp"
#include "spoilage/text.hpp"

namespace spoilage::cli {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kArtifactVersion = "spoilage-artifacts 1";

// Options that take no value; a config entry enables them with a true value.
const std::set<std::string> kFlagOptions = {"strict", "stats", "previous-cell-peephole"};

bool truthy(const std::string& v) {
  std::string s = v;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw InvalidConfig("config: '" + v + "' is not a boolean");
}

bool mentions(const std::vector<std::string>& args, const std::string& key) {
  const std::string flag = "--" + key;
  return std::any_of(args.begin(), args.end(),
                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
}

std::optional<std::string> config_path(const std::vector<std::string>& args) {
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) return args[i].substr(9);
  }
  return std::nullopt;
}

// Config entries become ordinary arguments placed ahead of the user's, so the
// parser sees one argument list and anything given on the command line wins.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  const auto path = config_path(args);
  if (!path || args.empty()) return args;
  std::vector<std::string> extra;
  for (const auto& [key, value] : read_config_file(*path)) {
    if (key == "config") throw InvalidConfig("config: nested config files are not supported");
    if (mentions(args, key)) continue;
    if (kFlagOptions.count(key)) {
      if (truthy(value)) extra.push_back("--" + key);
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  std::vector<std::string> merged;
  merged.push_back(args.front());
  merged.insert(merged.end(), extra.begin(), extra.end());
  merged.insert(merged.end(), args.begin() + 1, args.end());
  return merged;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += sep;
    s += parts[i];
  }
  return s;
}

BranchOrder branch_order_from(const std::string& s) {
  return s == "paper" ? BranchOrder::PaperLiteral : BranchOrder::EmergencyFirst;
}

CLI::Validator layout_validator() {
  return CLI::Validator(
      [](std::string& s) -> std::string {
        try {
          agents::InputLayout::parse(s);
        } catch (const DataError& e) {
          return e.what();
        }
        return {};
      },
      "scalars|window:W", "LAYOUT");
}

// ---------------------------------------------------------------------------
// Data sources shared by train, evaluate and compare.

struct DataOptions {
  std::string data;
  std::string log;
  std::size_t rows = 1000;
  std::uint64_t data_seed = 42;
  double noise_sigma = 5.0;
  std::string branch_order = "emergency-first";
  bool strict = false;
  double default_moisture = 200.0;
};

struct LoadedData {
  LabeledDataset dataset;
  bool hardware = false;  // ingested from a serial log
  std::string input;      // path of the input file, empty when generated
};

void add_data_options(CLI::App* sub, DataOptions& o) {
  auto* data = sub->add_option("--data", o.data, "Labeled dataset CSV (as written by datagen)");
  auto* log = sub->add_option("--log", o.log, "Serial sensor log; '-' reads standard input");
  data->excludes(log);
  sub->add_option("--rows", o.rows, "Rows to generate when no input is given")->check(CLI::PositiveNumber);
  sub->add_option("--data-seed", o.data_seed, "Seed for the generated dataset");
  sub->add_option("--noise-sigma", o.noise_sigma, "Generator noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--branch-order", o.branch_order, "Classifier branch order for generated or ingested labels")
      ->check(CLI::IsMember({"paper", "emergency-first"}));
  sub->add_flag("--strict", o.strict, "Reject a serial log at its first malformed line");
  sub->add_option("--default-moisture", o.default_moisture, "Moisture value filled into ingested readings");
}

hardware::ParseResult read_log(const std::string& path, bool strict, std::istream& in) {
  const auto mode = strict ? hardware::ParseMode::Strict : hardware::ParseMode::Lenient;
  if (path == "-") return hardware::parse_serial_log(in, mode);
  std::ifstream file(path);
  if (!file) throw DataError("cannot read " + path);
  return hardware::parse_serial_log(file, mode);
}

void report_skipped(const hardware::ParseResult& parsed, const std::string& path, std::ostream& err) {
  for (auto line : parsed.skipped_lines) err << "warning: " << path << ": skipped malformed line " << line << '\n';
}

LoadedData load_data(const DataOptions& o, std::istream& in, std::ostream& err) {
  if (!o.data.empty()) {
    if (!fs::is_regular_file(o.data)) throw DataError("cannot read " + o.data);
    return {read_dataset_csv(fs::path(o.data)), false, o.data};
  }
  if (!o.log.empty()) {
    const auto parsed = read_log(o.log, o.strict, in);
    report_skipped(parsed, o.log, err);
    hardware::IngestConfig ingest;
    ingest.order = branch_order_from(o.branch_order);
    ingest.default_moisture = o.default_moisture;
    return {hardware::log_to_dataset(parsed.records, ingest, o.log), true, o.log == "-" ? "" : o.log};
  }
  GenConfig gen;
  gen.rows = o.rows;
  gen.seed = o.data_seed;
  gen.noise_sigma = o.noise_sigma;
  gen.order = branch_order_from(o.branch_order);
  return {generate_dataset(gen), false, ""};
}

// ---------------------------------------------------------------------------
// Training options shared by train and compare.

struct TrainOptions {
  std::optional<std::size_t> episodes;
  std::uint64_t seed = 42;
  double gamma = 0.95;
  std::size_t batch_size = 64;
  double epsilon_start = 1.0;
  double epsilon_decay = 0.9997;
  double epsilon_floor = 0.01;
  std::string shaping = "raw";
  std::string optimizer = "adam";
  double learning_rate = 1e-3;
  std::string layout = "scalars";
  std::size_t hidden = 64;
  std::size_t replay_capacity = 10000;
  std::size_t updates_per_step = 1;
  std::optional<std::size_t> min_fill;
  std::size_t target_sync = 0;
  std::optional<std::size_t> max_steps;
  bool previous_cell_peephole = false;
  std::size_t bins = 10;
  std::size_t loss_window = 1;
};

void add_train_options(CLI::App* sub, TrainOptions& o) {
  sub->add_option("--episodes", o.episodes, "Training episodes (default 1000, or 100 for --log input)");
  sub->add_option("--seed", o.seed, "Training seed");
  sub->add_option("--gamma", o.gamma, "Discount factor in [0, 1)");
  sub->add_option("--batch-size", o.batch_size, "Replay minibatch size")->check(CLI::PositiveNumber);
  sub->add_option("--epsilon-start", o.epsilon_start, "Initial exploration rate");
  sub->add_option("--epsilon-decay", o.epsilon_decay, "Per-episode multiplicative epsilon decay");
  sub->add_option("--epsilon-floor", o.epsilon_floor, "Lower bound on epsilon");
  sub->add_option("--shaping", o.shaping, "Training reward: raw +/-1 or log-shaped")
      ->check(CLI::IsMember({"raw", "log"}));
  sub->add_option("--optimizer", o.optimizer, "Gradient optimizer")->check(CLI::IsMember({"adam", "sgd"}));
  sub->add_option("--learning-rate", o.learning_rate, "Optimizer step size");
  sub->add_option("--layout", o.layout, "Network input: scalars (5 steps x 1) or window:W (W steps x 5)")
      ->check(layout_validator());
  sub->add_option("--hidden", o.hidden, "Hidden width of every layer")->check(CLI::PositiveNumber);
  sub->add_option("--replay-capacity", o.replay_capacity, "Replay buffer capacity")->check(CLI::PositiveNumber);
  sub->add_option("--updates-per-step", o.updates_per_step, "Gradient updates per environment step");
  sub->add_option("--min-fill", o.min_fill, "Transitions stored before learning (default: batch size)");
  sub->add_option("--target-sync", o.target_sync, "Target network sync interval in updates; 0 disables");
  sub->add_option("--max-steps", o.max_steps, "Episode length cap (default: whole dataset)")
      ->check(CLI::PositiveNumber);
  sub->add_flag("--previous-cell-peephole", o.previous_cell_peephole,
                "Output gate peeks at the previous cell state instead of the updated one");
  sub->add_option("--bins", o.bins, "Monte Carlo bins per feature");
  sub->add_option("--loss-window", o.loss_window, "Losses averaged at each end for the decrease rate")
      ->check(CLI::PositiveNumber);
}

std::size_t episodes_for(const TrainOptions& o, const LoadedData& data) {
  return o.episodes.value_or(data.hardware ? 100 : 1000);
}

agents::EpsilonSchedule schedule_of(const TrainOptions& o) {
  return {o.epsilon_start, o.epsilon_decay, o.epsilon_floor};
}

// Checked before any training or output so bad settings fail fast.
void validate_training(const TrainOptions& o, const LoadedData& data, agents::AgentKind kind) {
  if (kind == agents::AgentKind::MonteCarlo) {
    agents::McConfig mc;
    mc.bins = o.bins;
    mc.gamma = o.gamma;
    mc.schedule = schedule_of(o);
    mc.episodes = episodes_for(o, data);
    mc.validate();
    return;
  }
  agents::TrainConfig c;
  c.kind = kind;
  c.episodes = episodes_for(o, data);
  c.batch_size = o.batch_size;
  c.gamma = o.gamma;
  c.schedule = schedule_of(o);
  c.optimizer.learning_rate = o.learning_rate;
  c.validate();
}

agents::TrainedAgent train_agent(const TrainOptions& o, const LoadedData& data, agents::AgentKind kind) {
  const std::size_t episodes = episodes_for(o, data);
  if (kind == agents::AgentKind::MonteCarlo) {
    agents::McConfig mc;
    mc.bins = o.bins;
    mc.gamma = o.gamma;
    mc.schedule = schedule_of(o);
    mc.episodes = episodes;
    mc.seed = o.seed;
    mc.max_steps = o.max_steps;
    return agents::train_monte_carlo(data.dataset, mc);
  }
  agents::TrainConfig c;
  c.kind = kind;
  c.episodes = episodes;
  c.batch_size = o.batch_size;
  c.gamma = o.gamma;
  c.optimizer.kind = o.optimizer == "sgd" ? nnet::OptimizerKind::Sgd : nnet::OptimizerKind::Adam;
  c.optimizer.learning_rate = o.learning_rate;
  c.shaping.mode = o.shaping == "log" ? ShapingMode::LogShaped : ShapingMode::Raw;
  c.seed = o.seed;
  c.layout = agents::InputLayout::parse(o.layout);
  c.replay_capacity = o.replay_capacity;
  c.updates_per_step = o.updates_per_step;
  c.min_fill = o.min_fill;
  c.schedule = schedule_of(o);
  c.hidden = o.hidden;
  c.output_peephole =
      o.previous_cell_peephole ? nnet::OutputPeephole::PreviousCell : nnet::OutputPeephole::CurrentCell;
  c.target_sync = o.target_sync;
  c.max_steps = o.max_steps;
  return agents::train_dqn(data.dataset, c);
}

// ---------------------------------------------------------------------------
// Run directories.

class RunDirectory {
 public:
  explicit RunDirectory(fs::path root) : root_(std::move(root)) {
    if (fs::exists(root_) && !fs::is_directory(root_)) throw DataError(root_.string() + " exists and is not a directory");
    fs::create_directories(root_);
  }

  const fs::path& root() const { return root_; }
  fs::path operator/(const std::string& name) const { return root_ / name; }

  void record_output(const std::string& key, const std::string& file) { outputs_.emplace_back(key, file); }
  const std::vector<std::pair<std::string, std::string>>& outputs() const { return outputs_; }

  // Inputs live elsewhere; they are recorded relative to the run directory.
  std::string relative_input(const std::string& path) const {
    if (path.empty()) return "";
    return fs::proximate(fs::absolute(path), fs::absolute(root_)).generic_string();
  }

 private:
  fs::path root_;
  std::vector<std::pair<std::string, std::string>> outputs_;
};

struct Manifest {
  std::string command;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<std::pair<std::string, std::string>> inputs;
};

std::vector<std::pair<std::string, std::string>> snapshot(const CLI::App* sub) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const CLI::Option* opt : sub->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "config" || name.empty()) continue;
    const bool flag = kFlagOptions.count(name) > 0;
    std::string value;
    if (flag) value = opt->count() > 0 ? "true" : "false";
    else value = opt->count() > 0 ? join(opt->results(), " ") : opt->get_default_str();
    out.emplace_back(name, value);
  }
  return out;
}

void write_manifest(const RunDirectory& dir, const Manifest& m, double seconds) {
  std::ostringstream s;
  s << "artifact_version = " << kArtifactVersion << '\n';
  s << "command = " << m.command << '\n';
  s << "seed = " << m.seed << '\n';
  s << "wall_clock_seconds = " << format_fixed(seconds, 3) << '\n';
  for (const auto& [k, v] : m.config) s << "config." << k << " = " << v << '\n';
  for (const auto& [k, v] : m.inputs) s << "input." << k << " = " << v << '\n';
  for (const auto& [k, v] : dir.outputs()) s << "output." << k << " = " << v << '\n';

  const fs::path tmp = dir / "manifest.txt.tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write " + tmp.string());
    out << s.str();
    if (!out) throw DataError("failed writing " + tmp.string());
  }
  fs::rename(tmp, dir / "manifest.txt");
}

// Writes report, series, distribution and checkpoint for one trained agent.
nlohmann::json write_agent_outputs(RunDirectory& dir, const agents::TrainedAgent& agent,
                                   const MetricsReport& report) {
  const nlohmann::json j = report_to_json(report);
  write_json(dir / "report.json", j);
  dir.record_output("report", "report.json");
  write_series_csv(dir / "rewards.csv", agent.series.episode_rewards);
  dir.record_output("rewards", "rewards.csv");
  if (agent.kind != agents::AgentKind::MonteCarlo) {
    write_series_csv(dir / "losses.csv", agent.series.losses);
    dir.record_output("losses", "losses.csv");
  }
  write_series_csv(dir / "epsilons.csv", agent.series.epsilons);
  dir.record_output("epsilons", "epsilons.csv");
  write_json(dir / "class_distribution.json", class_distribution_json(report.class_distribution));
  dir.record_output("class_distribution", "class_distribution.json");
  agents::save_agent(dir / "agent.ckpt", agent);
  dir.record_output("checkpoint", "agent.ckpt");
  return j;
}

// One column per agent; shorter series leave empty cells.
void write_wide_csv(const fs::path& path, const std::vector<std::string>& names,
                    const std::vector<const std::vector<double>*>& columns) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << "index";
  for (const auto& n : names) out << ',' << n;
  out << '\n';
  std::size_t rows = 0;
  for (const auto* c : columns) rows = std::max(rows, c->size());
  for (std::size_t i = 0; i < rows; ++i) {
    out << i;
    for (const auto* c : columns) {
      out << ',';
      if (i < c->size()) out << format_exact((*c)[i]);
    }
    out << '\n';
  }
  if (!out) throw DataError("failed writing " + path.string());
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string summary_line(const MetricsReport& r) {
  return r.agent + ": accuracy " + format_fixed(r.accuracy, 4) + ", reward/step " +
         format_fixed(r.reward_to_step, 4) + ", classes " + format_distribution(r.class_distribution);
}

// ---------------------------------------------------------------------------
// Subcommands.

struct Context {
  std::istream& in;
  std::ostream& out;
  std::ostream& err;
  std::string command;
};

struct DatagenOptions {
  std::size_t rows = 1000;
  std::uint64_t seed = 42;
  std::string out;
  double noise_sigma = 5.0;
  std::string branch_order = "emergency-first";
};

int run_datagen(const DatagenOptions& o, Context& ctx) {
  GenConfig gen;
  gen.rows = o.rows;
  gen.seed = o.seed;
  gen.noise_sigma = o.noise_sigma;
  gen.order = branch_order_from(o.branch_order);
  const auto dataset = generate_dataset(gen);
  write_dataset_csv(dataset, fs::path(o.out));
  ctx.err << "wrote " << dataset.size() << " rows to " << o.out << '\n';
  return kExitOk;
}

struct TrainCommand {
  DataOptions data;
  TrainOptions train;
  std::string agent = "hybrid";
  std::string out = "runs/train";
};

int run_train(const TrainCommand& o, const CLI::App* sub, Context& ctx) {
  const auto start = Clock::now();
  const auto kind = *agents::agent_kind_from_name(o.agent);
  const LoadedData data = load_data(o.data, ctx.in, ctx.err);
  validate_training(o.train, data, kind);

  const auto agent = train_agent(o.train, data, kind);
  const auto eval = agents::evaluate_agent(agent, data.dataset);
  const auto report = build_report(std::string(agents::agent_display_name(kind)), eval, agent.series,
                                   agent.schedule, o.train.loss_window);

  RunDirectory dir(o.out);
  write_agent_outputs(dir, agent, report);
  write_manifest(dir,
                 {ctx.command, o.train.seed, snapshot(sub), {{"data", dir.relative_input(data.input)}}},
                 seconds_since(start));
  ctx.out << summary_line(report) << '\n';
  return kExitOk;
}

struct EvaluateCommand {
  DataOptions data;
  std::string model;
  std::string out = "runs/evaluate";
  std::size_t loss_window = 1;
};

int run_evaluate(const EvaluateCommand& o, const CLI::App* sub, Context& ctx) {
  const auto start = Clock::now();
  const auto agent = agents::load_agent(o.model);
  const LoadedData data = load_data(o.data, ctx.in, ctx.err);
  const auto eval = agents::evaluate_agent(agent, data.dataset);
  const auto report = build_report(std::string(agents::agent_display_name(agent.kind)), eval, agent.series,
                                   agent.schedule, o.loss_window);

  RunDirectory dir(o.out);
  write_json(dir / "report.json", report_to_json(report));
  dir.record_output("report", "report.json");
  std::vector<double> rewards(eval.raw_rewards.begin(), eval.raw_rewards.end());
  write_series_csv(dir / "rewards.csv", rewards);
  dir.record_output("rewards", "rewards.csv");
  write_json(dir / "class_distribution.json", class_distribution_json(report.class_distribution));
  dir.record_output("class_distribution", "class_distribution.json");
  write_manifest(dir,
                 {ctx.command,
                  0,
                  snapshot(sub),
                  {{"data", dir.relative_input(data.input)}, {"model", dir.relative_input(o.model)}}},
                 seconds_since(start));
  ctx.out << summary_line(report) << '\n';
  return kExitOk;
}

struct CompareCommand {
  DataOptions data;
  TrainOptions train;
  std::string out = "runs/compare";
};

int run_compare(const CompareCommand& o, const CLI::App* sub, Context& ctx) {
  const auto start = Clock::now();
  const LoadedData data = load_data(o.data, ctx.in, ctx.err);
  for (auto kind : agents::kAllAgentKinds) validate_training(o.train, data, kind);

  RunDirectory dir(o.out);
  std::vector<MetricsReport> reports;
  std::vector<agents::TrainedAgent> trained;
  nlohmann::json rows = nlohmann::json::array();
  nlohmann::json distributions = nlohmann::json::object();
  for (auto kind : agents::kAllAgentKinds) {
    const auto agent_start = Clock::now();
    const std::string name(agents::agent_kind_name(kind));
    ctx.err << "training " << agents::agent_display_name(kind) << '\n';
    auto agent = train_agent(o.train, data, kind);
    const auto eval = agents::evaluate_agent(agent, data.dataset);
    auto report = build_report(std::string(agents::agent_display_name(kind)), eval, agent.series,
                               agent.schedule, o.train.loss_window);

    RunDirectory agent_dir(dir / name);
    rows.push_back(write_agent_outputs(agent_dir, agent, report));
    write_manifest(agent_dir,
                   {ctx.command, o.train.seed, snapshot(sub), {{"data", agent_dir.relative_input(data.input)}}},
                   seconds_since(agent_start));
    distributions[name] = class_distribution_json(report.class_distribution);
    reports.push_back(std::move(report));
    trained.push_back(std::move(agent));
  }

  write_json(dir / "report.json", nlohmann::json{{"agents", rows}});
  dir.record_output("report", "report.json");
  const std::string table = render_table(reports);
  {
    std::ofstream t(dir / "table.txt");
    if (!t) throw DataError("cannot write " + (dir / "table.txt").string());
    t << table;
  }
  dir.record_output("table", "table.txt");
  write_json(dir / "class_distribution.json", distributions);
  dir.record_output("class_distribution", "class_distribution.json");

  std::vector<std::string> names;
  std::vector<const std::vector<double>*> rewards, losses;
  std::vector<std::string> loss_names;
  for (const auto& a : trained) {
    names.emplace_back(agents::agent_kind_name(a.kind));
    rewards.push_back(&a.series.episode_rewards);
    if (a.kind != agents::AgentKind::MonteCarlo) {
      loss_names.emplace_back(agents::agent_kind_name(a.kind));
      losses.push_back(&a.series.losses);
    }
  }
  write_wide_csv(dir / "rewards.csv", names, rewards);
  dir.record_output("rewards", "rewards.csv");
  write_wide_csv(dir / "losses.csv", loss_names, losses);
  dir.record_output("losses", "losses.csv");
  for (const auto& n : names) dir.record_output("agent." + n, n);

  write_manifest(dir, {ctx.command, o.train.seed, snapshot(sub), {{"data", dir.relative_input(data.input)}}},
                 seconds_since(start));
  ctx.out << table;
  return kExitOk;
}

struct IngestCommand {
  std::string log;
  bool strict = false;
  bool stats = false;
  std::string out;
  std::string branch_order = "emergency-first";
  double default_moisture = 200.0;
};

int run_ingest(const IngestCommand& o, Context& ctx) {
  const auto parsed = read_log(o.log, o.strict, ctx.in);
  report_skipped(parsed, o.log, ctx.err);
  ctx.out << "records " << parsed.records.size() << "\nwarnings " << parsed.warnings << '\n';
  if (o.stats) {
    const auto summary = hardware::summarize_log(parsed.records);
    const std::string text = hardware::format_summary(summary);
    ctx.out << text.substr(text.find('\n') + 1);
  }
  if (!o.out.empty()) {
    hardware::IngestConfig ingest;
    ingest.order = branch_order_from(o.branch_order);
    ingest.default_moisture = o.default_moisture;
    write_dataset_csv(hardware::log_to_dataset(parsed.records, ingest, o.log), fs::path(o.out));
  }
  return kExitOk;
}

struct ActuateCommand {
  std::string log;
  std::vector<std::string> readings;
  bool strict = false;
  hardware::HardwareThresholds thresholds;
};

int run_actuate(const ActuateCommand& o, Context& ctx) {
  o.thresholds.validate();
  std::vector<hardware::SensorLogRecord> records;
  if (!o.log.empty()) {
    const auto parsed = read_log(o.log, o.strict, ctx.in);
    report_skipped(parsed, o.log, ctx.err);
    records = parsed.records;
  }
  for (std::size_t i = 0; i < o.readings.size(); ++i) {
    auto r = hardware::parse_serial_line(o.readings[i], i + 1);
    r.sequence = records.size();
    records.push_back(r);
  }
  if (records.empty()) throw EmptyInput("actuate");
  for (const auto& r : records) {
    const auto s = hardware::actuate(r, o.thresholds);
    ctx.out << r.sequence << " servo=" << s.servo_angle << " led1=" << s.led1 << " led2=" << s.led2
            << " led3=" << s.led3 << '\n';
  }
  return kExitOk;
}

struct GradcheckCommand {
  std::string agent = "all";
  std::size_t configs = 20;
  std::uint64_t seed = 42;
  std::size_t input = 5;
  std::size_t hidden = 64;
  std::size_t steps = 5;
  std::size_t batch = 4;
  double fd_epsilon = 1e-5;
  double tolerance = 1e-4;
};

int run_gradcheck(const GradcheckCommand& o, Context& ctx) {
  std::vector<agents::AgentKind> kinds;
  if (o.agent == "all") {
    kinds = {agents::AgentKind::Hybrid, agents::AgentKind::LstmOnly, agents::AgentKind::RnnOnly,
             agents::AgentKind::Ann};
  } else {
    kinds = {*agents::agent_kind_from_name(o.agent)};
  }
  nnet::NetworkShape shape;
  shape.input_features = o.input;
  shape.hidden = o.hidden;
  shape.sequence_length = o.steps;

  bool all_passed = true;
  for (auto kind : kinds) {
    const auto topology = agents::topology_for(kind);
    double worst = 0.0;
    std::size_t params = 0, failed = 0;
    for (std::size_t c = 0; c < o.configs; ++c) {
      const auto seed = derive_seed(o.seed, 1000 * static_cast<std::uint64_t>(topology) + c);
      const auto gc = nnet::random_grad_check_case(topology, shape, o.batch, seed);
      const auto r = nnet::grad_check(gc.params, gc.batch, o.fd_epsilon);
      worst = std::max(worst, r.max_relative_error);
      params = r.checked;
      if (!r.passed(o.tolerance)) ++failed;
    }
    const bool ok = failed == 0;
    all_passed = all_passed && ok;
    ctx.out << nnet::topology_name(topology) << " configs=" << o.configs << " params=" << params
            << " max_relative_error=" << worst << " failed=" << failed << (ok ? " PASS" : " FAIL") << '\n';
  }
  return all_passed ? kExitOk : kExitInternal;
}

}  // namespace

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read config file " + path);
  std::vector<std::pair<std::string, std::string>> entries;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    strip_cr(line);
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos) body = body.substr(0, hash);
    body = trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) throw LineError("config entry without '='", number);
    std::string_view key = trim(body.substr(0, eq));
    while (!key.empty() && key.front() == '-') key.remove_prefix(1);
    const std::string_view value = trim(body.substr(eq + 1));
    if (key.empty()) throw LineError("config entry without a key", number);
    std::string k(key);
    std::replace(k.begin(), k.end(), '_', '-');
    entries.emplace_back(std::move(k), std::string(value));
  }
  return entries;
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  Context ctx{in, out, err, "spoilage " + join(args, " ")};

  CLI::App app{"Reinforcement-learning workbench for food-spoilage classification", "spoilage"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  std::string ignored_config;
  auto add_config = [&](CLI::App* sub) {
    sub->add_option("--config", ignored_config, "Flat key = value file; command-line flags take precedence");
  };

  DatagenOptions datagen;
  auto* datagen_cmd = app.add_subcommand("datagen", "Generate a labeled synthetic dataset CSV");
  datagen_cmd->add_option("--rows", datagen.rows, "Rows to generate")->check(CLI::PositiveNumber);
  datagen_cmd->add_option("--seed", datagen.seed, "Generator seed");
  datagen_cmd->add_option("--out", datagen.out, "Output CSV path")->required();
  datagen_cmd->add_option("--noise-sigma", datagen.noise_sigma, "Noise standard deviation")
      ->check(CLI::NonNegativeNumber);
  datagen_cmd->add_option("--branch-order", datagen.branch_order, "Classifier branch order for the labels")
      ->check(CLI::IsMember({"paper", "emergency-first"}));
  add_config(datagen_cmd);

  TrainCommand train;
  auto* train_cmd = app.add_subcommand("train", "Train one agent and evaluate it greedily on the same data");
  train_cmd->add_option("--agent", train.agent, "Agent kind")
      ->check(CLI::IsMember({"hybrid", "lstm", "rnn", "ann", "mc"}));
  train_cmd->add_option("--out", train.out, "Run directory");
  add_data_options(train_cmd, train.data);
  add_train_options(train_cmd, train.train);
  add_config(train_cmd);

  EvaluateCommand evaluate;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a saved agent greedily");
  evaluate_cmd->add_option("--model", evaluate.model, "Agent checkpoint (agent.ckpt of a run)")->required();
  evaluate_cmd->add_option("--out", evaluate.out, "Run directory");
  evaluate_cmd->add_option("--loss-window", evaluate.loss_window, "Losses averaged at each end")
      ->check(CLI::PositiveNumber);
  add_data_options(evaluate_cmd, evaluate.data);
  add_config(evaluate_cmd);

  CompareCommand compare;
  auto* compare_cmd = app.add_subcommand("compare", "Train and evaluate all five agents on one dataset");
  compare_cmd->add_option("--out", compare.out, "Run directory");
  add_data_options(compare_cmd, compare.data);
  add_train_options(compare_cmd, compare.train);
  add_config(compare_cmd);

  IngestCommand ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse a serial sensor log");
  ingest_cmd->add_option("--log", ingest.log, "Serial log path; '-' reads standard input")->required();
  ingest_cmd->add_flag("--strict", ingest.strict, "Fail at the first malformed line");
  ingest_cmd->add_flag("--stats", ingest.stats, "Print per-field mean and sample standard deviation");
  ingest_cmd->add_option("--out", ingest.out, "Write the readings as a labeled dataset CSV");
  ingest_cmd->add_option("--branch-order", ingest.branch_order, "Classifier branch order for the labels")
      ->check(CLI::IsMember({"paper", "emergency-first"}));
  ingest_cmd->add_option("--default-moisture", ingest.default_moisture, "Moisture filled into each reading");
  add_config(ingest_cmd);

  ActuateCommand actuate;
  auto* actuate_cmd = app.add_subcommand("actuate", "Emulate the firmware servo and LED response");
  auto* log_opt = actuate_cmd->add_option("--log", actuate.log, "Serial log path; '-' reads standard input");
  auto* reading_opt =
      actuate_cmd->add_option("--reading", actuate.readings, "One reading, T=..;H=..;MQ3=..;MQ4=..");
  log_opt->excludes(reading_opt);
  actuate_cmd->add_flag("--strict", actuate.strict, "Fail at the first malformed line");
  actuate_cmd->add_option("--temperature-threshold", actuate.thresholds.temperature, "Servo 180 / LED1 above this");
  actuate_cmd->add_option("--mq3-threshold", actuate.thresholds.mq3, "Servo 90 / LED2 above this");
  actuate_cmd->add_option("--mq4-threshold", actuate.thresholds.mq4, "Servo 90 / LED3 above this");
  add_config(actuate_cmd);

  GradcheckCommand gradcheck;
  auto* gradcheck_cmd =
      app.add_subcommand("gradcheck", "Check backpropagation against central finite differences");
  gradcheck_cmd->add_option("--agent", gradcheck.agent, "Topology to check")
      ->check(CLI::IsMember({"hybrid", "lstm", "rnn", "ann", "all"}));
  gradcheck_cmd->add_option("--configs", gradcheck.configs, "Random configurations per topology")
      ->check(CLI::PositiveNumber);
  gradcheck_cmd->add_option("--seed", gradcheck.seed, "Root seed");
  gradcheck_cmd->add_option("--input", gradcheck.input, "Features per step")->check(CLI::PositiveNumber);
  gradcheck_cmd->add_option("--hidden", gradcheck.hidden, "Hidden width")->check(CLI::PositiveNumber);
  gradcheck_cmd->add_option("--steps", gradcheck.steps, "Sequence length")->check(CLI::PositiveNumber);
  gradcheck_cmd->add_option("--batch", gradcheck.batch, "Samples per batch")->check(CLI::PositiveNumber);
  gradcheck_cmd->add_option("--fd-epsilon", gradcheck.fd_epsilon, "Finite-difference step");
  gradcheck_cmd->add_option("--tolerance", gradcheck.tolerance, "Largest accepted relative error");
  add_config(gradcheck_cmd);

  try {
    std::vector<std::string> merged = merge_config(args);
    std::reverse(merged.begin(), merged.end());
    try {
      app.parse(merged);
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kExitOk : kExitUsage;
    }

    if (datagen_cmd->parsed()) return run_datagen(datagen, ctx);
    if (train_cmd->parsed()) return run_train(train, train_cmd, ctx);
    if (evaluate_cmd->parsed()) return run_evaluate(evaluate, evaluate_cmd, ctx);
    if (compare_cmd->parsed()) return run_compare(compare, compare_cmd, ctx);
    if (ingest_cmd->parsed()) return run_ingest(ingest, ctx);
    if (actuate_cmd->parsed()) return run_actuate(actuate, ctx);
    if (gradcheck_cmd->parsed()) return run_gradcheck(gradcheck, ctx);
    err << "error: no subcommand\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace spoilage::cli

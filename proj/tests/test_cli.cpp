#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <json.hpp>

#include "spoilage/cli.hpp"

namespace fs = std::filesystem;
using spoilage::cli::run_cli;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result cli(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = run_cli(args, in, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t line_count(const std::string& text) { return std::count(text.begin(), text.end(), '\n'); }

// Manifest without the lines that differ between otherwise equal runs.
std::string stable_manifest(const fs::path& dir) {
  std::istringstream in(slurp(dir / "manifest.txt"));
  std::string kept;
  for (std::string line; std::getline(in, line);) {
    if (line.rfind("wall_clock_seconds", 0) != 0 && line.rfind("config.out", 0) != 0 &&
        line.rfind("command", 0) != 0) {
      kept += line + '\n';
    }
  }
  return kept;
}

class Scratch {
 public:
  Scratch() {
    static int counter = 0;
    root_ = fs::temp_directory_path() / ("spoilage_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  ~Scratch() { fs::remove_all(root_); }
  std::string operator/(const std::string& name) const { return (root_ / name).string(); }

 private:
  fs::path root_;
};

const std::vector<std::string> kSmallTraining = {"--episodes", "2", "--hidden", "8", "--batch-size", "8"};

std::vector<std::string> with(std::vector<std::string> a, const std::vector<std::string>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

}  // namespace

TEST_CASE("datagen writes header plus rows and is reproducible") {
  Scratch s;
  REQUIRE(cli({"datagen", "--rows", "1000", "--seed", "42", "--out", s / "a.csv"}).code == 0);
  REQUIRE(cli({"datagen", "--rows", "1000", "--seed", "42", "--out", s / "b.csv"}).code == 0);
  REQUIRE(cli({"datagen", "--rows", "1000", "--seed", "43", "--out", s / "c.csv"}).code == 0);
  const auto a = slurp(s / "a.csv");
  CHECK(line_count(a) == 1001);
  CHECK(a == slurp(s / "b.csv"));
  CHECK(a != slurp(s / "c.csv"));
}

TEST_CASE("usage errors exit 1") {
  CHECK(cli({}).code == 1);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"train", "--agent", "dqn"}).code == 1);
  CHECK(cli({"datagen"}).code == 1);
  CHECK(cli({"datagen", "--rows", "0", "--out", "x.csv"}).code == 1);
  CHECK(cli({"train", "--data", "a.csv", "--log", "b.log"}).code == 1);
  CHECK(cli({"--help"}).code == 0);
}

TEST_CASE("missing input exits 2 and creates no run directory") {
  Scratch s;
  const auto r = cli({"train", "--data", s / "absent.csv", "--out", s / "run"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error") != std::string::npos);
  CHECK_FALSE(fs::exists(s / "run"));
  CHECK(cli({"evaluate", "--model", s / "absent.ckpt", "--out", s / "ev"}).code == 2);
  CHECK_FALSE(fs::exists(s / "ev"));
}

TEST_CASE("invalid training configuration exits 2 before training") {
  Scratch s;
  CHECK(cli(with({"train", "--rows", "10", "--gamma", "1", "--out", s / "run"}, kSmallTraining)).code == 2);
  CHECK_FALSE(fs::exists(s / "run"));
  CHECK(cli(with({"train", "--rows", "10", "--layout", "window:0", "--out", s / "run"}, kSmallTraining)).code != 0);
}

TEST_CASE("train writes a complete run directory, and evaluate reloads it") {
  Scratch s;
  const auto r = cli(with({"train", "--agent", "rnn", "--rows", "30", "--out", s / "run"}, kSmallTraining));
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("RNN: accuracy", 0) == 0);
  for (const char* f : {"manifest.txt", "report.json", "rewards.csv", "losses.csv", "epsilons.csv",
                        "class_distribution.json", "agent.ckpt"}) {
    CHECK(fs::exists(fs::path(s / "run") / f));
  }
  CHECK_FALSE(fs::exists(fs::path(s / "run") / "manifest.txt.tmp"));
  const auto manifest = slurp(fs::path(s / "run") / "manifest.txt");
  CHECK(manifest.find("seed = 42") != std::string::npos);
  CHECK(manifest.find("config.episodes = 2") != std::string::npos);
  CHECK(manifest.find("config.gamma = 0.95") != std::string::npos);
  CHECK(manifest.find("config.strict = false") != std::string::npos);
  CHECK(manifest.find("output.checkpoint = agent.ckpt") != std::string::npos);

  const auto report = nlohmann::json::parse(slurp(fs::path(s / "run") / "report.json"));
  CHECK(report.at("steps") == 30);
  const double acc = report.at("spoilage_accuracy"), rts = report.at("reward_to_step_ratio");
  CHECK(std::abs(rts - (2 * acc - 1)) <= 1e-12);
  CHECK(line_count(slurp(fs::path(s / "run") / "rewards.csv")) == 3);

  const auto e = cli({"evaluate", "--model", s / "run/agent.ckpt", "--rows", "30", "--out", s / "ev"});
  REQUIRE(e.code == 0);
  const auto again = nlohmann::json::parse(slurp(fs::path(s / "ev") / "report.json"));
  CHECK(again.at("spoilage_accuracy") == report.at("spoilage_accuracy"));
  CHECK(again.at("spoilage_class_distribution") == report.at("spoilage_class_distribution"));
  CHECK(line_count(slurp(fs::path(s / "ev") / "rewards.csv")) == 31);
}

TEST_CASE("Monte Carlo training writes no loss series") {
  Scratch s;
  REQUIRE(cli({"train", "--agent", "mc", "--rows", "30", "--episodes", "3", "--out", s / "mc"}).code == 0);
  CHECK_FALSE(fs::exists(fs::path(s / "mc") / "losses.csv"));
  const auto report = nlohmann::json::parse(slurp(fs::path(s / "mc") / "report.json"));
  CHECK(report.at("loss_decrease_rate").is_null());
}

TEST_CASE("compare is deterministic and covers all five agents") {
  Scratch s;
  REQUIRE(cli({"datagen", "--rows", "20", "--seed", "7", "--out", s / "d.csv"}).code == 0);
  const auto args = with({"compare", "--data", s / "d.csv"}, kSmallTraining);
  const auto a = cli(with(args, {"--out", s / "a"}));
  const auto b = cli(with(args, {"--out", s / "b"}));
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  for (const char* f : {"report.json", "table.txt", "class_distribution.json", "rewards.csv", "losses.csv"}) {
    CHECK(slurp(fs::path(s / "a") / f) == slurp(fs::path(s / "b") / f));
  }
  CHECK(stable_manifest(s / "a") == stable_manifest(s / "b"));

  const auto report = nlohmann::json::parse(slurp(fs::path(s / "a") / "report.json"));
  REQUIRE(report.at("agents").size() == 5);
  std::vector<std::string> names;
  for (const auto& row : report.at("agents")) {
    names.push_back(row.at("agent"));
    for (const char* key : {"spoilage_accuracy", "reward_to_step_ratio", "loss_decrease_rate",
                            "exploration_rate_decay", "spoilage_class_distribution", "identity_consistent"}) {
      CHECK(row.contains(key));
    }
    CHECK(row.at("identity_consistent") == true);
  }
  CHECK(names == std::vector<std::string>{"LSTM+RNN", "ANN", "LSTM", "RNN", "Monte Carlo"});
  CHECK(line_count(slurp(fs::path(s / "a") / "table.txt")) == 7);
  for (const char* sub : {"hybrid", "ann", "lstm", "rnn", "mc"}) CHECK(fs::exists(fs::path(s / "a") / sub / "agent.ckpt"));
  const auto header = slurp(fs::path(s / "a") / "rewards.csv").substr(0, 40);
  CHECK(header.rfind("index,hybrid,ann,lstm,rnn,mc", 0) == 0);
}

TEST_CASE("config file values apply unless overridden on the command line") {
  Scratch s;
  {
    std::ofstream cfg(s / "run.cfg");
    cfg << "# small run\nrows = 15\nepisodes = 2\nhidden = 8\nbatch_size = 8\n--seed = 5\nstrict = false\n";
  }
  const auto r = cli({"train", "--agent", "ann", "--config", s / "run.cfg", "--seed", "9", "--out", s / "run"});
  REQUIRE(r.code == 0);
  const auto manifest = slurp(fs::path(s / "run") / "manifest.txt");
  CHECK(manifest.find("seed = 9\n") != std::string::npos);
  CHECK(manifest.find("config.rows = 15") != std::string::npos);
  CHECK(manifest.find("config.hidden = 8") != std::string::npos);
  CHECK(nlohmann::json::parse(slurp(fs::path(s / "run") / "report.json")).at("steps") == 15);

  {
    std::ofstream bad(s / "bad.cfg");
    bad << "rows 15\n";
  }
  CHECK(cli({"train", "--config", s / "bad.cfg", "--out", s / "x"}).code == 2);
  CHECK(cli({"train", "--config", s / "none.cfg", "--out", s / "x"}).code == 2);
}

TEST_CASE("ingest strict and lenient") {
  const std::string log = "T=29;H=93;MQ3=260;MQ4=330\nnot a reading\nT=20;H=50;MQ3=100;MQ4=100\n";
  const auto lenient = cli({"ingest", "--log", "-"}, log);
  CHECK(lenient.code == 0);
  CHECK(lenient.out == "records 2\nwarnings 1\n");
  const auto strict = cli({"ingest", "--log", "-", "--strict"}, log);
  CHECK(strict.code == 2);
  CHECK(strict.err.find("2") != std::string::npos);

  Scratch s;
  const auto stats = cli({"ingest", "--log", "-", "--stats", "--out", s / "log.csv"}, log);
  REQUIRE(stats.code == 0);
  CHECK(stats.out.find("temperature mean 24.5000 std 6.3640") != std::string::npos);
  const auto csv = slurp(s / "log.csv");
  CHECK(line_count(csv) == 3);
  CHECK(csv.find(",3\n") != std::string::npos);
  CHECK(cli({"ingest", "--log", s / "absent.log"}).code == 2);
}

TEST_CASE("training on an ingested log") {
  Scratch s;
  {
    std::ofstream log(s / "serial.log");
    for (int i = 0; i < 12; ++i) log << "T=" << 20 + i << ";H=" << 80 + i << ";MQ3=" << 200 + 10 * i << ";MQ4=300\n";
  }
  const auto r = cli(with({"train", "--agent", "ann", "--log", s / "serial.log", "--out", s / "run"}, kSmallTraining));
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(slurp(fs::path(s / "run") / "report.json")).at("steps") == 12);
}

TEST_CASE("actuate prints one line per reading") {
  const auto r = cli({"actuate", "--reading", "T=30;H=50;MQ3=100;MQ4=100", "--reading", "T=20;H=50;MQ3=300;MQ4=400"});
  CHECK(r.code == 0);
  CHECK(r.out == "0 servo=180 led1=1 led2=0 led3=0\n1 servo=90 led1=0 led2=1 led3=1\n");
  CHECK(cli({"actuate", "--reading", "T=30;H=50"}).code == 2);
  CHECK(cli({"actuate", "--log", "-"}, "").code == 2);
  const auto raised = cli({"actuate", "--temperature-threshold", "35", "--reading", "T=30;H=50;MQ3=1;MQ4=1"});
  CHECK(raised.out == "0 servo=0 led1=0 led2=0 led3=0\n");
}

TEST_CASE("gradcheck subcommand") {
  const auto ok = cli({"gradcheck", "--agent", "all", "--configs", "2", "--hidden", "4", "--steps", "3"});
  CHECK(ok.code == 0);
  CHECK(line_count(ok.out) == 4);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  const auto bad = cli({"gradcheck", "--agent", "ann", "--configs", "1", "--hidden", "4", "--tolerance", "0"});
  CHECK(bad.code == 3);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}

TEST_CASE("installed binary maps exit codes") {
  Scratch s;
  const std::string bin = SPOILAGE_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int raw = std::system((cmd + " >/dev/null 2>&1").c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status(bin + " datagen --rows 5 --out " + s / "d.csv") == 0);
  CHECK(status(bin + " bogus") == 1);
  CHECK(status(bin + " train --data " + s / "missing.csv") == 2);
  CHECK(line_count(slurp(s / "d.csv")) == 6);
}

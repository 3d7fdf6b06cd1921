#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spoilage/errors.hpp"
#include "spoilage/hardware.hpp"
#include "spoilage/random.hpp"

using namespace spoilage;
using namespace spoilage::hardware;

namespace {

SensorLogRecord rec(double t, double h, double mq3, double mq4) { return {0, t, h, mq3, mq4}; }

SensorLogRecord random_record(Rng& rng) {
  return rec(rng.uniform(-10, 60), rng.uniform(0, 100), rng.uniform(0, 1000), rng.uniform(0, 1000));
}

// Textbook two-pass mean and sample standard deviation.
FieldStats two_pass(const std::vector<double>& v) {
  double mean = 0;
  for (double x : v) mean += x;
  mean /= double(v.size());
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / double(v.size() - 1))};
}

}  // namespace

TEST_CASE("actuation examples") {
  const HardwareThresholds t;
  CHECK(actuate(rec(20, 50, 100, 100), t) == ActuatorState{0, false, false, false});
  CHECK(actuate(rec(30, 50, 100, 100), t) == ActuatorState{180, true, false, false});
  CHECK(actuate(rec(20, 50, 300, 100), t) == ActuatorState{90, false, true, false});
  CHECK(actuate(rec(20, 50, 100, 400), t) == ActuatorState{90, false, false, true});
  CHECK(actuate(rec(30, 50, 300, 400), t) == ActuatorState{90, true, true, true});
  CHECK(actuate(rec(28.5, 99, 270, 340), t) == ActuatorState{0, false, false, false});
}

TEST_CASE("actuation follows the firmware ordering") {
  const HardwareThresholds t;
  Rng rng(12);
  for (int n = 0; n < 5000; ++n) {
    const auto r = random_record(rng);
    const auto s = actuate(r, t);
    const bool hot = r.temperature > t.temperature, gas3 = r.mq3 > t.mq3, gas4 = r.mq4 > t.mq4;
    CHECK(s.led1 == hot);
    CHECK(s.led2 == gas3);
    CHECK(s.led3 == gas4);
    CHECK(s.servo_angle == (gas3 || gas4 ? 90 : hot ? 180 : 0));
  }
}

TEST_CASE("threshold validation") {
  CHECK_THROWS_AS((HardwareThresholds{0.0, 270, 340}.validate()), InvalidConfig);
  CHECK_THROWS_AS((HardwareThresholds{28.5, NAN, 340}.validate()), InvalidConfig);
}

TEST_CASE("line parsing") {
  CHECK(parse_serial_line("T=25.5;H=60;MQ3=200;MQ4=150") == rec(25.5, 60, 200, 150));
  CHECK(parse_serial_line("  T=1 ; H=2;MQ3=3 ;MQ4=-4e1  ") == rec(1, 2, 3, -40));
  for (const char* bad : {"T=1;H=2;MQ3=3", "H=2;T=1;MQ3=3;MQ4=4", "T=1;H=2;MQ3=3;MQ4=x", "t=1;H=2;MQ3=3;MQ4=4",
                          "T=1;H=2;MQ3=3;MQ4=inf", "T=1;H=2;MQ3=3;MQ4=4;X=5", "garbage"}) {
    CHECK_THROWS_AS(parse_serial_line(bad, 9), MalformedLine);
  }
}

TEST_CASE("strict parsing stops at the first bad line") {
  std::istringstream in("garbage\nT=1;H=2;MQ3=3;MQ4=4\n");
  try {
    parse_serial_log(in, ParseMode::Strict);
    FAIL("expected MalformedLine");
  } catch (const MalformedLine& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("lenient parsing skips and counts bad lines") {
  std::istringstream in("T=1;H=2;MQ3=3;MQ4=4\r\nbad\n\nT=5;H=6;MQ3=7;MQ4=8\nT=9;H=10;MQ3=11;MQ4=12\n");
  const auto r = parse_serial_log(in, ParseMode::Lenient);
  REQUIRE(r.records.size() == 3);
  CHECK(r.warnings == 1);
  CHECK(r.skipped_lines == std::vector<std::size_t>{2});
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.records[i].sequence == i);
  CHECK(r.records[2].mq4 == 12);
}

TEST_CASE("summary examples") {
  const auto s = summarize_log({rec(1, 5, 7, 0), rec(2, 5, 7, 0), rec(3, 5, 7, 0)});
  CHECK(s.count == 3);
  CHECK(s.fields[0].mean == 2.0);
  CHECK(s.fields[0].stddev == 1.0);
  CHECK(s.fields[1].mean == 5.0);
  CHECK(s.fields[1].stddev == 0.0);
  CHECK_THROWS_AS(summarize_log({rec(1, 1, 1, 1)}), TooFewRecords);
  const std::string text = format_summary(s);
  CHECK(text.rfind("records 3\n", 0) == 0);
  CHECK(text.find("temperature mean 2.0000 std 1.0000") != std::string::npos);
}

TEST_CASE("single-pass summary matches the two-pass oracle") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SensorLogRecord> records;
    const std::size_t n = 2 + rng.uniform_index(1000);
    for (std::size_t i = 0; i < n; ++i) records.push_back(random_record(rng));
    const auto s = summarize_log(records);
    for (std::size_t k = 0; k < 4; ++k) {
      std::vector<double> col;
      for (const auto& r : records) col.push_back(std::array{r.temperature, r.humidity, r.mq3, r.mq4}[k]);
      const auto want = two_pass(col);
      CHECK(std::abs(s.fields[k].mean - want.mean) <= 1e-12 * std::max(1.0, std::abs(want.mean)));
      CHECK(std::abs(s.fields[k].stddev - want.stddev) <= 1e-12 * std::max(1.0, want.stddev));
    }
  }
}

TEST_CASE("records become a labeled dataset") {
  const IngestConfig config;
  const auto d = log_to_dataset({rec(29, 93, 260, 330), rec(20, 50, 100, 100), rec(30, 50, 280, 100)}, config, "log");
  REQUIRE(d.size() == 3);
  CHECK(d[0].reading == SensorReading{29, 93, 200, 260, 330});
  CHECK(d[0].level == SpoilageLevel::HighEmergency);
  CHECK(d[1].level == SpoilageLevel::Low);
  CHECK(d[2].level == SpoilageLevel::Moderate);
  REQUIRE(d.rule().has_value());
  CHECK(d.rule()->thresholds == realtime_thresholds());

  const auto one = log_to_dataset({rec(20, 50, 100, 100)}, config, "log");
  CHECK(one.size() == 1);
  CHECK(one[0].level == SpoilageLevel::Low);
  CHECK_THROWS_AS(log_to_dataset({}, config, "log"), EmptyDataset);

  IngestConfig literal = config;
  literal.order = BranchOrder::PaperLiteral;
  CHECK(log_to_dataset({rec(29, 93, 260, 330)}, literal, "log")[0].level == SpoilageLevel::NoTracking);
  IngestConfig wet = config;
  wet.default_moisture = 300;
  CHECK(log_to_dataset({rec(20, 50, 100, 100)}, wet, "log")[0].level == SpoilageLevel::NoTracking);
}

TEST_CASE("format and parse round trip") {
  Rng rng(5);
  std::ostringstream text;
  std::vector<SensorLogRecord> original;
  for (int i = 0; i < 1000; ++i) {
    auto r = random_record(rng);
    r.sequence = i;
    original.push_back(r);
    text << format_record(r) << '\n';
  }
  std::istringstream in(text.str());
  const auto back = parse_serial_log(in);
  REQUIRE(back.records.size() == original.size());
  for (std::size_t i = 0; i < original.size(); ++i) {
    CHECK(back.records[i] == original[i]);
    CHECK(std::abs(back.records[i].temperature - original[i].temperature) <= 1e-6);
  }
}

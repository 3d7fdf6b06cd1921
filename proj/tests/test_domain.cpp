#include <doctest.h>

#include <cmath>
#include <limits>

#include "spoilage/domain.hpp"
#include "spoilage/errors.hpp"

using namespace spoilage;

TEST_CASE("validate_reading accepts a finite reading unchanged") {
  const SensorReading r{25, 60, 200, 150, 250};
  CHECK(validate_reading(r) == r);
}

TEST_CASE("validate_reading names the first non-finite field") {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  try {
    validate_reading({nan, 60, 200, 150, 250});
    FAIL("expected NonFiniteField");
  } catch (const NonFiniteField& e) {
    CHECK(e.field() == "temperature");
  }
  try {
    validate_reading({25, 60, 200, 150, inf});
    FAIL("expected NonFiniteField");
  } catch (const NonFiniteField& e) {
    CHECK(e.field() == "mq4");
  }
  CHECK_THROWS_AS(validate_reading({25, -inf, 200, 150, 250}), NonFiniteField);
}

TEST_CASE("validate_reading is idempotent") {
  const SensorReading r{-3.5, 140.0, 0.0, 1e9, 12.25};
  const SensorReading once = validate_reading(r);
  CHECK(validate_reading(once) == once);
}

TEST_CASE("level codes round-trip through both name tables") {
  for (auto level : kAllLevels) {
    const int c = code(level);
    CHECK(level_from_code(c) == level);
    CHECK(level_from_name(level_name(level)) == level);
    CHECK(level_from_action_name(action_name(level)) == level);
    CHECK(code(*level_from_name(level_name(*level_from_code(c)))) == c);
  }
  CHECK_FALSE(level_from_code(4).has_value());
  CHECK_FALSE(level_from_code(-1).has_value());
  CHECK_FALSE(level_from_name("Severe").has_value());
}

TEST_CASE("four distinct action codes exist") {
  CHECK(kActionCount == 4);
  CHECK(code(SpoilageLevel::HighEmergency) == 3);
  CHECK(level_name(SpoilageLevel::NoTracking) != level_name(SpoilageLevel::HighEmergency));
}

TEST_CASE("normalization ranges reject min >= max and non-finite bounds") {
  std::array<Range, kFeatureCount> ok{};
  for (auto& r : ok) r = {0.0, 1.0};
  CHECK_NOTHROW(NormalizationRanges{ok});
  for (std::size_t i = 0; i < kFeatureCount; ++i) {
    auto bad = ok;
    bad[i] = {2.0, 2.0};
    CHECK_THROWS_AS(NormalizationRanges{bad}, InvalidConfig);
    bad[i] = {3.0, 2.0};
    CHECK_THROWS_AS(NormalizationRanges{bad}, InvalidConfig);
    bad[i] = {0.0, std::numeric_limits<double>::infinity()};
    CHECK_THROWS_AS(NormalizationRanges{bad}, InvalidConfig);
  }
}

TEST_CASE("threshold sets") {
  const auto s = synthetic_thresholds();
  CHECK(s == SpoilageThresholds{30, 70, 250, 180, 280});
  const auto rt = realtime_thresholds();
  CHECK(rt.temperature == 28.5);
  CHECK(rt.humidity == 92.0);
  CHECK(rt.mq3 == 270.0);
  CHECK(rt.mq4 == 340.0);
  CHECK(rt.moisture == s.moisture);
  CHECK_THROWS_AS((SpoilageThresholds{30, 0, 250, 180, 280}.validate()), InvalidConfig);
  CHECK_THROWS_AS((SpoilageThresholds{30, 70, std::nan(""), 180, 280}.validate()), InvalidConfig);
}

TEST_CASE("ranges report threshold coverage") {
  std::array<Range, kFeatureCount> r{};
  for (auto& x : r) x = {0.0, 1000.0};
  CHECK(NormalizationRanges(r).covers(synthetic_thresholds()));
  r[1] = {0.0, 50.0};
  CHECK_FALSE(NormalizationRanges(r).covers(synthetic_thresholds()));
}

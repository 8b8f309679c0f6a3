// Copyright The voxroute Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <random>
#include <stdexcept>

#include "test_support.hpp"
#include "voxroute/router.hpp"

namespace voxroute {
namespace {

using testing::metrics;
using Rules = std::vector<RoutingRule>;

TEST(Router, CpuAndTempBothHighGoesOffline) {
  auto d = decide(metrics(85, 55, 100));
  EXPECT_EQ(d.mode, InferenceMode::Offline);
  EXPECT_EQ(d.fired_rules, Rules{RoutingRule::CpuAndTempHigh});
}

TEST(Router, SlowNetworkGoesOffline) {
  auto d = decide(metrics(10, 30, 200));
  EXPECT_EQ(d.mode, InferenceMode::Offline);
  EXPECT_EQ(d.fired_rules, Rules{RoutingRule::LatencyHigh});
}

TEST(Router, HighCpuAloneStaysOnline) {
  auto d = decide(metrics(85, 40, 100));
  EXPECT_EQ(d.mode, InferenceMode::Online);
  EXPECT_TRUE(d.fired_rules.empty());
}

TEST(Router, ThresholdEqualityStaysOnline) {
  auto d = decide(metrics(80, 50, 150));
  EXPECT_EQ(d.mode, InferenceMode::Online);
  EXPECT_TRUE(d.fired_rules.empty());
}

TEST(Router, UnreachableProbeGoesOffline) {
  auto d = decide(metrics(10, 30, kLatencyUnreachable));
  EXPECT_EQ(d.mode, InferenceMode::Offline);
  EXPECT_EQ(d.fired_rules, Rules{RoutingRule::LatencyHigh});
}

TEST(Router, BothRulesReportedInEnumOrder) {
  auto d = decide(metrics(99, 99, 999));
  EXPECT_EQ(d.fired_rules, (Rules{RoutingRule::CpuAndTempHigh, RoutingRule::LatencyHigh}));
}

TEST(Router, DecisionCarriesTheMetricsItSaw) {
  auto m = metrics(12.5, 33.25, 77.0);
  EXPECT_EQ(decide(m).metrics_used, m);
}

TEST(Router, TruthTable) {
  for (int bits = 0; bits < 8; ++bits) {
    const bool cpu_hi = bits & 1, temp_hi = bits & 2, lat_hi = bits & 4;
    auto m = metrics(cpu_hi ? 80.5 : 79.5, temp_hi ? 50.5 : 49.5, lat_hi ? 150.5 : 149.5);
    const bool offline = (cpu_hi && temp_hi) || lat_hi;
    EXPECT_EQ(decide(m).mode, offline ? InferenceMode::Offline : InferenceMode::Online) << "bits=" << bits;
  }
}

TEST(Router, CustomThresholds) {
  RoutingThresholds t{60, 40, 100};
  EXPECT_EQ(decide(metrics(61, 41, 10), t).mode, InferenceMode::Offline);
  EXPECT_EQ(decide(metrics(61, 40, 10), t).mode, InferenceMode::Online);
  EXPECT_EQ(decide(metrics(0, 0, 101), t).mode, InferenceMode::Offline);
}

TEST(Router, ThresholdCheckRejectsNonsense) {
  EXPECT_THROW((RoutingThresholds{-1, 50, 150}.check()), std::invalid_argument);
  EXPECT_THROW((RoutingThresholds{80, 50, -5}.check()), std::invalid_argument);
  EXPECT_NO_THROW(RoutingThresholds{}.check());
}

TEST(Router, StringRoundTrip) {
  for (auto m : {InferenceMode::Online, InferenceMode::Offline}) {
    EXPECT_EQ(inference_mode_from_string(to_string(m)), m);
  }
  for (auto r : {RoutingRule::CpuAndTempHigh, RoutingRule::LatencyHigh}) {
    EXPECT_EQ(routing_rule_from_string(to_string(r)), r);
  }
  EXPECT_EQ(to_string(RoutingRule::CpuAndTempHigh), "cpu_and_temp_high");
  EXPECT_THROW(inference_mode_from_string("hybrid"), std::invalid_argument);
}

class RouterProperty : public ::testing::Test {
 protected:
  std::mt19937_64 rng{7};
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
};

TEST_F(RouterProperty, Purity) {
  for (int i = 0; i < 1000; ++i) {
    auto m = metrics(uniform(0, 100), uniform(20, 90), uniform(0, 400));
    EXPECT_EQ(decide(m), decide(m));
  }
}

TEST_F(RouterProperty, LatencyMonotone) {
  for (int i = 0; i < 1000; ++i) {
    auto m = metrics(uniform(0, 100), uniform(20, 90), uniform(0, 400));
    auto d = decide(m);
    if (d.fired_rules.empty() || d.fired_rules.back() != RoutingRule::LatencyHigh) continue;
    auto slower = m;
    slower.latency_ms += uniform(0, 500);
    EXPECT_EQ(decide(slower).mode, InferenceMode::Offline);
  }
}

TEST_F(RouterProperty, CpuTempJointlyMonotone) {
  for (int i = 0; i < 1000; ++i) {
    auto m = metrics(uniform(0, 100), uniform(20, 90), uniform(0, 400));
    if (decide(m).mode != InferenceMode::Offline) continue;
    auto hotter = m;
    hotter.cpu_pct = std::min(100.0, hotter.cpu_pct + uniform(0, 30));
    hotter.temp_c += uniform(0, 30);
    EXPECT_EQ(decide(hotter).mode, InferenceMode::Offline);
  }
}

TEST_F(RouterProperty, SafeRangeIgnoresTemperature) {
  for (int i = 0; i < 200; ++i) {
    const double cpu = uniform(0, 80), lat = uniform(0, 150);
    for (double temp = -20; temp <= 120; temp += 0.5) {
      EXPECT_EQ(decide(metrics(cpu, temp, lat)).mode, InferenceMode::Online);
    }
  }
}

}  // namespace
}  // namespace voxroute

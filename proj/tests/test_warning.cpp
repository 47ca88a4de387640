#include "fcw/warning.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "testutil.hpp"

using namespace fcw;

namespace {

const FcwParams kDefaults{};

// Lead cruising, then braking at `decel` from event_time to standstill.
std::vector<double> braking_lead_speeds(double v0, double event_time,
                                        double decel, std::size_t n,
                                        double dt) {
  std::vector<double> speeds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    speeds[i] = t <= event_time ? v0 : std::max(0.0, v0 - decel * (t - event_time));
  }
  return speeds;
}

std::vector<double> accelerating_lead_speeds(double v0, double event_time,
                                             double accel, std::size_t n,
                                             double dt) {
  std::vector<double> speeds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    speeds[i] = t <= event_time ? v0 : v0 + accel * (t - event_time);
  }
  return speeds;
}

std::vector<bool> window_attention(std::size_t n, double dt, double start,
                                   double end) {
  std::vector<bool> attended(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    if (t >= start - 1e-9 && t < end - 1e-9) {
      attended[i] = false;
    }
  }
  return attended;
}

}  // namespace

TEST(SdaWarningDistance, ZeroSpeedsGiveZero) {
  EXPECT_DOUBLE_EQ(sda_warning_distance(0.0, 0.0, kDefaults), 0.0);
}

TEST(SdaWarningDistance, HandValue) {
  // 20*1.5 + 400/12 - 100/12 = 55.0
  EXPECT_NEAR(sda_warning_distance(20.0, 10.0, kDefaults), 55.0, 1e-9);
}

TEST(SdaWarningDistance, ClampsNegativeCore) {
  EXPECT_DOUBLE_EQ(sda_warning_distance(0.0, 20.0, kDefaults), 0.0);
  EXPECT_LT(sda_warning_core(0.0, 20.0, kDefaults), 0.0);
}

TEST(SdaWarningDistance, NegativeSpeedsThrow) {
  EXPECT_THROW(sda_warning_distance(-1.0, 5.0, kDefaults), std::invalid_argument);
  EXPECT_THROW(sda_warning_distance(5.0, -1.0, kDefaults), std::invalid_argument);
}

TEST(SdaWarningDistance, MatchesBrakeToStopOracle) {
  std::mt19937_64 rng(314);
  std::uniform_real_distribution<double> v_ego(3.0, 35.0);
  std::uniform_real_distribution<double> v_lead(0.0, 40.0);
  std::uniform_real_distribution<double> t_dr(0.5, 2.5);
  std::uniform_real_distribution<double> a(3.0, 9.0);
  for (int trial = 0; trial < 10; ++trial) {
    FcwParams p;
    p.t_dr = t_dr(rng);
    p.a_ego_max = a(rng);
    p.a_lead_max = a(rng);
    const double ve = v_ego(rng);
    const double vl = v_lead(rng);
    const double oracle = fcwtest::brake_to_stop_gap_oracle(
        ve, vl, p.t_dr, p.a_ego_max, p.a_lead_max);
    EXPECT_NEAR(sda_warning_distance(ve, vl, p), oracle, 0.5);
  }
}

TEST(AttentionAwareWarningDistance, EqualsSdaWhenHatMatches) {
  const double d = attention_aware_warning_distance(20.0, 10.0, 10.0, kDefaults);
  EXPECT_EQ(d, sda_warning_distance(20.0, 10.0, kDefaults));
}

TEST(AttentionAwareWarningDistance, HandValues) {
  // Earlier-warning branch: 55.0 + 1.8*4 = 62.2
  EXPECT_NEAR(attention_aware_warning_distance(20.0, 10.0, 14.0, kDefaults),
              62.2, 1e-9);
  // Delayed-warning branch: core 47.0, adjustment -7.2
  EXPECT_NEAR(attention_aware_warning_distance(20.0, 14.0, 10.0, kDefaults),
              39.8, 1e-9);
}

TEST(AttentionAwareWarningDistance, Directionality) {
  std::mt19937_64 rng(159);
  std::uniform_real_distribution<double> speed(0.0, 35.0);
  for (int trial = 0; trial < 500; ++trial) {
    const double ve = speed(rng);
    const double vl = speed(rng);
    const double vh = speed(rng);
    const double conv = sda_warning_distance(ve, vl, kDefaults);
    const double aware = attention_aware_warning_distance(ve, vl, vh, kDefaults);
    if (vh > vl) {
      EXPECT_GE(aware, conv);
    } else if (vh < vl) {
      EXPECT_LE(aware, conv);
    } else {
      EXPECT_EQ(aware, conv);
    }
  }
}

TEST(EvaluateSda, StationaryPairNeverWarns) {
  const std::size_t n = 100;
  const Episode e = fcwtest::straight_episode(
      0.0, std::vector<double>(n, 0.0), 30.0, std::vector<bool>(n, true));
  const WarningTrace w = evaluate_sda(e, kDefaults);
  EXPECT_FALSE(w.first_warning_time_s.has_value());
  for (const bool warn : w.warn) {
    EXPECT_FALSE(warn);
  }
}

TEST(EvaluateSda, ClosingOnStoppedLead) {
  // Ego at 20 m/s on a stopped lead from 100 m. Envelope is
  // 30 + 400/12 = 63.33 m; an independent per-step scan of the same
  // kinematics pins the first crossing.
  const std::size_t n = 151;
  const Episode e = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 0.0), 100.0, std::vector<bool>(n, true));

  std::optional<double> expected;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = 0.1 * static_cast<double>(i);
    const double gap = 100.0 - 20.0 * t;
    if (gap < 20.0 * 1.5 + 400.0 / 12.0) {
      expected = t;
      break;
    }
  }
  ASSERT_TRUE(expected.has_value());
  EXPECT_NEAR(*expected, 1.9, 1e-9);

  const WarningTrace w = evaluate_sda(e, kDefaults);
  ASSERT_TRUE(w.first_warning_time_s.has_value());
  EXPECT_NEAR(*w.first_warning_time_s, *expected, 1e-9);
}

TEST(EvaluateSda, ImmediateTriggerAtStart) {
  const std::size_t n = 50;
  const Episode e = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 0.0), 10.0, std::vector<bool>(n, true));
  const WarningTrace w = evaluate_sda(e, kDefaults);
  ASSERT_TRUE(w.first_warning_time_s.has_value());
  EXPECT_DOUBLE_EQ(*w.first_warning_time_s, e.start_time());
}

TEST(EvaluateSda, InvalidEpisodeThrows) {
  Episode e = fcwtest::straight_episode(10.0, {5.0, 5.0}, 20.0, {true});
  EXPECT_THROW(evaluate_sda(e, kDefaults), std::invalid_argument);
}

TEST(EvaluateAttentionAware, FullAttentionMatchesSdaBitExact) {
  const std::size_t n = 151;
  const auto speeds = braking_lead_speeds(18.0, 4.0, 5.0, n, 0.1);
  const Episode e = fcwtest::straight_episode(20.0, speeds, 55.0,
                                              std::vector<bool>(n, true));
  const WarningTrace conv = evaluate_sda(e, kDefaults);
  const WarningTrace aware = evaluate_attention_aware(e, kDefaults);
  EXPECT_EQ(conv.warn, aware.warn);
  EXPECT_EQ(conv.first_warning_time_s, aware.first_warning_time_s);
}

TEST(EvaluateAttentionAware, BrakeDuringInattentionWarnsEarlier) {
  const std::size_t n = 151;
  const auto speeds = braking_lead_speeds(18.0, 4.0, 5.0, n, 0.1);
  const Episode e = fcwtest::straight_episode(
      20.0, speeds, 55.0, window_attention(n, 0.1, 3.0, 8.0));
  const WarningTrace conv = evaluate_sda(e, kDefaults);
  const WarningTrace aware = evaluate_attention_aware(e, kDefaults);
  ASSERT_TRUE(conv.first_warning_time_s.has_value());
  ASSERT_TRUE(aware.first_warning_time_s.has_value());
  EXPECT_LT(*aware.first_warning_time_s, *conv.first_warning_time_s);
}

TEST(EvaluateAttentionAware, AccelerateDuringInattentionWarnsLater) {
  // Lead speeds up inside the blind window while the ego closes in; the
  // counterfactual speed lags below the actual one, shrinking the envelope
  // until the driver re-attends at 6.0 s.
  const std::size_t n = 151;
  const auto speeds = accelerating_lead_speeds(10.0, 3.5, 2.0, n, 0.1);
  const Episode e = fcwtest::straight_episode(
      20.0, speeds, 95.0, window_attention(n, 0.1, 3.0, 6.0));
  const WarningTrace conv = evaluate_sda(e, kDefaults);
  const WarningTrace aware = evaluate_attention_aware(e, kDefaults);
  ASSERT_TRUE(conv.first_warning_time_s.has_value());
  ASSERT_TRUE(aware.first_warning_time_s.has_value());
  EXPECT_GT(*aware.first_warning_time_s, *conv.first_warning_time_s);
  EXPECT_NEAR(*aware.first_warning_time_s, 6.0, 1e-9);
}

TEST(EvaluateAttentionAware, AlphaZeroReducesToSda) {
  const std::size_t n = 151;
  const auto speeds = braking_lead_speeds(18.0, 4.0, 5.0, n, 0.1);
  const Episode e = fcwtest::straight_episode(
      20.0, speeds, 55.0, window_attention(n, 0.1, 3.0, 8.0));
  FcwParams p = kDefaults;
  p.alpha = 0.0;
  const WarningTrace conv = evaluate_sda(e, p);
  const WarningTrace aware = evaluate_attention_aware(e, p);
  EXPECT_EQ(conv.warn, aware.warn);
}

TEST(EvaluateAttentionAware, FirstWarningMonotoneInAlpha) {
  const std::size_t n = 151;
  const auto speeds = braking_lead_speeds(18.0, 4.0, 5.0, n, 0.1);
  const Episode e = fcwtest::straight_episode(
      20.0, speeds, 55.0, window_attention(n, 0.1, 3.0, 8.0));
  double previous = std::numeric_limits<double>::infinity();
  for (const double alpha : {0.0, 0.5, 1.0, 1.8, 3.0}) {
    FcwParams p = kDefaults;
    p.alpha = alpha;
    const WarningTrace w = evaluate_attention_aware(e, p);
    ASSERT_TRUE(w.first_warning_time_s.has_value());
    EXPECT_LE(*w.first_warning_time_s, previous);
    previous = *w.first_warning_time_s;
  }
}

TEST(AttendBuffer, AlwaysAttendedStaysSaturated) {
  const AttentionTrace a =
      fcwtest::attention_from(std::vector<bool>(40, true), 0.1);
  for (const double b : attend_buffer_trace(a, kDefaults)) {
    EXPECT_DOUBLE_EQ(b, kDefaults.attend_buffer_max);
  }
}

TEST(AttendBuffer, DrainsToZeroAtExactlyTwoSeconds) {
  const AttentionTrace a =
      fcwtest::attention_from(std::vector<bool>(40, false), 0.1);
  const auto buffer = attend_buffer_trace(a, kDefaults);
  EXPECT_GT(buffer[19], 0.05);
  EXPECT_NEAR(buffer[20], 0.0, 1e-9);
  EXPECT_DOUBLE_EQ(buffer[30], 0.0);
}

TEST(AttendBuffer, AlternatingStaysWithinOneStepOfMax) {
  std::vector<bool> attended(60);
  for (std::size_t i = 0; i < attended.size(); ++i) {
    attended[i] = (i % 2) == 0;
  }
  const auto buffer =
      attend_buffer_trace(fcwtest::attention_from(attended, 0.1), kDefaults);
  for (const double b : buffer) {
    EXPECT_GE(b, kDefaults.attend_buffer_max -
                     kDefaults.attend_decrement_rate * 0.1 - 1e-12);
    EXPECT_LE(b, kDefaults.attend_buffer_max);
  }
}

TEST(AttendBuffer, BoundedAndPiecewiseLinear) {
  std::mt19937_64 rng(77);
  FcwParams p = kDefaults;
  p.attend_decrement_rate = 1.7;
  p.attend_increment_rate = 0.6;
  for (int trial = 0; trial < 50; ++trial) {
    const auto attended = fcwtest::random_attention(rng, 120, 0.5);
    const auto buffer =
        attend_buffer_trace(fcwtest::attention_from(attended, 0.1), p);
    for (std::size_t i = 0; i < buffer.size(); ++i) {
      EXPECT_GE(buffer[i], 0.0);
      EXPECT_LE(buffer[i], p.attend_buffer_max);
      if (i == 0) {
        continue;
      }
      const double delta = buffer[i] - buffer[i - 1];
      if (attended[i - 1]) {
        EXPECT_GE(delta, -1e-12);
        EXPECT_LE(delta, p.attend_increment_rate * 0.1 + 1e-12);
      } else {
        EXPECT_LE(delta, 1e-12);
        EXPECT_GE(delta, -p.attend_decrement_rate * 0.1 - 1e-12);
      }
    }
  }
}

TEST(EvaluateAttendGazeOnly, FullyAttendedNeverWarns) {
  const std::size_t n = 151;
  const Episode e = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 20.0), 40.0, std::vector<bool>(n, true));
  const WarningTrace w = evaluate_attend_gaze_only(e, kDefaults);
  EXPECT_FALSE(w.first_warning_time_s.has_value());
}

TEST(EvaluateAttendGazeOnly, ContinuousInattentionWarnsAfterBufferDrains) {
  const std::size_t n = 151;
  const Episode e = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 20.0), 200.0,
      window_attention(n, 0.1, 4.0, 6.5));
  const WarningTrace w = evaluate_attend_gaze_only(e, kDefaults);
  ASSERT_TRUE(w.first_warning_time_s.has_value());
  EXPECT_NEAR(*w.first_warning_time_s, 6.0, 1e-9);
}

TEST(EvaluateAttendGazeOnly, ShortGlancesWithRecoveryNeverWarn) {
  // 1.5 s away, 2.0 s back, repeated: the buffer never reaches zero.
  const std::size_t n = 151;
  std::vector<bool> attended(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    const double phase = std::fmod(0.1 * static_cast<double>(i), 3.5);
    attended[i] = phase >= 1.5 - 1e-9;
  }
  const Episode e = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 20.0), 200.0, attended);
  const WarningTrace w = evaluate_attend_gaze_only(e, kDefaults);
  EXPECT_FALSE(w.first_warning_time_s.has_value());
}

TEST(EvaluateAttendGazeScene, DistractedWithFarLeadStaysQuiet) {
  const std::size_t n = 151;
  const Episode e = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 20.0), 200.0,
      window_attention(n, 0.1, 3.0, 8.0));
  const WarningTrace w = evaluate_attend_gaze_scene(e, kDefaults);
  EXPECT_FALSE(w.first_warning_time_s.has_value());
}

TEST(EvaluateAttendGazeScene, AttentiveInsideEnvelopeStaysQuiet) {
  const std::size_t n = 151;
  const Episode e = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 0.0), 10.0, std::vector<bool>(n, true));
  const WarningTrace w = evaluate_attend_gaze_scene(e, kDefaults);
  EXPECT_FALSE(w.first_warning_time_s.has_value());
}

TEST(EvaluateAttendGazeScene, WarnsAtLaterOfTheTwoTriggers) {
  const std::size_t n = 151;
  // Inside the envelope from the start; gaze drains from 3.0 to 5.0 s.
  const Episode inside_first = fcwtest::straight_episode(
      20.0, std::vector<double>(n, 0.0), 10.0,
      window_attention(n, 0.1, 3.0, 9.0));
  const WarningTrace w = evaluate_attend_gaze_scene(inside_first, kDefaults);
  ASSERT_TRUE(w.first_warning_time_s.has_value());
  EXPECT_NEAR(*w.first_warning_time_s, 5.0, 1e-9);

  const WarningTrace gaze = evaluate_attend_gaze_only(inside_first, kDefaults);
  const WarningTrace scene = evaluate_sda(inside_first, kDefaults);
  ASSERT_TRUE(gaze.first_warning_time_s.has_value());
  ASSERT_TRUE(scene.first_warning_time_s.has_value());
  EXPECT_DOUBLE_EQ(*w.first_warning_time_s,
                   std::max(*gaze.first_warning_time_s,
                            *scene.first_warning_time_s));
}

TEST(EvaluateAttendGazeScene, EqualsConjunctionOfParents) {
  const std::size_t n = 151;
  const auto speeds = braking_lead_speeds(18.0, 4.0, 5.0, n, 0.1);
  const Episode e = fcwtest::straight_episode(
      20.0, speeds, 55.0, window_attention(n, 0.1, 3.0, 8.0));
  const WarningTrace gaze = evaluate_attend_gaze_only(e, kDefaults);
  const WarningTrace scene = evaluate_sda(e, kDefaults);
  const WarningTrace both = evaluate_attend_gaze_scene(e, kDefaults);
  for (std::size_t i = 0; i < n; ++i) {
    EXPECT_EQ(both.warn[i], gaze.warn[i] && scene.warn[i]);
  }
}

TEST(FirstWarningTime, Cases) {
  WarningTrace w;
  w.dt_s = 0.1;
  w.start_time_s = 0.0;
  w.warn.assign(100, false);
  EXPECT_FALSE(first_warning_time(w).has_value());

  w.warn[45] = true;
  const auto t = first_warning_time(w);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 4.5, 1e-9);

  w.warn.assign(100, false);
  w.warn[0] = true;
  w.start_time_s = 2.0;
  EXPECT_DOUBLE_EQ(*first_warning_time(w), 2.0);
}

TEST(WarningTrace, DeterministicAcrossRuns) {
  const std::size_t n = 151;
  const auto speeds = braking_lead_speeds(18.0, 4.0, 5.0, n, 0.1);
  const Episode e = fcwtest::straight_episode(
      20.0, speeds, 55.0, window_attention(n, 0.1, 3.0, 8.0));
  const WarningTrace a = evaluate_attention_aware(e, kDefaults);
  const WarningTrace b = evaluate_attention_aware(e, kDefaults);
  EXPECT_EQ(a.warn, b.warn);
  EXPECT_EQ(a.first_warning_time_s, b.first_warning_time_s);
}

TEST(WarningCsv, HeaderAndRows) {
  WarningTrace w;
  w.dt_s = 0.1;
  w.start_time_s = 0.0;
  w.warn = {false, true};
  std::ostringstream out;
  write_warning_csv(w, out);
  EXPECT_EQ(out.str(), "t_s,warn\n0,0\n0.1,1\n");
}

TEST(ValidateParams, FlagsNonPositiveFields) {
  FcwParams p;
  p.t_dr = 0.0;
  p.min_gap_warn = -1.0;
  const auto violations = validate_params(p);
  EXPECT_EQ(violations.size(), 2u);

  FcwParams ok;
  ok.alpha = 0.0;
  EXPECT_TRUE(validate_params(ok).empty());
  ok.alpha = -0.1;
  EXPECT_EQ(validate_params(ok).size(), 1u);
}

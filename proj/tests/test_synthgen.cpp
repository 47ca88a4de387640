#include "fcw/synthgen.hpp"

#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fcw/episode_io.hpp"
#include "fcw/warning.hpp"

using namespace fcw;

namespace {

double gap_at(const Episode& e, std::size_t i) {
  return longitudinal_gap(e.ego.states[i], e.lead.states[i], e.ego_length_m,
                          e.lead_length_m);
}

double min_gap(const Episode& e) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < e.size(); ++i) {
    best = std::min(best, gap_at(e, i));
  }
  return best;
}

// Independent check of the annotation rule: constant speed through the
// reaction time, then a full 6 m/s^2 brake, against the recorded lead.
bool maneuver_oracle_avoids_contact(const Episode& e, std::size_t i) {
  const double dt = e.dt_s;
  double x = e.ego.states[i].x_m;
  double v = e.ego.states[i].speed_mps;
  const std::size_t react = static_cast<std::size_t>(std::llround(1.5 / dt));
  for (std::size_t k = 0;; ++k) {
    double lead_x;
    if (i + k < e.size()) {
      lead_x = e.lead.states[i + k].x_m;
    } else {
      const auto& last = e.lead.states[e.size() - 1];
      lead_x = last.x_m +
               last.speed_mps * static_cast<double>(i + k - (e.size() - 1)) * dt;
    }
    if (lead_x - x - 0.5 * (e.ego_length_m + e.lead_length_m) <= 0.0) {
      return false;
    }
    if (k >= react && v <= 0.0) {
      return true;
    }
    if (k < react) {
      x += v * dt;
    } else {
      const double t_stop = v / 6.0;
      if (t_stop >= dt) {
        x += v * dt - 0.5 * 6.0 * dt * dt;
        v -= 6.0 * dt;
      } else {
        x += v * v / 12.0;
        v = 0.0;
      }
    }
  }
}

}  // namespace

TEST(Generate, NominalFollowingStaysApartAndUnlabeled) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kNominalFollowing;
  spec.ego_speed_mps = 20.0;
  spec.lead_speed_mps = 20.0;
  spec.initial_gap_m = 40.0;
  spec.event_magnitude_mps2 = 0.0;
  spec.inattention_window.reset();
  spec.seed = 3;

  const Episode e = generate(spec);
  EXPECT_TRUE(validate_episode(e).empty());
  EXPECT_GT(min_gap(e), 30.0);
  for (const bool vote : e.annotation.validity_votes) {
    EXPECT_FALSE(vote);
  }
}

TEST(Generate, BrakeDuringInattentionIsLabeledNeeded) {
  ScenarioSpec spec;
  spec.kind = ScenarioKind::kBrakeDuringInattention;
  spec.ego_speed_mps = 20.0;
  spec.lead_speed_mps = 15.0;
  spec.initial_gap_m = 25.0;
  spec.event_time_s = 4.0;
  spec.event_magnitude_mps2 = -5.0;
  spec.inattention_window = InattentionWindow{3.0, 7.0};
  spec.seed = 12;

  const Episode e = generate(spec);
  EXPECT_TRUE(validate_episode(e).empty());
  for (const bool vote : e.annotation.validity_votes) {
    EXPECT_TRUE(vote);
  }
  // Attention is false across the braking onset.
  EXPECT_FALSE(e.attention.attended[e.ego.index_at_time(3.9)]);
  EXPECT_FALSE(e.attention.attended[e.ego.index_at_time(4.0)]);
  EXPECT_FALSE(e.attention.attended[e.ego.index_at_time(4.1)]);
  // The unnoticed braking ends in contact.
  EXPECT_LT(min_gap(e), 0.0);
}

TEST(Generate, ZeroInitialGapIsRejected) {
  ScenarioSpec spec;
  spec.initial_gap_m = 0.0;
  EXPECT_THROW(generate(spec), std::invalid_argument);
}

TEST(Generate, BadWindowAndDurationRejected) {
  ScenarioSpec spec;
  spec.duration_s = 3.0;
  spec.event_time_s = 4.0;
  EXPECT_THROW(generate(spec), std::invalid_argument);

  ScenarioSpec spec2;
  spec2.inattention_window = InattentionWindow{10.0, 20.0};
  EXPECT_THROW(generate(spec2), std::invalid_argument);
}

TEST(Generate, DeterministicUnderSpecAndSeed) {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kBrakeDuringInattention, {});
  spec.seed = 777;
  const Episode a = generate(spec);
  const Episode b = generate(spec);
  EXPECT_EQ(episode_to_json(a), episode_to_json(b));
}

TEST(Generate, JitterStaysWithinTwoPercent) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    ScenarioSpec spec = spec_for_kind(ScenarioKind::kNominalFollowing, {});
    spec.seed = seed;
    const Episode e = generate(spec);
    EXPECT_NEAR(e.ego.states[0].speed_mps, spec.ego_speed_mps,
                spec.ego_speed_mps * 0.02 + 1e-12);
  }
}

TEST(Generate, AttentionTraceMatchesWindowExactly) {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kBrakeDuringInattention, {});
  spec.seed = 5;
  const Episode e = generate(spec);
  const auto& win = *spec_for_kind(spec.kind, {}).inattention_window;
  for (std::size_t i = 0; i < e.size(); ++i) {
    const double t = e.ego.time_at(i);
    const bool inside = t >= win.start_s - 1e-9 && t < win.end_s - 1e-9;
    EXPECT_EQ(e.attention.attended[i], !inside) << "at t=" << t;
  }
}

TEST(Generate, PhysicalSanity) {
  for (const ScenarioKind kind : kAllScenarioKinds) {
    ScenarioSpec spec = spec_for_kind(kind, {});
    spec.seed = 21;
    const Episode e = generate(spec);
    for (std::size_t i = 0; i < e.size(); ++i) {
      EXPECT_GE(e.ego.states[i].speed_mps, 0.0);
      EXPECT_GE(e.lead.states[i].speed_mps, 0.0);
      if (i > 0) {
        // Positions move continuously: per-step gap change is bounded by
        // the largest closing speed on a 0.1 s grid.
        EXPECT_LE(std::abs(gap_at(e, i) - gap_at(e, i - 1)), 45.0 * e.dt_s);
      }
    }
  }
}

TEST(Generate, EgoHoldsSpeedWhileDistracted) {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kBrakeDuringInattention, {});
  spec.seed = 9;
  const Episode e = generate(spec);
  const double v0 = e.ego.states[0].speed_mps;
  const std::size_t window_end = e.ego.index_at_time(8.0);
  for (std::size_t i = 0; i < window_end; ++i) {
    EXPECT_EQ(e.ego.states[i].speed_mps, v0);
  }
}

TEST(Generate, AttentiveBrakeDriverReactsAndStaysClear) {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kAttentiveBrake, {});
  spec.seed = 31;
  const Episode e = generate(spec);
  for (const bool vote : e.annotation.validity_votes) {
    EXPECT_FALSE(vote);
  }
  EXPECT_GT(min_gap(e), kDefaultVehicleLength);  // well clear of contact
  // The driver did brake at some point.
  EXPECT_LT(e.ego.states.back().speed_mps, e.ego.states.front().speed_mps);
}

TEST(Generate, AccelerateKindSpeedsUpInsideWindow) {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kAccelerateDuringInattention, {});
  spec.seed = 2;
  const Episode e = generate(spec);
  const std::size_t at_event = e.ego.index_at_time(spec.event_time_s);
  const std::size_t later = e.ego.index_at_time(spec.event_time_s + 2.0);
  EXPECT_GT(e.lead.states[later].speed_mps, e.lead.states[at_event].speed_mps);
  EXPECT_FALSE(e.attention.attended[later]);
  for (const bool vote : e.annotation.validity_votes) {
    EXPECT_TRUE(vote);
  }
}

TEST(Generate, PreferredTimeIsLastSafeManeuverStart) {
  ScenarioSpec spec = spec_for_kind(ScenarioKind::kBrakeDuringInattention, {});
  spec.seed = 14;
  const Episode e = generate(spec);
  ASSERT_TRUE(e.annotation.validity_votes[0]);
  ASSERT_TRUE(e.annotation.preferred_times_s[0].has_value());
  const double preferred = *e.annotation.preferred_times_s[0];
  const std::size_t idx = e.ego.index_at_time(preferred);
  EXPECT_TRUE(maneuver_oracle_avoids_contact(e, idx));
  if (idx + 1 < e.size()) {
    EXPECT_FALSE(maneuver_oracle_avoids_contact(e, idx + 1));
  }
}

TEST(GenerateSuite, CountsAndKinds) {
  const auto suite = generate_suite(25, ScenarioSpec{}, 7);
  ASSERT_EQ(suite.size(), 100u);
  for (const ScenarioKind kind : kAllScenarioKinds) {
    const auto count = std::count_if(
        suite.begin(), suite.end(),
        [kind](const LabeledEpisode& item) { return item.kind == kind; });
    EXPECT_EQ(count, 25);
  }
}

TEST(GenerateSuite, DeterministicBytes) {
  const auto a = generate_suite(5, ScenarioSpec{}, 99);
  const auto b = generate_suite(5, ScenarioSpec{}, 99);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(episode_to_json(a[i].episode), episode_to_json(b[i].episode));
    EXPECT_EQ(a[i].seed, b[i].seed);
  }
}

TEST(GenerateSuite, LabelsAreBalancedAndSound) {
  const auto suite = generate_suite(25, ScenarioSpec{}, 7);
  std::size_t positive = 0;
  for (const auto& item : suite) {
    if (item.warning_needed) {
      ++positive;
    } else {
      EXPECT_GT(min_gap(item.episode), 5.0)
          << "unneeded label requires the gap to stay above the threshold";
    }
    if (item.kind == ScenarioKind::kBrakeDuringInattention) {
      EXPECT_TRUE(item.warning_needed);
      EXPECT_LT(min_gap(item.episode), 0.0);  // contact without intervention
    }
  }
  EXPECT_EQ(positive, 50u);
}

TEST(GenerateSuite, AllEpisodesValid) {
  const auto suite = generate_suite(3, ScenarioSpec{}, 1);
  for (const auto& item : suite) {
    EXPECT_TRUE(validate_episode(item.episode).empty()) << item.episode.id;
  }
}

TEST(GenerateSuite, ZeroPerKindRejected) {
  EXPECT_THROW(generate_suite(0, ScenarioSpec{}, 7), std::invalid_argument);
}

TEST(ScenarioKindNames, RoundTrip) {
  for (const ScenarioKind kind : kAllScenarioKinds) {
    EXPECT_EQ(scenario_kind_from_string(to_string(kind)), kind);
  }
  EXPECT_THROW(scenario_kind_from_string("bogus"), std::invalid_argument);
}

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "divbandit/harness.hpp"
#include "divbandit/policies.hpp"

using namespace divbandit;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v[i++] = x;
  return v;
}

// Drives a policy for `rounds` rounds against `instance`, returning the
// allocations it chose.
std::vector<Allocation> drive(Policy& policy, const BanditInstance& instance,
                              std::int64_t rounds, std::uint64_t seed = 1) {
  const NoiseStream noise(seed, instance.noise(), instance.sigma());
  std::vector<ArmStatistics> stats(static_cast<std::size_t>(instance.num_arms()));
  std::vector<Allocation> out;
  for (std::int64_t t = 1; t <= rounds; ++t) {
    const Allocation a = policy.decide(t, stats);
    const Eigen::VectorXd y = sample_rewards(instance, a, noise, static_cast<std::uint64_t>(t));
    for (Eigen::Index i = 0; i < a.size(); ++i)
      stats[static_cast<std::size_t>(i)].update(a[i], y[i], instance.b());
    policy.observe(t, a, y, stats);
    out.push_back(a);
  }
  return out;
}

}  // namespace

TEST(SuccessiveElimination, FirstRoundIsUniform) {
  SuccessiveElimination se(5, 100, 0.75, 1.0);
  const std::vector<ArmStatistics> stats(5);
  EXPECT_EQ(se.decide(1, stats), Allocation::Constant(5, 0.2));
  EXPECT_EQ(se.state_summary(), 5);
}

TEST(SuccessiveElimination, NoEliminationAtFirstRound) {
  // Huge gap and tiny sigma: the first checked round is t = 2.
  const BanditInstance inst(vec({10.0, 0.0, 0.0}), 0.75, 0.01, NoiseFamily::zero);
  SuccessiveElimination se(3, 100, 0.75, 0.01);
  drive(se, inst, 1);
  EXPECT_EQ(se.active_set().size(), 3u);
  EXPECT_EQ(*se.last_ci(), 0.0);
}

TEST(SuccessiveElimination, ZeroNoiseEliminatesAtSecondRound) {
  // CI(2) = 2 sqrt(3) sigma sqrt(ln 2 ln 100) / sqrt(r1) ~ 0.062 at sigma = 0.01,
  // far below the gap of 1.
  const BanditInstance inst(vec({2.0, 1.0}), 0.5, 0.01, NoiseFamily::zero);
  SuccessiveElimination se(2, 100, 0.5, 0.01);
  const auto allocs = drive(se, inst, 100);
  ASSERT_TRUE(se.elimination_round(1).has_value());
  EXPECT_EQ(*se.elimination_round(1), 2);
  EXPECT_FALSE(se.elimination_round(0).has_value());
  EXPECT_EQ(se.stopping_times(), (std::vector<std::int64_t>{100, 2}));
  EXPECT_EQ(allocs[2], vec({1.0, 0.0}));
  const double ci2 = 2.0 * std::sqrt(3.0) * 0.01 * std::sqrt(std::log(2.0) * std::log(100.0)) / 1.0;
  EXPECT_NEAR(se.confidence_width(2, 1.0), ci2, 1e-15);
}

TEST(SuccessiveElimination, EqualMeansNeverEliminated) {
  const BanditInstance inst(vec({1.0, 1.0, 1.0}), 0.75, 1.0, NoiseFamily::zero);
  SuccessiveElimination se(3, 500, 0.75, 1.0);
  drive(se, inst, 500);
  EXPECT_EQ(se.active_set().size(), 3u);
  EXPECT_FALSE(se.fallback_triggered());
}

TEST(SuccessiveElimination, AllocationOnSurvivors) {
  const BanditInstance two(vec({1.0, 0.0, 0.0, 1.0}), 0.75, 0.01, NoiseFamily::zero);
  SuccessiveElimination se(4, 50, 0.75, 0.01);
  const auto a = drive(se, two, 50);
  EXPECT_EQ(a.back(), vec({0.5, 0.0, 0.0, 0.5}));

  const BanditInstance one(vec({0.0, 0.0, 1.0, 0.0}), 0.75, 0.01, NoiseFamily::zero);
  SuccessiveElimination se1(4, 50, 0.75, 0.01);
  const auto a1 = drive(se1, one, 50);
  EXPECT_EQ(a1.back(), vec({0.0, 0.0, 1.0, 0.0}));
  EXPECT_EQ(se1.active_set(), (std::vector<Eigen::Index>{2}));
}

TEST(SuccessiveElimination, MonotoneStructureUnderNoise) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const BanditInstance inst(vec({0.6, 0.5, 0.3, 0.0, 0.1}), 0.75, 0.3);
    SuccessiveElimination se(5, 2000, 0.75, 0.3);
    const NoiseStream noise(seed, inst.noise(), inst.sigma());
    std::vector<ArmStatistics> stats(5);
    std::size_t prev_active = 5;
    std::vector<double> prev_alloc(5, 0.0);
    for (std::int64_t t = 1; t <= 2000; ++t) {
      const Allocation a = se.decide(t, stats);
      ASSERT_TRUE(is_valid_allocation(a));
      for (Eigen::Index i = 0; i < 5; ++i) {
        const auto iu = static_cast<std::size_t>(i);
        if (se.is_active(i))
          EXPECT_GE(a[i], prev_alloc[iu]);
        else
          EXPECT_EQ(a[i], 0.0);
        prev_alloc[iu] = a[i];
      }
      const Eigen::VectorXd y = sample_rewards(inst, a, noise, static_cast<std::uint64_t>(t));
      for (Eigen::Index i = 0; i < 5; ++i) stats[static_cast<std::size_t>(i)].update(a[i], y[i], 0.75);
      se.observe(t, a, y, stats);
      // Active arms share their whole allocation history.
      const auto& active = se.active_set();
      ASSERT_FALSE(active.empty());
      for (auto i : active) {
        const auto& s = stats[static_cast<std::size_t>(i)];
        const auto& f = stats[static_cast<std::size_t>(active.front())];
        EXPECT_EQ(s.sum_A, f.sum_A);
        EXPECT_EQ(s.sum_A2b, f.sum_A2b);
      }
      EXPECT_LE(active.size(), prev_active);
      prev_active = active.size();
    }
    const auto taus = se.stopping_times();
    EXPECT_EQ(*std::max_element(taus.begin(), taus.end()), 2000);
    EXPECT_FALSE(se.fallback_triggered());
  }
}

TEST(EpsilonGreedy, RejectsInadmissibleParameters) {
  EXPECT_THROW(EpsilonGreedy(4, 0.5, 0.1), ConfigError);
  EXPECT_THROW(EpsilonGreedy(4, 0.3, 0.1), ConfigError);
  EXPECT_THROW(EpsilonGreedy(4, 1.0, 0.5), ConfigError);
  EXPECT_THROW(EpsilonGreedy(4, 0.75, 0.5), ConfigError);
  EXPECT_THROW(EpsilonGreedy(4, 0.75, 0.0), ConfigError);
  EXPECT_NO_THROW(EpsilonGreedy(4, 0.75, 0.25));
}

TEST(EpsilonGreedy, ScheduleValues) {
  EpsilonGreedy eg(4, 0.75, 0.25);
  EXPECT_DOUBLE_EQ(eg.alpha(), 1.5);
  std::vector<ArmStatistics> stats(4);
  EXPECT_EQ(eg.decide(1, stats), Allocation::Constant(4, 0.25));
  for (auto& s : stats) s.update(0.25, 0.0, 0.75);
  stats[0].update(0.25, 0.0, 0.75);
  stats[2].update(0.25, 1.0, 0.75);  // arm 2 now has the largest mu_hat_2
  const Allocation a = eg.decide(10, stats);
  const double explore = 0.25 * std::pow(10.0, -1.5);
  EXPECT_NEAR(explore, 0.0079057, 1e-7);
  EXPECT_NEAR(a[0], explore, 1e-15);
  EXPECT_NEAR(a[2], 1.0 - 3.0 * explore, 1e-15);
  EXPECT_NEAR(a[2], 0.9762830, 1e-7);
  EXPECT_EQ(eg.current_best(), 2);
}

TEST(EpsilonGreedy, DefaultEpsIsInsideRange) {
  for (double b : {0.55, 0.75, 0.9, 0.99}) {
    const double eps = EpsilonGreedy::default_eps(b);
    EXPECT_GT(eps, 0.0);
    EXPECT_LT(eps, 2.0 * b - 1.0);
    EpsilonGreedy eg(3, b, eps);
    EXPECT_GT(eg.alpha(), 1.0);
    EXPECT_LT(eg.alpha(), 1.0 / (2.0 - 2.0 * b));
  }
}

TEST(EpsilonGreedy, StrictlyPositiveAllocationsAndConvergence) {
  const BanditInstance inst(vec({1.0, 0.5}), 0.8, 0.1);
  EpsilonGreedy eg(2, 0.8, EpsilonGreedy::default_eps(0.8));
  const auto allocs = drive(eg, inst, 5000);
  for (const auto& a : allocs) {
    EXPECT_TRUE(is_valid_allocation(a));
    EXPECT_GT(a.minCoeff(), 0.0);
  }
  EXPECT_EQ(eg.current_best(), 0);
  EXPECT_GT(allocs.back()[0], 1.0 - 1e-4);
}

TEST(EpsilonGreedy, TieBreakFollowsPermutation) {
  // mu_hat_2 ties resolve to the lowest index; a permuted unique maximum is tracked.
  EpsilonGreedy eg(4, 0.75, 0.25);
  std::vector<ArmStatistics> stats(4);
  for (std::size_t i = 0; i < 4; ++i) stats[i].update(0.25, i == 1 || i == 3 ? 0.5 : 0.1, 0.75);
  eg.decide(2, stats);
  EXPECT_EQ(eg.current_best(), 1);
  std::vector<std::size_t> perm{0, 1, 2, 3};
  do {
    std::vector<ArmStatistics> p(4);
    for (std::size_t i = 0; i < 4; ++i) p[perm[i]].update(0.25, i == 2 ? 0.9 : 0.1, 0.75);
    eg.decide(2, p);
    EXPECT_EQ(eg.current_best(), static_cast<Eigen::Index>(perm[2]));
  } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST(UcbBinary, InitializationSweep) {
  UcbBinary ucb(4, 1.0);
  const BanditInstance inst(vec({0.1, 0.9, 0.2, 0.3}), 0.5, 1.0);
  const auto a = drive(ucb, inst, 4);
  for (Eigen::Index t = 0; t < 4; ++t) {
    Allocation expected = Allocation::Zero(4);
    expected[t] = 1.0;
    EXPECT_EQ(a[static_cast<std::size_t>(t)], expected);
  }
}

TEST(UcbBinary, ZeroNoiseLocksOntoBestArm) {
  // sigma = 0.1: the index of arm 2 stays below 1 + 0.1 sqrt(2 ln 1000) < 2.
  const BanditInstance inst(vec({2.0, 1.0}), 0.5, 0.1, NoiseFamily::zero);
  UcbBinary ucb(2, 0.1);
  const auto a = drive(ucb, inst, 1000);
  for (std::size_t t = 2; t < a.size(); ++t) EXPECT_EQ(a[t], vec({1.0, 0.0})) << "t=" << t + 1;
}

TEST(UniformAllocation, AlwaysOneOverK) {
  UniformAllocation u(3);
  const BanditInstance inst(vec({0.1, 0.9, 0.2}), 0.5, 1.0);
  for (const auto& a : drive(u, inst, 20)) EXPECT_EQ(a, Allocation::Constant(3, 1.0 / 3.0));
}

TEST(MakePolicy, NamesAndCompatibility) {
  const BanditInstance low_b(vec({1.0, 0.0}), 0.5, 1.0);
  const BanditInstance high_b(vec({1.0, 0.0}), 0.8, 1.0);
  for (const char* name : {"se", "ucb-binary", "uniform"})
    EXPECT_EQ(make_policy({name, {}, {}, {}}, low_b, 100)->name(), name);
  EXPECT_EQ(make_policy({"eps-greedy", {}, {}, {}}, high_b, 100)->name(), "eps-greedy");
  EXPECT_THROW(make_policy({"eps-greedy", {}, {}, {}}, low_b, 100), ConfigError);
  EXPECT_THROW(make_policy({"thompson", {}, {}, {}}, low_b, 100), ConfigError);
  EXPECT_THROW(make_policy({"eps-greedy", 0.7, {}, {}}, high_b, 100), ConfigError);
}

TEST(ArgmaxLowest, TieBreak) {
  EXPECT_EQ(argmax_lowest(vec({1.0, 3.0, 3.0, 2.0})), 1);
  EXPECT_EQ(argmax_lowest(vec({5.0, 5.0})), 0);
  EXPECT_EQ(argmax_lowest(vec({-1.0, -2.0, 0.0})), 2);
}

TEST(Policies, EveryDecisionIsOnTheSimplex) {
  const BanditInstance inst(vec({0.5, 0.4, 0.45, 0.1}), 0.75, 1.0);
  for (const char* name : {"se", "eps-greedy", "ucb-binary", "uniform"}) {
    auto policy = make_policy({name, {}, {}, {}}, inst, 3000);
    for (const auto& a : drive(*policy, inst, 3000, 9)) ASSERT_TRUE(is_valid_allocation(a)) << name;
  }
}

TEST(Policies, DecisionsAreDeterministic) {
  const BanditInstance inst(vec({0.5, 0.4, 0.45}), 0.75, 1.0);
  for (const char* name : {"se", "eps-greedy", "ucb-binary"}) {
    auto p1 = make_policy({name, {}, {}, {}}, inst, 1000);
    auto p2 = make_policy({name, {}, {}, {}}, inst, 1000);
    EXPECT_EQ(drive(*p1, inst, 1000, 4), drive(*p2, inst, 1000, 4)) << name;
  }
}

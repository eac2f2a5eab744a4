#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "divbandit/analysis.hpp"
#include "divbandit/harness.hpp"

using namespace divbandit;

namespace {

// Independent evaluation of sum_i sqrt(sum_{s <= tau_i} A_si^{2b}).
double direct_lhs(const std::vector<std::int64_t>& taus, double b) {
  double lhs = 0.0;
  for (auto tau_i : taus) {
    double l = 0.0;
    for (std::int64_t s = 1; s <= tau_i; ++s) {
      int active = 0;
      for (auto tau : taus) active += tau >= s;
      l += std::pow(1.0 / active, 2.0 * b);
    }
    lhs += std::sqrt(l);
  }
  return lhs;
}

}  // namespace

TEST(StoppingTimeProfile, Validation) {
  EXPECT_THROW(StoppingTimeProfile({1, 2}, 3), std::invalid_argument);
  EXPECT_THROW(StoppingTimeProfile({0, 3}, 3), std::invalid_argument);
  EXPECT_THROW(StoppingTimeProfile({4, 3}, 3), std::invalid_argument);
  EXPECT_THROW(StoppingTimeProfile({}, 3), std::invalid_argument);
  EXPECT_NO_THROW(StoppingTimeProfile({3, 1}, 3));
}

TEST(StoppingTimeProfile, InducedAllocations) {
  const StoppingTimeProfile p({2, 5, 3}, 5);
  const Eigen::MatrixXd a = p.allocations();
  Eigen::MatrixXd expected(5, 3);
  expected << 1. / 3, 1. / 3, 1. / 3,
              1. / 3, 1. / 3, 1. / 3,
              0, 0.5, 0.5,
              0, 1, 0,
              0, 1, 0;
  EXPECT_LE((a - expected).cwiseAbs().maxCoeff(), 1e-15);
  for (Eigen::Index t = 0; t < 5; ++t) EXPECT_NEAR(a.row(t).sum(), 1.0, 1e-15);
}

TEST(Lemma1, SingleArmIsTight) {
  for (std::int64_t t : {1, 4, 9, 16}) {
    const auto r = lemma1_bruteforce(1, t, 0.5);
    EXPECT_NEAR(r.max_lhs, std::sqrt(static_cast<double>(t)), 1e-12);
    EXPECT_NEAR(r.rhs, std::sqrt(static_cast<double>(t)), 1e-12);
    EXPECT_EQ(r.violations, 0);
  }
}

TEST(Lemma1, TwoArmsFourRounds) {
  const auto r = lemma1_bruteforce(2, 4, 0.75);
  EXPECT_NEAR(r.rhs, std::sqrt(2.0) * std::pow(2.0, 0.25) * 2.0, 1e-12);
  EXPECT_NEAR(r.rhs, 3.3636, 1e-4);
  double best = 0.0;
  for (std::int64_t tau1 = 1; tau1 <= 4; ++tau1) best = std::max(best, direct_lhs({tau1, 4}, 0.75));
  EXPECT_NEAR(r.max_lhs, best, 1e-12);
  EXPECT_EQ(r.profiles, 4);
  EXPECT_EQ(r.violations, 0);
}

TEST(Lemma1, MatchesDirectEvaluation) {
  for (const auto& taus : std::vector<std::vector<std::int64_t>>{{1, 7}, {3, 3, 7}, {2, 5, 6, 7}, {7, 7, 7}})
    for (double b : {0.5, 0.6, 0.9})
      EXPECT_NEAR(lemma1_lhs(StoppingTimeProfile(taus, 7), b), direct_lhs(taus, b), 1e-12);
}

TEST(Lemma1, ExtremeProfileClosedForm) {
  for (std::int64_t k = 2; k <= 4; ++k)
    for (std::int64_t t = 2; t <= 16; ++t)
      for (double b : {0.5, 0.75, 0.9}) {
        std::vector<std::int64_t> taus(static_cast<std::size_t>(k), 1);
        taus.back() = t;
        const double kd = static_cast<double>(k);
        const double exact = std::sqrt(static_cast<double>(t - 1) + std::pow(kd, -2.0 * b)) +
                             (kd - 1.0) * std::pow(kd, -b);
        const double lhs = lemma1_lhs(StoppingTimeProfile(taus, t), b);
        EXPECT_NEAR(lhs, exact, 1e-12);
        EXPECT_LT(lhs, lemma1_rhs(k, t, b));
      }
}

TEST(Lemma1, ArgmaxIsInteriorAboveOneHalf) {
  for (std::int64_t k = 2; k <= 4; ++k)
    for (std::int64_t t = 4; t <= 12; t += 4)
      for (double b : {0.6, 0.75, 0.9}) {
        const auto r = lemma1_bruteforce(k, t, b);
        std::vector<std::int64_t> low(static_cast<std::size_t>(k), 1);
        low.back() = t;
        const std::vector<std::int64_t> high(static_cast<std::size_t>(k), t);
        EXPECT_NE(r.argmax, low);
        EXPECT_NE(r.argmax, high);
        EXPECT_EQ(r.violations, 0);
        EXPECT_GT(r.slack, 0.0);
      }
}

TEST(Lemma1, Limits) {
  EXPECT_THROW(lemma1_bruteforce(5, 4, 0.5), EnumerationLimit);
  EXPECT_THROW(lemma1_bruteforce(2, 17, 0.5), EnumerationLimit);
  EXPECT_THROW(lemma1_bruteforce(2, 4, 0.4), std::invalid_argument);
  EXPECT_THROW(lemma1_bruteforce(2, 4, 1.0), std::invalid_argument);
}

TEST(EstimateB, RecoversNoiseOrder) {
  for (double b : {0.5, 0.75, 1.0}) {
    const BanditInstance inst(Eigen::Vector2d(1.0, 0.5), b, 0.1);
    const NoiseStream noise(31, NoiseFamily::gaussian, 0.1);
    const auto est = estimate_b(b_estimation_pairs(inst, 0, BEstimationProtocol{}, noise));
    EXPECT_NEAR(est.b_hat, b, 0.05);
    EXPECT_EQ(est.n_pairs, 20000);
    EXPECT_EQ(est.dropped, 0);
  }
}

TEST(EstimateB, DegenerateInputs) {
  std::vector<std::pair<double, double>> same{{0.5, 0.1}, {0.5, -0.3}, {0.5, 0.2}};
  EXPECT_THROW(estimate_b(same), RegressionError);
  std::vector<std::pair<double, double>> silent{{0.2, 0.0}, {0.5, 0.0}, {0.9, 0.0}};
  EXPECT_THROW(estimate_b(silent), RegressionError);

  const BanditInstance inst(Eigen::Vector2d(1.0, 0.5), 0.75, 1.0, NoiseFamily::zero);
  const NoiseStream zero(1, NoiseFamily::zero, 1.0);
  BEstimationProtocol p;
  p.repeats = 2;
  EXPECT_THROW(estimate_b(b_estimation_pairs(inst, 0, p, zero)), RegressionError);
}

TEST(EstimateB, DropsZeroDifferences) {
  std::vector<std::pair<double, double>> pairs{{0.1, 0.1}, {0.2, 0.0}, {0.4, 0.4}, {0.8, 0.8}};
  const auto est = estimate_b(pairs);
  EXPECT_EQ(est.dropped, 1);
  EXPECT_EQ(est.n_pairs, 3);
  EXPECT_NEAR(est.b_hat, 1.0, 1e-12);
  EXPECT_NEAR(est.intercept, 0.0, 1e-12);
}

TEST(EstimateB, SigmaMovesOnlyTheIntercept) {
  BEstimationProtocol p;
  p.repeats = 20;
  const BanditInstance a(Eigen::Vector2d(1.0, 0.5), 0.7, 0.1);
  const BanditInstance b(Eigen::Vector2d(1.0, 0.5), 0.7, 0.4);
  const auto ea = estimate_b(b_estimation_pairs(a, 1, p, NoiseStream(8, NoiseFamily::gaussian, 0.1)));
  const auto eb = estimate_b(b_estimation_pairs(b, 1, p, NoiseStream(8, NoiseFamily::gaussian, 0.4)));
  EXPECT_NEAR(ea.b_hat, eb.b_hat, 1e-9);
  EXPECT_NEAR(eb.intercept - ea.intercept, std::log(4.0), 1e-9);
}

TEST(FitRateExponent, ExactPowerLaw) {
  std::vector<std::pair<double, double>> grid;
  for (double x : {1.0, 2.0, 5.0, 10.0, 40.0}) grid.emplace_back(x, 3.0 * std::sqrt(x));
  const auto fit = fit_rate_exponent(grid);
  EXPECT_NEAR(fit.slope, 0.5, 1e-9);
  EXPECT_NEAR(fit.intercept, std::log(3.0), 1e-9);
  EXPECT_NEAR(fit.r_squared, 1.0, 1e-12);
  EXPECT_EQ(fit.grid.size(), 5u);
}

TEST(FitRateExponent, Preconditions) {
  const std::vector<std::pair<double, double>> few{{1, 1}, {2, 2}, {3, 3}};
  EXPECT_THROW(fit_rate_exponent(few), std::invalid_argument);
  const std::vector<std::pair<double, double>> neg{{1, 1}, {2, 2}, {3, 0}, {4, 3}};
  EXPECT_THROW(fit_rate_exponent(neg), std::invalid_argument);
}

TEST(FitRateExponent, UcbRegretGrowsAsRootHorizon) {
  // Delta = sqrt(K / T): UCB cannot separate the arms, regret ~ sqrt(T).
  RunConfig cfg;
  cfg.instance.gap = 1.0;
  cfg.instance.gap_scale = GapScale::sqrt_k_over_t;
  cfg.instance.num_arms = 4;
  cfg.instance.b = 0.0;
  cfg.policy.name = "ucb-binary";
  cfg.replications = 20;
  cfg.base_seed = 3;
  const std::vector<double> horizons{1000, 3000, 10000, 30000, 100000};
  std::vector<std::pair<double, double>> grid;
  for (const auto& row : sweep(cfg, SweepAxis::horizon, horizons))
    grid.emplace_back(row.value, row.summary.mean_regret);
  EXPECT_NEAR(fit_rate_exponent(grid).slope, 0.5, 0.1);
}

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "divbandit/env.hpp"
#include "divbandit/estimators.hpp"

namespace divbandit {

/// Allocation rule interacting with the environment once per round:
/// `decide` picks the split of the unit resource, the harness samples
/// rewards and folds them into the per-arm statistics, then `observe`
/// lets the policy update its own state. Policies draw no randomness.
class Policy {
 public:
  virtual ~Policy() = default;

  virtual std::string_view name() const = 0;

  virtual Allocation decide(std::int64_t t,
                            std::span<const ArmStatistics> stats) = 0;

  /// `stats` already include round t.
  virtual void observe(std::int64_t t, const Allocation& alloc,
                       const Eigen::VectorXd& rewards,
                       std::span<const ArmStatistics> stats) = 0;

  /// Active-set size (SE), current best arm (eps-greedy), pulled arm (UCB)
  /// or K (uniform).
  virtual std::int64_t state_summary() const = 0;

  /// Confidence half-width used at the last observe, when the policy has one.
  virtual std::optional<double> last_ci() const { return std::nullopt; }
};

/// Confidence intervals checked by successive elimination in one round:
/// mu_hat_1 of every arm active during the round, with the common width.
struct CiSnapshot {
  std::int64_t t = 0;
  double ci = 0.0;
  std::vector<Eigen::Index> arms;
  std::vector<double> mu_hat;
};

/// Successive elimination with divisible resources.
///
/// Every round splits the resource evenly over the active set D. After
/// observing round t >= 2, with
///
///   CI(t) = 2 sqrt(3) sigma sqrt(ln t ln T) / sqrt(r1)
///
/// (identical for all active arms), every active arm whose
/// mu_hat_1 + CI falls below max_j (mu_hat_1(j) - CI) is removed and its
/// stopping time recorded as t.
class SuccessiveElimination final : public Policy {
 public:
  SuccessiveElimination(Eigen::Index num_arms, std::int64_t horizon, double b,
                        double sigma);

  std::string_view name() const override { return "se"; }
  Allocation decide(std::int64_t t,
                    std::span<const ArmStatistics> stats) override;
  void observe(std::int64_t t, const Allocation& alloc,
               const Eigen::VectorXd& rewards,
               std::span<const ArmStatistics> stats) override;
  std::int64_t state_summary() const override {
    return static_cast<std::int64_t>(active_.size());
  }
  std::optional<double> last_ci() const override { return last_ci_; }

  /// Active arm indices in increasing order.
  const std::vector<Eigen::Index>& active_set() const { return active_; }
  bool is_active(Eigen::Index arm) const;
  /// Round after which `arm` was eliminated; empty while it is active.
  std::optional<std::int64_t> elimination_round(Eigen::Index arm) const {
    return elimination_round_[static_cast<std::size_t>(arm)];
  }
  /// tau_i: elimination round, or the horizon for surviving arms.
  std::vector<std::int64_t> stopping_times() const;
  /// Intervals evaluated at the last observe.
  const CiSnapshot& last_snapshot() const { return snapshot_; }
  /// Set when the elimination rule would have emptied D.
  bool fallback_triggered() const { return fallback_triggered_; }

  std::int64_t horizon() const { return horizon_; }
  double b() const { return b_; }
  double sigma() const { return sigma_; }

  /// CI(t) for statistics with precision `r1_value`.
  double confidence_width(std::int64_t t, double r1_value) const;

 private:
  Eigen::Index num_arms_;
  std::int64_t horizon_;
  double b_;
  double sigma_;
  std::vector<Eigen::Index> active_;
  std::vector<std::optional<std::int64_t>> elimination_round_;
  std::optional<double> last_ci_;
  CiSnapshot snapshot_;
  bool fallback_triggered_ = false;
};

/// Epsilon-greedy for b > 1/2: uniform at t = 1, afterwards K^{-1} t^{-alpha}
/// to every arm except argmax mu_hat_2, which receives the remainder, with
/// alpha = 1 + eps / (2 - 2b).
class EpsilonGreedy final : public Policy {
 public:
  /// Requires b in (1/2, 1) and eps in (0, 2b - 1).
  EpsilonGreedy(Eigen::Index num_arms, double b, double eps);

  /// eps = (2b - 1) / 2, the midpoint of the admissible range.
  static double default_eps(double b) { return (2.0 * b - 1.0) / 2.0; }

  std::string_view name() const override { return "eps-greedy"; }
  Allocation decide(std::int64_t t,
                    std::span<const ArmStatistics> stats) override;
  void observe(std::int64_t, const Allocation&, const Eigen::VectorXd&,
               std::span<const ArmStatistics>) override {}
  std::int64_t state_summary() const override {
    return static_cast<std::int64_t>(current_best_);
  }

  double alpha() const { return alpha_; }
  double eps() const { return eps_; }
  Eigen::Index current_best() const { return current_best_; }
  /// K^{-1} t^{-alpha}.
  double exploration_share(std::int64_t t) const;

 private:
  Eigen::Index num_arms_;
  double b_;
  double eps_;
  double alpha_;
  Eigen::Index current_best_ = 0;
};

/// UCB1 on binary allocations: one unit of resource per round to the arm
/// maximizing mu_hat + sigma sqrt(2 ln t / S), after pulling each arm once.
class UcbBinary final : public Policy {
 public:
  UcbBinary(Eigen::Index num_arms, double sigma);

  std::string_view name() const override { return "ucb-binary"; }
  Allocation decide(std::int64_t t,
                    std::span<const ArmStatistics> stats) override;
  void observe(std::int64_t, const Allocation&, const Eigen::VectorXd&,
               std::span<const ArmStatistics>) override {}
  std::int64_t state_summary() const override {
    return static_cast<std::int64_t>(last_arm_);
  }

 private:
  Eigen::Index num_arms_;
  double sigma_;
  Eigen::Index last_arm_ = 0;
};

/// 1/K to every arm, every round.
class UniformAllocation final : public Policy {
 public:
  explicit UniformAllocation(Eigen::Index num_arms) : num_arms_(num_arms) {}

  std::string_view name() const override { return "uniform"; }
  Allocation decide(std::int64_t, std::span<const ArmStatistics>) override {
    return Allocation::Constant(num_arms_, 1.0 / static_cast<double>(num_arms_));
  }
  void observe(std::int64_t, const Allocation&, const Eigen::VectorXd&,
               std::span<const ArmStatistics>) override {}
  std::int64_t state_summary() const override { return num_arms_; }

 private:
  Eigen::Index num_arms_;
};

/// Policy name and hyperparameters. Unset b / sigma fall back to the
/// instance's values; unset eps to EpsilonGreedy::default_eps.
struct PolicySpec {
  std::string name = "se";
  std::optional<double> eps;
  std::optional<double> b;
  std::optional<double> sigma;
};

/// Builds the named policy ("se", "eps-greedy", "ucb-binary", "uniform").
/// Throws ConfigError for unknown names or incompatible parameters.
std::unique_ptr<Policy> make_policy(const PolicySpec& spec,
                                    const BanditInstance& instance,
                                    std::int64_t horizon);

/// Lowest index attaining the maximum.
Eigen::Index argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace divbandit

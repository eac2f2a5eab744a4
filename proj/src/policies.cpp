#include "divbandit/policies.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

namespace divbandit {

Eigen::Index argmax_lowest(const Eigen::Ref<const Eigen::VectorXd>& values) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values[i] > values[best]) best = i;
  return best;
}

// ---------------------------------------------------------------------------
// Successive elimination

SuccessiveElimination::SuccessiveElimination(Eigen::Index num_arms,
                                             std::int64_t horizon, double b,
                                             double sigma)
    : num_arms_(num_arms),
      horizon_(horizon),
      b_(b),
      sigma_(sigma),
      elimination_round_(static_cast<std::size_t>(num_arms)) {
  if (num_arms < 1) throw ConfigError("successive elimination needs K >= 1");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  // Guarantees hold for b > 1/2; smaller b is accepted for phase sweeps.
  if (!(b >= 0.0 && b <= 1.0))
    throw ConfigError("successive elimination requires b in [0, 1]");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
  active_.resize(static_cast<std::size_t>(num_arms));
  for (Eigen::Index i = 0; i < num_arms; ++i)
    active_[static_cast<std::size_t>(i)] = i;
}

bool SuccessiveElimination::is_active(Eigen::Index arm) const {
  return !elimination_round_[static_cast<std::size_t>(arm)].has_value();
}

std::vector<std::int64_t> SuccessiveElimination::stopping_times() const {
  std::vector<std::int64_t> taus(elimination_round_.size());
  for (std::size_t i = 0; i < taus.size(); ++i)
    taus[i] = elimination_round_[i].value_or(horizon_);
  return taus;
}

double SuccessiveElimination::confidence_width(std::int64_t t,
                                               double r1_value) const {
  const double log_t = std::log(static_cast<double>(t));
  const double log_horizon = std::log(static_cast<double>(horizon_));
  return 2.0 * std::sqrt(3.0) * sigma_ * std::sqrt(log_t * log_horizon) /
         std::sqrt(r1_value);
}

Allocation SuccessiveElimination::decide(std::int64_t,
                                         std::span<const ArmStatistics>) {
  Allocation alloc = Allocation::Zero(num_arms_);
  const double share = 1.0 / static_cast<double>(active_.size());
  for (Eigen::Index i : active_) alloc[i] = share;
  return alloc;
}

void SuccessiveElimination::observe(std::int64_t t, const Allocation&,
                                    const Eigen::VectorXd&,
                                    std::span<const ArmStatistics> stats) {
  // Active arms share one allocation history, hence one width.
  const double ci = confidence_width(t, r1(stats[static_cast<std::size_t>(active_.front())]));
  snapshot_.t = t;
  snapshot_.ci = ci;
  snapshot_.arms = active_;
  snapshot_.mu_hat.clear();
  double best_lcb = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i : active_) {
    const auto& s = stats[static_cast<std::size_t>(i)];
    assert(r1(s) == r1(stats[static_cast<std::size_t>(active_.front())]));
    const double m = mu_hat_1(s);
    snapshot_.mu_hat.push_back(m);
    best_lcb = std::max(best_lcb, m - ci);
  }
  last_ci_ = ci;

  // ln 1 = 0 makes the interval degenerate; elimination starts at t = 2.
  if (t < 2) return;

  std::vector<Eigen::Index> survivors;
  survivors.reserve(active_.size());
  for (std::size_t k = 0; k < active_.size(); ++k)
    if (!(snapshot_.mu_hat[k] + ci < best_lcb)) survivors.push_back(active_[k]);

  if (survivors.empty()) {
    // Unreachable with a common width: the arm attaining best_lcb satisfies
    // mu + ci >= mu - ci. Kept as a guard against non-finite statistics.
    fallback_triggered_ = true;
    const auto best = std::max_element(snapshot_.mu_hat.begin(), snapshot_.mu_hat.end());
    survivors.push_back(active_[static_cast<std::size_t>(best - snapshot_.mu_hat.begin())]);
  }
  for (Eigen::Index i : active_)
    if (std::find(survivors.begin(), survivors.end(), i) == survivors.end())
      elimination_round_[static_cast<std::size_t>(i)] = t;
  active_ = std::move(survivors);
}

// ---------------------------------------------------------------------------
// Epsilon-greedy

EpsilonGreedy::EpsilonGreedy(Eigen::Index num_arms, double b, double eps)
    : num_arms_(num_arms), b_(b), eps_(eps) {
  if (num_arms < 2) throw ConfigError("eps-greedy needs K >= 2");
  if (!(b > 0.5))
    throw ConfigError("eps-greedy requires b > 1/2 (got b = " + std::to_string(b) + ")");
  if (!(b < 1.0))
    throw ConfigError("eps-greedy requires b < 1: alpha = 1 + eps/(2-2b) diverges at b = 1");
  if (!(eps > 0.0 && eps < 2.0 * b - 1.0))
    throw ConfigError("eps-greedy requires eps in (0, 2b-1)");
  alpha_ = 1.0 + eps_ / (2.0 - 2.0 * b_);
}

double EpsilonGreedy::exploration_share(std::int64_t t) const {
  return std::pow(static_cast<double>(t), -alpha_) / static_cast<double>(num_arms_);
}

Allocation EpsilonGreedy::decide(std::int64_t t,
                                 std::span<const ArmStatistics> stats) {
  const auto k = static_cast<double>(num_arms_);
  if (t <= 1) return Allocation::Constant(num_arms_, 1.0 / k);

  Eigen::VectorXd estimates(num_arms_);
  for (Eigen::Index i = 0; i < num_arms_; ++i)
    estimates[i] = mu_hat_2(stats[static_cast<std::size_t>(i)]);
  current_best_ = argmax_lowest(estimates);

  const double share = exploration_share(t);
  Allocation alloc = Allocation::Constant(num_arms_, share);
  alloc[current_best_] = 1.0 - (k - 1.0) * share;
  return alloc;
}

// ---------------------------------------------------------------------------
// UCB on binary allocations

UcbBinary::UcbBinary(Eigen::Index num_arms, double sigma)
    : num_arms_(num_arms), sigma_(sigma) {
  if (num_arms < 1) throw ConfigError("ucb-binary needs K >= 1");
  if (!(sigma > 0.0)) throw ConfigError("sigma must be positive");
}

Allocation UcbBinary::decide(std::int64_t t,
                             std::span<const ArmStatistics> stats) {
  Allocation alloc = Allocation::Zero(num_arms_);
  if (t <= num_arms_) {
    last_arm_ = static_cast<Eigen::Index>(t - 1);
  } else {
    const double log_t = std::log(static_cast<double>(t));
    Eigen::VectorXd index(num_arms_);
    for (Eigen::Index i = 0; i < num_arms_; ++i) {
      const auto& s = stats[static_cast<std::size_t>(i)];
      index[i] = mu_hat_1(s) + sigma_ * std::sqrt(2.0 * log_t / s.sum_A);
    }
    last_arm_ = argmax_lowest(index);
  }
  alloc[last_arm_] = 1.0;
  return alloc;
}

// ---------------------------------------------------------------------------

std::unique_ptr<Policy> make_policy(const PolicySpec& spec,
                                    const BanditInstance& instance,
                                    std::int64_t horizon) {
  const Eigen::Index k = instance.num_arms();
  const double b = spec.b.value_or(instance.b());
  const double sigma = spec.sigma.value_or(instance.sigma());
  if (spec.name == "se")
    return std::make_unique<SuccessiveElimination>(k, horizon, b, sigma);
  if (spec.name == "eps-greedy") {
    if (!(b > 0.5))
      throw ConfigError("eps-greedy requires b > 1/2 (got b = " + std::to_string(b) + ")");
    return std::make_unique<EpsilonGreedy>(k, b, spec.eps.value_or(EpsilonGreedy::default_eps(b)));
  }
  if (spec.name == "ucb-binary") return std::make_unique<UcbBinary>(k, sigma);
  if (spec.name == "uniform") return std::make_unique<UniformAllocation>(k);
  throw ConfigError("unknown policy '" + spec.name +
                    "' (expected se, eps-greedy, ucb-binary or uniform)");
}

}  // namespace divbandit

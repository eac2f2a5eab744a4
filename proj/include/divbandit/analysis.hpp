#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "divbandit/concentration.hpp"
#include "divbandit/env.hpp"

namespace divbandit {

/// Stopping times tau_i (last active round of arm i) of one SE run, and
/// the allocation path they induce: in round t every arm with tau_i >= t
/// receives 1 / #{k : tau_k >= t}.
class StoppingTimeProfile {
 public:
  /// Requires every tau in [1, horizon] and max tau == horizon.
  StoppingTimeProfile(std::vector<std::int64_t> taus, std::int64_t horizon);

  const std::vector<std::int64_t>& taus() const { return taus_; }
  std::int64_t horizon() const { return horizon_; }
  Eigen::Index num_arms() const { return static_cast<Eigen::Index>(taus_.size()); }

  /// A_{t,arm} for 1 <= t <= horizon.
  double allocation(std::int64_t t, Eigen::Index arm) const;
  /// horizon x K matrix of allocations.
  Eigen::MatrixXd allocations() const;

 private:
  std::vector<std::int64_t> taus_;
  std::int64_t horizon_;
};

/// sum_i sqrt(sum_{s <= tau_i} A_si^{2b}).
double lemma1_lhs(const StoppingTimeProfile& profile, double b);
/// sqrt(1/(2-2b)) K^{1-b} sqrt(T).
double lemma1_rhs(std::int64_t num_arms, std::int64_t horizon, double b);

struct ViolationReport {
  std::int64_t num_arms = 0;
  std::int64_t horizon = 0;
  double b = 0.0;
  double max_lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - max_lhs
  std::vector<std::int64_t> argmax;  // sorted stopping times of the maximizer
  std::int64_t profiles = 0;
  std::int64_t violations = 0;
};

inline constexpr std::int64_t kMaxLemmaArms = 4;
inline constexpr std::int64_t kMaxLemmaHorizon = 16;
/// At b = 1/2 the all-survive profile meets the bound with equality.
inline constexpr double kLemmaRelativeTolerance = 1e-12;

/// Exhaustive check of the stopping-time bound over all sorted profiles
/// tau_(1) <= ... <= tau_(K) = T. Requires K <= 4, T <= 16, b in [1/2, 1).
ViolationReport lemma1_bruteforce(std::int64_t num_arms, std::int64_t horizon, double b);

// ---------------------------------------------------------------------------
// Noise-order estimation

/// Thrown when a regression has no usable design or response.
class RegressionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Least-squares line y ~ intercept + slope x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

struct BEstimate {
  double b_hat = 0.0;
  double intercept = 0.0;
  std::int64_t n_pairs = 0;
  std::int64_t dropped = 0;  // pairs with D == 0
};

/// Regresses log|D| on log a over pairs (a, D); the slope estimates b.
/// Throws RegressionError when all a coincide or every D is zero.
BEstimate estimate_b(std::span<const std::pair<double, double>> pairs);

/// Burn-in protocol: each block allocates a_1..a_L to one arm over rounds
/// 1..L and again over L+1..2L (a_t cycling through `grid`), then forms
/// D_t = Y_{t+L} - Y_t. Blocks are repeated `repeats` times.
struct BEstimationProtocol {
  std::vector<double> grid{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::int64_t half_period = 50;
  std::int64_t repeats = 400;
};

/// (a_t, D_t) pairs from the protocol on `arm`; the rest of each round's
/// resource is split evenly over the other arms.
std::vector<std::pair<double, double>> b_estimation_pairs(
    const BanditInstance& instance, Eigen::Index arm,
    const BEstimationProtocol& protocol, const NoiseStream& noise);

// ---------------------------------------------------------------------------
// Rate exponents

struct RateFit {
  std::vector<std::pair<double, double>> grid;  // (scale, regret)
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Least-squares slope of ln(regret) against ln(scale). Requires >= 4
/// points with positive scale and regret (std::invalid_argument otherwise).
RateFit fit_rate_exponent(std::span<const std::pair<double, double>> grid);

}  // namespace divbandit

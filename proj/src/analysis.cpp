#include "divbandit/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace divbandit {

StoppingTimeProfile::StoppingTimeProfile(std::vector<std::int64_t> taus,
                                         std::int64_t horizon)
    : taus_(std::move(taus)), horizon_(horizon) {
  if (taus_.empty()) throw std::invalid_argument("profile needs K >= 1");
  if (horizon_ < 1) throw std::invalid_argument("horizon must be >= 1");
  for (auto tau : taus_)
    if (tau < 1 || tau > horizon_)
      throw std::invalid_argument("stopping times must lie in [1, T]");
  if (*std::max_element(taus_.begin(), taus_.end()) != horizon_)
    throw std::invalid_argument("the last arm must survive to the horizon");
}

double StoppingTimeProfile::allocation(std::int64_t t, Eigen::Index arm) const {
  if (taus_[static_cast<std::size_t>(arm)] < t) return 0.0;
  const auto active = std::count_if(taus_.begin(), taus_.end(),
                                    [t](std::int64_t tau) { return tau >= t; });
  return 1.0 / static_cast<double>(active);
}

Eigen::MatrixXd StoppingTimeProfile::allocations() const {
  Eigen::MatrixXd a(horizon_, num_arms());
  for (std::int64_t t = 1; t <= horizon_; ++t)
    for (Eigen::Index i = 0; i < num_arms(); ++i) a(t - 1, i) = allocation(t, i);
  return a;
}

double lemma1_lhs(const StoppingTimeProfile& profile, double b) {
  const Eigen::MatrixXd a = profile.allocations();
  double lhs = 0.0;
  for (Eigen::Index i = 0; i < profile.num_arms(); ++i) {
    double l = 0.0;
    const auto tau = profile.taus()[static_cast<std::size_t>(i)];
    for (std::int64_t s = 0; s < tau; ++s) l += resource_power(a(s, i), 2.0 * b);
    lhs += std::sqrt(l);
  }
  return lhs;
}

double lemma1_rhs(std::int64_t num_arms, std::int64_t horizon, double b) {
  return std::sqrt(1.0 / (2.0 - 2.0 * b)) *
         std::pow(static_cast<double>(num_arms), 1.0 - b) *
         std::sqrt(static_cast<double>(horizon));
}

ViolationReport lemma1_bruteforce(std::int64_t num_arms, std::int64_t horizon, double b) {
  if (num_arms < 1 || horizon < 1) throw std::invalid_argument("need K, T >= 1");
  if (num_arms > kMaxLemmaArms || horizon > kMaxLemmaHorizon)
    throw EnumerationLimit("stopping-time enumeration capped at K <= 4, T <= 16");
  if (!(b >= 0.5 && b < 1.0)) throw std::invalid_argument("need b in [1/2, 1)");

  ViolationReport report;
  report.num_arms = num_arms;
  report.horizon = horizon;
  report.b = b;
  report.rhs = lemma1_rhs(num_arms, horizon, b);
  report.max_lhs = -1.0;

  // Sorted profiles only: the bound is symmetric in the arms.
  std::vector<std::int64_t> taus(static_cast<std::size_t>(num_arms), horizon);
  std::function<void(std::size_t, std::int64_t)> recurse = [&](std::size_t k, std::int64_t lo) {
    if (k + 1 == taus.size()) {
      const double lhs = lemma1_lhs(StoppingTimeProfile(taus, horizon), b);
      ++report.profiles;
      if (lhs > report.rhs * (1.0 + kLemmaRelativeTolerance)) ++report.violations;
      if (lhs > report.max_lhs) {
        report.max_lhs = lhs;
        report.argmax = taus;
      }
      return;
    }
    for (std::int64_t tau = lo; tau <= horizon; ++tau) {
      taus[k] = tau;
      recurse(k + 1, tau);
    }
  };
  recurse(0, 1);
  report.slack = report.rhs - report.max_lhs;
  return report;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw RegressionError("need at least two (x, y) points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  design.col(0).setOnes();
  design.col(1) = Eigen::Map<const Eigen::VectorXd>(x.data(), n);
  const Eigen::Map<const Eigen::VectorXd> response(y.data(), n);
  const double spread = design.col(1).maxCoeff() - design.col(1).minCoeff();
  if (!(spread > 0.0)) throw RegressionError("degenerate design: all x values are equal");

  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(response);
  LineFit fit;
  fit.intercept = coef[0];
  fit.slope = coef[1];
  const double ss_res = (response - design * coef).squaredNorm();
  const double ss_tot = (response.array() - response.mean()).matrix().squaredNorm();
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

BEstimate estimate_b(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> x, y;
  BEstimate est;
  bool distinct = false;
  for (const auto& [a, d] : pairs) {
    if (!(a > 0.0 && a <= 1.0)) throw std::invalid_argument("allocations must lie in (0, 1]");
    if (a != pairs.front().first) distinct = true;
    if (d == 0.0) {
      ++est.dropped;
      continue;
    }
    // log|D|: D is symmetric about zero, the intercept absorbs E log|xi' - xi|.
    x.push_back(std::log(a));
    y.push_back(std::log(std::abs(d)));
  }
  if (!distinct) throw RegressionError("degenerate design: all allocations are identical");
  if (x.empty()) throw RegressionError("no signal: every difference D_t is zero");
  const LineFit fit = fit_line(x, y);
  est.b_hat = fit.slope;
  est.intercept = fit.intercept;
  est.n_pairs = static_cast<std::int64_t>(x.size());
  return est;
}

std::vector<std::pair<double, double>> b_estimation_pairs(
    const BanditInstance& instance, Eigen::Index arm,
    const BEstimationProtocol& protocol, const NoiseStream& noise) {
  if (protocol.grid.empty() || protocol.half_period < 1 || protocol.repeats < 1)
    throw ConfigError("b estimation needs a grid, L >= 1 and repeats >= 1");
  for (double a : protocol.grid)
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("b estimation grid must lie in (0, 1]");
  const Eigen::Index k = instance.num_arms();
  const std::int64_t len = protocol.half_period;

  const auto allocation_for = [&](double a) {
    Allocation alloc = Allocation::Constant(k, (1.0 - a) / static_cast<double>(k - 1));
    alloc[arm] = a;
    return alloc;
  };

  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(static_cast<std::size_t>(protocol.repeats * len));
  for (std::int64_t r = 0; r < protocol.repeats; ++r) {
    const std::int64_t offset = r * 2 * len;
    for (std::int64_t t = 1; t <= len; ++t) {
      const double a = protocol.grid[static_cast<std::size_t>(t - 1) % protocol.grid.size()];
      const Allocation alloc = allocation_for(a);
      const double first = sample_rewards(instance, alloc, noise, static_cast<std::uint64_t>(offset + t))[arm];
      const double second = sample_rewards(instance, alloc, noise, static_cast<std::uint64_t>(offset + t + len))[arm];
      pairs.emplace_back(a, second - first);
    }
  }
  return pairs;
}

RateFit fit_rate_exponent(std::span<const std::pair<double, double>> grid) {
  if (grid.size() < 4) throw std::invalid_argument("rate fit needs at least 4 grid points");
  RateFit fit;
  fit.grid.assign(grid.begin(), grid.end());
  std::vector<double> x, y;
  for (const auto& [scale, regret] : grid) {
    if (!(scale > 0.0)) throw std::invalid_argument("rate fit scales must be positive");
    if (!(regret > 0.0)) throw std::invalid_argument("rate fit regrets must be positive");
    x.push_back(std::log(scale));
    y.push_back(std::log(regret));
  }
  const LineFit line = fit_line(x, y);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;
  return fit;
}

}  // namespace divbandit

#include "divbandit/concentration.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace divbandit {

MonotoneWeightProblem::MonotoneWeightProblem(Eigen::VectorXd a, Eigen::VectorXd xi)
    : weights(std::move(a)), noise(std::move(xi)) {
  if (weights.size() != noise.size() || weights.size() == 0)
    throw std::invalid_argument("weights and noise must have the same positive length");
  if (!(weights[0] > 0.0) || weights[weights.size() - 1] > 1.0)
    throw std::invalid_argument("weights must lie in (0, 1]");
  for (Eigen::Index s = 1; s < weights.size(); ++s)
    if (weights[s] < weights[s - 1])
      throw std::invalid_argument("weights must be non-decreasing");
  increments = divbandit::increments(weights);
  tail_noise = suffix_sums(noise);
}

SpectralCertificate verify_matrix_inequality(std::int64_t t) {
  if (t < 2) throw std::invalid_argument("verify_matrix_inequality needs t >= 2");
  if (t > kMaxSpectralDimension)
    throw EnumerationLimit("dense eigensolve capped at t = " +
                           std::to_string(kMaxSpectralDimension));
  const auto m = weight_matrices<double>(t);

  SpectralCertificate cert;
  cert.t = t;
  cert.lambda_max = generalized_lambda_max<double>(m.a, m.b);
  cert.lambda_max_reduced = reduced_lambda_max(m);
  cert.schur_sum = static_cast<double>(schur_constant<long double>(t));
  cert.bound = 1.5 * std::log(static_cast<double>(t));
  cert.rank1_gap = cert.bound - cert.schur_sum;
  cert.d_inverse_residual =
      (m.d * m.d_inverse - Eigen::MatrixXd::Identity(t, t)).cwiseAbs().maxCoeff();
  cert.matches = std::abs(cert.lambda_max - cert.schur_sum) <= kSpectralTolerance &&
                 std::abs(cert.lambda_max_reduced - cert.schur_sum) <= kSpectralTolerance;
  cert.holds = cert.lambda_max < cert.bound;
  return cert;
}

namespace {

struct EnumerationState {
  std::span<const double> xi;
  std::vector<double> level_weight;   // a^b for each level
  std::vector<double> level_weight2;  // a^{2b}
  double best = -std::numeric_limits<double>::infinity();
};

// Position s onwards with the weight level currently at `level`.
void enumerate(EnumerationState& st, std::size_t s, std::size_t level, double num,
               double den) {
  if (s == st.xi.size()) {
    st.best = std::max(st.best, num / std::sqrt(den));
    return;
  }
  for (std::size_t j = level; j < st.level_weight.size(); ++j)
    enumerate(st, s + 1, j, num + st.level_weight[j] * st.xi[s],
              den + st.level_weight2[j]);
}

}  // namespace

double exact_sup_se_reachable(std::int64_t num_arms, std::span<const double> xi,
                              double b) {
  if (num_arms < 1) throw std::invalid_argument("need K >= 1");
  if (xi.empty()) throw std::invalid_argument("need t >= 1");
  if (static_cast<std::int64_t>(xi.size()) > kMaxEnumerationRounds ||
      num_arms > kMaxEnumerationArms)
    throw EnumerationLimit("SE-reachable enumeration capped at t <= 14, K <= 4");
  EnumerationState st{xi, {}, {}};
  // Levels 1/K < 1/(K-1) < ... < 1.
  for (std::int64_t active = num_arms; active >= 1; --active) {
    const double a = 1.0 / static_cast<double>(active);
    st.level_weight.push_back(resource_power(a, b));
    st.level_weight2.push_back(resource_power(a, 2.0 * b));
  }
  enumerate(st, 0, 0, 0.0, 0.0);
  return st.best;
}

Eigen::VectorXd isotonic_regression(std::span<const double> y) {
  // Blocks of (mean, size); merge while the monotone order is violated.
  std::vector<double> mean;
  std::vector<std::size_t> size;
  for (double v : y) {
    mean.push_back(v);
    size.push_back(1);
    while (mean.size() > 1 && mean[mean.size() - 2] > mean.back()) {
      const std::size_t n2 = size.back();
      const double m2 = mean.back();
      mean.pop_back();
      size.pop_back();
      const auto n1 = static_cast<double>(size.back());
      mean.back() = (mean.back() * n1 + m2 * static_cast<double>(n2)) / (n1 + static_cast<double>(n2));
      size.back() += n2;
    }
  }
  Eigen::VectorXd fit(static_cast<Eigen::Index>(y.size()));
  Eigen::Index pos = 0;
  for (std::size_t k = 0; k < mean.size(); ++k)
    for (std::size_t r = 0; r < size[k]; ++r) fit[pos++] = mean[k];
  return fit;
}

double monotone_sup(std::span<const double> xi) {
  if (xi.empty()) throw std::invalid_argument("need t >= 1");
  const Eigen::VectorXd projection = isotonic_regression(xi).cwiseMax(0.0);
  const double norm = projection.norm();
  if (norm > 0.0) return norm;
  // xi lies in the polar cone; the sup is attained on an extreme ray
  // (0, ..., 0, 1, ..., 1).
  double best = -std::numeric_limits<double>::infinity();
  double tail = 0.0;
  for (std::size_t k = 1; k <= xi.size(); ++k) {
    tail += xi[xi.size() - k];
    best = std::max(best, tail / std::sqrt(static_cast<double>(k)));
  }
  return best;
}

double nonnegative_sup(std::span<const double> xi) {
  if (xi.empty()) throw std::invalid_argument("need t >= 1");
  double ss = 0.0;
  for (double v : xi)
    if (v > 0.0) ss += v * v;
  if (ss > 0.0) return std::sqrt(ss);
  return *std::max_element(xi.begin(), xi.end());
}

double projected_ascent_sup(std::span<const double> xi, int restarts,
                            std::uint64_t seed, int iterations) {
  if (xi.empty()) throw std::invalid_argument("need t >= 1");
  const auto t = static_cast<Eigen::Index>(xi.size());
  const Eigen::VectorXd noise = Eigen::Map<const Eigen::VectorXd>(xi.data(), t);
  const Eigen::VectorXd f = suffix_sums(noise);

  // Objective in increment coordinates: h(b) = <b, f> / ||prefix(b)||.
  const auto objective = [&](const Eigen::VectorXd& b) {
    return b.dot(f) / prefix_sums(b).norm();
  };

  std::mt19937_64 rng(seed);
  std::exponential_distribution<double> expo(1.0);
  double best = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Eigen::VectorXd b(t);
    if (r == 0) {
      b.setZero();
      b[0] = 1.0;  // constant weights
    } else {
      for (Eigen::Index s = 0; s < t; ++s) b[s] = expo(rng);
    }
    b /= prefix_sums(b).norm();
    double value = objective(b);
    double step = 0.5;
    for (int it = 0; it < iterations && step > 1e-12; ++it) {
      const Eigen::VectorXd a = prefix_sums(b);
      const double norm = a.norm();
      const double num = b.dot(f);
      // d/db of <b,f>/||Lb|| = f/||a|| - num L^T a / ||a||^3.
      const Eigen::VectorXd grad = f / norm - (num / (norm * norm * norm)) * suffix_sums(a);
      Eigen::VectorXd candidate = (b + step * norm * grad).cwiseMax(0.0);
      candidate[0] = std::max(candidate[0], 1e-12);
      candidate /= prefix_sums(candidate).norm();
      const double cand_value = objective(candidate);
      if (cand_value > value) {
        b = candidate;
        value = cand_value;
        step *= 1.2;
      } else {
        step *= 0.5;
      }
    }
    best = std::max(best, value);
  }
  return best;
}

std::string_view to_string(SupMethod method) {
  switch (method) {
    case SupMethod::se_reachable: return "se_reachable";
    case SupMethod::monotone: return "monotone";
    case SupMethod::ascent: return "ascent";
  }
  return "?";
}

TailReport monte_carlo_tail(const TailConfig& config) {
  if (config.trials < 100) throw std::invalid_argument("monte_carlo_tail needs at least 100 trials");
  if (config.t < 1) throw std::invalid_argument("monte_carlo_tail needs t >= 1");
  if (!(config.sigma > 0.0) || !(config.epsilon > 0.0))
    throw std::invalid_argument("sigma and epsilon must be positive");

  TailReport report;
  report.t = config.t;
  report.epsilon = config.epsilon;
  report.sigma = config.sigma;
  report.trials = config.trials;
  report.method = config.method;
  const auto td = static_cast<double>(config.t);
  report.threshold = std::sqrt(1.5) * std::log(td) * config.epsilon;
  report.stated_bound_freq =
      std::exp(-config.epsilon * config.epsilon / (2.0 * config.sigma * config.sigma));
  report.bound_freq = td * report.stated_bound_freq;

  const NoiseStream noise(config.seed, NoiseFamily::gaussian, config.sigma);
  std::vector<double> xi(static_cast<std::size_t>(config.t));
  double sum_sup = 0.0;
  double sum_unconstrained = 0.0;
  for (std::int64_t trial = 0; trial < config.trials; ++trial) {
    for (std::size_t s = 0; s < xi.size(); ++s)
      xi[s] = noise.draw(static_cast<std::uint64_t>(trial), s);
    double sup = 0.0;
    switch (config.method) {
      case SupMethod::se_reachable:
        sup = exact_sup_se_reachable(config.num_arms, xi, config.b);
        break;
      case SupMethod::monotone:
        sup = monotone_sup(xi);
        break;
      case SupMethod::ascent:
        sup = projected_ascent_sup(xi, 4, static_cast<std::uint64_t>(trial) + 1, 200);
        break;
    }
    sum_sup += sup;
    sum_unconstrained += nonnegative_sup(xi);
    if (sup >= report.threshold) ++report.exceedances;
  }
  const auto n = static_cast<double>(config.trials);
  report.empirical_freq = static_cast<double>(report.exceedances) / n;
  report.std_error = std::sqrt(report.empirical_freq * (1.0 - report.empirical_freq) / n);
  report.pass = report.empirical_freq <= report.bound_freq + 3.0 * report.std_error;
  report.mean_sup = sum_sup / n;
  report.mean_unconstrained_sup = sum_unconstrained / n;
  return report;
}

CoverageReport ci_coverage(const RegretTrace& trace, const BanditInstance& instance) {
  if (trace.ci_records.empty())
    throw std::invalid_argument("trace has no confidence-interval records (run with record_ci)");
  CoverageReport report;
  const Eigen::Index best = instance.best_arm();
  const auto& mu = instance.means();
  for (const auto& rec : trace.ci_records) {
    ++report.rounds;
    bool good = true;
    for (std::size_t k = 0; k < rec.arms.size(); ++k) {
      const Eigen::Index i = rec.arms[k];
      const double ucb = rec.mu_hat[k] + rec.ci;
      const double lcb = rec.mu_hat[k] - rec.ci;
      if (mu[i] > ucb || mu[i] < lcb) ++report.two_sided_violations;
      if (i == best ? mu[i] > ucb : mu[i] < lcb) good = false;
    }
    if (!good) ++report.violations;
  }
  report.violation_rate = static_cast<double>(report.violations) / static_cast<double>(report.rounds);
  const auto k = static_cast<double>(instance.num_arms());
  for (std::int64_t t = 1; t <= trace.horizon; ++t)
    report.bound += k / (static_cast<double>(t) * static_cast<double>(t));
  return report;
}

}  // namespace divbandit

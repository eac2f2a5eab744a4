#include "divbandit/estimators.hpp"

#include <cmath>

#include "divbandit/env.hpp"

namespace divbandit {

ResourcePowers ResourcePowers::of(double A, double b) {
  if (!(A >= 0.0 && A <= 1.0))
    throw std::invalid_argument("allocation must lie in [0,1]");
  if (A == 0.0) return {};
  const double log_a = std::log(A);
  return {A, std::exp(b * log_a), std::exp(2.0 * b * log_a), std::exp((2.0 - 2.0 * b) * log_a),
          std::exp((2.0 * b - 2.0) * log_a)};
}

void ArmStatistics::update(double A, double Y, double b) {
  update(ResourcePowers::of(A, b), Y);
}

void ArmStatistics::update(const ResourcePowers& p, double Y) {
  ++rounds;
  sum_Y += Y;
  if (p.a == 0.0) return;
  sum_A += p.a;
  sum_A2b += p.a2b;
  sum_A2m2b += p.a2m2b;
  ++count_pos;
  sum_Y_over_A += Y / p.a;
  sum_A2bm2 += p.a2bm2;
}

double mu_hat_1(const ArmStatistics& stats) {
  if (!(stats.sum_A > 0.0))
    throw UndefinedEstimate("mu_hat_1 is undefined before any resource is allocated");
  return stats.sum_Y / stats.sum_A;
}

double mu_hat_2(const ArmStatistics& stats) {
  if (stats.count_pos <= 0)
    throw UndefinedEstimate("mu_hat_2 is undefined before any positive allocation");
  return stats.sum_Y_over_A / static_cast<double>(stats.count_pos);
}

double r1(const ArmStatistics& stats) {
  if (!(stats.sum_A2b > 0.0))
    throw UndefinedEstimate("r1 is undefined before any positive allocation");
  return stats.sum_A * stats.sum_A / stats.sum_A2b;
}

double r2(const ArmStatistics& stats) {
  if (stats.count_pos <= 0 || !(stats.sum_A2bm2 > 0.0))
    throw UndefinedEstimate("r2 is undefined before any positive allocation");
  const auto n = static_cast<double>(stats.count_pos);
  return n * n / stats.sum_A2bm2;
}

ArmStatistics batch_statistics(std::span<const double> allocations,
                               std::span<const double> rewards, double b) {
  if (allocations.size() != rewards.size())
    throw std::invalid_argument("history lengths differ");
  ArmStatistics s;
  for (std::size_t k = 0; k < allocations.size(); ++k) {
    const double a = allocations[k];
    const double y = rewards[k];
    ++s.rounds;
    s.sum_Y += y;
    if (a > 0.0) {
      s.sum_A += a;
      s.sum_A2b += resource_power(a, 2.0 * b);
      s.sum_A2m2b += resource_power(a, 2.0 - 2.0 * b);
      ++s.count_pos;
      s.sum_Y_over_A += y / a;
      s.sum_A2bm2 += resource_power(a, 2.0 * b - 2.0);
    }
  }
  return s;
}

}  // namespace divbandit

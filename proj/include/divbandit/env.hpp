#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace divbandit {

/// Thrown for malformed instances, configs and policy/instance mismatches.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Noise law shared by every arm. All non-zero families have mean 0,
/// variance sigma^2 and are sigma-sub-Gaussian.
enum class NoiseFamily {
  gaussian,    // N(0, sigma^2)
  rademacher,  // +-sigma with probability 1/2
  uniform,     // U[-sqrt(3) sigma, sqrt(3) sigma]
  zero,        // xi == 0, for deterministic tests
};

NoiseFamily parse_noise_family(std::string_view name);
std::string_view to_string(NoiseFamily family);

/// Arm means, noise order b and sub-Gaussian scale of one bandit problem.
class BanditInstance {
 public:
  BanditInstance(Eigen::VectorXd means, double b, double sigma,
                 NoiseFamily noise = NoiseFamily::gaussian);

  /// One best arm with mean `gap` followed by K-1 arms with mean 0.
  static BanditInstance single_gap(Eigen::Index num_arms, double gap, double b,
                                   double sigma,
                                   NoiseFamily noise = NoiseFamily::gaussian);

  Eigen::Index num_arms() const { return means_.size(); }
  const Eigen::VectorXd& means() const { return means_; }
  double b() const { return b_; }
  double sigma() const { return sigma_; }
  NoiseFamily noise() const { return noise_; }

  /// Lowest index among the maximizers of the means.
  Eigen::Index best_arm() const { return best_arm_; }
  double best_mean() const { return means_[best_arm_]; }
  /// Delta_i = mu_{i*} - mu_i.
  const Eigen::VectorXd& gaps() const { return gaps_; }
  double max_gap() const { return gaps_.maxCoeff(); }

 private:
  Eigen::VectorXd means_;
  double b_;
  double sigma_;
  NoiseFamily noise_;
  Eigen::Index best_arm_ = 0;
  Eigen::VectorXd gaps_;
};

using Allocation = Eigen::VectorXd;

/// Entries >= 0 and summing to one within `tol`.
bool is_valid_allocation(const Eigen::Ref<const Eigen::VectorXd>& alloc,
                         double tol = 1e-12);

/// Throws std::invalid_argument when `alloc` is not a point of the K-simplex.
void check_allocation(const Eigen::Ref<const Eigen::VectorXd>& alloc,
                      Eigen::Index num_arms);

/// a^p for a in [0,1] with 0^p := 0 for every p, including p == 0.
inline double resource_power(double a, double p) {
  if (a <= 0.0) return 0.0;
  return std::exp(p * std::log(a));
}

/// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based noise source: the draw for (round, arm) depends only on
/// (seed, round, arm), so policies cannot perturb each other's noise.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, NoiseFamily family, double sigma);

  std::uint64_t seed() const { return seed_; }
  NoiseFamily family() const { return family_; }
  double sigma() const { return sigma_; }

  /// xi_{round,arm}.
  double draw(std::uint64_t round, std::uint64_t arm) const;

  /// Uniform on (0,1) for an arbitrary (round, arm, lane) key.
  double uniform(std::uint64_t round, std::uint64_t arm,
                 std::uint64_t lane = 0) const;
  /// Standard normal for (round, arm, lane); Box-Muller on two uniforms.
  double standard_normal(std::uint64_t round, std::uint64_t arm,
                         std::uint64_t lane = 0) const;

 private:
  std::uint64_t key(std::uint64_t round, std::uint64_t arm,
                    std::uint64_t lane) const;

  std::uint64_t seed_;
  NoiseFamily family_;
  double sigma_;
};

/// Y_i = A_i mu_i + A_i^b xi_i with xi drawn for (round, i). Arms with
/// A_i == 0 receive exactly 0 and consume no draw.
Eigen::VectorXd sample_rewards(const BanditInstance& instance,
                               const Eigen::Ref<const Eigen::VectorXd>& alloc,
                               const NoiseStream& noise, std::uint64_t round);

/// Pseudo-regret of one round: mu_{i*} - sum_i A_i mu_i = sum_i A_i Delta_i.
double regret_increment(const BanditInstance& instance,
                        const Eigen::Ref<const Eigen::VectorXd>& alloc);

}  // namespace divbandit

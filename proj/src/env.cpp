#include "divbandit/env.hpp"

#include <numbers>

namespace divbandit {

NoiseFamily parse_noise_family(std::string_view name) {
  if (name == "gaussian") return NoiseFamily::gaussian;
  if (name == "rademacher") return NoiseFamily::rademacher;
  if (name == "uniform") return NoiseFamily::uniform;
  if (name == "zero") return NoiseFamily::zero;
  throw ConfigError("unknown noise family '" + std::string(name) +
                    "' (expected gaussian, rademacher, uniform or zero)");
}

std::string_view to_string(NoiseFamily family) {
  switch (family) {
    case NoiseFamily::gaussian: return "gaussian";
    case NoiseFamily::rademacher: return "rademacher";
    case NoiseFamily::uniform: return "uniform";
    case NoiseFamily::zero: return "zero";
  }
  return "unknown";
}

BanditInstance::BanditInstance(Eigen::VectorXd means, double b, double sigma,
                               NoiseFamily noise)
    : means_(std::move(means)), b_(b), sigma_(sigma), noise_(noise) {
  if (means_.size() < 2) throw ConfigError("a bandit instance needs K >= 2 arms");
  if (!means_.allFinite() || (means_.array() < 0.0).any())
    throw ConfigError("arm means must be finite and nonnegative");
  if (!(b_ >= 0.0 && b_ <= 1.0)) throw ConfigError("noise order b must lie in [0,1]");
  if (!(sigma_ > 0.0) || !std::isfinite(sigma_))
    throw ConfigError("sub-Gaussian scale sigma must be positive");
  // maxCoeff reports the first maximizer.
  means_.maxCoeff(&best_arm_);
  gaps_ = (means_[best_arm_] - means_.array()).matrix();
}

BanditInstance BanditInstance::single_gap(Eigen::Index num_arms, double gap,
                                          double b, double sigma,
                                          NoiseFamily noise) {
  if (!(gap > 0.0)) throw ConfigError("gap must be positive");
  Eigen::VectorXd means = Eigen::VectorXd::Zero(num_arms);
  if (num_arms > 0) means[0] = gap;
  return BanditInstance(std::move(means), b, sigma, noise);
}

bool is_valid_allocation(const Eigen::Ref<const Eigen::VectorXd>& alloc,
                         double tol) {
  if (alloc.size() == 0 || !alloc.allFinite()) return false;
  if ((alloc.array() < 0.0).any() || (alloc.array() > 1.0 + tol).any())
    return false;
  return std::abs(alloc.sum() - 1.0) <= tol;
}

void check_allocation(const Eigen::Ref<const Eigen::VectorXd>& alloc,
                      Eigen::Index num_arms) {
  if (alloc.size() != num_arms)
    throw std::invalid_argument("allocation has the wrong number of arms");
  if (!is_valid_allocation(alloc))
    throw std::invalid_argument("allocation is not a point of the simplex");
}

NoiseStream::NoiseStream(std::uint64_t seed, NoiseFamily family, double sigma)
    : seed_(seed), family_(family), sigma_(sigma) {}

std::uint64_t NoiseStream::key(std::uint64_t round, std::uint64_t arm,
                               std::uint64_t lane) const {
  std::uint64_t h = splitmix64(seed_);
  h = splitmix64(h ^ round);
  h = splitmix64(h ^ (arm * 0xd1b54a32d192ed03ULL));
  return splitmix64(h ^ (lane * 0x8cb92ba72f3d8dd7ULL));
}

double NoiseStream::uniform(std::uint64_t round, std::uint64_t arm,
                            std::uint64_t lane) const {
  // 53 random bits, offset by half an ulp so the result is never 0 or 1.
  return (static_cast<double>(key(round, arm, lane) >> 11) + 0.5) * 0x1.0p-53;
}

double NoiseStream::standard_normal(std::uint64_t round, std::uint64_t arm,
                                    std::uint64_t lane) const {
  const double u1 = uniform(round, arm, 2 * lane);
  const double u2 = uniform(round, arm, 2 * lane + 1);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

double NoiseStream::draw(std::uint64_t round, std::uint64_t arm) const {
  switch (family_) {
    case NoiseFamily::gaussian:
      return sigma_ * standard_normal(round, arm);
    case NoiseFamily::rademacher:
      return (key(round, arm, 0) >> 63) ? sigma_ : -sigma_;
    case NoiseFamily::uniform:
      return std::numbers::sqrt3 * sigma_ * (2.0 * uniform(round, arm) - 1.0);
    case NoiseFamily::zero:
      return 0.0;
  }
  return 0.0;
}

Eigen::VectorXd sample_rewards(const BanditInstance& instance,
                               const Eigen::Ref<const Eigen::VectorXd>& alloc,
                               const NoiseStream& noise, std::uint64_t round) {
  const Eigen::Index k = instance.num_arms();
  Eigen::VectorXd rewards = Eigen::VectorXd::Zero(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double a = alloc[i];
    if (a <= 0.0) continue;
    rewards[i] = a * instance.means()[i] +
                 resource_power(a, instance.b()) *
                     noise.draw(round, static_cast<std::uint64_t>(i));
  }
  return rewards;
}

double regret_increment(const BanditInstance& instance,
                        const Eigen::Ref<const Eigen::VectorXd>& alloc) {
  return alloc.dot(instance.gaps());
}

}  // namespace divbandit

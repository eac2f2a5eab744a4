#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>

namespace divbandit {

/// Raised when an estimator is queried before it is defined (e.g. before
/// the arm has received any resource).
class UndefinedEstimate : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A, A^b, A^{2b}, A^{2-2b} and A^{2b-2} for one allocation value (all zero
/// for A == 0).
struct ResourcePowers {
  double a = 0.0;
  double ab = 0.0;
  double a2b = 0.0;
  double a2m2b = 0.0;
  double a2bm2 = 0.0;

  static ResourcePowers of(double A, double b);
};

/// Running per-arm sums over the rounds observed so far.
///
///   sum_A        S_t  = sum_s A_s
///   sum_A2b      L_t  = sum_s A_s^{2b}
///   sum_A2m2b    B_t  = sum_s A_s^{2-2b}
///   sum_Y             = sum_s Y_s
///   count_pos         = sum_s 1(A_s > 0)
///   sum_Y_over_A      = sum_s (Y_s / A_s) 1(A_s > 0)
///   sum_A2bm2         = sum_s A_s^{2b-2} 1(A_s > 0)
///
/// Zero allocations only advance `rounds`.
struct ArmStatistics {
  double sum_A = 0.0;
  double sum_A2b = 0.0;
  double sum_A2m2b = 0.0;
  double sum_Y = 0.0;
  std::int64_t count_pos = 0;
  double sum_Y_over_A = 0.0;
  double sum_A2bm2 = 0.0;
  std::int64_t rounds = 0;

  /// Folds in one observation (A, Y) under noise order b. Requires A in [0,1].
  void update(double A, double Y, double b);
  /// Same as update(p.a, Y, b) with the powers precomputed.
  void update(const ResourcePowers& p, double Y);

  bool operator==(const ArmStatistics&) const = default;
};

/// Ratio-of-sums estimator sum Y / sum A.
double mu_hat_1(const ArmStatistics& stats);
/// Mean-of-ratios estimator over rounds with positive allocation.
double mu_hat_2(const ArmStatistics& stats);
/// Precision of mu_hat_1: (sum A)^2 / sum A^{2b}.
double r1(const ArmStatistics& stats);
/// Precision of mu_hat_2: (count_pos)^2 / sum A^{2b-2} 1(A>0).
double r2(const ArmStatistics& stats);

/// Recomputes the statistics of an (A, Y) history from scratch.
ArmStatistics batch_statistics(std::span<const double> allocations,
                               std::span<const double> rewards, double b);

}  // namespace divbandit

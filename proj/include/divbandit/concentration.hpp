#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "divbandit/env.hpp"
#include "divbandit/harness.hpp"

namespace divbandit {

/// Thrown when an exhaustive enumeration or dense problem exceeds its size cap.
class EnumerationLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// ---------------------------------------------------------------------------
// Monotone weights in increment coordinates
//
// A non-decreasing weight vector a is written through its increments
// b_1 = a_1, b_s = a_s - a_{s-1} >= 0, and the noise through its suffix sums
// f_s = xi_s + ... + xi_t, so that sum_s a_s xi_s = sum_s b_s f_s.

template <class Derived>
auto increments(const Eigen::MatrixBase<Derived>& weights) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> b = weights;
  for (Eigen::Index s = b.size() - 1; s > 0; --s) b[s] -= weights[s - 1];
  return b;
}

template <class Derived>
auto prefix_sums(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> out(v.size());
  Scalar acc(0);
  for (Eigen::Index s = 0; s < v.size(); ++s) out[s] = (acc += v[s]);
  return out;
}

template <class Derived>
auto suffix_sums(const Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> out(v.size());
  Scalar acc(0);
  for (Eigen::Index s = v.size() - 1; s >= 0; --s) out[s] = (acc += v[s]);
  return out;
}

/// Weights a, their increments b and the aggregated noise f for one draw.
struct MonotoneWeightProblem {
  Eigen::VectorXd weights;
  Eigen::VectorXd increments;
  Eigen::VectorXd noise;
  Eigen::VectorXd tail_noise;

  /// Requires 0 < a_1 <= ... <= a_t <= 1 and matching sizes.
  MonotoneWeightProblem(Eigen::VectorXd a, Eigen::VectorXd xi);

  /// sum_s a_s xi_s.
  double weighted_sum() const { return weights.dot(noise); }
  /// sum_s b_s f_s.
  double transformed_sum() const { return increments.dot(tail_noise); }
  /// sum_s a_s xi_s / ||a||.
  double normalized_sum() const { return weighted_sum() / weights.norm(); }
};

// ---------------------------------------------------------------------------
// Spectral certificate of the matrix inequality A < (3/2) ln(t) B

/// schur_constant(1), ..., schur_constant(t_max) in one compensated pass.
/// Each term is evaluated as 1 / (sqrt(s) + sqrt(s-1))^2 to avoid cancellation.
template <class Scalar = long double>
std::vector<Scalar> schur_constant_series(std::int64_t t_max) {
  if (t_max < 1) throw std::invalid_argument("schur_constant needs t >= 1");
  std::vector<Scalar> out;
  out.reserve(static_cast<std::size_t>(t_max));
  Scalar sum(0), carry(0);
  for (std::int64_t s = 1; s <= t_max; ++s) {
    const Scalar root = std::sqrt(static_cast<Scalar>(s)) +
                        std::sqrt(static_cast<Scalar>(s - 1));
    const Scalar term = Scalar(1) / (root * root) - carry;
    const Scalar next = sum + term;
    carry = (next - sum) - term;
    sum = next;
    out.push_back(sum);
  }
  return out;
}

/// sum_{s=1}^t (sqrt(s) - sqrt(s-1))^2 with compensated summation.
template <class Scalar = long double>
Scalar schur_constant(std::int64_t t) {
  return schur_constant_series<Scalar>(t).back();
}

/// The quadratic forms of the concentration argument for horizon t:
///   A = V V^T with V = (sqrt t, ..., 1)     (numerator)
///   B = D D^T, D_ij = 1(i + j <= t + 1)     (denominator)
/// and the closed-form inverse of D: ones on the anti-diagonal, minus ones
/// on the diagonal just below it.
template <class Scalar>
struct WeightMatrices {
  Vector<Scalar> v;
  Matrix<Scalar> a;
  Matrix<Scalar> d;
  Matrix<Scalar> d_inverse;
  Matrix<Scalar> b;
};

template <class Scalar = double>
WeightMatrices<Scalar> weight_matrices(Eigen::Index t) {
  WeightMatrices<Scalar> m;
  m.v.resize(t);
  for (Eigen::Index s = 0; s < t; ++s) m.v[s] = std::sqrt(static_cast<Scalar>(t - s));
  m.a = m.v * m.v.transpose();
  m.d = Matrix<Scalar>::Zero(t, t);
  m.d_inverse = Matrix<Scalar>::Zero(t, t);
  for (Eigen::Index i = 0; i < t; ++i) {
    for (Eigen::Index j = 0; i + j < t; ++j) m.d(i, j) = Scalar(1);
    m.d_inverse(i, t - 1 - i) = Scalar(1);
    if (i > 0) m.d_inverse(i, t - i) = Scalar(-1);
  }
  m.b = m.d * m.d.transpose();
  return m;
}

/// Largest generalized eigenvalue of (A, B), i.e. sup_x x^T A x / x^T B x.
template <class Scalar>
Scalar generalized_lambda_max(const Matrix<Scalar>& a, const Matrix<Scalar>& b) {
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix<Scalar>> solver(
      a, b, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("generalized eigensolve did not converge");
  return solver.eigenvalues().maxCoeff();
}

/// Largest eigenvalue of D^{-1} A D^{-T}, the same spectrum after congruence.
template <class Scalar>
Scalar reduced_lambda_max(const WeightMatrices<Scalar>& m) {
  const Matrix<Scalar> reduced = m.d_inverse * m.a * m.d_inverse.transpose();
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(reduced, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigensolve did not converge");
  return solver.eigenvalues().maxCoeff();
}

struct SpectralCertificate {
  std::int64_t t = 0;
  double lambda_max = 0.0;          // dense generalized eigensolve
  double lambda_max_reduced = 0.0;  // eigensolve of D^{-1} A D^{-T}
  double schur_sum = 0.0;           // rank-one closed form
  double bound = 0.0;               // (3/2) ln t
  double rank1_gap = 0.0;           // bound - schur_sum
  double d_inverse_residual = 0.0;  // max |D D^{-1} - I|
  bool matches = false;             // both eigenvalues within tolerance of schur_sum
  bool holds = false;               // lambda_max < bound
};

inline constexpr double kSpectralTolerance = 1e-8;
inline constexpr std::int64_t kMaxSpectralDimension = 2000;

/// Builds A and B for horizon t (2 <= t <= 2000), solves both eigenproblems
/// and compares them with the closed form. The bound (3/2) ln t fails at
/// t = 2; `holds` reports it rather than throwing.
SpectralCertificate verify_matrix_inequality(std::int64_t t);

// ---------------------------------------------------------------------------
// Suprema of normalized weighted sums

inline constexpr std::int64_t kMaxEnumerationRounds = 14;
inline constexpr std::int64_t kMaxEnumerationArms = 4;

/// max over non-decreasing a with a_s in {1/K, 1/(K-1), ..., 1} (every
/// allocation path SE can give an arm before eliminating it) of
///   sum_s a_s^b xi_s / sqrt(sum_s a_s^{2b}).
/// Exhaustive; t = xi.size() <= 14 and K <= 4.
double exact_sup_se_reachable(std::int64_t num_arms, std::span<const double> xi,
                              double b);

/// Exact sup over all 0 < a_1 <= ... <= a_t of sum a_s xi_s / ||a||: the
/// norm of the projection of xi onto the monotone nonnegative cone
/// (clipped isotonic regression), or the best extreme ray when that
/// projection vanishes.
double monotone_sup(std::span<const double> xi);

/// Sup over nonnegative weights: sqrt(sum xi_s^2 1(xi_s > 0)) (max xi_s when
/// no entry is positive).
double nonnegative_sup(std::span<const double> xi);

/// Multi-restart projected gradient ascent over the increments b >= 0. A
/// lower bound on monotone_sup; used where no exact method applies.
double projected_ascent_sup(std::span<const double> xi, int restarts = 8,
                            std::uint64_t seed = 1, int iterations = 400);

/// Nondecreasing least-squares fit (pool adjacent violators, unit weights).
Eigen::VectorXd isotonic_regression(std::span<const double> y);

// ---------------------------------------------------------------------------
// Monte Carlo tail of the monotone supremum

enum class SupMethod {
  se_reachable,  // exact enumeration on the SE-reachable set (small t, K)
  monotone,      // exact continuous sup via cone projection
  ascent,        // heuristic lower bound by projected ascent
};

std::string_view to_string(SupMethod method);

struct TailConfig {
  std::int64_t t = 8;
  double epsilon = 4.0;
  double sigma = 1.0;
  std::int64_t trials = 100000;
  std::int64_t num_arms = 3;  // se_reachable only
  double b = 1.0;             // se_reachable only: weights a^b
  SupMethod method = SupMethod::se_reachable;
  std::uint64_t seed = 7;
};

struct TailReport {
  std::int64_t t = 0;
  double epsilon = 0.0;
  double sigma = 0.0;
  std::int64_t trials = 0;
  SupMethod method = SupMethod::se_reachable;
  double threshold = 0.0;         // sqrt(3/2) ln(t) epsilon
  std::int64_t exceedances = 0;
  double empirical_freq = 0.0;
  double std_error = 0.0;         // binomial standard error of empirical_freq
  double bound_freq = 0.0;        // t exp(-eps^2 / 2 sigma^2)
  double stated_bound_freq = 0.0; // exp(-eps^2 / 2 sigma^2)
  bool pass = false;              // empirical_freq <= bound_freq + 3 std_error
  double mean_sup = 0.0;
  double mean_unconstrained_sup = 0.0;
};

/// Gaussian xi_1..xi_t per trial (trial-indexed counter streams). Throws
/// std::invalid_argument for fewer than 100 trials.
TailReport monte_carlo_tail(const TailConfig& config);

// ---------------------------------------------------------------------------
// Confidence-interval coverage of successive elimination

struct CoverageReport {
  std::int64_t rounds = 0;
  /// Rounds where the good event fails: mu_{i*} > UCB(t, i*) or
  /// mu_i < LCB(t, i) for an active suboptimal arm i.
  std::int64_t violations = 0;
  /// Active (round, arm) pairs with mu_i outside [LCB, UCB].
  std::int64_t two_sided_violations = 0;
  double violation_rate = 0.0;
  /// sum_{t<=T} K t^{-2}.
  double bound = 0.0;
};

/// Requires a trace recorded with record_ci (throws std::invalid_argument
/// otherwise).
CoverageReport ci_coverage(const RegretTrace& trace, const BanditInstance& instance);

}  // namespace divbandit

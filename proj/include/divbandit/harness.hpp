#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "divbandit/env.hpp"
#include "divbandit/policies.hpp"

namespace divbandit {

/// How arm means are produced for a given number of arms and horizon.
enum class GapScale {
  fixed,          // Delta = gap
  sqrt_k_over_t,  // Delta = gap * sqrt(K / T)
};

/// Instance description that can be re-instantiated for other K or T,
/// which parameter sweeps need. Either explicit means, or a single-gap
/// construction (best arm first, K-1 arms Delta below it, at mean 0).
struct InstanceSpec {
  std::vector<double> means;
  std::optional<double> gap;
  GapScale gap_scale = GapScale::fixed;
  Eigen::Index num_arms = 0;  // only for the gap construction
  double b = 0.5;
  double sigma = 1.0;
  NoiseFamily noise = NoiseFamily::gaussian;

  BanditInstance build(std::int64_t horizon) const;
  Eigen::Index arms() const;
};

struct RunConfig {
  InstanceSpec instance;
  PolicySpec policy;
  std::int64_t horizon = 1000;
  std::int64_t replications = 1;
  std::uint64_t base_seed = 0;
  std::int64_t record_every = 1;
  /// Keep every round's SE confidence intervals (for coverage checks).
  bool record_ci = false;

  /// Throws ConfigError on violated invariants.
  void validate() const;
};

/// Seed of replication `rep`: splitmix64(base_seed + rep).
std::uint64_t replication_seed(std::uint64_t base_seed, std::int64_t rep);

struct TraceRow {
  std::int64_t t = 0;
  double cumulative_regret = 0.0;
  Eigen::VectorXd sum_A;      // S
  Eigen::VectorXd sum_A2b;    // L
  Eigen::VectorXd sum_A2m2b;  // B
  std::int64_t state = 0;
  std::optional<double> ci;
};

/// One replication. Rows are thinned by record_every; the final round is
/// always recorded.
struct RegretTrace {
  std::string policy;
  std::int64_t replication = 0;
  std::uint64_t seed = 0;
  std::int64_t horizon = 0;
  std::vector<TraceRow> rows;
  std::vector<CiSnapshot> ci_records;
  double final_regret = 0.0;
  /// sum_t sum_{i : Delta_i > 0} A_ti.
  double suboptimal_resource = 0.0;
  /// SE only: tau_i per arm.
  std::vector<std::int64_t> stopping_times;
  bool fallback_triggered = false;
};

struct RunSummary {
  std::string policy;
  Eigen::Index num_arms = 0;
  std::int64_t horizon = 0;
  double b = 0.0;
  double sigma = 0.0;
  std::int64_t replications = 0;
  double mean_regret = 0.0;
  double std_regret = 0.0;
  double mean_suboptimal_resource = 0.0;
  std::int64_t fallbacks = 0;
};

struct RunResult {
  std::vector<RegretTrace> traces;
  RunSummary summary;
};

/// Runs T rounds of decide -> sample -> update -> observe for one seed.
RegretTrace simulate(const BanditInstance& instance, const PolicySpec& policy,
                     std::int64_t horizon, std::uint64_t seed,
                     std::int64_t record_every = 1, bool record_ci = false,
                     std::int64_t replication = 0);

/// All replications of a config, in replication order.
RunResult run(const RunConfig& config);

RunSummary summarize(const std::vector<RegretTrace>& traces,
                     const BanditInstance& instance);

enum class SweepAxis { horizon, arms, b };

SweepAxis parse_sweep_axis(std::string_view name);
std::string_view to_string(SweepAxis axis);

struct SweepRow {
  double value = 0.0;
  RunSummary summary;
};

/// One summary per value. Every cell reuses the same replication seeds.
std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis,
                            std::span<const double> values);

/// Runs fn(i) for i in [0, n) on a small thread pool.
template <class Fn>
void parallel_for(std::int64_t n, Fn&& fn);

}  // namespace divbandit

#include "divbandit/detail/parallel.hpp"

#include "divbandit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "divbandit/estimators.hpp"

namespace divbandit {

Eigen::Index InstanceSpec::arms() const {
  return means.empty() ? num_arms : static_cast<Eigen::Index>(means.size());
}

BanditInstance InstanceSpec::build(std::int64_t horizon) const {
  if (!means.empty()) {
    Eigen::VectorXd mu = Eigen::Map<const Eigen::VectorXd>(
        means.data(), static_cast<Eigen::Index>(means.size()));
    return BanditInstance(std::move(mu), b, sigma, noise);
  }
  if (!gap) throw ConfigError("instance needs either means or a gap");
  double delta = *gap;
  if (gap_scale == GapScale::sqrt_k_over_t)
    delta *= std::sqrt(static_cast<double>(num_arms) / static_cast<double>(horizon));
  return BanditInstance::single_gap(num_arms, delta, b, sigma, noise);
}

void RunConfig::validate() const {
  if (horizon < 1) throw ConfigError("run.T must be >= 1");
  if (replications < 1) throw ConfigError("run.replications must be >= 1");
  if (record_every < 1) throw ConfigError("run.record_every must be >= 1");
  // Instance and policy compatibility.
  const BanditInstance inst = instance.build(horizon);
  (void)make_policy(policy, inst, horizon);
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::int64_t rep) {
  return splitmix64(base_seed + static_cast<std::uint64_t>(rep));
}

RegretTrace simulate(const BanditInstance& instance, const PolicySpec& policy_spec,
                     std::int64_t horizon, std::uint64_t seed,
                     std::int64_t record_every, bool record_ci,
                     std::int64_t replication) {
  auto policy = make_policy(policy_spec, instance, horizon);
  const Eigen::Index k = instance.num_arms();
  const auto ku = static_cast<std::size_t>(k);
  const NoiseStream noise(seed, instance.noise(), instance.sigma());
  const double b = instance.b();
  auto* se = dynamic_cast<SuccessiveElimination*>(policy.get());

  RegretTrace trace;
  trace.policy = std::string(policy->name());
  trace.replication = replication;
  trace.seed = seed;
  trace.horizon = horizon;

  std::vector<ArmStatistics> stats(ku);
  std::vector<ResourcePowers> powers(ku);
  Eigen::VectorXd rewards(k);
  double regret = 0.0;
  double suboptimal = 0.0;

  for (std::int64_t t = 1; t <= horizon; ++t) {
    const Allocation alloc = policy->decide(t, stats);
#ifndef NDEBUG
    check_allocation(alloc, k);
#endif
    const auto round = static_cast<std::uint64_t>(t);
    for (Eigen::Index i = 0; i < k; ++i) {
      const double a = alloc[i];
      auto& p = powers[static_cast<std::size_t>(i)];
      if (a != p.a) p = ResourcePowers::of(a, b);
      rewards[i] = a > 0.0 ? a * instance.means()[i] +
                                 p.ab * noise.draw(round, static_cast<std::uint64_t>(i))
                           : 0.0;
      stats[static_cast<std::size_t>(i)].update(p, rewards[i]);
      if (instance.gaps()[i] > 0.0) suboptimal += a;
    }
    regret += regret_increment(instance, alloc);
    policy->observe(t, alloc, rewards, stats);

    if (record_ci && se != nullptr) trace.ci_records.push_back(se->last_snapshot());
    if (t % record_every == 0 || t == horizon) {
      TraceRow row;
      row.t = t;
      row.cumulative_regret = regret;
      row.sum_A.resize(k);
      row.sum_A2b.resize(k);
      row.sum_A2m2b.resize(k);
      for (Eigen::Index i = 0; i < k; ++i) {
        const auto& s = stats[static_cast<std::size_t>(i)];
        row.sum_A[i] = s.sum_A;
        row.sum_A2b[i] = s.sum_A2b;
        row.sum_A2m2b[i] = s.sum_A2m2b;
      }
      row.state = policy->state_summary();
      row.ci = policy->last_ci();
      trace.rows.push_back(std::move(row));
    }
  }
  trace.final_regret = regret;
  trace.suboptimal_resource = suboptimal;
  if (se != nullptr) {
    trace.stopping_times = se->stopping_times();
    trace.fallback_triggered = se->fallback_triggered();
  }
  return trace;
}

RunSummary summarize(const std::vector<RegretTrace>& traces,
                     const BanditInstance& instance) {
  RunSummary s;
  s.num_arms = instance.num_arms();
  s.b = instance.b();
  s.sigma = instance.sigma();
  s.replications = static_cast<std::int64_t>(traces.size());
  if (traces.empty()) return s;
  s.policy = traces.front().policy;
  s.horizon = traces.front().horizon;
  const auto n = static_cast<double>(traces.size());
  for (const auto& tr : traces) {
    s.mean_regret += tr.final_regret;
    s.mean_suboptimal_resource += tr.suboptimal_resource;
    s.fallbacks += tr.fallback_triggered ? 1 : 0;
  }
  s.mean_regret /= n;
  s.mean_suboptimal_resource /= n;
  if (traces.size() > 1) {
    double ss = 0.0;
    for (const auto& tr : traces) ss += (tr.final_regret - s.mean_regret) * (tr.final_regret - s.mean_regret);
    s.std_regret = std::sqrt(ss / (n - 1.0));
  }
  return s;
}

RunResult run(const RunConfig& config) {
  config.validate();
  const BanditInstance instance = config.instance.build(config.horizon);

  std::set<std::uint64_t> seeds;
  for (std::int64_t r = 0; r < config.replications; ++r)
    if (!seeds.insert(replication_seed(config.base_seed, r)).second)
      throw ConfigError("replication seed collision");

  RunResult result;
  result.traces.resize(static_cast<std::size_t>(config.replications));
  parallel_for(config.replications, [&](std::int64_t r) {
    result.traces[static_cast<std::size_t>(r)] =
        simulate(instance, config.policy, config.horizon,
                 replication_seed(config.base_seed, r), config.record_every,
                 config.record_ci, r);
  });
  result.summary = summarize(result.traces, instance);
  return result;
}

SweepAxis parse_sweep_axis(std::string_view name) {
  if (name == "T") return SweepAxis::horizon;
  if (name == "K") return SweepAxis::arms;
  if (name == "b") return SweepAxis::b;
  throw ConfigError("unknown sweep axis '" + std::string(name) + "' (expected T, K or b)");
}

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::horizon: return "T";
    case SweepAxis::arms: return "K";
    case SweepAxis::b: return "b";
  }
  return "?";
}

std::vector<SweepRow> sweep(const RunConfig& base, SweepAxis axis,
                            std::span<const double> values) {
  if (values.size() < 2) throw ConfigError("a sweep needs at least two values");
  if (!std::is_sorted(values.begin(), values.end()))
    throw ConfigError("sweep values must be sorted");
  if (axis == SweepAxis::arms && !base.instance.means.empty())
    throw ConfigError("a K sweep needs a gap-based instance (instance.gap), not explicit means");

  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (double v : values) {
    RunConfig cell = base;
    switch (axis) {
      case SweepAxis::horizon:
        cell.horizon = static_cast<std::int64_t>(std::llround(v));
        break;
      case SweepAxis::arms:
        cell.instance.num_arms = static_cast<Eigen::Index>(std::llround(v));
        break;
      case SweepAxis::b:
        cell.instance.b = v;
        break;
    }
    // Summary rows only; keep traces small.
    cell.record_every = cell.horizon;
    cell.record_ci = false;
    rows.push_back({v, run(cell).summary});
  }
  return rows;
}

}  // namespace divbandit

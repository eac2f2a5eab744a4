#include "divbandit/csv.hpp"

#include <cstdio>

namespace divbandit {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

void per_arm_header(std::ostream& out, char prefix, Eigen::Index k) {
  for (Eigen::Index i = 1; i <= k; ++i) out << ',' << prefix << '_' << i;
}

void per_arm_values(std::ostream& out, const Eigen::VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << format_double(v[i]);
}

constexpr const char* kSummaryColumns =
    "policy,K,T,b,sigma,replications,mean_regret,std_regret,mean_suboptimal_resource,fallbacks";

void summary_values(std::ostream& out, const RunSummary& s) {
  out << s.policy << ',' << s.num_arms << ',' << s.horizon << ',' << format_double(s.b) << ','
      << format_double(s.sigma) << ',' << s.replications << ',' << format_double(s.mean_regret)
      << ',' << format_double(s.std_regret) << ',' << format_double(s.mean_suboptimal_resource)
      << ',' << s.fallbacks;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RegretTrace& trace) {
  const Eigen::Index k = trace.rows.empty() ? 0 : trace.rows.front().sum_A.size();
  out << "t,cumulative_regret";
  per_arm_header(out, 'S', k);
  per_arm_header(out, 'L', k);
  per_arm_header(out, 'B', k);
  out << ",state,ci\n";
  for (const auto& row : trace.rows) {
    out << row.t << ',' << format_double(row.cumulative_regret);
    per_arm_values(out, row.sum_A);
    per_arm_values(out, row.sum_A2b);
    per_arm_values(out, row.sum_A2m2b);
    out << ',' << row.state << ',';
    if (row.ci) out << format_double(*row.ci);
    out << '\n';
  }
}

void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries) {
  out << kSummaryColumns << '\n';
  for (const auto& s : summaries) {
    summary_values(out, s);
    out << '\n';
  }
}

void write_sweep_csv(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows) {
  out << "axis,value," << kSummaryColumns << '\n';
  for (const auto& row : rows) {
    out << to_string(axis) << ',' << format_double(row.value) << ',';
    summary_values(out, row.summary);
    out << '\n';
  }
}

void write_spectral_csv(std::ostream& out, std::span<const SpectralCertificate> certs) {
  out << "t,schur_sum,bound,holds\n";
  for (const auto& c : certs)
    out << c.t << ',' << format_double(c.schur_sum) << ',' << format_double(c.bound) << ','
        << (c.holds ? 1 : 0) << '\n';
}

void write_tail_csv(std::ostream& out, std::span<const TailReport> reports) {
  out << "t,epsilon,sigma,trials,empirical_freq,bound_freq,pass\n";
  for (const auto& r : reports)
    out << r.t << ',' << format_double(r.epsilon) << ',' << format_double(r.sigma) << ','
        << r.trials << ',' << format_double(r.empirical_freq) << ','
        << format_double(r.bound_freq) << ',' << (r.pass ? 1 : 0) << '\n';
}

void write_lemma1_csv(std::ostream& out, std::span<const ViolationReport> reports) {
  out << "K,T,b,max_lhs,rhs,slack\n";
  for (const auto& r : reports)
    out << r.num_arms << ',' << r.horizon << ',' << format_double(r.b) << ','
        << format_double(r.max_lhs) << ',' << format_double(r.rhs) << ','
        << format_double(r.slack) << '\n';
}

void write_b_estimate_csv(std::ostream& out, std::span<const BEstimateRow> rows) {
  out << "true_b,b_hat,n_pairs,dropped\n";
  for (const auto& r : rows)
    out << format_double(r.true_b) << ',' << format_double(r.estimate.b_hat) << ','
        << r.estimate.n_pairs << ',' << r.estimate.dropped << '\n';
}

void write_run(const std::filesystem::path& dir, const RunResult& result) {
  std::filesystem::create_directories(dir);
  for (const auto& trace : result.traces)
    write_file(dir / ("trace_" + std::to_string(trace.replication) + ".csv"),
               [&](std::ostream& out) { write_trace_csv(out, trace); });
  write_file(dir / "summary.csv", [&](std::ostream& out) {
    write_summary_csv(out, std::span<const RunSummary>(&result.summary, 1));
  });
}

}  // namespace divbandit

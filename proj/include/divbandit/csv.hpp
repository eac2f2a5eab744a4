#pragma once

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "divbandit/analysis.hpp"
#include "divbandit/concentration.hpp"
#include "divbandit/harness.hpp"

namespace divbandit {

/// Shortest round-trip text with 17 significant digits ("%.17g").
std::string format_double(double value);

// Column layouts. Per-arm blocks are expanded as S_1..S_K, L_1..L_K,
// B_1..B_K (1-based arm numbers).
//
//   trace:     t,cumulative_regret,S_i...,L_i...,B_i...,state,ci
//   summary:   policy,K,T,b,sigma,replications,mean_regret,std_regret,
//              mean_suboptimal_resource,fallbacks
//   sweep:     axis,value, then the summary columns
//   spectral:  t,schur_sum,bound,holds
//   tail:      t,epsilon,sigma,trials,empirical_freq,bound_freq,pass
//   lemma1:    K,T,b,max_lhs,rhs,slack
//   b_estimate: true_b,b_hat,n_pairs,dropped

void write_trace_csv(std::ostream& out, const RegretTrace& trace);
void write_summary_csv(std::ostream& out, std::span<const RunSummary> summaries);
void write_sweep_csv(std::ostream& out, SweepAxis axis, std::span<const SweepRow> rows);
void write_spectral_csv(std::ostream& out, std::span<const SpectralCertificate> certs);
void write_tail_csv(std::ostream& out, std::span<const TailReport> reports);
void write_lemma1_csv(std::ostream& out, std::span<const ViolationReport> reports);

struct BEstimateRow {
  double true_b = 0.0;
  BEstimate estimate;
};
void write_b_estimate_csv(std::ostream& out, std::span<const BEstimateRow> rows);

/// Writes `body` to `path` in binary mode; throws std::runtime_error on I/O failure.
template <class Writer>
void write_file(const std::filesystem::path& path, Writer&& body);

/// trace_<rep>.csv for every replication and summary.csv into `dir`.
void write_run(const std::filesystem::path& dir, const RunResult& result);

}  // namespace divbandit

#include <fstream>
#include <stdexcept>

template <class Writer>
void divbandit::write_file(const std::filesystem::path& path, Writer&& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  body(out);
  out.flush();
  if (!out) throw std::runtime_error("write to " + path.string() + " failed");
}

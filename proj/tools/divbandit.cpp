// divbandit command-line driver.
//
//   divbandit run                  --config FILE [--out DIR]
//   divbandit sweep                --config FILE --axis T|K|b --values v1,v2,... [--out DIR]
//   divbandit verify-concentration [--config FILE] [--t 3..200] [--out DIR]
//   divbandit verify-lemma1        [--config FILE] [--max-k 4] [--max-t 16] [--out DIR]
//   divbandit estimate-b           --config FILE [--out DIR]
//
// Exit status: 0 success, 1 a verifier found a violation, 2 usage or config error.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/property_tree/ptree.hpp>

#include "divbandit/analysis.hpp"
#include "divbandit/concentration.hpp"
#include "divbandit/config.hpp"
#include "divbandit/csv.hpp"
#include "divbandit/harness.hpp"

namespace fs = std::filesystem;
using namespace divbandit;

namespace {

constexpr int kOk = 0;
constexpr int kVerificationFailed = 1;
constexpr int kUsageError = 2;

const std::vector<std::string> kKnownKeys = {
    "instance.means", "instance.gap", "instance.arms", "instance.gap_scale",
    "instance.b", "instance.sigma", "instance.noise",
    "policy.name", "policy.eps", "policy.b", "policy.sigma",
    "run.T", "run.replications", "run.seed", "run.record_every", "run.record_ci",
    "sweep.axis", "sweep.values",
    "concentration.t", "concentration.tail_t", "concentration.epsilon",
    "concentration.sigma", "concentration.trials", "concentration.arms",
    "concentration.b", "concentration.method", "concentration.seed",
    "lemma1.max_k", "lemma1.max_t", "lemma1.b",
    "estimate.b_values", "estimate.arm", "estimate.grid", "estimate.half_period",
    "estimate.repeats", "estimate.tolerance",
};

struct CommonOptions {
  std::string config_path;
  std::string out_dir = ".";
};

Config load_config(const std::string& path) {
  if (path.empty()) return Config{};
  Config config = Config::load(path);
  config.require_known(kKnownKeys);
  return config;
}

fs::path prepare_out(const std::string& dir) {
  fs::path out(dir);
  fs::create_directories(out);
  return out;
}

/// "3..200", "5" or "2,3,10".
std::vector<std::int64_t> parse_t_values(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<std::int64_t> out;
  if (dots != std::string::npos) {
    const auto lo = std::stoll(text.substr(0, dots));
    const auto hi = std::stoll(text.substr(dots + 2));
    if (lo > hi) throw ConfigError("empty t range '" + text + "'");
    for (auto t = lo; t <= hi; ++t) out.push_back(t);
    return out;
  }
  for (double v : parse_number_list(text)) out.push_back(static_cast<std::int64_t>(v));
  return out;
}

SupMethod parse_method(const std::string& name) {
  if (name == "se_reachable") return SupMethod::se_reachable;
  if (name == "monotone") return SupMethod::monotone;
  if (name == "ascent") return SupMethod::ascent;
  throw ConfigError("unknown sup method '" + name + "'");
}

int cmd_run(const CommonOptions& opt) {
  if (opt.config_path.empty()) throw ConfigError("run needs --config");
  const RunConfig rc = run_config_from(load_config(opt.config_path));
  const RunResult result = run(rc);
  write_run(prepare_out(opt.out_dir), result);
  const auto& s = result.summary;
  std::printf("run: policy=%s K=%ld T=%ld replications=%ld mean_regret=%s std_regret=%s\n",
              s.policy.c_str(), static_cast<long>(s.num_arms), static_cast<long>(s.horizon),
              static_cast<long>(s.replications), format_double(s.mean_regret).c_str(),
              format_double(s.std_regret).c_str());
  return kOk;
}

int cmd_sweep(const CommonOptions& opt, std::string axis_name, std::string values_text) {
  if (opt.config_path.empty()) throw ConfigError("sweep needs --config");
  const Config config = load_config(opt.config_path);
  if (axis_name.empty()) axis_name = config.get_string("sweep.axis", "");
  if (values_text.empty()) values_text = config.get_string("sweep.values", "");
  if (axis_name.empty() || values_text.empty())
    throw ConfigError("sweep needs --axis and --values (or sweep.axis / sweep.values)");
  const SweepAxis axis = parse_sweep_axis(axis_name);
  const std::vector<double> values = parse_number_list(values_text);
  const RunConfig base = run_config_from(config);
  const auto rows = sweep(base, axis, values);
  const fs::path out = prepare_out(opt.out_dir);
  write_file(out / "sweep.csv", [&](std::ostream& os) { write_sweep_csv(os, axis, rows); });
  std::printf("sweep: axis=%s cells=%zu policy=%s\n", std::string(to_string(axis)).c_str(),
              rows.size(), base.policy.name.c_str());
  return kOk;
}

int cmd_verify_concentration(const CommonOptions& opt, std::string t_text,
                             std::optional<std::int64_t> trials_flag) {
  const Config config = load_config(opt.config_path);
  if (t_text.empty()) t_text = config.get_string("concentration.t", "3..200");
  const auto ts = parse_t_values(t_text);

  std::vector<SpectralCertificate> certs;
  int mismatches = 0, failures = 0;
  std::vector<std::int64_t> anomalies;
  for (auto t : ts) {
    certs.push_back(verify_matrix_inequality(t));
    const auto& c = certs.back();
    if (!c.matches) ++mismatches;
    if (!c.holds) {
      if (t < 3)
        anomalies.push_back(t);  // (3/2) ln t < 1 < lambda_max below t = 3
      else
        ++failures;
    }
  }

  TailConfig tail;
  tail.t = config.get_int("concentration.tail_t", tail.t);
  tail.epsilon = config.get_double("concentration.epsilon", tail.epsilon);
  tail.sigma = config.get_double("concentration.sigma", tail.sigma);
  tail.trials = trials_flag.value_or(config.get_int("concentration.trials", tail.trials));
  tail.num_arms = config.get_int("concentration.arms", tail.num_arms);
  tail.b = config.get_double("concentration.b", tail.b);
  tail.method = parse_method(config.get_string("concentration.method", "se_reachable"));
  tail.seed = config.get_uint("concentration.seed", tail.seed);
  const TailReport report = monte_carlo_tail(tail);

  const fs::path out = prepare_out(opt.out_dir);
  write_file(out / "spectral.csv", [&](std::ostream& os) { write_spectral_csv(os, certs); });
  write_file(out / "tail.csv", [&](std::ostream& os) {
    write_tail_csv(os, std::span<const TailReport>(&report, 1));
  });

  std::string note;
  for (auto t : anomalies) note += " anomaly_t=" + std::to_string(t);
  std::printf("verify-concentration: t=%ld..%ld mismatches=%d failures=%d tail_freq=%s bound=%s%s\n",
              static_cast<long>(ts.front()), static_cast<long>(ts.back()), mismatches, failures,
              format_double(report.empirical_freq).c_str(),
              format_double(report.bound_freq).c_str(), note.c_str());
  return mismatches == 0 && failures == 0 && report.pass ? kOk : kVerificationFailed;
}

int cmd_verify_lemma1(const CommonOptions& opt, std::optional<std::int64_t> max_k_flag,
                      std::optional<std::int64_t> max_t_flag) {
  const Config config = load_config(opt.config_path);
  const auto max_k = max_k_flag.value_or(config.get_int("lemma1.max_k", kMaxLemmaArms));
  const auto max_t = max_t_flag.value_or(config.get_int("lemma1.max_t", kMaxLemmaHorizon));
  const auto bs = config.get_list("lemma1.b", {0.5, 0.6, 0.75, 0.9});
  if (max_k < 2 || max_t < 2) throw ConfigError("--max-k and --max-t must be >= 2");
  if (max_k > kMaxLemmaArms || max_t > kMaxLemmaHorizon)
    throw ConfigError("lemma1 enumeration is capped at K <= 4, T <= 16");

  std::vector<ViolationReport> reports;
  std::int64_t violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (std::int64_t k = 2; k <= max_k; ++k)
    for (std::int64_t t = 2; t <= max_t; ++t)
      for (double b : bs) {
        reports.push_back(lemma1_bruteforce(k, t, b));
        violations += reports.back().violations;
        min_slack = std::min(min_slack, reports.back().slack);
      }
  const fs::path out = prepare_out(opt.out_dir);
  write_file(out / "lemma1.csv", [&](std::ostream& os) { write_lemma1_csv(os, reports); });
  std::printf("verify-lemma1: cells=%zu violations=%ld min_slack=%s\n", reports.size(),
              static_cast<long>(violations), format_double(min_slack).c_str());
  return violations == 0 ? kOk : kVerificationFailed;
}

int cmd_estimate_b(const CommonOptions& opt) {
  if (opt.config_path.empty()) throw ConfigError("estimate-b needs --config");
  const Config config = load_config(opt.config_path);
  const InstanceSpec spec = instance_from_config(config);
  const auto b_values = config.get_list("estimate.b_values", {spec.b});
  BEstimationProtocol protocol;
  protocol.grid = config.get_list("estimate.grid", protocol.grid);
  protocol.half_period = config.get_int("estimate.half_period", protocol.half_period);
  protocol.repeats = config.get_int("estimate.repeats", protocol.repeats);
  const auto arm = static_cast<Eigen::Index>(config.get_int("estimate.arm", 0));
  const double tolerance = config.get_double("estimate.tolerance", 0.05);
  const std::uint64_t seed = config.get_uint("run.seed", 0);
  if (arm < 0 || arm >= spec.arms()) throw ConfigError("estimate.arm out of range");

  std::vector<BEstimateRow> rows;
  double worst = 0.0;
  for (std::size_t j = 0; j < b_values.size(); ++j) {
    InstanceSpec cell = spec;
    cell.b = b_values[j];
    const BanditInstance instance = cell.build(2 * protocol.half_period);
    const NoiseStream noise(replication_seed(seed, static_cast<std::int64_t>(j)),
                            instance.noise(), instance.sigma());
    const auto pairs = b_estimation_pairs(instance, arm, protocol, noise);
    rows.push_back({cell.b, estimate_b(pairs)});
    worst = std::max(worst, std::abs(rows.back().estimate.b_hat - cell.b));
  }
  const fs::path out = prepare_out(opt.out_dir);
  write_file(out / "b_estimate.csv", [&](std::ostream& os) { write_b_estimate_csv(os, rows); });
  std::printf("estimate-b: cells=%zu max_abs_error=%s tolerance=%s\n", rows.size(),
              format_double(worst).c_str(), format_double(tolerance).c_str());
  return worst <= tolerance ? kOk : kVerificationFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bandits with divisible resources: simulation and verification"};
  app.require_subcommand(1);

  CommonOptions opt;
  const auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config,-c", opt.config_path, "INI config file");
    sub->add_option("--out,-o", opt.out_dir, "output directory")->capture_default_str();
  };

  auto* run_cmd = app.add_subcommand("run", "simulate replications, write trace_<rep>.csv and summary.csv");
  add_common(run_cmd);

  std::string axis, values;
  auto* sweep_cmd = app.add_subcommand("sweep", "one summary row per value of T, K or b");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--axis", axis, "T, K or b");
  sweep_cmd->add_option("--values", values, "comma-separated, increasing");

  std::string t_text;
  std::optional<std::int64_t> trials;
  auto* conc_cmd = app.add_subcommand("verify-concentration",
                                      "spectral certificate and Monte Carlo tail");
  add_common(conc_cmd);
  conc_cmd->add_option("--t", t_text, "range a..b or list of t for the spectral check");
  conc_cmd->add_option("--trials", trials, "Monte Carlo trials");

  std::optional<std::int64_t> max_k, max_t;
  auto* lemma_cmd = app.add_subcommand("verify-lemma1", "exhaustive stopping-time bound check");
  add_common(lemma_cmd);
  lemma_cmd->add_option("--max-k", max_k, "largest K (<= 4)");
  lemma_cmd->add_option("--max-t", max_t, "largest T (<= 16)");

  auto* est_cmd = app.add_subcommand("estimate-b", "regress log|D| on log a to recover b");
  add_common(est_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kUsageError;
  }

  try {
    if (*run_cmd) return cmd_run(opt);
    if (*sweep_cmd) return cmd_sweep(opt, axis, values);
    if (*conc_cmd) return cmd_verify_concentration(opt, t_text, trials);
    if (*lemma_cmd) return cmd_verify_lemma1(opt, max_k, max_t);
    if (*est_cmd) return cmd_estimate_b(opt);
  } catch (const std::invalid_argument& e) {  // ConfigError and friends
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

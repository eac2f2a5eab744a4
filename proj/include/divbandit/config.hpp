#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "divbandit/harness.hpp"

namespace divbandit {

/// INI-style config: `[section]` headers and `key = value` lines, addressed
/// as "section.key" (e.g. instance.means, run.T). Lists are comma separated.
class Config {
 public:
  Config() = default;
  explicit Config(boost::property_tree::ptree tree) : tree_(std::move(tree)) {}

  static Config load(const std::filesystem::path& path);
  static Config parse(const std::string& text);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  std::int64_t get_int(const std::string& key, std::int64_t fallback) const;
  std::uint64_t get_uint(const std::string& key, std::uint64_t fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;
  std::vector<double> get_list(const std::string& key) const;
  std::vector<double> get_list(const std::string& key,
                               const std::vector<double>& fallback) const;

  /// Throws ConfigError for keys outside `allowed` (dotted names).
  void require_known(const std::vector<std::string>& allowed) const;

  const boost::property_tree::ptree& tree() const { return tree_; }

 private:
  boost::property_tree::ptree tree_;
};

/// Parses "1, 2.5, 3" (surrounding brackets allowed).
std::vector<double> parse_number_list(const std::string& text);

/// Reads the [instance] section.
InstanceSpec instance_from_config(const Config& config);
/// Loads a bandit instance from a config file; uses run.T for gap scaling.
BanditInstance load_instance(const std::filesystem::path& path);
/// Reads [instance], [policy] and [run].
RunConfig run_config_from(const Config& config);

}  // namespace divbandit

#include "divbandit/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

namespace divbandit {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

double parse_number(const std::string& raw, const std::string& key) {
  const std::string s = trim(raw);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("'" + key + "' is not a number: '" + raw + "'");
  return value;
}

}  // namespace

Config Config::load(const std::filesystem::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return Config(std::move(tree));
}

Config Config::parse(const std::string& text) {
  std::istringstream in(text);
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  return Config(std::move(tree));
}

bool Config::has(const std::string& key) const {
  return tree_.get_optional<std::string>(key).has_value();
}

std::string Config::get_string(const std::string& key) const {
  auto v = tree_.get_optional<std::string>(key);
  if (!v) throw ConfigError("missing config key '" + key + "'");
  return trim(*v);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return has(key) ? get_string(key) : fallback;
}

double Config::get_double(const std::string& key) const {
  return parse_number(get_string(key), key);
}

double Config::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

std::int64_t Config::get_int(const std::string& key, std::int64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  // Accept 1e5-style integers.
  const double v = parse_number(s, key);
  if (v != std::floor(v)) throw ConfigError("'" + key + "' must be an integer");
  return static_cast<std::int64_t>(v);
}

std::uint64_t Config::get_uint(const std::string& key, std::uint64_t fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError("'" + key + "' must be a nonnegative integer");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const std::string s = get_string(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("'" + key + "' must be true or false");
}

std::vector<double> Config::get_list(const std::string& key) const {
  try {
    return parse_number_list(get_string(key));
  } catch (const ConfigError& e) {
    throw ConfigError("'" + key + "': " + e.what());
  }
}

std::vector<double> Config::get_list(const std::string& key,
                                     const std::vector<double>& fallback) const {
  return has(key) ? get_list(key) : fallback;
}

void Config::require_known(const std::vector<std::string>& allowed) const {
  for (const auto& [section, body] : tree_) {
    if (body.empty()) throw ConfigError("key '" + section + "' outside any [section]");
    for (const auto& [key, value] : body) {
      const std::string dotted = section + "." + key;
      if (std::find(allowed.begin(), allowed.end(), dotted) == allowed.end())
        throw ConfigError("unknown config key '" + dotted + "'");
    }
  }
}

std::vector<double> parse_number_list(const std::string& text) {
  std::string s = trim(text);
  if (!s.empty() && s.front() == '[') {
    if (s.back() != ']') throw ConfigError("unbalanced brackets in list");
    s = s.substr(1, s.size() - 2);
  }
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, "list entry"));
  if (out.empty()) throw ConfigError("empty list");
  return out;
}

InstanceSpec instance_from_config(const Config& config) {
  InstanceSpec spec;
  if (config.has("instance.means")) {
    spec.means = config.get_list("instance.means");
  } else if (config.has("instance.gap")) {
    spec.gap = config.get_double("instance.gap");
    spec.num_arms = config.get_int("instance.arms", 2);
    const std::string scale = config.get_string("instance.gap_scale", "fixed");
    if (scale == "fixed")
      spec.gap_scale = GapScale::fixed;
    else if (scale == "sqrt_k_over_t")
      spec.gap_scale = GapScale::sqrt_k_over_t;
    else
      throw ConfigError("instance.gap_scale must be fixed or sqrt_k_over_t");
  } else {
    throw ConfigError("config needs instance.means or instance.gap");
  }
  spec.b = config.get_double("instance.b");
  spec.sigma = config.get_double("instance.sigma", 1.0);
  spec.noise = parse_noise_family(config.get_string("instance.noise", "gaussian"));
  return spec;
}

BanditInstance load_instance(const std::filesystem::path& path) {
  const Config config = Config::load(path);
  return instance_from_config(config).build(config.get_int("run.T", 1));
}

RunConfig run_config_from(const Config& config) {
  RunConfig rc;
  rc.instance = instance_from_config(config);
  rc.policy.name = config.get_string("policy.name", "se");
  if (config.has("policy.eps")) rc.policy.eps = config.get_double("policy.eps");
  if (config.has("policy.b")) rc.policy.b = config.get_double("policy.b");
  if (config.has("policy.sigma")) rc.policy.sigma = config.get_double("policy.sigma");
  rc.horizon = config.get_int("run.T", 1000);
  rc.replications = config.get_int("run.replications", 1);
  rc.base_seed = config.get_uint("run.seed", 0);
  rc.record_every = config.get_int("run.record_every", 1);
  rc.record_ci = config.get_bool("run.record_ci", false);
  rc.validate();
  return rc;
}

}  // namespace divbandit

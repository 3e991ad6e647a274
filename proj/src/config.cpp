#include "crisscross/config.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace crisscross {

namespace {

using nlohmann::json;

template <int N>
Eigen::Matrix<double, N, 1> read_vector(const json& j, const char* key, std::vector<std::string>& bad) {
  Eigen::Matrix<double, N, 1> v = Eigen::Matrix<double, N, 1>::Zero();
  const json& x = j.at(key);
  if (!x.is_array() || x.size() != N) {
    bad.push_back(std::string(key) + " must be an array of " + std::to_string(N) + " numbers");
    return v;
  }
  for (int i = 0; i < N; ++i) {
    if (!x[static_cast<std::size_t>(i)].is_number()) {
      bad.push_back(std::string(key) + " must contain numbers only");
      return v;
    }
    v[i] = x[static_cast<std::size_t>(i)].get<double>();
  }
  return v;
}

double read_number(const json& j, const char* key, std::vector<std::string>& bad) {
  const json& x = j.at(key);
  if (!x.is_number()) {
    bad.push_back(std::string(key) + " must be a number");
    return 0.0;
  }
  return x.get<double>();
}

}  // namespace

Config parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InvalidConfig({std::string("config is not valid JSON: ") + e.what()});
  }
  if (!j.is_object()) throw InvalidConfig({"config must be a JSON object"});

  static const std::set<std::string> known{"lambda", "mu",  "h",            "gamma",   "b",      "ell0",
                                           "c",      "r_list", "seed", "replications", "horizon", "policy"};
  std::vector<std::string> bad;
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) bad.push_back("unknown key: " + item.key());
  }
  for (const char* key : {"lambda", "mu", "h", "gamma"}) {
    if (!j.contains(key)) bad.push_back(std::string("missing key: ") + key);
  }
  if (!bad.empty()) throw InvalidConfig(bad);

  Config cfg;
  cfg.limits.lambda = read_vector<2>(j, "lambda", bad);
  cfg.limits.mu = read_vector<3>(j, "mu", bad);
  cfg.limits.h = read_vector<3>(j, "h", bad);
  cfg.limits.gamma = read_number(j, "gamma", bad);
  if (j.contains("b")) cfg.limits.b = read_vector<3>(j, "b", bad);
  if (j.contains("ell0")) cfg.ell0 = read_number(j, "ell0", bad);
  if (j.contains("c")) cfg.c = read_number(j, "c", bad);
  if (j.contains("horizon")) cfg.horizon = read_number(j, "horizon", bad);
  if (j.contains("r_list")) {
    const json& x = j.at("r_list");
    cfg.r_list.clear();
    if (!x.is_array() || x.empty()) {
      bad.push_back("r_list must be a nonempty array of numbers");
    } else {
      for (const auto& v : x) {
        if (!v.is_number()) {
          bad.push_back("r_list must contain numbers only");
          break;
        }
        cfg.r_list.push_back(v.get<double>());
      }
    }
  }
  if (j.contains("seed")) {
    const json& x = j.at("seed");
    if (!x.is_number_integer() || (x.is_number_integer() && !x.is_number_unsigned() && x.get<long long>() < 0)) {
      bad.push_back("seed must be a nonnegative integer");
    } else {
      cfg.seed = x.get<std::uint64_t>();
    }
  }
  if (j.contains("replications")) {
    const json& x = j.at("replications");
    if (!x.is_number_integer() || x.get<long long>() < 1) {
      bad.push_back("replications must be a positive integer");
    } else {
      cfg.replications = x.get<std::size_t>();
    }
  }
  if (j.contains("policy")) {
    const json& x = j.at("policy");
    std::vector<std::string> names;
    if (x.is_string()) {
      names.push_back(x.get<std::string>());
    } else if (x.is_array() && !x.empty()) {
      for (const auto& v : x) names.push_back(v.is_string() ? v.get<std::string>() : std::string("<non-string>"));
    } else {
      bad.push_back("policy must be a name or a nonempty array of names");
    }
    cfg.policies.clear();
    for (const auto& name : names) {
      if (auto kind = parse_policy(name)) {
        cfg.policies.push_back(*kind);
      } else {
        bad.push_back("unknown policy: " + name);
      }
    }
  }
  if (!(cfg.horizon > 0.0)) bad.push_back("horizon must be positive");
  for (double r : cfg.r_list) {
    if (!(r >= 1.0)) {
      bad.push_back("every r in r_list must be >= 1");
      break;
    }
  }
  if (!bad.empty()) throw InvalidConfig(bad);

  auto limit_problems = check_limits(cfg.limits);
  if (!limit_problems.empty()) throw InvalidConfig(limit_problems);
  return cfg;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig({"cannot open config file: " + path});
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace crisscross

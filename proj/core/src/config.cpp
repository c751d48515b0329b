#include "moe/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace moe {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& pointer, const std::string& why) {
  throw std::invalid_argument("config error at " + pointer + ": " + why);
}

void check_known_keys(const json& obj, const std::string& pointer,
                      const std::set<std::string>& known) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!known.contains(key)) fail(pointer + "/" + key, "unknown field");
  }
}

double require_number(const json& obj, const std::string& pointer, const std::string& key) {
  if (!obj.contains(key)) fail(pointer + "/" + key, "missing required field");
  if (!obj[key].is_number()) fail(pointer + "/" + key, "expected a number");
  return obj[key].get<double>();
}

double number_or(const json& obj, const std::string& pointer, const std::string& key,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number()) fail(pointer + "/" + key, "expected a number");
  return obj[key].get<double>();
}

std::size_t positive_integer(const json& obj, const std::string& pointer,
                             const std::string& key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_unsigned() && !obj[key].is_number_integer())
    fail(pointer + "/" + key, "expected a positive integer");
  const auto v = obj[key].get<long long>();
  if (v <= 0) fail(pointer + "/" + key, "must be >= 1");
  return static_cast<std::size_t>(v);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) fail("/", "top level must be an object");
  check_known_keys(doc, "", {"target", "kernel", "p", "ladder", "grid",
                             "exceedance_thresholds", "kappa", "seed", "workers", "output",
                             "assertions"});

  ExperimentConfig cfg;

  if (!doc.contains("target") || !doc["target"].is_object())
    fail("/target", "missing required object");
  check_known_keys(doc["target"], "/target", {"name", "params"});
  if (!doc["target"].contains("name") || !doc["target"]["name"].is_string())
    fail("/target/name", "missing required string");
  cfg.target_name = doc["target"]["name"].get<std::string>();
  if (doc["target"].contains("params")) {
    if (!doc["target"]["params"].is_object()) fail("/target/params", "expected an object");
    for (const auto& [key, value] : doc["target"]["params"].items()) {
      if (!value.is_number()) fail("/target/params/" + key, "expected a number");
      cfg.target_params[key] = value.get<double>();
    }
  }

  if (doc.contains("kernel")) {
    if (!doc["kernel"].is_string()) fail("/kernel", "expected a string");
    cfg.kernel = doc["kernel"].get<std::string>();
  }

  cfg.p = number_or(doc, "", "p", 2.0);
  if (!(cfg.p >= 1.0) || !std::isfinite(cfg.p)) fail("/p", "must be finite and >= 1");

  if (!doc.contains("ladder") || !doc["ladder"].is_array() || doc["ladder"].empty())
    fail("/ladder", "missing required nonempty array");
  std::size_t prev_n = 0;
  for (std::size_t r = 0; r < doc["ladder"].size(); ++r) {
    const std::string ptr = "/ladder/" + std::to_string(r);
    const json& rung = doc["ladder"][r];
    if (!rung.is_object()) fail(ptr, "expected an object");
    check_known_keys(rung, ptr, {"n", "l", "m", "rho"});
    Schedule s;
    s.n = positive_integer(rung, ptr, "n", 0);
    if (s.n == 0) fail(ptr + "/n", "missing required field");
    s.sharpness = require_number(rung, ptr, "l");
    if (!(s.sharpness >= 0.0)) fail(ptr + "/l", "must be >= 0");
    s.m = positive_integer(rung, ptr, "m", 0);
    if (s.m < 2) fail(ptr + "/m", "must be >= 2");
    s.rho = number_or(rung, ptr, "rho", 1.5);
    if (!(s.rho > 0.0)) fail(ptr + "/rho", "must be > 0");
    if (s.n < prev_n) fail(ptr + "/n", "ladder must refine: n is decreasing");
    prev_n = s.n;
    cfg.ladder.push_back(s);
  }

  if (doc.contains("grid")) {
    if (!doc["grid"].is_object()) fail("/grid", "expected an object");
    check_known_keys(doc["grid"], "/grid", {"x_points", "y_points", "normalizer_points"});
    cfg.x_points = positive_integer(doc["grid"], "/grid", "x_points", cfg.x_points);
    cfg.y_points = positive_integer(doc["grid"], "/grid", "y_points", cfg.y_points);
    cfg.normalizer_points =
        positive_integer(doc["grid"], "/grid", "normalizer_points", cfg.normalizer_points);
  }

  if (doc.contains("exceedance_thresholds")) {
    if (!doc["exceedance_thresholds"].is_array())
      fail("/exceedance_thresholds", "expected an array");
    cfg.exceedance_thresholds.clear();
    for (std::size_t i = 0; i < doc["exceedance_thresholds"].size(); ++i) {
      const json& t = doc["exceedance_thresholds"][i];
      if (!t.is_number() || !(t.get<double>() > 0.0))
        fail("/exceedance_thresholds/" + std::to_string(i), "must be a positive number");
      cfg.exceedance_thresholds.push_back(t.get<double>());
    }
  }

  if (doc.contains("kappa")) {
    if (!doc["kappa"].is_number() || !(doc["kappa"].get<double>() > 0.0))
      fail("/kappa", "must be a positive number");
    cfg.kappa = doc["kappa"].get<double>();
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer())
      fail("/seed", "expected an integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.workers = static_cast<unsigned>(positive_integer(doc, "", "workers", 1));

  if (doc.contains("output")) {
    if (!doc["output"].is_object()) fail("/output", "expected an object");
    check_known_keys(doc["output"], "/output", {"csv", "json"});
    if (doc["output"].contains("csv")) {
      if (!doc["output"]["csv"].is_string()) fail("/output/csv", "expected a string");
      cfg.csv_path = doc["output"]["csv"].get<std::string>();
    }
    if (doc["output"].contains("json")) {
      if (!doc["output"]["json"].is_string()) fail("/output/json", "expected a string");
      cfg.json_path = doc["output"]["json"].get<std::string>();
    }
  }

  if (doc.contains("assertions")) {
    if (!doc["assertions"].is_object()) fail("/assertions", "expected an object");
    check_known_keys(doc["assertions"], "/assertions",
                     {"total_strictly_decreasing", "exceedance_strictly_decreasing", "s1_max",
                      "bound_holds"});
    const json& a = doc["assertions"];
    if (a.contains("total_strictly_decreasing")) {
      if (!a["total_strictly_decreasing"].is_boolean())
        fail("/assertions/total_strictly_decreasing", "expected a boolean");
      cfg.assertions.total_strictly_decreasing = a["total_strictly_decreasing"].get<bool>();
    }
    if (a.contains("exceedance_strictly_decreasing")) {
      if (!a["exceedance_strictly_decreasing"].is_boolean())
        fail("/assertions/exceedance_strictly_decreasing", "expected a boolean");
      cfg.assertions.exceedance_strictly_decreasing =
          a["exceedance_strictly_decreasing"].get<bool>();
    }
    if (a.contains("s1_max")) {
      if (!a["s1_max"].is_number() || !(a["s1_max"].get<double>() >= 0.0))
        fail("/assertions/s1_max", "expected a nonnegative number");
      cfg.assertions.s1_max = a["s1_max"].get<double>();
    }
    if (a.contains("bound_holds")) {
      if (!a["bound_holds"].is_boolean()) fail("/assertions/bound_holds", "expected a boolean");
      cfg.assertions.bound_holds = a["bound_holds"].get<bool>();
    }
  }

  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open config: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace moe

#include "moe/target.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

#include "moe/quadrature.hpp"

namespace moe {

TargetDensity::TargetDensity(std::string name, Box x_domain, Box y_domain, RawFn raw,
                             std::size_t normalizer_points_per_axis)
    : name_(std::move(name)),
      x_domain_(std::move(x_domain)),
      y_domain_(std::move(y_domain)),
      raw_(std::move(raw)),
      normalizer_points_(normalizer_points_per_axis) {
  if (!raw_) throw std::invalid_argument("TargetDensity: null raw function");
  if (normalizer_points_ < 2)
    throw std::invalid_argument("TargetDensity: normalizer needs >= 2 points per axis");
}

double TargetDensity::raw(std::span<const double> x, std::span<const double> y) const {
  return raw_(x, y);
}

double TargetDensity::normalizer(std::span<const double> x) const {
  std::vector<double> key(x.begin(), x.end());
  {
    std::lock_guard lock(cache_mutex_);
    if (auto it = normalizer_cache_.find(key); it != normalizer_cache_.end())
      return it->second;
  }
  const QuadratureGrid grid(y_domain_, normalizer_points_);
  const std::size_t q = y_domain_.dim();
  const double z = grid.node_weight() *
                   pairwise_sum(0, grid.num_nodes(), [&](std::size_t i) {
                     std::array<double, 8> buf;
                     grid.node(i, std::span<double>(buf.data(), q));
                     return raw_(x, std::span<const double>(buf.data(), q));
                   });
  if (!(z > 0.0) || !std::isfinite(z))
    throw std::invalid_argument("TargetDensity '" + name_ +
                                "': raw density has non-positive mass at probed x");
  std::lock_guard lock(cache_mutex_);
  return normalizer_cache_.emplace(std::move(key), z).first->second;
}

double TargetDensity::operator()(std::span<const double> x,
                                 std::span<const double> y) const {
  if (!x_domain_.contains(x) || !y_domain_.contains(y))
    throw std::domain_error("TargetDensity '" + name_ + "': point outside domain");
  return raw_(x, y) / normalizer(x);
}

namespace {

double param(const std::map<std::string, double>& params, const std::string& key,
             double fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::string& target, const std::map<std::string, double>& params,
                std::initializer_list<const char*> known) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok)
      throw std::invalid_argument("target '" + target + "': unknown parameter '" + key + "'");
    (void)value;
  }
}

}  // namespace

TargetDensity make_target(const std::string& name,
                          const std::map<std::string, double>& params,
                          std::size_t normalizer_points_per_axis) {
  const Box x_dom = Box::unit_cube(1);
  if (name == "uniform") {
    check_keys(name, params, {"y_lower", "y_upper"});
    const Box y_dom(Box::interval(param(params, "y_lower", 0.0), param(params, "y_upper", 1.0)));
    return TargetDensity(
        name, x_dom, y_dom,
        [](std::span<const double>, std::span<const double>) { return 1.0; },
        normalizer_points_per_axis);
  }
  if (name == "sine_gauss") {
    check_keys(name, params, {"amplitude", "scale", "y_lower", "y_upper"});
    const double amplitude = param(params, "amplitude", 0.8);
    const double scale = param(params, "scale", 0.4);
    if (!(scale > 0.0)) throw std::invalid_argument("sine_gauss: scale must be positive");
    const Box y_dom(Box::interval(param(params, "y_lower", -3.0), param(params, "y_upper", 3.0)));
    return TargetDensity(
        name, x_dom, y_dom,
        [amplitude, scale](std::span<const double> x, std::span<const double> y) {
          const double mean = amplitude * std::sin(2.0 * std::numbers::pi * x[0]);
          const double t = (y[0] - mean) / scale;
          return std::exp(-0.5 * t * t);
        },
        normalizer_points_per_axis);
  }
  if (name == "gated_bimodal") {
    check_keys(name, params, {"center1", "center2", "scale1", "scale2", "y_lower", "y_upper"});
    const double c1 = param(params, "center1", -1.0);
    const double c2 = param(params, "center2", 1.0);
    const double s1 = param(params, "scale1", 0.5);
    const double s2 = param(params, "scale2", 0.5);
    if (!(s1 > 0.0) || !(s2 > 0.0))
      throw std::invalid_argument("gated_bimodal: scales must be positive");
    const Box y_dom(Box::interval(param(params, "y_lower", -3.0), param(params, "y_upper", 3.0)));
    return TargetDensity(
        name, x_dom, y_dom,
        [c1, c2, s1, s2](std::span<const double> x, std::span<const double> y) {
          const double t1 = (y[0] - c1) / s1;
          const double t2 = (y[0] - c2) / s2;
          return x[0] * std::exp(-0.5 * t1 * t1) + (1.0 - x[0]) * std::exp(-0.5 * t2 * t2);
        },
        normalizer_points_per_axis);
  }
  throw std::invalid_argument("unknown target: " + name);
}

std::vector<std::string> registered_targets() {
  return {"uniform", "sine_gauss", "gated_bimodal"};
}

}  // namespace moe

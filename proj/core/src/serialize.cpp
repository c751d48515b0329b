#include "moe/serialize.hpp"

#include <stdexcept>

#include <nlohmann/json.hpp>

namespace moe {

namespace {

using nlohmann::ordered_json;

ordered_json softmax_json(const SoftmaxGating& g) {
  return ordered_json{{"type", "softmax"}, {"a", g.intercepts()}, {"b", g.slopes()}};
}

ordered_json gaussian_json(const GaussianGating& g) {
  return ordered_json{
      {"type", "gaussian"}, {"pi", g.weights()}, {"nu", g.means()}, {"sigma", g.covariances()}};
}

ordered_json equalcov_json(const EqualCovGaussianGating& g) {
  return ordered_json{
      {"type", "equalcov"}, {"pi", g.weights()}, {"nu", g.means()}, {"sigma", g.covariance()}};
}

ordered_json gating_json(const AnyGating& gating) {
  return std::visit(
      [](const auto& g) -> ordered_json {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, SoftmaxGating>) return softmax_json(g);
        else if constexpr (std::is_same_v<T, GaussianGating>) return gaussian_json(g);
        else return equalcov_json(g);
      },
      gating);
}

AnyGating gating_from(const ordered_json& doc) {
  const std::string type = doc.at("type").get<std::string>();
  if (type == "softmax") {
    return SoftmaxGating(doc.at("a").get<std::vector<double>>(),
                         doc.at("b").get<std::vector<std::vector<double>>>());
  }
  if (type == "gaussian") {
    return GaussianGating(doc.at("pi").get<std::vector<double>>(),
                          doc.at("nu").get<std::vector<std::vector<double>>>(),
                          doc.at("sigma").get<std::vector<SquareMatrix>>());
  }
  if (type == "equalcov") {
    return EqualCovGaussianGating(doc.at("pi").get<std::vector<double>>(),
                                  doc.at("nu").get<std::vector<std::vector<double>>>(),
                                  doc.at("sigma").get<SquareMatrix>());
  }
  throw std::invalid_argument("gating_from_json: unknown type '" + type + "'");
}

}  // namespace

std::string gating_to_json(const AnyGating& gating) { return gating_json(gating).dump(); }

AnyGating gating_from_json(const std::string& text) {
  return gating_from(ordered_json::parse(text));
}

std::string flat_moe_to_json(const FlatMoE& model) {
  AnyGating g = std::visit([](const auto& x) { return AnyGating(x); }, model.gating);
  ordered_json doc = gating_json(g);
  doc["experts"] = ordered_json::array();
  for (const auto& e : model.experts)
    doc["experts"].push_back(
        ordered_json{{"kernel", e.kernel().name}, {"mu", e.mu()}, {"sigma", e.sigma()}});
  return doc.dump();
}

FlatMoE flat_moe_from_json(const std::string& text) {
  const auto doc = ordered_json::parse(text);
  AnyGating g = gating_from(doc);
  if (std::holds_alternative<EqualCovGaussianGating>(g))
    throw std::invalid_argument("flat_moe_from_json: flat models use softmax or gaussian gating");
  std::vector<LocationScaleExpert> experts;
  for (const auto& e : doc.at("experts")) {
    experts.emplace_back(kernel_by_name(e.at("kernel").get<std::string>()),
                         e.at("mu").get<std::vector<double>>(), e.at("sigma").get<double>());
  }
  std::variant<SoftmaxGating, GaussianGating> gating =
      std::holds_alternative<SoftmaxGating>(g)
          ? std::variant<SoftmaxGating, GaussianGating>(std::get<SoftmaxGating>(std::move(g)))
          : std::variant<SoftmaxGating, GaussianGating>(std::get<GaussianGating>(std::move(g)));
  FlatMoE out{std::move(gating), std::move(experts)};
  const std::size_t gates = std::visit([](const auto& x) { return x.size(); }, out.gating);
  if (gates != out.experts.size())
    throw std::invalid_argument("flat_moe_from_json: gate/expert count mismatch");
  return out;
}

}  // namespace moe

#pragma once

#include <string>
#include <variant>

#include "moe/gating.hpp"
#include "moe/pipeline.hpp"

namespace moe {

using AnyGating = std::variant<SoftmaxGating, GaussianGating, EqualCovGaussianGating>;

/// Gating parameters as a JSON document:
///   {"type":"softmax","a":[...],"b":[[...]]}
///   {"type":"gaussian","pi":[...],"nu":[[...]],"sigma":[[[...]]]}
///   {"type":"equalcov","pi":[...],"nu":[[...]],"sigma":[[...]]}
/// Round trips are value-exact for finite doubles.
std::string gating_to_json(const AnyGating& gating);
AnyGating gating_from_json(const std::string& text);

/// Flat model: the gating schema extended with an "experts" array of
/// {"kernel": name, "mu": [...], "sigma": s}.
std::string flat_moe_to_json(const FlatMoE& model);
FlatMoE flat_moe_from_json(const std::string& text);

}  // namespace moe

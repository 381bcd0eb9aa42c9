#pragma once

#include <string>

#include "json.hpp"
#include "thetafock/expansion.hpp"
#include "thetafock/geometry.hpp"
#include "thetafock/quadrature.hpp"

namespace thetafock {

using Json = nlohmann::ordered_json;

Json config_to_json(const SpaceConfig& cfg);
SpaceConfig config_from_json(const Json& j);  // validates; throws on bad schema

SpaceConfig load_config(const std::string& path);

Json expansion_to_json(const Expansion& e);
// cfg supplies the space the coefficients live in; indices are checked
// against it.
Expansion expansion_from_json(const SpaceConfig& cfg, const Json& j);
Expansion load_expansion(const SpaceConfig& cfg, const std::string& path);

std::string gram_to_csv(const GramMatrix& gm);

}  // namespace thetafock

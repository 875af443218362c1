#pragma once

#include <json.hpp>

#include "clustertet/seed.hpp"

namespace clustertet {

// Version tag written under the top-level "schema" key of every JSON document.
inline constexpr const char* kSchemaVersion = "clustertet/1";

// {"labels":[...],"epsilon":[[...],...]} with canonical label strings.
nlohmann::json seed_to_json(const Seed& seed);
Seed seed_from_json(const nlohmann::json& doc);

// Steps as {"mutation":"C:{2}"} or {"automorphism":{"C:{2}":"C:{1,3}",...}}.
nlohmann::json transformation_to_json(const ClusterTransformation& t);
ClusterTransformation transformation_from_json(const nlohmann::json& doc);

// Composition string in operator notation, rightmost factor applied first, e.g.
// "α_{{2},{1,3}} ∘ μ_{{2}}".
std::string describe(const ClusterTransformation& t);

// RFC 4180 quoting of one CSV field.
std::string csv_field(const std::string& s);

}  // namespace clustertet

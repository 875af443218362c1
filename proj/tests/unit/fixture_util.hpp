#pragma once

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "clustertet/seed.hpp"

namespace fixture {

inline std::string path(const std::string& name) { return std::string(CLUSTERTET_FIXTURE_DIR) + "/" + name; }

inline std::string read(const std::string& name)
{
    std::ifstream in(path(name), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json quivers() { return nlohmann::json::parse(read("quivers.json")); }

// Arrow set (from, to) of a seed, one pair per unit of multiplicity.
inline std::multiset<std::pair<std::string, std::string>> arrows(const clustertet::Seed& s)
{
    std::multiset<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            for (std::int64_t m = 0; m < s.eps(i, j); ++m) out.emplace(s.labels()[j].str(), s.labels()[i].str());
    return out;
}

inline std::multiset<std::pair<std::string, std::string>> arrows(const nlohmann::json& entry)
{
    std::multiset<std::pair<std::string, std::string>> out;
    for (const auto& a : entry["arrows"]) out.emplace(a[0].get<std::string>(), a[1].get<std::string>());
    return out;
}

}  // namespace fixture

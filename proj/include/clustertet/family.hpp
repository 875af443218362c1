#pragma once

#include <array>
#include <string>
#include <string_view>

#include "clustertet/error.hpp"

namespace clustertet {

enum class QuiverFamily { Triangle, Square, Butterfly };

inline constexpr std::array<QuiverFamily, 3> kAllFamilies = {QuiverFamily::Triangle, QuiverFamily::Square,
                                                             QuiverFamily::Butterfly};

inline std::string to_string(QuiverFamily f)
{
    switch (f) {
    case QuiverFamily::Triangle: return "triangle";
    case QuiverFamily::Square: return "square";
    case QuiverFamily::Butterfly: return "butterfly";
    }
    return "unknown";
}

inline QuiverFamily parse_family(std::string_view name)
{
    if (name == "triangle") return QuiverFamily::Triangle;
    if (name == "square") return QuiverFamily::Square;
    if (name == "butterfly") return QuiverFamily::Butterfly;
    throw Error(ErrorCode::ParseError, "unknown quiver family '" + std::string(name) + "'");
}

}  // namespace clustertet

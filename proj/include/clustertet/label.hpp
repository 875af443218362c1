#pragma once

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace clustertet {

// A quiver vertex name.  Wiring-diagram quivers use chambers (subsets of wire
// names), crossings (an unordered wire pair) and wire segments; Plain labels
// carry a bare integer for hand-written seeds.
//
// The total order is the canonical serialization order: chambers by
// (size, lexicographic subset), then crossings lexicographically, then
// segments by (wire, position), then plain labels numerically.
class VertexLabel {
public:
    enum class Kind { Chamber, Crossing, Segment, Plain };

    static VertexLabel chamber(std::vector<int> wires);
    static VertexLabel crossing(int a, int b);
    static VertexLabel segment(int wire, int position);
    static VertexLabel plain(int index);

    // Parses the canonical strings "C:{1,3}", "C:{}", "X:13", "X:2,11",
    // "S:2_3" and "V:7".
    static VertexLabel parse(std::string_view text);

    Kind kind() const { return kind_; }
    const std::vector<int>& subset() const { return data_; }  // Chamber only
    int first() const { return data_[0]; }   // Crossing a, Segment wire, Plain index
    int second() const { return data_[1]; }  // Crossing b, Segment position

    // Canonical string, the inverse of parse().
    std::string str() const;
    // Short human-readable form used in tables: "∅", "{1,2}", "13", "2_3", "7".
    std::string display() const;

    std::strong_ordering operator<=>(const VertexLabel& other) const;
    bool operator==(const VertexLabel& other) const = default;

private:
    VertexLabel(Kind kind, std::vector<int> data) : kind_(kind), data_(std::move(data)) {}

    Kind kind_ = Kind::Plain;
    std::vector<int> data_;
};

}  // namespace clustertet

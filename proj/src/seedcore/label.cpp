#include "clustertet/label.hpp"

#include <algorithm>
#include <charconv>

#include "clustertet/error.hpp"

namespace clustertet {

namespace {

int parse_int(std::string_view s, std::string_view whole)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
        throw Error(ErrorCode::ParseError, "bad vertex label '" + std::string(whole) + "'");
    return value;
}

std::string join_wires(const std::vector<int>& wires)
{
    std::string out;
    for (std::size_t i = 0; i < wires.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(wires[i]);
    }
    return out;
}

// Crossings are printed as "ab" when both names are single digits, which is
// the usual notation; otherwise a comma keeps the pair unambiguous.
std::string crossing_text(int a, int b)
{
    if (a < 10 && b < 10) return std::to_string(a) + std::to_string(b);
    return std::to_string(a) + "," + std::to_string(b);
}

}  // namespace

VertexLabel VertexLabel::chamber(std::vector<int> wires)
{
    std::sort(wires.begin(), wires.end());
    if (std::adjacent_find(wires.begin(), wires.end()) != wires.end())
        throw Error(ErrorCode::ParseError, "chamber subset has repeated wires");
    for (int w : wires)
        if (w < 1) throw Error(ErrorCode::ParseError, "wire names start at 1");
    return VertexLabel(Kind::Chamber, std::move(wires));
}

VertexLabel VertexLabel::crossing(int a, int b)
{
    if (a == b) throw Error(ErrorCode::ParseError, "crossing needs two distinct wires");
    if (a > b) std::swap(a, b);
    if (a < 1) throw Error(ErrorCode::ParseError, "wire names start at 1");
    return VertexLabel(Kind::Crossing, {a, b});
}

VertexLabel VertexLabel::segment(int wire, int position)
{
    if (wire < 1 || position < 1)
        throw Error(ErrorCode::ParseError, "segment wire and position start at 1");
    return VertexLabel(Kind::Segment, {wire, position});
}

VertexLabel VertexLabel::plain(int index)
{
    return VertexLabel(Kind::Plain, {index});
}

VertexLabel VertexLabel::parse(std::string_view text)
{
    if (text.size() < 3 || text[1] != ':')
        throw Error(ErrorCode::ParseError, "bad vertex label '" + std::string(text) + "'");
    std::string_view body = text.substr(2);
    switch (text[0]) {
    case 'C': {
        if (body.size() < 2 || body.front() != '{' || body.back() != '}')
            throw Error(ErrorCode::ParseError, "bad chamber label '" + std::string(text) + "'");
        body = body.substr(1, body.size() - 2);
        std::vector<int> wires;
        while (!body.empty()) {
            auto comma = body.find(',');
            wires.push_back(parse_int(body.substr(0, comma), text));
            body = comma == std::string_view::npos ? std::string_view() : body.substr(comma + 1);
        }
        return chamber(std::move(wires));
    }
    case 'X': {
        auto comma = body.find(',');
        if (comma != std::string_view::npos)
            return crossing(parse_int(body.substr(0, comma), text), parse_int(body.substr(comma + 1), text));
        if (body.size() != 2)
            throw Error(ErrorCode::ParseError, "bad crossing label '" + std::string(text) + "'");
        return crossing(body[0] - '0', parse_int(body.substr(1), text));
    }
    case 'S': {
        auto us = body.find('_');
        if (us == std::string_view::npos)
            throw Error(ErrorCode::ParseError, "bad segment label '" + std::string(text) + "'");
        return segment(parse_int(body.substr(0, us), text), parse_int(body.substr(us + 1), text));
    }
    case 'V':
        return plain(parse_int(body, text));
    default:
        throw Error(ErrorCode::ParseError, "bad vertex label '" + std::string(text) + "'");
    }
}

std::string VertexLabel::str() const
{
    switch (kind_) {
    case Kind::Chamber: return "C:{" + join_wires(data_) + "}";
    case Kind::Crossing: return "X:" + crossing_text(data_[0], data_[1]);
    case Kind::Segment: return "S:" + std::to_string(data_[0]) + "_" + std::to_string(data_[1]);
    case Kind::Plain: return "V:" + std::to_string(data_[0]);
    }
    return {};
}

std::string VertexLabel::display() const
{
    switch (kind_) {
    case Kind::Chamber: return data_.empty() ? "∅" : "{" + join_wires(data_) + "}";
    case Kind::Crossing: return crossing_text(data_[0], data_[1]);
    case Kind::Segment: return std::to_string(data_[0]) + "_" + std::to_string(data_[1]);
    case Kind::Plain: return std::to_string(data_[0]);
    }
    return {};
}

std::strong_ordering VertexLabel::operator<=>(const VertexLabel& other) const
{
    if (kind_ != other.kind_) return static_cast<int>(kind_) <=> static_cast<int>(other.kind_);
    if (kind_ == Kind::Chamber && data_.size() != other.data_.size())
        return data_.size() <=> other.data_.size();
    return data_ <=> other.data_;
}

}  // namespace clustertet

#include "clustertet/io.hpp"

#include "clustertet/error.hpp"

namespace clustertet {

nlohmann::json seed_to_json(const Seed& seed)
{
    nlohmann::json labels = nlohmann::json::array();
    for (const auto& l : seed.labels()) labels.push_back(l.str());
    nlohmann::json eps = nlohmann::json::array();
    for (std::size_t i = 0; i < seed.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < seed.size(); ++j) row.push_back(seed.eps(i, j));
        eps.push_back(std::move(row));
    }
    return {{"labels", std::move(labels)}, {"epsilon", std::move(eps)}};
}

Seed seed_from_json(const nlohmann::json& doc)
{
    try {
        std::vector<VertexLabel> labels;
        for (const auto& l : doc.at("labels")) labels.push_back(VertexLabel::parse(l.get<std::string>()));
        auto rows = doc.at("epsilon").get<std::vector<std::vector<std::int64_t>>>();
        return make_seed(std::move(labels), rows);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("seed JSON: ") + e.what());
    }
}

nlohmann::json transformation_to_json(const ClusterTransformation& t)
{
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : t.steps) {
        if (const auto* m = std::get_if<Mutation>(&step)) {
            steps.push_back({{"mutation", m->k.str()}});
        } else {
            nlohmann::json perm = nlohmann::json::object();
            for (const auto& [from, to] : std::get<Automorphism>(step).moved()) perm[from.str()] = to.str();
            steps.push_back({{"automorphism", std::move(perm)}});
        }
    }
    return steps;
}

ClusterTransformation transformation_from_json(const nlohmann::json& doc)
{
    ClusterTransformation t;
    try {
        for (const auto& step : doc) {
            if (step.contains("mutation")) {
                t.steps.emplace_back(Mutation{VertexLabel::parse(step.at("mutation").get<std::string>())});
            } else {
                std::map<VertexLabel, VertexLabel> moved;
                for (const auto& [from, to] : step.at("automorphism").items())
                    moved.emplace(VertexLabel::parse(from), VertexLabel::parse(to.get<std::string>()));
                t.steps.emplace_back(Automorphism(std::move(moved)));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("transformation JSON: ") + e.what());
    }
    return t;
}

std::string describe(const ClusterTransformation& t)
{
    std::string out;
    for (auto it = t.steps.rbegin(); it != t.steps.rend(); ++it) {
        std::string factor;
        if (const auto* m = std::get_if<Mutation>(&*it)) {
            factor = "μ_{" + m->k.display() + "}";
        } else {
            const auto& alpha = std::get<Automorphism>(*it);
            if (alpha.is_identity()) continue;
            factor = "α[";
            bool first = true;
            for (const auto& [from, to] : alpha.moved()) {
                if (!first) factor += ", ";
                factor += from.display() + "→" + to.display();
                first = false;
            }
            factor += "]";
        }
        if (!out.empty()) out += " ∘ ";
        out += factor;
    }
    return out.empty() ? "id" : out;
}

std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

}  // namespace clustertet

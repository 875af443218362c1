// Command-line front end: one subcommand per invocation, exit status 0 on
// success, 1 on a failed verification, 2 on a usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "clustertet/error.hpp"
#include "clustertet/io.hpp"
#include "clustertet/kernel.hpp"
#include "clustertet/specialfn.hpp"
#include "clustertet/tropical.hpp"
#include "clustertet/wiring.hpp"

using namespace clustertet;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::uint64_t rng_seed = 42;
    std::size_t samples = 100;
    double tol = 1e-9;
    std::string format;
    std::string output;
    QuadratureConfig quad;
};

struct Result {
    int status = kExitOk;
    std::string body;
};

json envelope(const std::string& kind)
{
    json doc;
    doc["schema"] = kSchemaVersion;
    doc["kind"] = kind;
    return doc;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

// The requested format, or `fallback` when none was given; rejects formats
// the subcommand does not produce.
std::string pick_format(const RunConfig& cfg, const std::string& fallback, std::initializer_list<const char*> allowed)
{
    const std::string f = cfg.format.empty() ? fallback : cfg.format;
    for (const char* a : allowed)
        if (f == a) return f;
    throw UsageError("format '" + f + "' is not available for this subcommand");
}

QuiverFamily family_arg(const std::string& name)
{
    try {
        return parse_family(name);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

std::vector<QuiverFamily> families_arg(const std::string& name)
{
    if (name.empty() || name == "all") return {kAllFamilies.begin(), kAllFamilies.end()};
    return {family_arg(name)};
}

cplx parse_complex(const std::string& text)
{
    std::stringstream ss(text);
    std::string re, im;
    std::getline(ss, re, ',');
    std::getline(ss, im);
    try {
        return {std::stod(re), im.empty() ? 0.0 : std::stod(im)};
    } catch (const std::exception&) {
        throw UsageError("expected a complex number as 're,im', got '" + text + "'");
    }
}

std::vector<int> parse_signs(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "+" || item == "+1" || item == "1")
            out.push_back(1);
        else if (item == "-" || item == "-1")
            out.push_back(-1);
        else
            throw UsageError("signs must be a comma separated list of + and -");
    }
    return out;
}

// ---------------------------------------------------------------- quiver / word

Result quiver_build(const RunConfig& cfg, const std::string& word, const std::string& family, int n)
{
    const Word w = parse_word(word, n);
    const QuiverFamily f = family_arg(family);
    const Seed s = build_quiver(w, f);
    const std::string fmt = pick_format(cfg, "json", {"json", "csv", "markdown"});
    struct Arrow {
        std::string from, to;
        std::int64_t mult;
    };
    std::vector<Arrow> arrows;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            if (s.eps(i, j) > 0) arrows.push_back({s.labels()[j].str(), s.labels()[i].str(), s.eps(i, j)});
    if (fmt == "csv") {
        std::string out = "from,to,multiplicity\r\n";
        for (const auto& a : arrows) out += csv_field(a.from) + "," + csv_field(a.to) + "," + std::to_string(a.mult) + "\r\n";
        return {kExitOk, out};
    }
    if (fmt == "markdown") {
        std::string out = "| from | to | multiplicity |\n|---|---|---|\n";
        for (const auto& a : arrows) out += "| " + a.from + " | " + a.to + " | " + std::to_string(a.mult) + " |\n";
        return {kExitOk, out};
    }
    json doc = envelope("quiver");
    doc["word"] = w.str();
    doc["n"] = w.n;
    doc["family"] = to_string(f);
    doc["seed"] = seed_to_json(s);
    json arr = json::array();
    for (const auto& a : arrows) arr.push_back({{"from", a.from}, {"to", a.to}, {"multiplicity", a.mult}});
    doc["arrows"] = arr;
    return {kExitOk, dump(doc)};
}

Result word_analyze(const RunConfig& cfg, const std::string& word, int n)
{
    const Word w = parse_word(word, n);
    const WordAnalysis a = analyze_word(w);
    const std::string fmt = pick_format(cfg, "json", {"json", "markdown"});
    if (fmt == "markdown") {
        std::ostringstream out;
        out << "word: " << w.str() << "\nn: " << w.n << "\nlength: " << a.length << "\ninversions: " << a.inversions
            << "\nreduced: " << (a.is_reduced ? "true" : "false") << "\nlongest: " << (a.is_longest ? "true" : "false")
            << "\n";
        return {kExitOk, out.str()};
    }
    json doc = envelope("word");
    doc["word"] = w.str();
    doc["n"] = w.n;
    doc["permutation"] = a.permutation;
    doc["length"] = a.length;
    doc["inversions"] = a.inversions;
    doc["reduced"] = a.is_reduced;
    doc["longest"] = a.is_longest;
    if (a.is_reduced) {
        const WiringDiagram d = build_diagram(w);
        json crossings = json::array();
        for (const auto& c : d.crossings)
            crossings.push_back({{"position", c.position},
                                 {"level", c.level},
                                 {"wires", {c.lower, c.upper}},
                                 {"label", c.label().str()}});
        doc["diagram"] = {{"wires", d.order}, {"crossings", crossings}, {"chambers", d.chamber_sets}};
    }
    return {kExitOk, dump(doc)};
}

// ---------------------------------------------------------------- braid / loop

Result braid_apply(const RunConfig& cfg, const std::string& word, int at, int n)
{
    const Word w = parse_word(word, n);
    const BraidMoveResult r = apply_braid_move(w, at);
    const std::string fmt = pick_format(cfg, "json", {"json", "markdown"});
    if (fmt == "markdown")
        return {kExitOk, w.str() + " -> " + r.word.str() + (r.inverse ? " (inverse move)" : "") + "\n"};
    json doc = envelope("braid-apply");
    doc["word"] = w.str();
    doc["at"] = at;
    doc["result"] = r.word.str();
    doc["wires"] = r.wires;
    doc["inverse"] = r.inverse;
    return {kExitOk, dump(doc)};
}

Result braid_transform(const RunConfig& cfg, const std::string& word, int at, int n, const std::string& family)
{
    const Word w = parse_word(word, n);
    const QuiverFamily f = family_arg(family);
    const BraidMoveResult r = apply_braid_move(w, at);
    const ClusterTransformation t = braid_move_transform(w, at, f);
    const bool matches = apply_transformation(build_quiver(w, f), t) == build_quiver(r.word, f);
    const std::string fmt = pick_format(cfg, "json", {"json", "markdown"});
    if (fmt == "markdown")
        return {matches ? kExitOk : kExitFailed, w.str() + " -> " + r.word.str() + ": " + describe(t) +
                                                     "\ntarget quiver: " + (matches ? "true" : "false") + "\n"};
    json doc = envelope("braid-transform");
    doc["family"] = to_string(f);
    doc["source"] = w.str();
    doc["target"] = r.word.str();
    doc["transformation"] = transformation_to_json(t);
    doc["description"] = describe(t);
    doc["target_quiver_matches"] = matches;
    return {matches ? kExitOk : kExitFailed, dump(doc)};
}

Result loop_s4(const RunConfig& cfg, const std::string& family)
{
    const QuiverFamily f = family_arg(family);
    const PathResult p = loop_path_s4(f);
    const std::string fmt = pick_format(cfg, "json", {"json", "markdown"});
    const Automorphism& alpha = std::get<Automorphism>(p.transform.steps.back());
    if (fmt == "markdown") {
        std::ostringstream out;
        out << "family: " << to_string(f) << "\nmoves:";
        for (const auto& m : p.moves) out << " " << m;
        out << "\nwords:";
        for (const auto& w : p.words) out << " " << w.str();
        out << "\nmutations: " << p.transform.mutation_count() << "\ntransformation: " << describe(p.transform)
            << "\n";
        return {kExitOk, out.str()};
    }
    json doc = envelope("loop");
    doc["family"] = to_string(f);
    doc["moves"] = p.moves;
    json words = json::array();
    for (const auto& w : p.words) words.push_back(w.str());
    doc["words"] = words;
    doc["mutations"] = p.transform.mutation_count();
    doc["transformation"] = transformation_to_json(p.transform);
    json moved = json::object();
    for (const auto& [from, to] : alpha.moved()) moved[from.str()] = to.str();
    doc["trailing_automorphism"] = moved;
    doc["description"] = describe(p.transform);
    return {kExitOk, dump(doc)};
}

// ---------------------------------------------------------------- verify

std::string sci(double x)
{
    std::ostringstream o;
    o.precision(3);
    o << std::scientific << x;
    return o.str();
}

Result verify(const RunConfig& cfg, const std::string& what, const std::string& family)
{
    const auto families = families_arg(family);
    const std::string fmt = pick_format(cfg, "markdown", {"json", "markdown"});
    bool all_ok = true;
    json rows = json::array();
    std::ostringstream text;
    const Word start = parse_word("123121");
    for (QuiverFamily f : families) {
        const Seed seed = build_quiver(start, f);
        json row = {{"family", to_string(f)}};
        bool ok = false;
        std::string detail;
        if (what == "trivial") {
            const ClusterTransformation t = loop_transform_s4(f);
            ok = is_trivial(seed, t);
            row["trivial"] = ok;
            row["epsilon_restored"] = apply_transformation(seed, t) == seed;
            row["mutations"] = t.mutation_count();
            detail = "trivial: " + std::string(ok ? "true" : "false");
        } else if (what == "classical") {
            const ClusterTransformation t = loop_transform_s4(f);
            const NumericComparison c =
                transforms_equal_numeric(seed, t, ClusterTransformation{}, cfg.samples, cfg.tol, cfg.rng_seed);
            ok = c.equal;
            row["classical"] = ok;
            row["max_rel_err"] = c.max_rel_err;
            detail = "classical: " + std::string(ok ? "true" : "false") + " (max_rel_err " + sci(c.max_rel_err) + ")";
        } else {
            const auto sides = tetrahedron_sides(f);
            const NumericComparison c = transforms_equal_numeric(seed, sides.first.transform, sides.second.transform,
                                                                 cfg.samples, cfg.tol, cfg.rng_seed);
            ok = c.equal;
            row["te_classical"] = ok;
            row["max_rel_err"] = c.max_rel_err;
            detail = "te-classical: " + std::string(ok ? "true" : "false") + " (max_rel_err " + sci(c.max_rel_err) + ")";
        }
        all_ok = all_ok && ok;
        rows.push_back(row);
        text << (families.size() > 1 ? to_string(f) + " " : "") << detail << "\n";
    }
    if (fmt == "markdown") return {all_ok ? kExitOk : kExitFailed, text.str()};
    json doc = envelope("verify-" + what);
    doc["samples"] = cfg.samples;
    doc["tol"] = cfg.tol;
    doc["rng_seed"] = cfg.rng_seed;
    doc["results"] = rows;
    doc["pass"] = all_ok;
    return {all_ok ? kExitOk : kExitFailed, dump(doc)};
}

// ---------------------------------------------------------------- trace

Result trace_appendix(const RunConfig& cfg, const std::string& family, const std::string& labels)
{
    const QuiverFamily f = family_arg(family);
    if (labels != "appendix" && labels != "wiring") throw UsageError("--labels must be appendix or wiring");
    const Seed seed = build_quiver(parse_word("123121"), f);
    const TraceTable table(seed, loop_transform_s4(f), labels == "appendix" ? &appendix_aliases(f) : nullptr);
    const std::string fmt = pick_format(cfg, "markdown", {"json", "csv", "markdown"});
    if (fmt == "markdown") return {kExitOk, table.markdown()};
    if (fmt == "csv") return {kExitOk, table.csv()};
    json doc = envelope("trace");
    doc["family"] = to_string(f);
    doc["labels"] = labels;
    json rows = json::array();
    for (const auto& r : table.rows()) {
        json entries = json::array();
        for (const auto& e : r.entries)
            entries.push_back({{"variable", table.variable_name(e.variable)},
                               {"time", e.time},
                               {"monomial", table.monomial_text(e.exponents)},
                               {"exponents", e.exponents},
                               {"final", e.final},
                               {"text", table.entry_text(e)}});
        rows.push_back({{"step", r.step}, {"entries", entries}});
    }
    doc["rows"] = rows;
    return {kExitOk, dump(doc)};
}

// ---------------------------------------------------------------- qdl

PlanckParams planck_arg(double b, double hbar)
{
    if (b > 0.0 && hbar > 0.0) throw UsageError("give either --b or --hbar");
    if (hbar > 0.0) return PlanckParams::from_hbar(hbar);
    return PlanckParams::from_b(b > 0.0 ? b : 1.0);
}

Result qdl_eval(const RunConfig& cfg, const std::string& function, const std::string& z_text, double b, double hbar)
{
    const PlanckParams p = planck_arg(b, hbar);
    const cplx z = parse_complex(z_text);
    cplx value;
    if (function == "phi")
        value = phi(z, p, cfg.quad);
    else if (function == "double-sine")
        value = double_sine(z, p, cfg.quad);
    else
        throw UsageError("--function must be phi or double-sine");
    const std::string fmt = pick_format(cfg, "json", {"json", "markdown"});
    if (fmt == "markdown") {
        std::ostringstream out;
        out.precision(17);
        out << function << "(" << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i) = " << value.real()
            << (value.imag() < 0 ? "" : "+") << value.imag() << "i\n";
        return {kExitOk, out.str()};
    }
    json doc = envelope("qdl-eval");
    doc["function"] = function;
    doc["z"] = complex_json(z);
    doc["b"] = p.b;
    doc["hbar"] = p.hbar;
    doc["value"] = complex_json(value);
    return {kExitOk, dump(doc)};
}

Result qdl_check(const RunConfig& cfg, const std::string& suite, double b, std::size_t points)
{
    SuiteOptions opts;
    if (b > 0.0) opts.b = b;
    opts.rng_seed = cfg.rng_seed;
    opts.samples = points;
    std::vector<std::string> suites;
    if (suite == "all")
        suites = check_suite_names();
    else
        suites = {suite};
    for (const auto& s : suites)
        if (std::find(check_suite_names().begin(), check_suite_names().end(), s) == check_suite_names().end())
            throw UsageError("unknown suite '" + s + "'");
    std::vector<std::pair<std::string, CheckRow>> rows;
    for (const auto& s : suites)
        for (auto& r : run_check_suite(s, opts, cfg.quad)) rows.emplace_back(s, std::move(r));
    bool pass = true;
    for (const auto& [s, r] : rows) pass = pass && r.pass;
    const int status = pass ? kExitOk : kExitFailed;
    const std::string fmt = pick_format(cfg, "json", {"json", "csv", "markdown"});
    auto params_text = [](const CheckRow& r) {
        std::string t;
        for (const auto& [k, v] : r.params) t += (t.empty() ? "" : " ") + k + "=" + v;
        return t;
    };
    auto num = [](double x) {
        std::ostringstream o;
        o.precision(17);
        o << x;
        return o.str();
    };
    if (fmt == "csv") {
        std::string out = "suite,check,params,lhs_re,lhs_im,rhs_re,rhs_im,abs_err,tolerance,pass\r\n";
        for (const auto& [s, r] : rows)
            out += s + "," + csv_field(r.check) + "," + csv_field(params_text(r)) + "," + num(r.lhs.real()) + "," +
                   num(r.lhs.imag()) + "," + num(r.rhs.real()) + "," + num(r.rhs.imag()) + "," + num(r.abs_err) +
                   "," + num(r.tolerance) + "," + (r.pass ? "true" : "false") + "\r\n";
        return {status, out};
    }
    if (fmt == "markdown") {
        std::string out = "| suite | check | params | abs_err | tolerance | pass |\n|---|---|---|---|---|---|\n";
        for (const auto& [s, r] : rows)
            out += "| " + s + " | " + r.check + " | " + params_text(r) + " | " + num(r.abs_err) + " | " +
                   num(r.tolerance) + " | " + (r.pass ? "true" : "false") + " |\n";
        return {status, out};
    }
    json doc = envelope("qdl-check");
    doc["suite"] = suite;
    json arr = json::array();
    for (const auto& [s, r] : rows) {
        json params = json::object();
        for (const auto& [k, v] : r.params) params[k] = v;
        arr.push_back({{"suite", s},
                       {"check", r.check},
                       {"params", params},
                       {"lhs", complex_json(r.lhs)},
                       {"rhs", complex_json(r.rhs)},
                       {"abs_err", r.abs_err},
                       {"tolerance", r.tolerance},
                       {"pass", r.pass}});
    }
    doc["rows"] = arr;
    doc["pass"] = pass;
    return {status, dump(doc)};
}

// ---------------------------------------------------------------- kernel / gauge

struct KernelSelection {
    std::string family = "square";
    std::string word = "121";
    int at = 1;
    std::string signs;
    std::string te_side;
    bool loop = false;
};

// Braid-move positions along a path of words.
std::vector<std::pair<Word, int>> braid_steps(const PathResult& p)
{
    std::vector<std::pair<Word, int>> out;
    for (std::size_t i = 0; i + 1 < p.words.size(); ++i) {
        const Word& w = p.words[i];
        for (int at = 1; at + 2 <= static_cast<int>(w.letters.size()); ++at) {
            try {
                if (apply_braid_move(w, at).word == p.words[i + 1]) {
                    out.emplace_back(w, at);
                    break;
                }
            } catch (const Error&) {
            }
        }
    }
    return out;
}

struct SelectedTransformation {
    Seed seed;
    ClusterTransformation t;
    std::string description;
};

SelectedTransformation select_transformation(const KernelSelection& sel)
{
    const QuiverFamily f = family_arg(sel.family);
    if (sel.loop) {
        const Word w = parse_word("123121");
        return {build_quiver(w, f), loop_transform_s4(f), "loop s4 on 123121"};
    }
    if (!sel.te_side.empty()) {
        const auto sides = tetrahedron_sides(f);
        if (sel.te_side != "first" && sel.te_side != "second") throw UsageError("--te-side must be first or second");
        const PathResult& p = sel.te_side == "first" ? sides.first : sides.second;
        return {build_quiver(p.words.front(), f), p.transform, "tetrahedron side " + sel.te_side};
    }
    const Word w = parse_word(sel.word);
    return {build_quiver(w, f), normalize_transform(braid_move_transform(w, sel.at, f)),
            "braid move at " + std::to_string(sel.at) + " on " + w.str()};
}

std::optional<std::vector<int>> signs_arg(const KernelSelection& sel)
{
    if (sel.signs.empty()) return std::nullopt;
    return parse_signs(sel.signs);
}

KernelSpec select_kernel(const KernelSelection& sel, std::string& description)
{
    if (!sel.te_side.empty()) {
        // Each side is emitted as the composition of its braid-move kernels.
        if (!sel.signs.empty()) throw UsageError("--signs applies to single transformations only");
        const QuiverFamily f = family_arg(sel.family);
        const auto sides = tetrahedron_sides(f);
        if (sel.te_side != "first" && sel.te_side != "second") throw UsageError("--te-side must be first or second");
        const PathResult& p = sel.te_side == "first" ? sides.first : sides.second;
        std::optional<KernelSpec> acc;
        for (const auto& [w, at] : braid_steps(p)) {
            const KernelSpec k =
                assemble_kernel(build_quiver(w, f), normalize_transform(braid_move_transform(w, at, f)));
            acc = acc ? compose_kernels(*acc, k) : k;
        }
        description = "tetrahedron side " + sel.te_side + " (composed braid-move kernels)";
        return *acc;
    }
    const SelectedTransformation s = select_transformation(sel);
    description = s.description;
    return assemble_kernel(s.seed, s.t, signs_arg(sel));
}

Result kernel_assemble(const RunConfig& cfg, const KernelSelection& sel)
{
    pick_format(cfg, "json", {"json"});
    std::string description;
    const KernelSpec spec = select_kernel(sel, description);
    json doc = envelope("kernel");
    doc["family"] = sel.family;
    doc["source"] = description;
    doc["kernel"] = kernel_to_json(spec);
    return {kExitOk, dump(doc)};
}

std::map<std::string, double> parse_boundary(const std::string& text)
{
    std::map<std::string, double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ';')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("boundary entries must read name=value");
        try {
            out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw UsageError("bad boundary value in '" + item + "'");
        }
    }
    return out;
}

Result kernel_eval(const RunConfig& cfg, const KernelSelection& sel, const std::string& boundary_text,
                   const std::string& mode, const std::string& r_text, double b)
{
    std::string description;
    const KernelSpec spec = select_kernel(sel, description);
    std::map<std::string, double> boundary;
    if (boundary_text.empty()) {
        Rng rng(cfg.rng_seed);
        boundary = random_boundary(spec, rng);
    } else {
        boundary = parse_boundary(boundary_text);
    }
    KernelEvalOptions opts;
    if (mode == "sign")
        opts.mode = KernelEvalOptions::Mode::SignIntegral;
    else if (mode != "closed")
        throw UsageError("--mode must be closed or sign");
    if (!r_text.empty()) {
        std::stringstream ss(r_text);
        std::string item;
        std::vector<double> r;
        while (std::getline(ss, item, ',')) r.push_back(std::stod(item));
        if (r.size() != 3) throw UsageError("--r-charges needs three values");
        opts.r_charges = {r[0], r[1], r[2]};
    }
    const PlanckParams p = PlanckParams::from_b(b);
    const KernelValue v = evaluate_kernel(spec, boundary, p, cfg.quad, opts);
    const std::string fmt = pick_format(cfg, "json", {"json", "markdown"});
    if (fmt == "markdown") {
        std::ostringstream out;
        out.precision(17);
        out << "kernel: " << description << "\nvalue: " << v.value.real() << (v.value.imag() < 0 ? "" : "+")
            << v.value.imag() << "i\ndelta_violated: " << (v.delta_violated ? "true" : "false") << "\n";
        return {kExitOk, out.str()};
    }
    json doc = envelope("kernel-eval");
    doc["source"] = description;
    doc["mode"] = mode;
    doc["b"] = b;
    doc["r_charges"] = opts.r_charges;
    doc["boundary"] = boundary;
    doc["value"] = complex_json(v.value);
    doc["delta_violated"] = v.delta_violated;
    doc["max_delta_residual"] = v.max_delta_residual;
    doc["dimension"] = v.dimension;
    return {kExitOk, dump(doc)};
}

Result gauge_data(const RunConfig& cfg, const KernelSelection& sel)
{
    const SelectedTransformation s = select_transformation(sel);
    const ChargeTable table = gauge_theory_data(s.seed, s.t);
    const std::string fmt = pick_format(cfg, "json", {"json", "csv"});
    if (fmt == "csv") return {kExitOk, charge_table_csv(table)};
    json doc = envelope("gauge");
    doc["source"] = s.description;
    doc["table"] = charge_table_to_json(table);
    return {kExitOk, dump(doc)};
}

void write_output(const RunConfig& cfg, const std::string& body)
{
    if (cfg.output.empty()) {
        std::cout << body;
        return;
    }
    std::filesystem::path path(cfg.output);
    const char* dir = std::getenv("CLUSTERTET_OUTPUT_DIR");
    if (path.is_relative() && dir && *dir) path = std::filesystem::path(dir) / path;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << body;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"clustertet: cluster transformations of braid moves, tetrahedron equation checks"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig cfg;
    app.add_option("--rng-seed", cfg.rng_seed, "random seed")->capture_default_str();
    app.add_option("--samples", cfg.samples, "random points for numeric checks")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--tol", cfg.tol, "tolerance for numeric checks")->check(CLI::PositiveNumber)->capture_default_str();
    app.add_option("--format", cfg.format, "json, csv or markdown")
        ->check(CLI::IsMember({"json", "csv", "markdown"}));
    app.add_option("--output", cfg.output, "write to this file (relative paths resolve under $CLUSTERTET_OUTPUT_DIR)");
    app.add_option("--quad-delta", cfg.quad.contour_offset, "contour height δ (0 = default)");
    app.add_option("--quad-truncation", cfg.quad.truncation, "contour truncation T (0 = adaptive)");
    app.add_option("--quad-max-nodes", cfg.quad.max_nodes, "quadrature node budget")->capture_default_str();
    app.add_option("--quad-tol", cfg.quad.target_abs_err, "quadrature absolute error target")->capture_default_str();

    std::function<Result()> action;
    std::string word, family, suite = "all", function = "phi", z_text = "0,0", labels = "appendix";
    std::string boundary, mode = "closed", r_text;
    int n = 0, at = 1;
    double b = 0.0, hbar = 0.0, kb = 1.0;
    std::size_t points = 20;
    KernelSelection sel;

    auto* quiver = app.add_subcommand("quiver", "quiver construction")->require_subcommand(1);
    auto* qb = quiver->add_subcommand("build", "build the quiver of a word");
    qb->add_option("--word", word, "reduced word, e.g. 123121")->required();
    qb->add_option("--family", family, "triangle, square or butterfly")->required();
    qb->add_option("--n", n, "number of wires (default: max letter + 1)");
    qb->callback([&] { action = [&] { return quiver_build(cfg, word, family, n); }; });

    auto* wordc = app.add_subcommand("word", "word utilities")->require_subcommand(1);
    auto* wa = wordc->add_subcommand("analyze", "permutation, reducedness and wiring diagram");
    wa->add_option("--word", word)->required();
    wa->add_option("--n", n);
    wa->callback([&] { action = [&] { return word_analyze(cfg, word, n); }; });

    auto* braid = app.add_subcommand("braid", "braid moves")->require_subcommand(1);
    auto* ba = braid->add_subcommand("apply", "rewrite a word by a braid move");
    ba->add_option("--word", word)->required();
    ba->add_option("--at", at, "1-based position of the first letter")->required();
    ba->add_option("--n", n);
    ba->callback([&] { action = [&] { return braid_apply(cfg, word, at, n); }; });
    auto* bt = braid->add_subcommand("transform", "cluster transformation of a braid move");
    bt->add_option("--word", word)->required();
    bt->add_option("--at", at)->required();
    bt->add_option("--family", family)->required();
    bt->add_option("--n", n);
    bt->callback([&] { action = [&] { return braid_transform(cfg, word, at, n, family); }; });

    auto* loop = app.add_subcommand("loop", "braid-move loops")->require_subcommand(1);
    auto* ls = loop->add_subcommand("s4", "the loop of eight braid moves on reduced words of the longest element of S4");
    ls->add_option("--family", family)->required();
    ls->callback([&] { action = [&] { return loop_s4(cfg, family); }; });

    auto* ver = app.add_subcommand("verify", "verification of the S4 loop")->require_subcommand(1);
    const std::pair<const char*, const char*> checks[] = {
        {"trivial", "tropical triviality and restored exchange matrix"},
        {"classical", "numeric triviality on random torus points"},
        {"te-classical", "numeric comparison of the two sides of the tetrahedron equation"}};
    for (const auto& [what, help] : checks) {
        auto* v = ver->add_subcommand(what, help);
        v->add_option("--family", family, "family or all (default all)");
        const std::string w = what;
        v->callback([&, w] { action = [&, w] { return verify(cfg, w, family); }; });
    }

    auto* trace = app.add_subcommand("trace", "tropical mutation traces")->require_subcommand(1);
    auto* ta = trace->add_subcommand("appendix", "changed-variable table of the S4 loop");
    ta->add_option("--family", family)->required();
    ta->add_option("--labels", labels, "appendix or wiring")->capture_default_str();
    ta->callback([&] { action = [&] { return trace_appendix(cfg, family, labels); }; });

    auto* qdl = app.add_subcommand("qdl", "noncompact quantum dilogarithm")->require_subcommand(1);
    auto* qe = qdl->add_subcommand("eval", "evaluate Φ or s_b");
    qe->add_option("--function", function, "phi or double-sine")->capture_default_str();
    qe->add_option("--z", z_text, "argument as re,im")->capture_default_str();
    qe->add_option("--b", b, "b (ħ = b²)");
    qe->add_option("--hbar", hbar, "ħ");
    qe->callback([&] { action = [&] { return qdl_eval(cfg, function, z_text, b, hbar); }; });
    auto* qc = qdl->add_subcommand("check", "run a numeric check suite");
    qc->add_option("--suite", suite, "difference, unitarity, inversion, faddeev, psi-ratio, continuation or all")
        ->capture_default_str();
    qc->add_option("--b", b, "restrict the suite to this b");
    qc->add_option("--points", points, "random points per parameter")->check(CLI::PositiveNumber)->capture_default_str();
    qc->callback([&] { action = [&] { return qdl_check(cfg, suite, b, points); }; });

    auto add_selection = [&](CLI::App* c) {
        c->add_option("--family", sel.family)->capture_default_str();
        c->add_option("--word", sel.word)->capture_default_str();
        c->add_option("--at", sel.at)->capture_default_str();
        c->add_option("--signs", sel.signs, "per-mutation signs, e.g. +,+,-,+ (default tropical)");
        c->add_option("--te-side", sel.te_side, "first or second side of the tetrahedron equation");
        c->add_flag("--loop", sel.loop, "the S4 loop");
    };
    auto* kernel = app.add_subcommand("kernel", "intertwiner kernels")->require_subcommand(1);
    auto* ka = kernel->add_subcommand("assemble", "kernel specification");
    add_selection(ka);
    ka->callback([&] { action = [&] { return kernel_assemble(cfg, sel); }; });
    auto* ke = kernel->add_subcommand("eval", "numeric kernel value");
    add_selection(ke);
    ke->add_option("--boundary", boundary, "name=value;... in σ units (default: random point)");
    ke->add_option("--mode", mode, "closed or sign")->capture_default_str();
    ke->add_option("--r-charges", r_text, "three positive R-charges summing to 2");
    ke->add_option("--b", kb, "b")->capture_default_str();
    ke->callback([&] { action = [&] { return kernel_eval(cfg, sel, boundary, mode, r_text, kb); }; });

    auto* gauge = app.add_subcommand("gauge", "three-dimensional gauge theory data")->require_subcommand(1);
    auto* gd = gauge->add_subcommand("data", "chiral multiplet charge table");
    add_selection(gd);
    gd->callback([&] { action = [&] { return gauge_data(cfg, sel); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    }

    try {
        const Result r = action();
        write_output(cfg, r.body);
        return r.status;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n\n" << app.help();
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.code()) {
        case ErrorCode::ParseError:
        case ErrorCode::LetterOutOfRange:
        case ErrorCode::NotApplicable:
        case ErrorCode::UnknownVertex:
        case ErrorCode::DomainViolation:
        case ErrorCode::DimensionMismatch:
            return kExitUsage;
        default:
            return kExitFailed;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailed;
    }
}

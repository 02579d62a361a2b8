#pragma once

// File formats and rendering.
//
// Graph files (JSON, UTF-8):
//   finite:   {"kind":"finite","vertices":["v","w"],
//              "edges":[{"id":"a","src":"v","dst":"w"}]}
//   periodic: {"kind":"periodic","stem":{...finite...},"pattern":{...finite...},
//              "stem_links":[{"id":"x","src":"v","dst":"c"}],
//              "period_links":[{"id":"e","src":"c","dst":"c"}]}
// A period link's dst lives in the next copy. Vertex references serialize as
// "stem:v" | "copy:3:c" (bare ids are accepted for finite graphs), edge
// references as "stem:a" | "copy:2:e" likewise.
//
// Witness files: {"mu":{"base":"stem:v","edges":[...]},
//                 "first":[{"alpha":[...edge refs...],"beta":[...]}],
//                 "second":[...]}
// Sides are edge-reference lists; the base of a nonempty side is the source
// of its first edge, and an empty side is the empty path at t(mu).
//
// Rendering uses a fixed field order throughout, so parse-then-render is
// byte-stable.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "pigraph/classify.hpp"
#include "pigraph/cylinder.hpp"
#include "pigraph/graph.hpp"

namespace pigraph {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Graphs
// ---------------------------------------------------------------------------

namespace detail {

// JSON shape errors (wrong types, missing fields) become ParseError so that
// every malformed input surfaces through the library's own error type.
template <typename F>
auto guard_json(const char* what, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& err) {
        throw ParseError(std::string(what) + ": " + err.what());
    }
}

inline FiniteGraph finite_from_json(const Json& j, const std::string& where) {
    if (!j.is_object()) throw ParseError(where + ": expected an object");
    FiniteGraph g;
    if (j.contains("kind") && j.at("kind") != "finite")
        throw ParseError(where + ": expected kind \"finite\"");
    for (const auto& v : j.value("vertices", Json::array())) {
        if (!v.is_string()) throw ParseError(where + ": vertex ids must be strings");
        g.vertices.push_back(v.get<std::string>());
    }
    for (const auto& e : j.value("edges", Json::array())) {
        if (!e.is_object() || !e.contains("id") || !e.contains("src") || !e.contains("dst"))
            throw ParseError(where + ": edges need id, src and dst");
        g.edges.push_back({e.at("id").get<std::string>(), e.at("src").get<std::string>(),
                           e.at("dst").get<std::string>()});
    }
    return g;
}

inline std::vector<Edge> links_from_json(const Json& j, const std::string& where) {
    std::vector<Edge> links;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("id") || !e.contains("src") || !e.contains("dst"))
            throw ParseError(where + ": links need id, src and dst");
        links.push_back({e.at("id").get<std::string>(), e.at("src").get<std::string>(),
                         e.at("dst").get<std::string>()});
    }
    return links;
}

inline Json finite_to_json(const FiniteGraph& g) {
    Json j;
    j["kind"] = "finite";
    j["vertices"] = g.vertices;
    j["edges"] = Json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}});
    return j;
}

inline Json links_to_json(const std::vector<Edge>& links) {
    Json j = Json::array();
    for (const auto& e : links) j.push_back({{"id", e.id}, {"src", e.src}, {"dst", e.dst}});
    return j;
}

} // namespace detail

inline GraphHandle parse_graph_json(const Json& j) {
    return detail::guard_json("graph", [&]() -> GraphHandle {
        if (!j.is_object() || !j.contains("kind")) throw ParseError("graph: missing kind");
        std::string kind = j.at("kind").get<std::string>();
        if (kind == "finite") return detail::finite_from_json(j, "graph");
        if (kind == "periodic") {
            PeriodicGraph p;
            p.stem = detail::finite_from_json(j.value("stem", Json::object()), "stem");
            p.pattern = detail::finite_from_json(j.value("pattern", Json::object()), "pattern");
            p.stem_links =
                detail::links_from_json(j.value("stem_links", Json::array()), "stem_links");
            p.period_links =
                detail::links_from_json(j.value("period_links", Json::array()), "period_links");
            return p;
        }
        throw ParseError("graph: unknown kind \"" + kind + "\"");
    });
}

inline Json render_graph_json(const GraphHandle& g) {
    if (const auto* f = as_finite(g)) return detail::finite_to_json(*f);
    const auto& p = *as_periodic(g);
    Json j;
    j["kind"] = "periodic";
    j["stem"] = detail::finite_to_json(p.stem);
    j["pattern"] = detail::finite_to_json(p.pattern);
    j["stem_links"] = detail::links_to_json(p.stem_links);
    j["period_links"] = detail::links_to_json(p.period_links);
    return j;
}

inline GraphHandle parse_graph_text(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("graph file: ") + err.what(), err.byte);
    }
    return parse_graph_json(j);
}

inline GraphHandle parse_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_graph_text(buffer.str());
}

// ---------------------------------------------------------------------------
// Paths and witnesses
// ---------------------------------------------------------------------------

namespace detail {

inline std::string vertex_ref_text(const GraphHandle& g, const VertexRef& v) {
    return is_periodic(g) ? format_vertex_ref(v) : v.id;
}
inline std::string edge_ref_text(const GraphHandle& g, const EdgeRef& e) {
    return is_periodic(g) ? format_edge_ref(e) : e.id;
}

} // namespace detail

inline Json render_path_json(const GraphHandle& g, const Path& p) {
    Json j;
    j["base"] = detail::vertex_ref_text(g, p.base);
    j["edges"] = Json::array();
    for (const auto& e : p.edges) j["edges"].push_back(detail::edge_ref_text(g, e));
    return j;
}

inline Path parse_path_json(const Json& j, const GraphHandle& g) {
    return detail::guard_json("path", [&]() -> Path {
        if (!j.is_object() || !j.contains("base")) throw ParseError("path: missing base");
        VertexRef base = parse_vertex_ref(j.at("base").get<std::string>());
        if (!has_vertex_ref(g, base))
            throw UnknownVertexError("unknown vertex: " + j.at("base").get<std::string>());
        std::vector<EdgeRef> edges;
        for (const auto& e : j.value("edges", Json::array()))
            edges.push_back(parse_edge_ref(e.get<std::string>()));
        Path p{base, std::move(edges)};
        if (!path_valid(g, p)) {
            // distinguish unknown edges from non-composing ones for error quality
            for (const auto& e : p.edges) edge_endpoints(g, e);
            throw NotComposableError("path edges do not compose from " + format_vertex_ref(base));
        }
        return p;
    });
}

namespace detail {

// A witness side: nonempty sides start at their first edge's source; empty
// sides are the empty path at t(mu).
inline Path parse_side(const Json& refs, const GraphHandle& g, const VertexRef& mu_target) {
    std::vector<EdgeRef> edges;
    for (const auto& e : refs) edges.push_back(parse_edge_ref(e.get<std::string>()));
    if (edges.empty()) return empty_path_at(mu_target);
    VertexRef base = edge_endpoints(g, edges.front()).src;
    Path p{base, std::move(edges)};
    if (!path_valid(g, p))
        throw NotComposableError("witness side does not compose");
    return p;
}

inline Json side_to_json(const GraphHandle& g, const Path& p) {
    Json j = Json::array();
    for (const auto& e : p.edges) j.push_back(edge_ref_text(g, e));
    return j;
}

} // namespace detail

inline ParadoxicalWitness parse_witness_json(const Json& j, const GraphHandle& g) {
    return detail::guard_json("witness", [&]() -> ParadoxicalWitness {
        if (!j.is_object() || !j.contains("mu")) throw ParseError("witness: missing mu");
        ParadoxicalWitness w;
        w.mu = parse_path_json(j.at("mu"), g);
        VertexRef target = path_target(g, w.mu);
        auto parse_family = [&](const char* key, std::vector<Bisection>& out) {
            for (const auto& pair : j.value(key, Json::array())) {
                if (!pair.is_object() || !pair.contains("alpha") || !pair.contains("beta"))
                    throw ParseError(std::string("witness: ") + key +
                                     " entries need alpha and beta");
                out.push_back({detail::parse_side(pair.at("alpha"), g, target),
                               detail::parse_side(pair.at("beta"), g, target)});
            }
        };
        parse_family("first", w.first_family);
        parse_family("second", w.second_family);
        return w;
    });
}

inline Json render_witness_json(const GraphHandle& g, const ParadoxicalWitness& w) {
    Json j;
    j["mu"] = render_path_json(g, w.mu);
    auto family = [&](const std::vector<Bisection>& bs) {
        Json arr = Json::array();
        for (const auto& b : bs)
            arr.push_back(
                {{"alpha", detail::side_to_json(g, b.alpha)}, {"beta", detail::side_to_json(g, b.beta)}});
        return arr;
    };
    j["first"] = family(w.first_family);
    j["second"] = family(w.second_family);
    return j;
}

inline ParadoxicalWitness parse_witness_file(const std::string& path, const GraphHandle& g) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const nlohmann::json::parse_error& err) {
        throw ParseError(std::string("witness file: ") + err.what(), err.byte);
    }
    return parse_witness_json(j, g);
}

// ---------------------------------------------------------------------------
// Classification reports
// ---------------------------------------------------------------------------

inline Json render_json(const ClassificationReport& r) {
    const GraphHandle& g = r.analyzed;
    Json j;
    j["conditions"] = {{"K", r.conditions.K},
                       {"I", r.conditions.I},
                       {"DI", r.conditions.DI},
                       {"DL", r.conditions.DL},
                       {"essentially_principal", r.conditions.essentially_principal}};
    j["property_ih"] = r.property_ih;
    j["locally_contracting"] = r.locally_contracting;
    j["cofinal"] = r.cofinal;
    j["simple"] = r.simple;
    j["purely_infinite"] = r.purely_infinite;
    j["implied_flags"] = {
        {"real_rank_zero", r.implied_flags.real_rank_zero},
        {"o_infinity_stable", r.implied_flags.o_infinity_stable},
        {"strongly_purely_infinite", r.implied_flags.strongly_purely_infinite},
        {"quotients_have_infinite_projections", r.implied_flags.quotients_have_infinite_projections}};
    j["af_verdict"] = r.af_verdict;
    j["tails_added"] = r.tails_added;

    Json certs = Json::object();
    if (r.conditions.k_failure) {
        certs["k_failure"] = {{"vertex", detail::vertex_ref_text(g, r.conditions.k_failure->vertex)},
                              {"cycle", render_path_json(g, r.conditions.k_failure->cycle)}};
    }
    if (r.conditions.i_failure)
        certs["i_failure"] = {{"vertex", detail::vertex_ref_text(g, *r.conditions.i_failure)}};
    auto obstruction = [&](const ObstructionCertificate& c) {
        return Json{{"root", detail::vertex_ref_text(g, c.root)},
                    {"prefix", render_path_json(g, c.lasso.prefix)},
                    {"repeat", render_path_json(g, c.lasso.repeat)}};
    };
    if (r.conditions.di_failure) certs["di_failure"] = obstruction(*r.conditions.di_failure);
    if (r.conditions.dl_failure) certs["dl_failure"] = obstruction(*r.conditions.dl_failure);
    if (r.conditions.principality_failure)
        certs["principality_failure"] = {
            {"prefix", render_path_json(g, r.conditions.principality_failure->prefix)},
            {"cycle", render_path_json(g, r.conditions.principality_failure->cycle)}};
    j["certificates"] = certs;

    Json witnesses = Json::array();
    for (const auto& vw : r.witnesses) {
        Json entry;
        entry["vertex"] = detail::vertex_ref_text(g, vw.vertex);
        entry["witness"] = render_witness_json(g, vw.witness);
        witnesses.push_back(entry);
    }
    j["witnesses"] = witnesses;
    Json failures = Json::array();
    for (const auto& v : r.witness_budget_failures)
        failures.push_back(detail::vertex_ref_text(g, v));
    j["witness_budget_failures"] = failures;
    j["notes"] = r.notes;
    return j;
}

// Reads back the semantic content of a rendered report (against the analyzed
// graph) so round-trips can be checked end to end.
inline ClassificationReport parse_report_json(const Json& j, const GraphHandle& analyzed) {
    return detail::guard_json("report", [&]() -> ClassificationReport {
    ClassificationReport r;
    r.analyzed = analyzed;
    const Json& c = j.at("conditions");
    r.conditions.K = c.at("K").get<bool>();
    r.conditions.I = c.at("I").get<bool>();
    r.conditions.DI = c.at("DI").get<bool>();
    r.conditions.DL = c.at("DL").get<bool>();
    r.conditions.essentially_principal = c.at("essentially_principal").get<bool>();
    r.property_ih = j.at("property_ih").get<bool>();
    r.locally_contracting = j.at("locally_contracting").get<bool>();
    r.cofinal = j.at("cofinal").get<bool>();
    r.simple = j.at("simple").get<bool>();
    r.purely_infinite = j.at("purely_infinite").get<bool>();
    const Json& flags = j.at("implied_flags");
    r.implied_flags.real_rank_zero = flags.at("real_rank_zero").get<bool>();
    r.implied_flags.o_infinity_stable = flags.at("o_infinity_stable").get<bool>();
    r.implied_flags.strongly_purely_infinite = flags.at("strongly_purely_infinite").get<bool>();
    r.implied_flags.quotients_have_infinite_projections =
        flags.at("quotients_have_infinite_projections").get<bool>();
    r.af_verdict = j.at("af_verdict").get<bool>();
    r.tails_added = j.at("tails_added").get<bool>();
    const Json& certs = j.at("certificates");
    if (certs.contains("k_failure"))
        r.conditions.k_failure =
            KCertificate{parse_vertex_ref(certs.at("k_failure").at("vertex").get<std::string>()),
                         parse_path_json(certs.at("k_failure").at("cycle"), analyzed)};
    if (certs.contains("i_failure"))
        r.conditions.i_failure =
            parse_vertex_ref(certs.at("i_failure").at("vertex").get<std::string>());
    auto parse_obstruction = [&](const Json& o) {
        ObstructionCertificate cert;
        cert.root = parse_vertex_ref(o.at("root").get<std::string>());
        cert.lasso.prefix = parse_path_json(o.at("prefix"), analyzed);
        cert.lasso.repeat = parse_path_json(o.at("repeat"), analyzed);
        return cert;
    };
    if (certs.contains("di_failure"))
        r.conditions.di_failure = parse_obstruction(certs.at("di_failure"));
    if (certs.contains("dl_failure"))
        r.conditions.dl_failure = parse_obstruction(certs.at("dl_failure"));
    if (certs.contains("principality_failure"))
        r.conditions.principality_failure = IsotropyCertificate{
            parse_path_json(certs.at("principality_failure").at("prefix"), analyzed),
            parse_path_json(certs.at("principality_failure").at("cycle"), analyzed)};
    for (const auto& entry : j.at("witnesses"))
        r.witnesses.push_back({parse_vertex_ref(entry.at("vertex").get<std::string>()),
                               parse_witness_json(entry.at("witness"), analyzed)});
    for (const auto& v : j.at("witness_budget_failures"))
        r.witness_budget_failures.push_back(parse_vertex_ref(v.get<std::string>()));
    for (const auto& note : j.at("notes")) r.notes.push_back(note.get<std::string>());
    return r;
    });
}

// ---------------------------------------------------------------------------
// DOT
// ---------------------------------------------------------------------------

// Periodic graphs are unrolled to three copies; truncated vertices on the
// last copy are drawn with doubled borders.
inline std::string render_dot(const GraphHandle& g) {
    std::ostringstream out;
    out << "digraph pigraph {\n  rankdir=LR;\n";
    auto emit_finite = [&](const FiniteGraph& f, const std::vector<VertexRef>& frontier) {
        std::set<std::string> marked;
        for (const auto& v : frontier) marked.insert(format_vertex_ref(v));
        for (const auto& v : f.vertices) {
            out << "  \"" << v << "\"";
            if (marked.count(v)) out << " [peripheries=2]";
            out << ";\n";
        }
        for (const auto& e : f.edges)
            out << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"" << e.id << "\"];\n";
    };
    if (const auto* f = as_finite(g)) {
        emit_finite(*f, {});
    } else {
        auto mat = materialize(*as_periodic(g), 3);
        emit_finite(mat.graph, mat.frontier);
    }
    out << "}\n";
    return out.str();
}

} // namespace pigraph

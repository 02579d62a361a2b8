#pragma once

// Core graph model: row-finite directed graphs, given either as a plain
// finite graph or as a finitely presented periodic infinite graph (a finite
// stem feeding copy 1 of a pattern that repeats forever, with all links
// running forward). Paths carry an explicit base vertex so that a vertex is
// simply a path of length zero.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "pigraph/errors.hpp"

namespace pigraph {

using VertexId = std::string;
using EdgeId = std::string;

// A vertex of the (possibly infinite) graph. copy == 0 addresses a stem
// vertex (or any vertex of a finite graph); copy == k >= 1 addresses the
// vertex `id` of the pattern in its k-th repetition.
struct VertexRef {
    VertexId id;
    int copy = 0;

    bool is_stem() const { return copy == 0; }
    static VertexRef stem(VertexId v) { return {std::move(v), 0}; }
    static VertexRef in_copy(int k, VertexId v) { return {std::move(v), k}; }
    auto operator<=>(const VertexRef&) const = default;
};

// An edge occurrence. copy == 0 addresses stem edges and stem links,
// copy == k >= 1 addresses pattern edges of copy k and the period link
// leaving copy k.
struct EdgeRef {
    EdgeId id;
    int copy = 0;

    auto operator<=>(const EdgeRef&) const = default;
};

struct Edge {
    EdgeId id;
    VertexId src;
    VertexId dst;

    auto operator<=>(const Edge&) const = default;
};

struct FiniteGraph {
    std::vector<VertexId> vertices;
    std::vector<Edge> edges;

    bool has_vertex(const VertexId& v) const {
        return std::find(vertices.begin(), vertices.end(), v) != vertices.end();
    }
    const Edge* find_edge(const EdgeId& id) const {
        for (const auto& e : edges)
            if (e.id == id) return &e;
        return nullptr;
    }
    auto operator<=>(const FiniteGraph&) const = default;
};

// stem_links run stem -> copy 1; period_links run copy k -> copy k+1 for
// every k >= 1 uniformly. Both are forward-only, so every cycle of the
// materialized infinite graph lies inside the stem or inside one copy.
struct PeriodicGraph {
    FiniteGraph stem;
    FiniteGraph pattern;
    std::vector<Edge> stem_links;
    std::vector<Edge> period_links;

    auto operator<=>(const PeriodicGraph&) const = default;
};

using GraphHandle = std::variant<FiniteGraph, PeriodicGraph>;

inline bool is_periodic(const GraphHandle& g) {
    return std::holds_alternative<PeriodicGraph>(g);
}
inline const FiniteGraph* as_finite(const GraphHandle& g) {
    return std::get_if<FiniteGraph>(&g);
}
inline const PeriodicGraph* as_periodic(const GraphHandle& g) {
    return std::get_if<PeriodicGraph>(&g);
}

// ---------------------------------------------------------------------------
// Canonical textual form of references: "stem:v" | "copy:3:c". Finite graphs
// also accept and print bare ids.
// ---------------------------------------------------------------------------

inline std::string format_vertex_ref(const VertexRef& v) {
    if (v.is_stem()) return "stem:" + v.id;
    return "copy:" + std::to_string(v.copy) + ":" + v.id;
}

inline std::string format_edge_ref(const EdgeRef& e) {
    if (e.copy == 0) return "stem:" + e.id;
    return "copy:" + std::to_string(e.copy) + ":" + e.id;
}

namespace detail {
inline std::optional<std::pair<std::string, int>> split_ref(const std::string& text) {
    auto first = text.find(':');
    if (first == std::string::npos) return std::pair<std::string, int>{text, 0};
    std::string head = text.substr(0, first);
    if (head == "stem") return std::pair<std::string, int>{text.substr(first + 1), 0};
    if (head == "copy") {
        auto second = text.find(':', first + 1);
        if (second == std::string::npos) return std::nullopt;
        int k = 0;
        try {
            k = std::stoi(text.substr(first + 1, second - first - 1));
        } catch (...) {
            return std::nullopt;
        }
        if (k < 1) return std::nullopt;
        return std::pair<std::string, int>{text.substr(second + 1), k};
    }
    return std::nullopt;
}
} // namespace detail

inline VertexRef parse_vertex_ref(const std::string& text) {
    auto parts = detail::split_ref(text);
    if (!parts) throw ParseError("malformed vertex reference: " + text);
    return VertexRef{parts->first, parts->second};
}

inline EdgeRef parse_edge_ref(const std::string& text) {
    auto parts = detail::split_ref(text);
    if (!parts) throw ParseError("malformed edge reference: " + text);
    return EdgeRef{parts->first, parts->second};
}

// ---------------------------------------------------------------------------
// Paths
// ---------------------------------------------------------------------------

// A finite path: a base vertex plus a composable edge sequence. The empty
// path at v stands for the vertex v itself.
struct Path {
    VertexRef base;
    std::vector<EdgeRef> edges;

    std::size_t size() const { return edges.size(); }
    bool empty() const { return edges.empty(); }
    auto operator<=>(const Path&) const = default;
};

inline Path empty_path_at(VertexRef v) { return Path{std::move(v), {}}; }

// p is a prefix of q (as cylinder bases: same base vertex, edge word prefix).
inline bool path_is_prefix(const Path& p, const Path& q) {
    if (p.base != q.base) return false;
    if (p.edges.size() > q.edges.size()) return false;
    return std::equal(p.edges.begin(), p.edges.end(), q.edges.begin());
}

// ---------------------------------------------------------------------------
// Incidence queries, uniform over both graph kinds
// ---------------------------------------------------------------------------

struct OutEdge {
    EdgeRef edge;
    VertexRef dst;
};

struct EdgeEnds {
    VertexRef src;
    VertexRef dst;
};

inline bool has_vertex_ref(const GraphHandle& g, const VertexRef& v) {
    if (const auto* f = as_finite(g)) return v.is_stem() && f->has_vertex(v.id);
    const auto& p = *as_periodic(g);
    if (v.is_stem()) return p.stem.has_vertex(v.id);
    return v.copy >= 1 && p.pattern.has_vertex(v.id);
}

inline std::vector<OutEdge> out_edges(const GraphHandle& g, const VertexRef& v) {
    std::vector<OutEdge> result;
    if (const auto* f = as_finite(g)) {
        for (const auto& e : f->edges)
            if (e.src == v.id && v.is_stem())
                result.push_back({EdgeRef{e.id, 0}, VertexRef::stem(e.dst)});
        return result;
    }
    const auto& p = *as_periodic(g);
    if (v.is_stem()) {
        for (const auto& e : p.stem.edges)
            if (e.src == v.id) result.push_back({EdgeRef{e.id, 0}, VertexRef::stem(e.dst)});
        for (const auto& e : p.stem_links)
            if (e.src == v.id) result.push_back({EdgeRef{e.id, 0}, VertexRef::in_copy(1, e.dst)});
    } else {
        for (const auto& e : p.pattern.edges)
            if (e.src == v.id)
                result.push_back({EdgeRef{e.id, v.copy}, VertexRef::in_copy(v.copy, e.dst)});
        for (const auto& e : p.period_links)
            if (e.src == v.id)
                result.push_back({EdgeRef{e.id, v.copy}, VertexRef::in_copy(v.copy + 1, e.dst)});
    }
    return result;
}

inline EdgeEnds edge_endpoints(const GraphHandle& g, const EdgeRef& e) {
    if (const auto* f = as_finite(g)) {
        if (e.copy != 0) throw UnknownEdgeError("finite graph has no copy edges: " + format_edge_ref(e));
        const Edge* found = f->find_edge(e.id);
        if (!found) throw UnknownEdgeError("unknown edge: " + e.id);
        return {VertexRef::stem(found->src), VertexRef::stem(found->dst)};
    }
    const auto& p = *as_periodic(g);
    if (e.copy == 0) {
        if (const Edge* found = p.stem.find_edge(e.id))
            return {VertexRef::stem(found->src), VertexRef::stem(found->dst)};
        for (const auto& link : p.stem_links)
            if (link.id == e.id)
                return {VertexRef::stem(link.src), VertexRef::in_copy(1, link.dst)};
        throw UnknownEdgeError("unknown stem edge: " + e.id);
    }
    if (const Edge* found = p.pattern.find_edge(e.id))
        return {VertexRef::in_copy(e.copy, found->src), VertexRef::in_copy(e.copy, found->dst)};
    for (const auto& link : p.period_links)
        if (link.id == e.id)
            return {VertexRef::in_copy(e.copy, link.src), VertexRef::in_copy(e.copy + 1, link.dst)};
    throw UnknownEdgeError("unknown pattern edge: " + format_edge_ref(e));
}

inline VertexRef path_source(const Path& p) { return p.base; }

inline VertexRef path_target(const GraphHandle& g, const Path& p) {
    if (p.empty()) return p.base;
    return edge_endpoints(g, p.edges.back()).dst;
}

// Checks that the edge sequence composes starting at the base vertex.
inline bool path_valid(const GraphHandle& g, const Path& p) {
    if (!has_vertex_ref(g, p.base)) return false;
    VertexRef at = p.base;
    for (const auto& e : p.edges) {
        EdgeEnds ends;
        try {
            ends = edge_endpoints(g, e);
        } catch (const UnknownEdgeError&) {
            return false;
        }
        if (ends.src != at) return false;
        at = ends.dst;
    }
    return true;
}

inline Path make_path(const GraphHandle& g, VertexRef base, std::vector<EdgeRef> edges) {
    Path p{std::move(base), std::move(edges)};
    if (!path_valid(g, p))
        throw NotComposableError("edge sequence does not compose from " + format_vertex_ref(p.base));
    return p;
}

inline Path path_concat(const GraphHandle& g, const Path& p, const Path& q) {
    if (path_target(g, p) != q.base)
        throw NotComposableError("cannot compose: path ends at " + format_vertex_ref(path_target(g, p)) +
                                 " but next starts at " + format_vertex_ref(q.base));
    Path result = p;
    result.edges.insert(result.edges.end(), q.edges.begin(), q.edges.end());
    return result;
}

// Vertex visited after the first `pos` edges of p (pos == 0 gives the base).
inline VertexRef path_vertex_at(const GraphHandle& g, const Path& p, std::size_t pos) {
    if (pos == 0) return p.base;
    return edge_endpoints(g, p.edges[pos - 1]).dst;
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ValidationKind { DanglingEdge, DuplicateId, BackwardLink };

struct ValidationError {
    ValidationKind kind;
    std::string where;
};

struct ValidationResult {
    std::vector<ValidationError> errors;
    bool ok() const { return errors.empty(); }
};

namespace detail {

inline void validate_finite_into(const FiniteGraph& f, const std::string& section,
                                 std::vector<ValidationError>& out) {
    std::set<VertexId> seen_v;
    for (const auto& v : f.vertices)
        if (!seen_v.insert(v).second)
            out.push_back({ValidationKind::DuplicateId, section + " vertex " + v});
    std::set<EdgeId> seen_e;
    for (const auto& e : f.edges) {
        if (!seen_e.insert(e.id).second)
            out.push_back({ValidationKind::DuplicateId, section + " edge " + e.id});
        if (!seen_v.count(e.src))
            out.push_back({ValidationKind::DanglingEdge, section + " edge " + e.id + " src " + e.src});
        if (!seen_v.count(e.dst))
            out.push_back({ValidationKind::DanglingEdge, section + " edge " + e.id + " dst " + e.dst});
    }
}

} // namespace detail

inline ValidationResult validate(const GraphHandle& g) {
    ValidationResult result;
    if (const auto* f = as_finite(g)) {
        detail::validate_finite_into(*f, "graph", result.errors);
        return result;
    }
    const auto& p = *as_periodic(g);
    detail::validate_finite_into(p.stem, "stem", result.errors);
    detail::validate_finite_into(p.pattern, "pattern", result.errors);

    std::set<EdgeId> stem_ids;
    for (const auto& e : p.stem.edges) stem_ids.insert(e.id);
    std::set<EdgeId> pattern_ids;
    for (const auto& e : p.pattern.edges) pattern_ids.insert(e.id);

    // A link whose endpoints sit in the wrong sections would point backwards
    // (into the stem, or against the copy order); the presentation forbids it.
    for (const auto& e : p.stem_links) {
        if (!stem_ids.insert(e.id).second)
            result.errors.push_back({ValidationKind::DuplicateId, "stem_link " + e.id});
        bool src_stem = p.stem.has_vertex(e.src);
        bool dst_pattern = p.pattern.has_vertex(e.dst);
        if (!src_stem && p.pattern.has_vertex(e.src))
            result.errors.push_back({ValidationKind::BackwardLink, "stem_link " + e.id + " src " + e.src});
        else if (!src_stem)
            result.errors.push_back({ValidationKind::DanglingEdge, "stem_link " + e.id + " src " + e.src});
        if (!dst_pattern && p.stem.has_vertex(e.dst))
            result.errors.push_back({ValidationKind::BackwardLink, "stem_link " + e.id + " dst " + e.dst});
        else if (!dst_pattern)
            result.errors.push_back({ValidationKind::DanglingEdge, "stem_link " + e.id + " dst " + e.dst});
    }
    for (const auto& e : p.period_links) {
        if (!pattern_ids.insert(e.id).second)
            result.errors.push_back({ValidationKind::DuplicateId, "period_link " + e.id});
        bool src_pattern = p.pattern.has_vertex(e.src);
        bool dst_pattern = p.pattern.has_vertex(e.dst);
        if (!src_pattern && p.stem.has_vertex(e.src))
            result.errors.push_back({ValidationKind::BackwardLink, "period_link " + e.id + " src " + e.src});
        else if (!src_pattern)
            result.errors.push_back({ValidationKind::DanglingEdge, "period_link " + e.id + " src " + e.src});
        if (!dst_pattern && p.stem.has_vertex(e.dst))
            result.errors.push_back({ValidationKind::BackwardLink, "period_link " + e.id + " dst " + e.dst});
        else if (!dst_pattern)
            result.errors.push_back({ValidationKind::DanglingEdge, "period_link " + e.id + " dst " + e.dst});
    }
    return result;
}

// Every vertex with zero out-edges. For a periodic graph it suffices to check
// the stem and one pattern copy; copies are uniform.
inline std::vector<VertexRef> validate_no_sinks(const GraphHandle& g) {
    std::vector<VertexRef> sinks;
    if (const auto* f = as_finite(g)) {
        for (const auto& v : f->vertices)
            if (out_edges(g, VertexRef::stem(v)).empty()) sinks.push_back(VertexRef::stem(v));
        return sinks;
    }
    const auto& p = *as_periodic(g);
    for (const auto& v : p.stem.vertices)
        if (out_edges(g, VertexRef::stem(v)).empty()) sinks.push_back(VertexRef::stem(v));
    for (const auto& v : p.pattern.vertices)
        if (out_edges(g, VertexRef::in_copy(1, v)).empty()) sinks.push_back(VertexRef::in_copy(1, v));
    return sinks;
}

// ---------------------------------------------------------------------------
// Sink elimination: hang an infinite tail off every sink.
// ---------------------------------------------------------------------------

struct AddTailsResult {
    PeriodicGraph graph;
    bool had_sinks = false;
    std::vector<VertexId> sinks;
};

namespace detail {
inline EdgeId fresh_edge_id(std::string base, const std::set<EdgeId>& taken) {
    while (taken.count(base)) base += "_";
    return base;
}
} // namespace detail

// Tail vertices reuse the sink's id inside the (separate) pattern namespace.
// When the input already has no sinks the stem is returned unchanged with an
// empty pattern and the had_sinks flag cleared.
inline AddTailsResult add_tails(const FiniteGraph& g) {
    AddTailsResult result;
    result.graph.stem = g;
    for (const auto& v : g.vertices) {
        bool has_out = false;
        for (const auto& e : g.edges)
            if (e.src == v) { has_out = true; break; }
        if (!has_out) result.sinks.push_back(v);
    }
    result.had_sinks = !result.sinks.empty();
    if (!result.had_sinks) return result;

    std::set<EdgeId> stem_ids;
    for (const auto& e : g.edges) stem_ids.insert(e.id);
    std::set<EdgeId> pattern_ids;
    for (const auto& s : result.sinks) {
        result.graph.pattern.vertices.push_back(s);
        EdgeId link_id = detail::fresh_edge_id("tail:" + s, stem_ids);
        stem_ids.insert(link_id);
        result.graph.stem_links.push_back({link_id, s, s});
        EdgeId period_id = detail::fresh_edge_id("tail:" + s, pattern_ids);
        pattern_ids.insert(period_id);
        result.graph.period_links.push_back({period_id, s, s});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Finite truncation of a periodic graph (used by brute-force oracles and by
// DOT rendering). Vertex and edge ids of the result use the canonical
// reference syntax, so refs round-trip through parse_vertex_ref.
// ---------------------------------------------------------------------------

struct Materialized {
    FiniteGraph graph;
    std::vector<VertexRef> frontier;
};

inline Materialized materialize(const PeriodicGraph& p, int depth) {
    if (depth < 1) throw Error("materialize depth must be positive");
    Materialized result;
    auto vid = [](const VertexRef& v) { return format_vertex_ref(v); };
    for (const auto& v : p.stem.vertices) result.graph.vertices.push_back(vid(VertexRef::stem(v)));
    for (int k = 1; k <= depth; ++k)
        for (const auto& v : p.pattern.vertices)
            result.graph.vertices.push_back(vid(VertexRef::in_copy(k, v)));

    for (const auto& e : p.stem.edges)
        result.graph.edges.push_back({format_edge_ref(EdgeRef{e.id, 0}),
                                      vid(VertexRef::stem(e.src)), vid(VertexRef::stem(e.dst))});
    for (const auto& e : p.stem_links)
        result.graph.edges.push_back({format_edge_ref(EdgeRef{e.id, 0}),
                                      vid(VertexRef::stem(e.src)), vid(VertexRef::in_copy(1, e.dst))});
    for (int k = 1; k <= depth; ++k) {
        for (const auto& e : p.pattern.edges)
            result.graph.edges.push_back({format_edge_ref(EdgeRef{e.id, k}),
                                          vid(VertexRef::in_copy(k, e.src)),
                                          vid(VertexRef::in_copy(k, e.dst))});
        if (k < depth)
            for (const auto& e : p.period_links)
                result.graph.edges.push_back({format_edge_ref(EdgeRef{e.id, k}),
                                              vid(VertexRef::in_copy(k, e.src)),
                                              vid(VertexRef::in_copy(k + 1, e.dst))});
    }
    for (const auto& e : p.period_links) {
        VertexRef v = VertexRef::in_copy(depth, e.src);
        if (std::find(result.frontier.begin(), result.frontier.end(), v) == result.frontier.end())
            result.frontier.push_back(v);
    }
    return result;
}

// Stem vertices plus copy 1 of the pattern: one representative per orbit of
// the copy shift.
inline std::vector<VertexRef> canonical_vertices(const GraphHandle& g) {
    std::vector<VertexRef> result;
    if (const auto* f = as_finite(g)) {
        for (const auto& v : f->vertices) result.push_back(VertexRef::stem(v));
        return result;
    }
    const auto& p = *as_periodic(g);
    for (const auto& v : p.stem.vertices) result.push_back(VertexRef::stem(v));
    for (const auto& v : p.pattern.vertices) result.push_back(VertexRef::in_copy(1, v));
    return result;
}

} // namespace pigraph

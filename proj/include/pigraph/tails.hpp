#pragma once

// Maximal tails of a finite graph, their enumeration, and the tail-based
// loop/exit criteria. A maximal tail M is a nonempty vertex set that is
// (1) upward closed under the reachability preorder, (2) forward extensible
// at every non-sink member, and (3) downward directed.
//
// Enumeration uses the T(y) = { u : u >= y } family: a finite directed set
// that is upward closed has a common lower bound y inside it, so every
// maximal tail arises as some T(y). A subset brute force is kept as the
// independent oracle for that completeness argument.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pigraph/graph.hpp"
#include "pigraph/structure.hpp"

namespace pigraph {

struct MaximalTail {
    std::set<VertexId> members;
    VertexId generator; // M == { u : u >= generator }
    auto operator<=>(const MaximalTail&) const = default;
};

struct TailCheck {
    bool ok = true;
    int violated_clause = 0; // 1, 2 or 3 when !ok
    std::string detail;
};

inline TailCheck is_maximal_tail(const FiniteGraph& g, const std::set<VertexId>& members) {
    if (members.empty()) throw EmptySetError("a maximal tail must be nonempty");
    for (const auto& v : members)
        if (!g.has_vertex(v)) throw UnknownVertexError("unknown vertex: " + v);
    auto adj = detail::build_adjacency(g);

    // (1) upward closure: reaching a member makes you a member
    std::set<VertexId> upward = detail::reverse_closure(adj, members);
    for (const auto& v : upward)
        if (!members.count(v))
            return {false, 1, v + " reaches the set but is not a member"};

    // (2) every non-sink member has a successor inside
    for (const auto& v : members) {
        const auto& outs = adj.out.at(v);
        if (outs.empty()) continue;
        bool inside = false;
        for (const Edge* e : outs)
            if (members.count(e->dst)) {
                inside = true;
                break;
            }
        if (!inside) return {false, 2, v + " has no edge staying in the set"};
    }

    // (3) pairwise common lower bounds
    std::map<VertexId, std::set<VertexId>> below; // below[v] = members reachable from v
    for (const auto& v : members) {
        auto fwd = detail::forward_closure(adj, {v});
        for (const auto& u : fwd)
            if (members.count(u)) below[v].insert(u);
    }
    for (const auto& v : members)
        for (const auto& w : members) {
            bool found = false;
            for (const auto& y : below[v])
                if (below[w].count(y)) {
                    found = true;
                    break;
                }
            if (!found) return {false, 3, v + " and " + w + " have no common lower bound"};
        }
    return {};
}

inline std::vector<MaximalTail> enumerate_maximal_tails(const FiniteGraph& g) {
    auto adj = detail::build_adjacency(g);
    std::vector<MaximalTail> tails;
    std::set<std::set<VertexId>> seen;
    for (const auto& y : g.vertices) {
        std::set<VertexId> candidate = detail::reverse_closure(adj, {y});
        if (seen.count(candidate)) continue;
        if (is_maximal_tail(g, candidate).ok) {
            seen.insert(candidate);
            tails.push_back({candidate, y});
        }
    }
    return tails;
}

// All subsets passing the three clauses; exponential, for cross-checking only.
inline std::vector<std::set<VertexId>> brute_force_tails(const FiniteGraph& g, int cap = 12) {
    if (static_cast<int>(g.vertices.size()) > cap)
        throw CapExceededError("brute_force_tails: graph exceeds cap of " + std::to_string(cap));
    std::vector<std::set<VertexId>> tails;
    std::size_t n = g.vertices.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::set<VertexId> subset;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) subset.insert(g.vertices[i]);
        if (is_maximal_tail(g, subset).ok) tails.push_back(std::move(subset));
    }
    return tails;
}

namespace detail {

inline FiniteGraph induced_subgraph(const FiniteGraph& g, const std::set<VertexId>& members) {
    FiniteGraph sub;
    for (const auto& v : g.vertices)
        if (members.count(v)) sub.vertices.push_back(v);
    for (const auto& e : g.edges)
        if (members.count(e.src) && members.count(e.dst)) sub.edges.push_back(e);
    return sub;
}

} // namespace detail

// Every vertex of every maximal tail connects, inside the tail, to a loop
// lying inside the tail.
inline bool tail_loop_condition(const FiniteGraph& g) {
    for (const auto& tail : enumerate_maximal_tails(g)) {
        FiniteGraph sub = detail::induced_subgraph(g, tail.members);
        GraphHandle handle{sub};
        for (const auto& v : sub.vertices)
            if (!connects_to_loop(handle, VertexRef::stem(v))) return false;
    }
    return true;
}

// Every loop lying inside a maximal tail has an exit staying inside it.
inline bool tail_exit_condition(const FiniteGraph& g) {
    for (const auto& tail : enumerate_maximal_tails(g)) {
        FiniteGraph sub = detail::induced_subgraph(g, tail.members);
        GraphHandle handle{sub};
        if (!every_loop_has_exit(handle)) return false;
    }
    return true;
}

struct TailReport {
    std::vector<MaximalTail> tails;
    bool loop_condition = false;
    bool exit_condition = false;
};

inline TailReport tail_report(const FiniteGraph& g) {
    TailReport report;
    report.tails = enumerate_maximal_tails(g);
    report.loop_condition = tail_loop_condition(g);
    report.exit_condition = tail_exit_condition(g);
    return report;
}

} // namespace pigraph

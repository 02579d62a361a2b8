#pragma once

// Graph-structure analysis: the reachability preorder, first-return cycles,
// the V0/V1/V2 vertex partition, loop exits, cofinality and eventually
// periodic isotropy certificates.
//
// Periodic graphs are handled symbolically. Links only run forward, so the
// set reachable from a fixed vertex is described copy by copy as a subset of
// pattern vertices; that subset sequence is eventually periodic and is folded
// at its first repeated state instead of being unrolled.

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pigraph/graph.hpp"

namespace pigraph {

namespace detail {

struct Adjacency {
    std::map<VertexId, std::vector<const Edge*>> out;
    std::map<VertexId, std::vector<const Edge*>> in;
};

inline Adjacency build_adjacency(const FiniteGraph& g) {
    Adjacency adj;
    for (const auto& v : g.vertices) {
        adj.out[v];
        adj.in[v];
    }
    for (const auto& e : g.edges) {
        adj.out[e.src].push_back(&e);
        adj.in[e.dst].push_back(&e);
    }
    return adj;
}

inline std::set<VertexId> forward_closure(const Adjacency& adj, std::set<VertexId> seeds) {
    std::deque<VertexId> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        auto it = adj.out.find(v);
        if (it == adj.out.end()) continue;
        for (const Edge* e : it->second)
            if (seeds.insert(e->dst).second) queue.push_back(e->dst);
    }
    return seeds;
}

inline std::set<VertexId> reverse_closure(const Adjacency& adj, std::set<VertexId> seeds) {
    std::deque<VertexId> queue(seeds.begin(), seeds.end());
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        auto it = adj.in.find(v);
        if (it == adj.in.end()) continue;
        for (const Edge* e : it->second)
            if (seeds.insert(e->src).second) queue.push_back(e->src);
    }
    return seeds;
}

// One step of a generic labelled walk.
template <typename Node, typename Label>
struct WalkStep {
    Node from;
    Label label;
    Node to;
};

// Finds a cycle in an explicit adjacency structure, exploring nodes and edges
// in the order given. Returns the closed walk's steps, based at steps[0].from.
template <typename Node, typename Label>
std::optional<std::vector<WalkStep<Node, Label>>> generic_cycle(
    const std::map<Node, std::vector<WalkStep<Node, Label>>>& adj) {
    std::map<Node, int> color; // 0 white, 1 grey, 2 black
    struct Frame {
        Node node;
        std::size_t next = 0;
    };
    for (const auto& [start, unused] : adj) {
        (void)unused;
        if (color[start] != 0) continue;
        std::vector<Frame> frames{{start, 0}};
        std::vector<WalkStep<Node, Label>> trail; // grey-stack edges below the top
        color[start] = 1;
        while (!frames.empty()) {
            Frame& top = frames.back();
            const auto& outs = adj.find(top.node)->second;
            bool descended = false;
            while (top.next < outs.size()) {
                const auto& step = outs[top.next++];
                if (!adj.count(step.to)) continue; // edge leaves the node set
                int c = color[step.to];
                if (c == 1) {
                    // step.to lies on the grey path start -> ... -> top.node
                    std::size_t begin = 0;
                    if (!(step.to == start)) {
                        begin = trail.size();
                        for (std::size_t j = 0; j < trail.size(); ++j)
                            if (trail[j].to == step.to) {
                                begin = j + 1;
                                break;
                            }
                    }
                    std::vector<WalkStep<Node, Label>> cycle;
                    for (std::size_t i = begin; i < trail.size(); ++i) cycle.push_back(trail[i]);
                    cycle.push_back(step);
                    return cycle;
                }
                if (c == 0) {
                    color[step.to] = 1;
                    trail.push_back(step);
                    frames.push_back({step.to, 0});
                    descended = true;
                    break;
                }
            }
            if (descended) continue;
            color[top.node] = 2;
            frames.pop_back();
            if (!trail.empty()) trail.pop_back();
        }
    }
    return std::nullopt;
}

// Cycle inside the subgraph induced on `allowed`.
inline std::optional<std::vector<const Edge*>> find_cycle_in(const Adjacency& adj,
                                                             const std::set<VertexId>& allowed) {
    std::map<VertexId, std::vector<WalkStep<VertexId, const Edge*>>> g;
    for (const auto& v : allowed) {
        auto& row = g[v];
        auto it = adj.out.find(v);
        if (it == adj.out.end()) continue;
        for (const Edge* e : it->second)
            if (allowed.count(e->dst)) row.push_back({v, e, e->dst});
    }
    auto walk = generic_cycle(g);
    if (!walk) return std::nullopt;
    std::vector<const Edge*> cycle;
    for (const auto& step : *walk) cycle.push_back(step.label);
    return cycle;
}

// Shortest src -> dst path whose interior vertices stay inside `allowed`.
// Endpoints are unrestricted. An empty path is returned for src == dst.
inline std::optional<std::vector<const Edge*>> bfs_path(const Adjacency& adj, const VertexId& src,
                                                        const VertexId& dst,
                                                        const std::set<VertexId>& allowed) {
    if (src == dst) return std::vector<const Edge*>{};
    std::map<VertexId, const Edge*> parent;
    std::deque<VertexId> queue{src};
    std::set<VertexId> visited{src};
    while (!queue.empty()) {
        VertexId v = queue.front();
        queue.pop_front();
        auto it = adj.out.find(v);
        if (it == adj.out.end()) continue;
        for (const Edge* e : it->second) {
            if (e->dst == dst) {
                std::vector<const Edge*> path{e};
                VertexId at = v;
                while (at != src) {
                    const Edge* pe = parent.at(at);
                    path.push_back(pe);
                    at = pe->src;
                }
                std::reverse(path.begin(), path.end());
                return path;
            }
            if (!allowed.count(e->dst) || visited.count(e->dst)) continue;
            visited.insert(e->dst);
            parent[e->dst] = e;
            queue.push_back(e->dst);
        }
    }
    return std::nullopt;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Reachability
// ---------------------------------------------------------------------------

// Everything reachable from one source vertex. For periodic graphs the
// per-copy subsets are stored up to their first repeated state and folded.
struct ReachProfile {
    VertexRef source;
    std::set<VertexId> stem;                   // reachable stem vertices
    int first_copy = 1;                        // absolute index of copy_sets[0]
    std::vector<std::set<VertexId>> copy_sets; // size preperiod + period
    int preperiod = 0;
    int period = 1;
    bool has_copies = false;

    const std::set<VertexId>& copy_set(int absolute_copy) const {
        static const std::set<VertexId> empty;
        if (!has_copies || absolute_copy < first_copy) return empty;
        std::size_t i = static_cast<std::size_t>(absolute_copy - first_copy);
        if (i < copy_sets.size()) return copy_sets[i];
        std::size_t folded = static_cast<std::size_t>(preperiod) +
                             (i - static_cast<std::size_t>(preperiod)) % static_cast<std::size_t>(period);
        return copy_sets[folded];
    }

    bool reaches(const VertexRef& v) const {
        if (v.is_stem()) return stem.count(v.id) > 0;
        return copy_set(v.copy).count(v.id) > 0;
    }

    // Pattern vertices reached in at least one copy.
    std::set<VertexId> copies_union() const {
        std::set<VertexId> all;
        for (const auto& s : copy_sets) all.insert(s.begin(), s.end());
        return all;
    }

    // Pattern vertices reached in infinitely many copies.
    std::set<VertexId> cofinal_union() const {
        std::set<VertexId> all;
        for (std::size_t i = static_cast<std::size_t>(preperiod); i < copy_sets.size(); ++i)
            all.insert(copy_sets[i].begin(), copy_sets[i].end());
        return all;
    }
};

inline ReachProfile compute_reach_profile(const GraphHandle& g, const VertexRef& source) {
    ReachProfile profile;
    profile.source = source;
    if (const auto* f = as_finite(g)) {
        auto adj = detail::build_adjacency(*f);
        profile.stem = detail::forward_closure(adj, {source.id});
        return profile;
    }
    const auto& p = *as_periodic(g);
    auto stem_adj = detail::build_adjacency(p.stem);
    auto pat_adj = detail::build_adjacency(p.pattern);

    std::set<VertexId> seed_copy;
    if (source.is_stem()) {
        profile.stem = detail::forward_closure(stem_adj, {source.id});
        profile.first_copy = 1;
        for (const auto& link : p.stem_links)
            if (profile.stem.count(link.src)) seed_copy.insert(link.dst);
        if (seed_copy.empty()) return profile; // never enters any copy
    } else {
        profile.first_copy = source.copy;
        seed_copy.insert(source.id);
    }

    profile.has_copies = true;
    std::map<std::set<VertexId>, std::size_t> seen;
    std::set<VertexId> current = detail::forward_closure(pat_adj, seed_copy);
    while (true) {
        auto it = seen.find(current);
        if (it != seen.end()) {
            profile.preperiod = static_cast<int>(it->second);
            profile.period = static_cast<int>(profile.copy_sets.size() - it->second);
            break;
        }
        seen[current] = profile.copy_sets.size();
        profile.copy_sets.push_back(current);
        std::set<VertexId> next_seed;
        for (const auto& link : p.period_links)
            if (current.count(link.src)) next_seed.insert(link.dst);
        current = detail::forward_closure(pat_adj, std::move(next_seed));
    }
    return profile;
}

// v >= w: some finite path (length >= 0) runs from v to w.
inline bool reaches(const GraphHandle& g, const VertexRef& v, const VertexRef& w) {
    if (!has_vertex_ref(g, v)) throw UnknownVertexError("unknown vertex: " + format_vertex_ref(v));
    if (!has_vertex_ref(g, w)) throw UnknownVertexError("unknown vertex: " + format_vertex_ref(w));
    return compute_reach_profile(g, v).reaches(w);
}

// ---------------------------------------------------------------------------
// First-return cycles
// ---------------------------------------------------------------------------

enum class ReturnCount { Zero, One, TwoOrMore };

struct FirstReturnOutcome {
    ReturnCount count = ReturnCount::Zero;
    std::vector<Path> witnesses; // up to two distinct first-return cycles
};

namespace detail {

// First-return analysis inside one finite section; witness paths are lifted
// into copy `lift_copy` (0 for the stem or a plain finite graph).
//
// Every interior vertex of a first-return path at v is reachable from v and
// co-reachable to v with v avoided in between. If that interior zone has a
// cycle, returns can be pumped through it (TwoOrMore). Otherwise the zone is
// acyclic, return paths are internally simple, and direct enumeration with an
// early exit at two is exact.
inline FirstReturnOutcome first_return_in_section(const FiniteGraph& fg, const VertexId& v,
                                                  int lift_copy) {
    FirstReturnOutcome outcome;
    auto adj = build_adjacency(fg);
    VertexRef base = lift_copy == 0 ? VertexRef::stem(v) : VertexRef::in_copy(lift_copy, v);
    auto lift = [&](const std::vector<const Edge*>& edges) {
        Path path{base, {}};
        for (const Edge* e : edges) path.edges.push_back(EdgeRef{e->id, lift_copy});
        return path;
    };

    auto closure_avoiding_v = [&](std::set<VertexId> seeds, bool forward) {
        std::deque<VertexId> queue(seeds.begin(), seeds.end());
        while (!queue.empty()) {
            VertexId u = queue.front();
            queue.pop_front();
            const auto& row = forward ? adj.out.at(u) : adj.in.at(u);
            for (const Edge* e : row) {
                const VertexId& next = forward ? e->dst : e->src;
                if (next == v) continue;
                if (seeds.insert(next).second) queue.push_back(next);
            }
        }
        return seeds;
    };
    std::set<VertexId> fwd_seeds, bwd_seeds;
    for (const Edge* e : adj.out.at(v))
        if (e->dst != v) fwd_seeds.insert(e->dst);
    for (const Edge* e : adj.in.at(v))
        if (e->src != v) bwd_seeds.insert(e->src);
    std::set<VertexId> fwd = closure_avoiding_v(std::move(fwd_seeds), true);
    std::set<VertexId> bwd = closure_avoiding_v(std::move(bwd_seeds), false);
    std::set<VertexId> interior;
    for (const auto& u : fwd)
        if (bwd.count(u)) interior.insert(u);

    if (auto cycle = find_cycle_in(adj, interior)) {
        const VertexId& w = (*cycle)[0]->src;
        auto to_w = bfs_path(adj, v, w, interior);
        auto from_w = bfs_path(adj, w, v, interior);
        if (!to_w || !from_w)
            throw InternalError("interior vertex of a return path lost its connection");
        std::vector<const Edge*> once = *to_w;
        once.insert(once.end(), from_w->begin(), from_w->end());
        std::vector<const Edge*> pumped = *to_w;
        pumped.insert(pumped.end(), cycle->begin(), cycle->end());
        pumped.insert(pumped.end(), from_w->begin(), from_w->end());
        outcome.count = ReturnCount::TwoOrMore;
        outcome.witnesses = {lift(once), lift(pumped)};
        return outcome;
    }

    // acyclic interior: enumerate internally simple returns, stop at two
    struct Frame {
        VertexId at;
        std::size_t next = 0;
    };
    std::vector<Frame> frames{{v, 0}};
    std::vector<const Edge*> current;
    std::vector<Path> found;
    while (!frames.empty() && found.size() < 2) {
        Frame& top = frames.back();
        const auto& outs = adj.out.at(top.at);
        if (top.next >= outs.size()) {
            frames.pop_back();
            if (!current.empty()) current.pop_back();
            continue;
        }
        const Edge* e = outs[top.next++];
        if (e->dst == v) {
            current.push_back(e);
            found.push_back(lift(current));
            current.pop_back();
        } else if (interior.count(e->dst)) {
            current.push_back(e);
            frames.push_back({e->dst, 0});
        }
    }
    outcome.witnesses = std::move(found);
    outcome.count = outcome.witnesses.empty()      ? ReturnCount::Zero
                    : outcome.witnesses.size() == 1 ? ReturnCount::One
                                                    : ReturnCount::TwoOrMore;
    return outcome;
}

} // namespace detail

// Distinct cycles based at v that visit v only at their endpoints, counted as
// zero / one / at least two. Cycles of a periodic graph live entirely inside
// v's section, so the analysis runs on that section alone.
inline FirstReturnOutcome first_return_cycles(const GraphHandle& g, const VertexRef& v) {
    if (!has_vertex_ref(g, v)) throw UnknownVertexError("unknown vertex: " + format_vertex_ref(v));
    if (const auto* f = as_finite(g)) return detail::first_return_in_section(*f, v.id, 0);
    const auto& p = *as_periodic(g);
    if (v.is_stem()) return detail::first_return_in_section(p.stem, v.id, 0);
    return detail::first_return_in_section(p.pattern, v.id, v.copy);
}

// ---------------------------------------------------------------------------
// Vertex partition
// ---------------------------------------------------------------------------

enum class VClass { V0, V1, V2 };

struct VertexClassification {
    struct Entry {
        VertexRef vertex;
        VClass cls = VClass::V0;
        std::vector<Path> witnesses;
    };
    std::vector<Entry> entries; // canonical vertex order

    std::set<VertexId> stem_v2, pattern_v2;         // V2 members per section
    std::set<VertexId> stem_looped, pattern_looped; // V1 ∪ V2 members per section

    const Entry* find(const VertexRef& v) const {
        VertexRef canonical = v.is_stem() ? v : VertexRef::in_copy(1, v.id);
        for (const auto& e : entries)
            if (e.vertex == canonical) return &e;
        return nullptr;
    }
    VClass class_of(const VertexRef& v) const {
        const Entry* e = find(v);
        if (!e) throw UnknownVertexError("unknown vertex: " + format_vertex_ref(v));
        return e->cls;
    }
    bool v1_empty() const {
        for (const auto& e : entries)
            if (e.cls == VClass::V1) return false;
        return true;
    }
    const Entry* first_v1() const {
        for (const auto& e : entries)
            if (e.cls == VClass::V1) return &e;
        return nullptr;
    }
    bool in_marker(const VertexRef& v, bool loops) const {
        const auto& v2 = v.is_stem() ? stem_v2 : pattern_v2;
        const auto& looped = v.is_stem() ? stem_looped : pattern_looped;
        return loops ? looped.count(v.id) > 0 : v2.count(v.id) > 0;
    }
};

// Classes are copy-independent for pattern vertices, so one copy is classified
// and stands for all of them.
inline VertexClassification classify_vertices(const GraphHandle& g) {
    VertexClassification result;
    for (const auto& v : canonical_vertices(g)) {
        auto outcome = first_return_cycles(g, v);
        VertexClassification::Entry entry;
        entry.vertex = v;
        entry.witnesses = outcome.witnesses;
        switch (outcome.count) {
            case ReturnCount::Zero: entry.cls = VClass::V0; break;
            case ReturnCount::One: entry.cls = VClass::V1; break;
            case ReturnCount::TwoOrMore: entry.cls = VClass::V2; break;
        }
        if (entry.cls != VClass::V0) {
            (v.is_stem() ? result.stem_looped : result.pattern_looped).insert(v.id);
            if (entry.cls == VClass::V2)
                (v.is_stem() ? result.stem_v2 : result.pattern_v2).insert(v.id);
        }
        result.entries.push_back(std::move(entry));
    }
    return result;
}

// ---------------------------------------------------------------------------
// Loops and exits
// ---------------------------------------------------------------------------

inline bool loop_has_exit(const GraphHandle& g, const Path& cycle) {
    if (cycle.empty() || !path_valid(g, cycle) || path_target(g, cycle) != cycle.base)
        throw NotACycleError("loop_has_exit requires a nonempty cycle");
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        VertexRef at = path_vertex_at(g, cycle, i);
        for (const auto& oe : out_edges(g, at))
            if (oe.edge != cycle.edges[i]) return true;
    }
    return false;
}

inline bool connects_to_loop(const GraphHandle& g, const VertexRef& v) {
    auto cls = classify_vertices(g);
    auto profile = compute_reach_profile(g, v);
    for (const auto& id : cls.stem_looped)
        if (profile.stem.count(id)) return true;
    if (!cls.pattern_looped.empty()) {
        auto all = profile.copies_union();
        for (const auto& id : cls.pattern_looped)
            if (all.count(id)) return true;
    }
    return false;
}

namespace detail {

// A loop without an exit is exactly a cycle of vertices whose full out-degree
// (links included) is one, with each unique edge staying inside the section.
inline bool section_has_noexit_cycle(const GraphHandle& g, const FiniteGraph& section,
                                     int copy_probe) {
    std::map<VertexId, VertexId> next;
    for (const auto& u : section.vertices) {
        VertexRef ref = copy_probe == 0 ? VertexRef::stem(u) : VertexRef::in_copy(copy_probe, u);
        auto outs = out_edges(g, ref);
        if (outs.size() != 1) continue;
        if (outs[0].dst.copy != ref.copy) continue; // the unique edge is a link
        next[u] = outs[0].dst.id;
    }
    std::map<VertexId, int> state; // 0 fresh, 1 on current walk, 2 settled
    for (const auto& [start, unused] : next) {
        (void)unused;
        if (state[start]) continue;
        VertexId at = start;
        std::vector<VertexId> walk;
        while (true) {
            if (state[at] == 1) return true;
            if (state[at] == 2 || !next.count(at)) break;
            state[at] = 1;
            walk.push_back(at);
            at = next[at];
        }
        for (const auto& u : walk) state[u] = 2;
    }
    return false;
}

} // namespace detail

inline bool every_loop_has_exit(const GraphHandle& g) {
    if (const auto* f = as_finite(g)) return !detail::section_has_noexit_cycle(g, *f, 0);
    const auto& p = *as_periodic(g);
    return !detail::section_has_noexit_cycle(g, p.stem, 0) &&
           !detail::section_has_noexit_cycle(g, p.pattern, 1);
}

inline bool has_property_IH(const GraphHandle& g) {
    bool all_connect = true;
    for (const auto& v : canonical_vertices(g))
        if (!connects_to_loop(g, v)) {
            all_connect = false;
            break;
        }
    return all_connect && every_loop_has_exit(g);
}

// Every vertex reaches some vertex that admits a return path with an exit.
// V2 vertices always qualify (two distinct returns diverge, and the edge where
// they diverge is an exit for one of them); a V1 vertex qualifies iff its
// unique first-return cycle has an exit.
inline bool locally_contracting_criterion(const GraphHandle& g) {
    auto cls = classify_vertices(g);
    std::set<VertexId> stem_good, pattern_good;
    for (const auto& e : cls.entries) {
        bool qualifies = false;
        if (e.cls == VClass::V2)
            qualifies = true;
        else if (e.cls == VClass::V1)
            qualifies = loop_has_exit(g, e.witnesses.front());
        if (qualifies) (e.vertex.is_stem() ? stem_good : pattern_good).insert(e.vertex.id);
    }
    for (const auto& v : canonical_vertices(g)) {
        auto profile = compute_reach_profile(g, v);
        bool hit = false;
        for (const auto& id : stem_good)
            if (profile.stem.count(id)) {
                hit = true;
                break;
            }
        if (!hit && !pattern_good.empty()) {
            auto all = profile.copies_union();
            for (const auto& id : pattern_good)
                if (all.count(id)) {
                    hit = true;
                    break;
                }
        }
        if (!hit) return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Cofinality
// ---------------------------------------------------------------------------

namespace detail {

// Is there an infinite path all of whose vertices lie outside the profile's
// reachable set? Only called for periodic graphs whose pattern is acyclic, so
// any such path is a stem cycle or an unbounded forward chain; the chain case
// reduces to a cycle of the phase quotient of the unreached zone.
inline bool unreached_zone_has_infinite_path(const PeriodicGraph& p, const ReachProfile& profile) {
    auto stem_adj = build_adjacency(p.stem);
    std::set<VertexId> stem_unreached;
    for (const auto& v : p.stem.vertices)
        if (!profile.stem.count(v)) stem_unreached.insert(v);
    if (find_cycle_in(stem_adj, stem_unreached)) return true;

    if (p.pattern.vertices.empty()) return false;

    int window = profile.has_copies ? profile.preperiod : 0;
    int period = profile.has_copies ? profile.period : 1;
    int first = profile.has_copies ? profile.first_copy : 1;

    using Node = std::pair<VertexId, int>; // (pattern vertex, phase)
    std::map<Node, std::vector<WalkStep<Node, EdgeId>>> quotient;
    auto unreached_at_phase = [&](int phase) {
        std::set<VertexId> result;
        const auto& reached = profile.copy_set(first + window + phase);
        for (const auto& v : p.pattern.vertices)
            if (!reached.count(v)) result.insert(v);
        return result;
    };
    std::vector<std::set<VertexId>> zone;
    for (int phase = 0; phase < period; ++phase) zone.push_back(unreached_at_phase(phase));
    for (int phase = 0; phase < period; ++phase) {
        for (const auto& v : zone[phase]) quotient[{v, phase}];
        for (const auto& e : p.pattern.edges)
            if (zone[phase].count(e.src) && zone[phase].count(e.dst))
                quotient[{e.src, phase}].push_back({{e.src, phase}, e.id, {e.dst, phase}});
        int next_phase = (phase + 1) % period;
        for (const auto& e : p.period_links)
            if (zone[phase].count(e.src) && zone[next_phase].count(e.dst))
                quotient[{e.src, phase}].push_back({{e.src, phase}, e.id, {e.dst, next_phase}});
    }
    return generic_cycle(quotient).has_value();
}

} // namespace detail

// Adopted definition: for every vertex v and every infinite path x there is an
// n with v >= t(x_n). Finite graphs: every vertex reaches every cycle vertex.
// Periodic graphs: a pattern-internal cycle is unreachable from later copies,
// so it rules cofinality out; otherwise no canonical vertex may leave an
// infinite path inside its unreached zone.
inline bool is_cofinal(const GraphHandle& g) {
    if (const auto* f = as_finite(g)) {
        auto cls = classify_vertices(g);
        std::set<VertexId> cycle_vertices = cls.stem_looped;
        for (const auto& v : f->vertices) {
            auto profile = compute_reach_profile(g, VertexRef::stem(v));
            for (const auto& c : cycle_vertices)
                if (!profile.stem.count(c)) return false;
        }
        return true;
    }
    const auto& p = *as_periodic(g);
    if (p.pattern.vertices.empty()) return is_cofinal(GraphHandle{p.stem});
    auto pat_adj = detail::build_adjacency(p.pattern);
    std::set<VertexId> all_pattern(p.pattern.vertices.begin(), p.pattern.vertices.end());
    if (detail::find_cycle_in(pat_adj, all_pattern)) return false;
    for (const auto& v : canonical_vertices(g))
        if (detail::unreached_zone_has_infinite_path(p, compute_reach_profile(g, v))) return false;
    return true;
}

inline bool is_simple_verdict(const GraphHandle& g) {
    return is_cofinal(g) && every_loop_has_exit(g);
}

// ---------------------------------------------------------------------------
// Isotropy
// ---------------------------------------------------------------------------

// The eventually periodic infinite path prefix . cycle . cycle . ...
struct IsotropyCertificate {
    Path prefix;
    Path cycle; // nonempty; source(cycle) == target(prefix) == target(cycle)
};

// A certificate exists iff the graph has a cycle: any eventually periodic
// path carries nontrivial isotropy. Deterministic choice: the first canonical
// vertex that reaches a cycle becomes the prefix root, with a shortest prefix.
inline std::optional<IsotropyCertificate> nontrivial_isotropy_certificate(const GraphHandle& g) {
    auto cls = classify_vertices(g);
    if (cls.stem_looped.empty() && cls.pattern_looped.empty()) return std::nullopt;

    for (const auto& root : canonical_vertices(g)) {
        auto profile = compute_reach_profile(g, root);
        bool reaches_cycle = false;
        for (const auto& id : cls.stem_looped)
            if (profile.stem.count(id)) {
                reaches_cycle = true;
                break;
            }
        if (!reaches_cycle && !cls.pattern_looped.empty()) {
            auto all = profile.copies_union();
            for (const auto& id : cls.pattern_looped)
                if (all.count(id)) {
                    reaches_cycle = true;
                    break;
                }
        }
        if (!reaches_cycle) continue;

        // BFS over vertex refs to the nearest cycle vertex. Copies visited are
        // bounded: a looped pattern vertex is already reached somewhere inside
        // the profile's stored window.
        int copy_cap = profile.first_copy + profile.preperiod + profile.period + 1;
        auto is_cycle_vertex = [&](const VertexRef& v) {
            return v.is_stem() ? cls.stem_looped.count(v.id) > 0
                               : cls.pattern_looped.count(v.id) > 0;
        };
        std::deque<VertexRef> queue{root};
        std::set<VertexRef> visited{root};
        std::map<VertexRef, std::pair<VertexRef, EdgeRef>> parent;
        std::optional<VertexRef> hit;
        if (is_cycle_vertex(root)) hit = root;
        while (!hit && !queue.empty()) {
            VertexRef at = queue.front();
            queue.pop_front();
            for (const auto& oe : out_edges(g, at)) {
                if (oe.dst.copy > copy_cap || visited.count(oe.dst)) continue;
                visited.insert(oe.dst);
                parent[oe.dst] = {at, oe.edge};
                if (is_cycle_vertex(oe.dst)) {
                    hit = oe.dst;
                    break;
                }
                queue.push_back(oe.dst);
            }
        }
        if (!hit) continue;
        Path prefix{root, {}};
        {
            std::vector<EdgeRef> reversed;
            VertexRef at = *hit;
            while (at != root) {
                auto [prev, via] = parent.at(at);
                reversed.push_back(via);
                at = prev;
            }
            std::reverse(reversed.begin(), reversed.end());
            prefix.edges = std::move(reversed);
        }
        auto outcome = first_return_cycles(g, *hit);
        if (outcome.witnesses.empty())
            throw InternalError("cycle vertex without a first-return witness");
        return IsotropyCertificate{std::move(prefix), outcome.witnesses.front()};
    }
    return std::nullopt;
}

} // namespace pigraph

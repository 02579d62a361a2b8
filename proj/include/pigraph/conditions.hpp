#pragma once

// Conditions (K), (I), (DI), (DL) and essential principality.
//
// (DI) and (DL) are decided through an obstruction analysis. Fix a root v and
// a marker set (V2 vertices, or all loop vertices). A reachable vertex w is
// "good" when some path v -> w meets the marker set (endpoints count), "bad"
// otherwise. Any path from v that ends in a bad vertex stays inside the bad
// set throughout and never touches a marker: if some vertex on it were good,
// extending the witnessing marked path along the rest of the path would make
// the endpoint good too. The condition fails at v exactly when arbitrarily
// long paths from v stay bad, i.e. when the bad zone supports an infinite
// path; for periodic graphs that reduces to a cycle of a finite phase
// quotient of the bad zone.

#include <map>
#include <optional>
#include <set>
#include <vector>

#include "pigraph/graph.hpp"
#include "pigraph/structure.hpp"

namespace pigraph {

enum class MarkerKind { V2Marker, LoopMarker };

// Good/bad partition of the set reachable from one root, with the per-copy
// data of a periodic graph folded at the first repeated (hit, reached) state.
struct ObstructionSets {
    VertexRef root;
    MarkerKind marker = MarkerKind::V2Marker;

    std::set<VertexId> stem_hit;   // stem vertices with a marked path from root
    std::set<VertexId> stem_unhit; // stem vertices with an unmarked path from root

    struct CopyState {
        std::set<VertexId> hit;
        std::set<VertexId> unhit;
        auto operator<=>(const CopyState&) const = default;
    };
    int first_copy = 1;
    std::vector<CopyState> copy_states; // size preperiod + period
    int preperiod = 0;
    int period = 1;
    bool has_copies = false;

    const CopyState& state_at(int absolute_copy) const {
        static const CopyState empty;
        if (!has_copies || absolute_copy < first_copy) return empty;
        std::size_t i = static_cast<std::size_t>(absolute_copy - first_copy);
        if (i < copy_states.size()) return copy_states[i];
        std::size_t folded = static_cast<std::size_t>(preperiod) +
                             (i - static_cast<std::size_t>(preperiod)) % static_cast<std::size_t>(period);
        return copy_states[folded];
    }

    bool is_good(const VertexRef& v) const {
        if (v.is_stem()) return stem_hit.count(v.id) > 0;
        return state_at(v.copy).hit.count(v.id) > 0;
    }
    bool is_reached(const VertexRef& v) const {
        if (v.is_stem()) return stem_hit.count(v.id) > 0 || stem_unhit.count(v.id) > 0;
        const auto& s = state_at(v.copy);
        return s.hit.count(v.id) > 0 || s.unhit.count(v.id) > 0;
    }
    bool is_bad(const VertexRef& v) const { return is_reached(v) && !is_good(v); }

    std::set<VertexId> stem_bad() const {
        std::set<VertexId> result;
        for (const auto& v : stem_unhit)
            if (!stem_hit.count(v)) result.insert(v);
        return result;
    }
    std::set<VertexId> bad_at(int absolute_copy) const {
        const auto& s = state_at(absolute_copy);
        std::set<VertexId> result;
        for (const auto& v : s.unhit)
            if (!s.hit.count(v)) result.insert(v);
        return result;
    }
};

namespace detail {

struct MarkerSets {
    std::set<VertexId> stem;
    std::set<VertexId> pattern;
};

inline MarkerSets marker_sets(const VertexClassification& cls, MarkerKind kind) {
    if (kind == MarkerKind::V2Marker) return {cls.stem_v2, cls.pattern_v2};
    return {cls.stem_looped, cls.pattern_looped};
}

// Product closure over (vertex, marker-seen) states inside one finite
// section. Seeds are (vertex, flag) pairs already adjusted for their own
// marker membership.
inline void product_closure(const Adjacency& adj, const std::set<VertexId>& marker,
                            std::set<VertexId>& hit, std::set<VertexId>& unhit) {
    std::deque<std::pair<VertexId, bool>> queue;
    for (const auto& v : hit) queue.push_back({v, true});
    for (const auto& v : unhit) queue.push_back({v, false});
    while (!queue.empty()) {
        auto [v, seen] = queue.front();
        queue.pop_front();
        auto it = adj.out.find(v);
        if (it == adj.out.end()) continue;
        for (const Edge* e : it->second) {
            bool next_seen = seen || marker.count(e->dst) > 0;
            auto& target = next_seen ? hit : unhit;
            if (target.insert(e->dst).second) queue.push_back({e->dst, next_seen});
        }
    }
}

} // namespace detail

inline ObstructionSets bad_set(const GraphHandle& g, const VertexRef& root, MarkerKind marker,
                               const VertexClassification& cls) {
    if (!has_vertex_ref(g, root))
        throw UnknownVertexError("unknown vertex: " + format_vertex_ref(root));
    auto markers = detail::marker_sets(cls, marker);
    ObstructionSets result;
    result.root = root;
    result.marker = marker;

    if (const auto* f = as_finite(g)) {
        auto adj = detail::build_adjacency(*f);
        (markers.stem.count(root.id) ? result.stem_hit : result.stem_unhit).insert(root.id);
        detail::product_closure(adj, markers.stem, result.stem_hit, result.stem_unhit);
        return result;
    }

    const auto& p = *as_periodic(g);
    auto stem_adj = detail::build_adjacency(p.stem);
    auto pat_adj = detail::build_adjacency(p.pattern);

    ObstructionSets::CopyState seed;
    if (root.is_stem()) {
        (markers.stem.count(root.id) ? result.stem_hit : result.stem_unhit).insert(root.id);
        detail::product_closure(stem_adj, markers.stem, result.stem_hit, result.stem_unhit);
        result.first_copy = 1;
        for (const auto& link : p.stem_links) {
            if (result.stem_hit.count(link.src)) seed.hit.insert(link.dst);
            if (result.stem_unhit.count(link.src))
                (markers.pattern.count(link.dst) ? seed.hit : seed.unhit).insert(link.dst);
        }
        if (seed.hit.empty() && seed.unhit.empty()) return result;
    } else {
        result.first_copy = root.copy;
        (markers.pattern.count(root.id) ? seed.hit : seed.unhit).insert(root.id);
    }

    result.has_copies = true;
    std::map<ObstructionSets::CopyState, std::size_t> seen;
    ObstructionSets::CopyState current = std::move(seed);
    detail::product_closure(pat_adj, markers.pattern, current.hit, current.unhit);
    while (true) {
        auto it = seen.find(current);
        if (it != seen.end()) {
            result.preperiod = static_cast<int>(it->second);
            result.period = static_cast<int>(result.copy_states.size() - it->second);
            break;
        }
        seen[current] = result.copy_states.size();
        result.copy_states.push_back(current);
        ObstructionSets::CopyState next;
        for (const auto& link : p.period_links) {
            if (current.hit.count(link.src)) next.hit.insert(link.dst);
            if (current.unhit.count(link.src))
                (markers.pattern.count(link.dst) ? next.hit : next.unhit).insert(link.dst);
        }
        detail::product_closure(pat_adj, markers.pattern, next.hit, next.unhit);
        current = std::move(next);
    }
    return result;
}

inline ObstructionSets bad_set(const GraphHandle& g, const VertexRef& root, MarkerKind marker) {
    return bad_set(g, root, marker, classify_vertices(g));
}

// ---------------------------------------------------------------------------
// Unbounded bad paths
// ---------------------------------------------------------------------------

// Presentation of an obstructing infinite path: prefix into the bad zone,
// then a segment that repeats forever. For a finite graph the segment is a
// genuine cycle; for a periodic graph it may advance some number of copies
// and return to the same pattern vertex, shifted.
struct Lasso {
    Path prefix;
    Path repeat;
};

// Finite quotient of the bad zone's periodic window: nodes are (pattern
// vertex, phase) pairs restricted to bad vertices.
struct PhaseQuotient {
    struct Node {
        VertexId vertex;
        int phase = 0;
        auto operator<=>(const Node&) const = default;
    };
    struct Step {
        Node from;
        EdgeId edge;
        bool via_period_link = false;
        Node to;
    };
    std::vector<Node> nodes;
    std::vector<Step> steps;
    std::optional<std::vector<Step>> cycle;
};

namespace detail {

inline PhaseQuotient build_phase_quotient(const PeriodicGraph& p, const ObstructionSets& obst) {
    PhaseQuotient q;
    if (!obst.has_copies) return q;
    int window = obst.preperiod;
    int period = obst.period;
    std::vector<std::set<VertexId>> bad;
    for (int phase = 0; phase < period; ++phase)
        bad.push_back(obst.bad_at(obst.first_copy + window + phase));

    using Node = PhaseQuotient::Node;
    std::map<Node, std::vector<WalkStep<Node, std::pair<EdgeId, bool>>>> adj;
    for (int phase = 0; phase < period; ++phase) {
        for (const auto& v : bad[phase]) {
            Node n{v, phase};
            q.nodes.push_back(n);
            adj[n];
        }
        for (const auto& e : p.pattern.edges)
            if (bad[phase].count(e.src) && bad[phase].count(e.dst))
                adj[{e.src, phase}].push_back(
                    {{e.src, phase}, {e.id, false}, {e.dst, phase}});
        int next_phase = (phase + 1) % period;
        for (const auto& e : p.period_links)
            if (bad[phase].count(e.src) && bad[next_phase].count(e.dst))
                adj[{e.src, phase}].push_back(
                    {{e.src, phase}, {e.id, true}, {e.dst, next_phase}});
    }
    for (const auto& [node, row] : adj)
        for (const auto& step : row)
            q.steps.push_back({step.from, step.label.first, step.label.second, step.to});
    if (auto walk = generic_cycle(adj)) {
        std::vector<PhaseQuotient::Step> cycle;
        for (const auto& step : *walk)
            cycle.push_back({step.from, step.label.first, step.label.second, step.to});
        q.cycle = std::move(cycle);
    }
    return q;
}

// Shortest path from the root to `target` through bad vertices only. The
// closure property makes every bad vertex reachable this way.
inline Path bad_prefix_path(const GraphHandle& g, const ObstructionSets& obst,
                            const VertexRef& target) {
    if (obst.root == target) return empty_path_at(obst.root);
    std::deque<VertexRef> queue{obst.root};
    std::set<VertexRef> visited{obst.root};
    std::map<VertexRef, std::pair<VertexRef, EdgeRef>> parent;
    while (!queue.empty()) {
        VertexRef at = queue.front();
        queue.pop_front();
        for (const auto& oe : out_edges(g, at)) {
            if (visited.count(oe.dst) || !obst.is_bad(oe.dst)) continue;
            if (oe.dst.copy > target.copy) continue; // forward-only: never overshoot
            visited.insert(oe.dst);
            parent[oe.dst] = {at, oe.edge};
            if (oe.dst == target) {
                std::vector<EdgeRef> reversed;
                VertexRef walk = target;
                while (walk != obst.root) {
                    auto [prev, via] = parent.at(walk);
                    reversed.push_back(via);
                    walk = prev;
                }
                std::reverse(reversed.begin(), reversed.end());
                return Path{obst.root, std::move(reversed)};
            }
            queue.push_back(oe.dst);
        }
    }
    throw InternalError("bad vertex not reachable inside the bad zone: " +
                        format_vertex_ref(target));
}

inline Path lift_finite_cycle(const std::vector<const Edge*>& cycle, int copy) {
    Path path{copy == 0 ? VertexRef::stem(cycle.front()->src)
                        : VertexRef::in_copy(copy, cycle.front()->src),
              {}};
    for (const Edge* e : cycle) path.edges.push_back(EdgeRef{e->id, copy});
    return path;
}

} // namespace detail

struct UnboundedBadResult {
    bool unbounded = false;
    ObstructionSets sets;
    PhaseQuotient quotient;           // periodic graphs only
    std::optional<Lasso> certificate; // present when unbounded
};

inline UnboundedBadResult has_unbounded_bad_paths(const GraphHandle& g, const VertexRef& root,
                                                  MarkerKind marker,
                                                  const VertexClassification& cls) {
    UnboundedBadResult result;
    result.sets = bad_set(g, root, marker, cls);
    const ObstructionSets& obst = result.sets;

    if (const auto* f = as_finite(g)) {
        auto adj = detail::build_adjacency(*f);
        if (auto cycle = detail::find_cycle_in(adj, obst.stem_bad())) {
            result.unbounded = true;
            Path repeat = detail::lift_finite_cycle(*cycle, 0);
            result.certificate = Lasso{detail::bad_prefix_path(g, obst, repeat.base), repeat};
        }
        return result;
    }

    const auto& p = *as_periodic(g);
    auto stem_adj = detail::build_adjacency(p.stem);
    if (auto cycle = detail::find_cycle_in(stem_adj, obst.stem_bad())) {
        result.unbounded = true;
        Path repeat = detail::lift_finite_cycle(*cycle, 0);
        result.certificate = Lasso{detail::bad_prefix_path(g, obst, repeat.base), repeat};
        return result;
    }
    // within-copy cycles in the preperiod zone (window copies are covered by
    // the quotient's self-phase cycles)
    auto pat_adj = detail::build_adjacency(p.pattern);
    for (int i = 0; i < obst.preperiod; ++i) {
        int copy = obst.first_copy + i;
        if (auto cycle = detail::find_cycle_in(pat_adj, obst.bad_at(copy))) {
            result.unbounded = true;
            Path repeat = detail::lift_finite_cycle(*cycle, copy);
            result.certificate = Lasso{detail::bad_prefix_path(g, obst, repeat.base), repeat};
            return result;
        }
    }
    result.quotient = detail::build_phase_quotient(p, obst);
    if (result.quotient.cycle) {
        result.unbounded = true;
        const auto& cycle = *result.quotient.cycle;
        int start_copy = obst.first_copy + obst.preperiod + cycle.front().from.phase;
        Path repeat{VertexRef::in_copy(start_copy, cycle.front().from.vertex), {}};
        int copy = start_copy;
        for (const auto& step : cycle) {
            repeat.edges.push_back(EdgeRef{step.edge, copy});
            if (step.via_period_link) ++copy;
        }
        result.certificate = Lasso{detail::bad_prefix_path(g, obst, repeat.base), repeat};
    }
    return result;
}

inline UnboundedBadResult has_unbounded_bad_paths(const GraphHandle& g, const VertexRef& root,
                                                  MarkerKind marker) {
    return has_unbounded_bad_paths(g, root, marker, classify_vertices(g));
}

// ---------------------------------------------------------------------------
// The conditions
// ---------------------------------------------------------------------------

struct KCertificate {
    VertexRef vertex; // a V1 member
    Path cycle;       // its unique first-return cycle
};

struct ObstructionCertificate {
    VertexRef root;
    ObstructionSets sets;
    Lasso lasso;
};

struct ConditionReport {
    bool K = false;
    bool I = false;
    bool DI = false;
    bool DL = false;
    bool essentially_principal = false;

    std::optional<KCertificate> k_failure;
    std::optional<VertexRef> i_failure;
    std::optional<ObstructionCertificate> di_failure;
    std::optional<ObstructionCertificate> dl_failure;
    std::optional<IsotropyCertificate> principality_failure;
};

inline std::pair<bool, std::optional<KCertificate>> condition_K(const GraphHandle&,
                                                                const VertexClassification& cls) {
    if (cls.v1_empty()) return {true, std::nullopt};
    const auto* entry = cls.first_v1();
    return {false, KCertificate{entry->vertex, entry->witnesses.front()}};
}

inline std::pair<bool, std::optional<KCertificate>> condition_K(const GraphHandle& g) {
    return condition_K(g, classify_vertices(g));
}

inline std::pair<bool, std::optional<VertexRef>> condition_I(const GraphHandle& g,
                                                             const VertexClassification& cls) {
    for (const auto& v : canonical_vertices(g)) {
        auto profile = compute_reach_profile(g, v);
        bool hit = false;
        for (const auto& id : cls.stem_v2)
            if (profile.stem.count(id)) {
                hit = true;
                break;
            }
        if (!hit && !cls.pattern_v2.empty()) {
            auto all = profile.copies_union();
            for (const auto& id : cls.pattern_v2)
                if (all.count(id)) {
                    hit = true;
                    break;
                }
        }
        if (!hit) return {false, v};
    }
    return {true, std::nullopt};
}

inline std::pair<bool, std::optional<VertexRef>> condition_I(const GraphHandle& g) {
    return condition_I(g, classify_vertices(g));
}

namespace detail {

// Roots for the universal quantifier of (DI)/(DL): stem vertices, plus for
// each pattern vertex the copies 1..(preperiod+period) of its own copy-1
// obstruction run. Later copies repeat by phase periodicity.
inline std::pair<bool, std::optional<ObstructionCertificate>> condition_decomposition(
    const GraphHandle& g, MarkerKind marker, const VertexClassification& cls) {
    for (const auto& v : canonical_vertices(g)) {
        auto first = has_unbounded_bad_paths(g, v, marker, cls);
        if (first.unbounded)
            return {false, ObstructionCertificate{v, first.sets, *first.certificate}};
        if (!v.is_stem()) {
            int span = first.sets.has_copies ? first.sets.preperiod + first.sets.period : 1;
            for (int k = 2; k <= span; ++k) {
                VertexRef root = VertexRef::in_copy(k, v.id);
                auto extra = has_unbounded_bad_paths(g, root, marker, cls);
                if (extra.unbounded)
                    return {false, ObstructionCertificate{root, extra.sets, *extra.certificate}};
            }
        }
    }
    return {true, std::nullopt};
}

} // namespace detail

inline std::pair<bool, std::optional<ObstructionCertificate>> condition_DI(
    const GraphHandle& g, const VertexClassification& cls) {
    return detail::condition_decomposition(g, MarkerKind::V2Marker, cls);
}
inline std::pair<bool, std::optional<ObstructionCertificate>> condition_DI(const GraphHandle& g) {
    return condition_DI(g, classify_vertices(g));
}

inline std::pair<bool, std::optional<ObstructionCertificate>> condition_DL(
    const GraphHandle& g, const VertexClassification& cls) {
    return detail::condition_decomposition(g, MarkerKind::LoopMarker, cls);
}
inline std::pair<bool, std::optional<ObstructionCertificate>> condition_DL(const GraphHandle& g) {
    return condition_DL(g, classify_vertices(g));
}

// Condition (K) decides essential principality; a V1 vertex yields the
// eventually periodic path witnessing the failure.
inline std::pair<bool, std::optional<IsotropyCertificate>> essentially_principal(
    const GraphHandle& g, const VertexClassification& cls) {
    auto [holds, certificate] = condition_K(g, cls);
    if (holds) return {true, std::nullopt};
    return {false,
            IsotropyCertificate{empty_path_at(certificate->vertex), certificate->cycle}};
}

inline std::pair<bool, std::optional<IsotropyCertificate>> essentially_principal(
    const GraphHandle& g) {
    return essentially_principal(g, classify_vertices(g));
}

inline ConditionReport condition_report(const GraphHandle& g) {
    auto sinks = validate_no_sinks(g);
    if (!sinks.empty())
        throw SinksPresentError("graph has sinks; eliminate them first (e.g. add tails)");
    auto cls = classify_vertices(g);
    ConditionReport report;
    std::tie(report.K, report.k_failure) = condition_K(g, cls);
    std::tie(report.I, report.i_failure) = condition_I(g, cls);
    std::tie(report.DI, report.di_failure) = condition_DI(g, cls);
    std::tie(report.DL, report.dl_failure) = condition_DL(g, cls);
    std::tie(report.essentially_principal, report.principality_failure) =
        essentially_principal(g, cls);
    if (report.DI && !report.DL)
        throw InternalError("(DI) held without (DL); this cannot happen");
    return report;
}

// ---------------------------------------------------------------------------
// Decompositions
// ---------------------------------------------------------------------------

// The (DI) decomposition at v: pairwise prefix-incomparable paths beta_i from
// v whose cylinders partition Z(v), each with a companion path alpha_i from v
// to t(beta_i) that meets V2. Branches are grown breadth-first and stopped as
// soon as their endpoint is good.
inline std::vector<std::pair<Path, Path>> di_decomposition(const GraphHandle& g, const VertexRef& v,
                                                           const VertexClassification& cls) {
    auto blocked = has_unbounded_bad_paths(g, v, MarkerKind::V2Marker, cls);
    if (blocked.unbounded)
        throw NotDIError("(DI) fails at " + format_vertex_ref(v));
    const ObstructionSets& obst = blocked.sets;
    auto markers = detail::marker_sets(cls, MarkerKind::V2Marker);

    // Bad paths from v are bounded: within one copy a bad path cannot repeat
    // a vertex (that would be a bad cycle), and it can cross at most
    // period * |pattern| stabilized copies before its phase projection would
    // repeat a quotient node. The guard below is a generous backstop over
    // that bound and only trips on internal bugs.
    std::size_t stem_size = 0, pattern_size = 1;
    if (const auto* p = as_periodic(g)) {
        stem_size = p->stem.vertices.size();
        pattern_size = std::max<std::size_t>(1, p->pattern.vertices.size());
    } else {
        stem_size = as_finite(g)->vertices.size();
    }
    std::size_t copies = static_cast<std::size_t>(obst.preperiod) +
                         static_cast<std::size_t>(obst.period) * pattern_size + 2;
    std::size_t depth_guard = stem_size + copies * (pattern_size + 1) + 8;

    std::vector<std::pair<Path, Path>> result;
    std::deque<Path> queue{empty_path_at(v)};
    while (!queue.empty()) {
        Path beta = std::move(queue.front());
        queue.pop_front();
        VertexRef end = path_target(g, beta);
        if (obst.is_good(end)) {
            // shortest marked path v -> end, over (vertex, marker-seen) states
            auto marked = [&](const VertexRef& u) {
                return u.is_stem() ? markers.stem.count(u.id) > 0 : markers.pattern.count(u.id) > 0;
            };
            using State = std::pair<VertexRef, bool>;
            State start{v, marked(v)};
            State goal{end, true};
            std::deque<State> bfs{start};
            std::set<State> visited{start};
            std::map<State, std::pair<State, EdgeRef>> parent;
            std::optional<State> reached;
            if (start == goal) reached = start;
            while (!reached && !bfs.empty()) {
                State at = bfs.front();
                bfs.pop_front();
                for (const auto& oe : out_edges(g, at.first)) {
                    if (oe.dst.copy > end.copy) continue; // forward-only: never overshoot
                    State next{oe.dst, at.second || marked(oe.dst)};
                    if (visited.count(next)) continue;
                    visited.insert(next);
                    parent[next] = {at, oe.edge};
                    if (next == goal) {
                        reached = next;
                        break;
                    }
                    bfs.push_back(next);
                }
            }
            if (!reached)
                throw InternalError("good endpoint without a marked path: " +
                                    format_vertex_ref(end));
            std::vector<EdgeRef> reversed;
            State at = *reached;
            while (at != start) {
                auto [prev, via] = parent.at(at);
                reversed.push_back(via);
                at = prev;
            }
            std::reverse(reversed.begin(), reversed.end());
            result.emplace_back(std::move(beta), Path{v, std::move(reversed)});
            continue;
        }
        if (beta.size() > depth_guard)
            throw InternalError("decomposition expansion exceeded its bound at " +
                                format_vertex_ref(v));
        for (const auto& oe : out_edges(g, end)) {
            Path extended = beta;
            extended.edges.push_back(oe.edge);
            queue.push_back(std::move(extended));
        }
    }
    return result;
}

inline std::vector<std::pair<Path, Path>> di_decomposition(const GraphHandle& g,
                                                           const VertexRef& v) {
    return di_decomposition(g, v, classify_vertices(g));
}

} // namespace pigraph

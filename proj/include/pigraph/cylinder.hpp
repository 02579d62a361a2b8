#pragma once

// Prefix calculus of cylinder sets and basic bisections, cover/partition
// decision procedures, and verification plus synthesis of paradoxical
// decompositions.
//
// Z(mu) is the set of infinite paths extending the finite path mu; Z(v) is
// the cylinder of the empty path at v. Two cylinders intersect exactly when
// one base is a prefix of the other, and then the longer one wins. Z(alpha,
// beta) acts on Z(beta) by rewriting the beta-prefix to alpha, with lag
// |beta| - |alpha|.
//
// A paradoxical witness for Z(mu) consists of two bisection families whose
// right-hand sides each cover Z(mu) while all left-hand cylinders sit inside
// Z(mu) pairwise disjointly.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pigraph/conditions.hpp"
#include "pigraph/graph.hpp"
#include "pigraph/structure.hpp"

namespace pigraph {

struct CylinderSet {
    Path base;
    auto operator<=>(const CylinderSet&) const = default;
};

struct Bisection {
    Path alpha;
    Path beta;
    // lag k of the groupoid elements carried by this bisection
    int lag() const { return static_cast<int>(beta.size()) - static_cast<int>(alpha.size()); }
    auto operator<=>(const Bisection&) const = default;
};

inline bool bisection_valid(const GraphHandle& g, const Bisection& b) {
    return path_valid(g, b.alpha) && path_valid(g, b.beta) &&
           path_target(g, b.alpha) == path_target(g, b.beta);
}

// ---------------------------------------------------------------------------
// Cylinder lattice fragment
// ---------------------------------------------------------------------------

inline std::optional<CylinderSet> cyl_intersect(const CylinderSet& a, const CylinderSet& b) {
    if (path_is_prefix(a.base, b.base)) return b;
    if (path_is_prefix(b.base, a.base)) return a;
    return std::nullopt;
}

inline bool cyl_subset(const CylinderSet& a, const CylinderSet& b) {
    return path_is_prefix(b.base, a.base);
}

inline bool cyl_disjoint(const CylinderSet& a, const CylinderSet& b) {
    return !path_is_prefix(a.base, b.base) && !path_is_prefix(b.base, a.base);
}

// ---------------------------------------------------------------------------
// Covers and partitions
// ---------------------------------------------------------------------------

struct CoverCheckResult {
    bool covered = false;
    std::optional<Path> uncovered_branch; // an extension of mu missed by the family
};

// Does the family cover Z(mu)? Members disjoint from Z(mu) contribute nothing
// and are dropped; a member that is a prefix of mu covers everything. The
// remaining members extend mu, and since no vertex is a sink every finite
// branch continues to an infinite path, so expanding mu to the maximal member
// length decides the cover exactly.
inline CoverCheckResult covers(const std::vector<Path>& family, const Path& mu,
                               const GraphHandle& g) {
    std::vector<const Path*> relevant;
    std::size_t max_len = mu.size();
    for (const auto& member : family) {
        if (path_is_prefix(member, mu)) return {true, std::nullopt};
        if (!path_is_prefix(mu, member)) continue; // disjoint from Z(mu)
        relevant.push_back(&member);
        max_len = std::max(max_len, member.size());
    }

    // depth-first expansion of mu to length max_len
    struct Frame {
        std::vector<OutEdge> outs;
        std::size_t next = 0;
    };
    Path current = mu;
    auto frame_at = [&](const Path& p) {
        return Frame{out_edges(g, path_target(g, p)), 0};
    };
    auto branch_state = [&](const Path& p) {
        // 0 = some member is a prefix (covered), 1 = open, 2 = dead (no member extends)
        bool any_extends = false;
        for (const Path* member : relevant) {
            if (path_is_prefix(*member, p)) return 0;
            if (path_is_prefix(p, *member)) any_extends = true;
        }
        return any_extends ? 1 : 2;
    };

    int state = branch_state(current);
    if (state == 0) return {true, std::nullopt};
    if (state == 2) return {false, current};

    std::vector<Frame> stack{frame_at(current)};
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next >= top.outs.size()) {
            stack.pop_back();
            if (current.size() > mu.size()) current.edges.pop_back();
            continue;
        }
        const OutEdge& oe = top.outs[top.next++];
        current.edges.push_back(oe.edge);
        state = branch_state(current);
        if (state == 0) {
            current.edges.pop_back();
            continue; // branch covered
        }
        if (state == 2 || current.size() >= max_len) return {false, current};
        stack.push_back(frame_at(current));
    }
    return {true, std::nullopt};
}

inline bool partitions(const std::vector<Path>& family, const Path& mu, const GraphHandle& g) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (!cyl_disjoint({family[i]}, {family[j]})) return false;
    return covers(family, mu, g).covered;
}

// ---------------------------------------------------------------------------
// Bisection algebra
// ---------------------------------------------------------------------------

inline Bisection bisection_inverse(const Bisection& b) { return {b.beta, b.alpha}; }

// (alpha, beta) . (gamma, delta): defined when beta and gamma are
// prefix-comparable. With beta = gamma.tau the composite is (alpha,
// delta.tau); with gamma = beta.tau it is (alpha.tau, delta). Lags add.
inline Bisection bisection_compose(const Bisection& b1, const Bisection& b2) {
    if (path_is_prefix(b2.alpha, b1.beta)) {
        // beta = gamma . tau
        Path result_beta = b2.beta;
        result_beta.edges.insert(result_beta.edges.end(),
                                 b1.beta.edges.begin() + b2.alpha.edges.size(),
                                 b1.beta.edges.end());
        return {b1.alpha, std::move(result_beta)};
    }
    if (path_is_prefix(b1.beta, b2.alpha)) {
        // gamma = beta . tau
        Path result_alpha = b1.alpha;
        result_alpha.edges.insert(result_alpha.edges.end(),
                                  b2.alpha.edges.begin() + b1.beta.edges.size(),
                                  b2.alpha.edges.end());
        return {std::move(result_alpha), b2.beta};
    }
    throw NotComposableError("bisections do not compose: incomparable middle cylinders");
}

// Image of a cylinder c inside Z(beta) under the bisection: the beta-prefix
// of c.base is rewritten to alpha.
inline CylinderSet bisection_translate(const Bisection& b, const CylinderSet& c) {
    if (!path_is_prefix(b.beta, c.base))
        throw NotInDomainError("cylinder lies outside the bisection's domain");
    Path image = b.alpha;
    image.edges.insert(image.edges.end(), c.base.edges.begin() + b.beta.edges.size(),
                       c.base.edges.end());
    return {std::move(image)};
}

// ---------------------------------------------------------------------------
// Paradoxical witnesses
// ---------------------------------------------------------------------------

struct ParadoxicalWitness {
    Path mu;
    std::vector<Bisection> first_family;  // (alpha_i, beta_i)
    std::vector<Bisection> second_family; // (gamma_j, delta_j)
    auto operator<=>(const ParadoxicalWitness&) const = default;
};

struct WitnessViolation {
    char clause = '?'; // 'a' bisection validity, 'b' covering, 'c' containment, 'd' disjointness
    std::string detail;
};

struct VerifyResult {
    std::vector<WitnessViolation> violations;
    bool ok() const { return violations.empty(); }
};

inline VerifyResult verify_witness(const ParadoxicalWitness& w, const GraphHandle& g) {
    VerifyResult result;
    if (w.first_family.empty() || w.second_family.empty()) {
        result.violations.push_back({'a', "both families must be nonempty"});
        return result;
    }
    if (!path_valid(g, w.mu)) {
        result.violations.push_back({'a', "mu is not a path of the graph"});
        return result;
    }

    auto check_family = [&](const std::vector<Bisection>& family, const char* name) {
        for (std::size_t i = 0; i < family.size(); ++i) {
            if (!path_valid(g, family[i].alpha) || !path_valid(g, family[i].beta))
                result.violations.push_back(
                    {'a', std::string(name) + "[" + std::to_string(i) + "]: side is not a path"});
            else if (path_target(g, family[i].alpha) != path_target(g, family[i].beta))
                result.violations.push_back(
                    {'a', std::string(name) + "[" + std::to_string(i) + "]: targets differ"});
        }
    };
    check_family(w.first_family, "first");
    check_family(w.second_family, "second");
    if (!result.ok()) return result;

    std::vector<Path> betas, deltas;
    for (const auto& b : w.first_family) betas.push_back(b.beta);
    for (const auto& b : w.second_family) deltas.push_back(b.beta);
    if (!covers(betas, w.mu, g).covered)
        result.violations.push_back({'b', "beta sides do not cover Z(mu)"});
    if (!covers(deltas, w.mu, g).covered)
        result.violations.push_back({'b', "delta sides do not cover Z(mu)"});

    std::vector<std::pair<std::string, const Path*>> left;
    for (std::size_t i = 0; i < w.first_family.size(); ++i)
        left.push_back({"alpha[" + std::to_string(i) + "]", &w.first_family[i].alpha});
    for (std::size_t j = 0; j < w.second_family.size(); ++j)
        left.push_back({"gamma[" + std::to_string(j) + "]", &w.second_family[j].alpha});
    for (const auto& [name, path] : left)
        if (!cyl_subset({*path}, {w.mu}))
            result.violations.push_back({'c', name + " is not contained in Z(mu)"});
    for (std::size_t i = 0; i < left.size(); ++i)
        for (std::size_t j = i + 1; j < left.size(); ++j)
            if (!cyl_disjoint({*left[i].second}, {*left[j].second}))
                result.violations.push_back(
                    {'d', left[i].first + " and " + left[j].first + " are not disjoint"});
    return result;
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

struct SynthesisBudget {
    int max_exponent = 16;
    long max_assignments = 10000;
};

namespace detail {

inline Path repeat_cycle(const Path& cycle, int times) {
    Path result{cycle.base, {}};
    for (int i = 0; i < times; ++i)
        result.edges.insert(result.edges.end(), cycle.edges.begin(), cycle.edges.end());
    return result;
}

} // namespace detail

// Builds a verified paradoxical witness for Z(v).
//
// Each branch (beta_i, alpha_i) of the (DI) decomposition is split at the
// first V2 vertex w_i on alpha_i, where two first-return cycles mu_i != nu_i
// live. The candidate left sides are alpha_i with mu_i^s . nu_i spliced in at
// w_i; within one branch, distinct exponents are automatically
// prefix-incomparable, and cross-branch disjointness is found by searching
// exponent assignments in lexicographic order, accepting the first one the
// verifier passes.
inline ParadoxicalWitness synthesize_witness(const GraphHandle& g, const VertexRef& v,
                                             const SynthesisBudget& budget = {}) {
    auto sinks = validate_no_sinks(g);
    if (!sinks.empty()) throw SinksPresentError("witness synthesis requires a sink-free graph");
    auto cls = classify_vertices(g);
    if (!cls.v1_empty())
        throw NotParadoxicalError("Condition (K) fails: no cylinder set of this graph is paradoxical");
    std::vector<std::pair<Path, Path>> branches;
    try {
        branches = di_decomposition(g, v, cls);
    } catch (const NotDIError&) {
        throw NotParadoxicalError("(DI) fails at " + format_vertex_ref(v) +
                                  ": Z(v) is not paradoxical");
    }

    struct BranchPlan {
        Path beta;
        Path before;      // alpha up to the splice vertex
        Path after;       // alpha from the splice vertex on
        Path cycle_mu;    // first-return pair at the splice vertex
        Path cycle_nu;
    };
    std::vector<BranchPlan> plans;
    for (auto& [beta, alpha] : branches) {
        std::optional<std::size_t> split;
        for (std::size_t pos = 0; pos <= alpha.size(); ++pos) {
            VertexRef at = path_vertex_at(g, alpha, pos);
            if (cls.in_marker(at, /*loops=*/false)) {
                split = pos;
                break;
            }
        }
        if (!split) throw InternalError("decomposition companion path misses V2");
        VertexRef w = path_vertex_at(g, alpha, *split);
        auto returns = first_return_cycles(g, w);
        if (returns.count != ReturnCount::TwoOrMore)
            throw InternalError("V2 vertex with fewer than two first-return cycles");
        BranchPlan plan;
        plan.beta = beta;
        plan.before = Path{alpha.base, {alpha.edges.begin(), alpha.edges.begin() + *split}};
        plan.after = Path{w, {alpha.edges.begin() + *split, alpha.edges.end()}};
        plan.cycle_mu = returns.witnesses[0];
        plan.cycle_nu = returns.witnesses[1];
        plans.push_back(std::move(plan));
    }

    const std::size_t n = plans.size();
    auto build_side = [&](const BranchPlan& plan, int exponent) {
        Path side = plan.before;
        Path pumped = detail::repeat_cycle(plan.cycle_mu, exponent);
        side.edges.insert(side.edges.end(), pumped.edges.begin(), pumped.edges.end());
        side.edges.insert(side.edges.end(), plan.cycle_nu.edges.begin(), plan.cycle_nu.edges.end());
        side.edges.insert(side.edges.end(), plan.after.edges.begin(), plan.after.edges.end());
        return side;
    };

    // Backtracking over exponent pairs (s_i, t_i) per branch, lexicographic,
    // pruning a pair as soon as one of its sides is prefix-comparable with an
    // already fixed side. Comparability never goes away when later digits
    // change, so the pruning is exact and the accepted assignment is the
    // lexicographically least one the verifier passes.
    std::vector<std::pair<int, int>> chosen(n, {0, 0});
    std::vector<Path> fixed_sides; // two per settled branch
    long tried = 0;
    auto conflicts = [&](const Path& side) {
        for (const auto& other : fixed_sides)
            if (!cyl_disjoint({side}, {other})) return true;
        return false;
    };

    std::size_t level = 0;
    int s = 1, t = 0; // next pair to try at the current level
    while (true) {
        if (level == n) {
            ParadoxicalWitness candidate;
            candidate.mu = empty_path_at(v);
            for (std::size_t i = 0; i < n; ++i) {
                candidate.first_family.push_back(
                    {build_side(plans[i], chosen[i].first), plans[i].beta});
                candidate.second_family.push_back(
                    {build_side(plans[i], chosen[i].second), plans[i].beta});
            }
            if (verify_witness(candidate, g).ok()) return candidate;
            // fall through to backtracking below (should not happen: the
            // verifier's exponent-dependent clause is exactly the pruned one)
            --level;
            fixed_sides.pop_back();
            fixed_sides.pop_back();
            std::tie(s, t) = chosen[level];
        }
        // advance (s, t) to the next candidate pair at this level
        bool placed = false;
        while (!placed) {
            if (t < budget.max_exponent) {
                ++t;
            } else if (s < budget.max_exponent) {
                ++s;
                t = 1;
            } else {
                // exhausted this level; backtrack
                if (level == 0)
                    throw SynthesisBudgetExceededError(
                        "no verified exponent assignment within " +
                        std::to_string(budget.max_assignments) + " attempts at " +
                        format_vertex_ref(v));
                --level;
                fixed_sides.pop_back();
                fixed_sides.pop_back();
                std::tie(s, t) = chosen[level];
                continue;
            }
            if (s == t) continue;
            if (++tried > budget.max_assignments)
                throw SynthesisBudgetExceededError(
                    "no verified exponent assignment within " +
                    std::to_string(budget.max_assignments) + " attempts at " +
                    format_vertex_ref(v));
            Path side_s = build_side(plans[level], s);
            Path side_t = build_side(plans[level], t);
            if (!cyl_disjoint({side_s}, {side_t}) || conflicts(side_s) || conflicts(side_t))
                continue;
            chosen[level] = {s, t};
            fixed_sides.push_back(std::move(side_s));
            fixed_sides.push_back(std::move(side_t));
            ++level;
            s = 1;
            t = 0;
            placed = true;
        }
    }
}

// Transports the witness at t(mu) along mu: every path of the vertex witness
// is prefixed by mu. Paradoxicality of Z(mu) and Z(t(mu)) are equivalent.
inline ParadoxicalWitness witness_for_path(const GraphHandle& g, const Path& mu,
                                           const SynthesisBudget& budget = {}) {
    if (!path_valid(g, mu)) throw NotComposableError("mu is not a path of the graph");
    ParadoxicalWitness at_vertex = synthesize_witness(g, path_target(g, mu), budget);
    ParadoxicalWitness result;
    result.mu = mu;
    auto transport = [&](const Path& p) { return path_concat(g, mu, p); };
    for (const auto& b : at_vertex.first_family)
        result.first_family.push_back({transport(b.alpha), transport(b.beta)});
    for (const auto& b : at_vertex.second_family)
        result.second_family.push_back({transport(b.alpha), transport(b.beta)});
    if (!verify_witness(result, g).ok())
        throw InternalError("transported witness failed verification");
    return result;
}

} // namespace pigraph

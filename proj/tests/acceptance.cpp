// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Usage: acceptance [DATA_DIR]   (DATA_DIR defaults to ../data)

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "oracles.hpp"
#include "pigraph/pigraph.hpp"

using namespace pigraph;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    std::string name;
    double limit_seconds; // 0 = no limit
    std::function<void(std::ostringstream&)> run; // throws or appends "FAIL:" lines
};

int failures = 0;

void run_criterion(const Criterion& c) {
    std::ostringstream log;
    bool ok = true;
    auto start = Clock::now();
    try {
        c.run(log);
    } catch (const std::exception& e) {
        log << "exception: " << e.what() << "; ";
        ok = false;
    }
    double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (log.str().find("FAIL") != std::string::npos) ok = false;
    if (c.limit_seconds > 0 && elapsed > c.limit_seconds) {
        log << "time limit " << c.limit_seconds << "s exceeded; ";
        ok = false;
    }
    std::cout << (ok ? "[PASS] " : "[FAIL] ") << c.name;
    std::ostringstream time;
    time.precision(2);
    time << std::fixed << elapsed;
    std::cout << " (" << time.str() << "s)";
    if (!log.str().empty()) std::cout << " " << log.str();
    std::cout << "\n";
    if (!ok) ++failures;
}

template <typename T>
void expect(std::ostringstream& log, bool condition, const T& message) {
    if (!condition) log << "FAIL: " << message << "; ";
}

} // namespace

int main(int argc, char** argv) {
    std::string data_dir = argc > 1 ? argv[1] : "../data";

    // 1. The two printed witness families verify as given; every single-clause
    //    tampering is rejected with the right clause.
    Criterion golden{"1 golden witnesses", 1.0, [&](std::ostringstream& log) {
        auto g4 = parse_graph_file(data_dir + "/g4.json");
        auto wv = parse_witness_file(data_dir + "/g4_witness_v.json", g4);
        auto ww = parse_witness_file(data_dir + "/g4_witness_w.json", g4);
        expect(log, verify_witness(wv, g4).ok(), "Z(v) witness rejected");
        expect(log, verify_witness(ww, g4).ok(), "Z(w) witness rejected");

        for (const auto& base : {wv, ww}) {
            {
                auto t = base;
                t.first_family.erase(t.first_family.begin());
                auto r = verify_witness(t, g4);
                expect(log, !r.ok(), "dropped bisection accepted");
                bool clause_b = false;
                for (const auto& v : r.violations) clause_b = clause_b || v.clause == 'b';
                expect(log, clause_b, "dropped bisection not reported as a cover failure");
            }
            {
                auto t = base;
                t.first_family[0].alpha = t.second_family.back().alpha;
                auto r = verify_witness(t, g4);
                expect(log, !r.ok(), "swapped alpha accepted");
                bool good_clause = false;
                for (const auto& v : r.violations)
                    good_clause = good_clause || v.clause == 'a' || v.clause == 'd';
                expect(log, good_clause, "swapped alpha misclassified");
            }
            {
                auto t = base;
                t.second_family[0].alpha = t.first_family[0].alpha;
                auto r = verify_witness(t, g4);
                expect(log, !r.ok(), "cross-family duplicate accepted");
                bool clause_d = false;
                for (const auto& v : r.violations) clause_d = clause_d || v.clause == 'd';
                expect(log, clause_d, "duplicate not reported as a disjointness failure");
            }
        }
    }};

    // 2. Counterexample classification.
    Criterion counterexamples{"2 counterexample classification", 1.0, [&](std::ostringstream& log) {
        auto r3 = classify(corpus::g3());
        expect(log, r3.conditions.K, "G3 (K)");
        expect(log, r3.conditions.I, "G3 (I)");
        expect(log, !r3.conditions.DI, "G3 (DI) should fail");
        expect(log, !r3.conditions.DL, "G3 (DL) should fail");
        expect(log, !r3.purely_infinite, "G3 purely infinite");
        expect(log, r3.property_ih, "G3 (IH)");
        for (auto g : {corpus::g2(), corpus::g5()}) {
            auto r = classify(g);
            expect(log, !r.conditions.K, "(K) should fail");
            expect(log, !r.purely_infinite, "should not be purely infinite");
            expect(log, r.conditions.k_failure.has_value(), "missing V1 certificate");
            if (r.conditions.k_failure) {
                const auto& cert = *r.conditions.k_failure;
                expect(log, path_valid(r.analyzed, cert.cycle), "V1 cycle invalid");
                expect(log, path_target(r.analyzed, cert.cycle) == cert.cycle.base,
                       "V1 cycle does not close");
            }
        }
    }};

    // 3. Theorem equivalence sweep over random finite no-sink graphs.
    Criterion sweep{"3 theorem equivalence sweep", 30.0, [&](std::ostringstream& log) {
        std::mt19937 rng(424242);
        int violations = 0, tail_mismatches = 0;
        for (int i = 0; i < 1000; ++i) {
            auto fg = oracles::random_no_sink_graph(rng, 8, 3);
            GraphHandle g{fg};
            auto report = classify(g);
            if (!consistency_check(report, report.analyzed).empty()) ++violations;
            bool hosz = report.conditions.K && tail_loop_condition(fg);
            if (hosz != report.purely_infinite) ++violations;
            std::set<std::set<VertexId>> enumerated;
            for (const auto& tail : enumerate_maximal_tails(fg)) enumerated.insert(tail.members);
            auto brute = brute_force_tails(fg);
            if (enumerated != std::set<std::set<VertexId>>(brute.begin(), brute.end()))
                ++tail_mismatches;
        }
        expect(log, violations == 0,
               std::to_string(violations) + " equivalence violations in 1000 graphs");
        expect(log, tail_mismatches == 0,
               std::to_string(tail_mismatches) + " tail enumeration mismatches");
    }};

    // 4. Synthesis soundness: corpus and random purely infinite graphs.
    Criterion synthesis{"4 synthesis soundness", 0, [&](std::ostringstream& log) {
        int budget_failures = 0, verify_failures = 0, corpus_vertices = 0;
        for (auto g : {corpus::g1(), corpus::g4()}) {
            for (const auto& v : canonical_vertices(g)) {
                ++corpus_vertices;
                try {
                    auto w = synthesize_witness(g, v);
                    if (!verify_witness(w, g).ok()) ++verify_failures;
                } catch (const SynthesisBudgetExceededError&) {
                    ++budget_failures;
                }
            }
        }
        log << "corpus budget-exceeded rate " << budget_failures << "/" << corpus_vertices << "; ";
        expect(log, budget_failures == 0,
               std::to_string(budget_failures) + " corpus synthesis budget failures");

        std::mt19937 rng(777);
        int pi_graphs = 0, random_budget_failures = 0;
        for (int i = 0; i < 400 && pi_graphs < 60; ++i) {
            GraphHandle g{oracles::random_no_sink_graph(rng, 8, 3)};
            auto report = classify(g);
            if (!report.purely_infinite) continue;
            ++pi_graphs;
            for (const auto& v : canonical_vertices(g)) {
                try {
                    auto w = synthesize_witness(g, v);
                    if (!verify_witness(w, g).ok()) ++verify_failures;
                } catch (const SynthesisBudgetExceededError&) {
                    ++random_budget_failures;
                }
            }
        }
        expect(log, pi_graphs >= 20,
               "only " + std::to_string(pi_graphs) + " purely infinite random graphs sampled");
        expect(log, verify_failures == 0,
               std::to_string(verify_failures) + " synthesized witnesses failed verification");
        expect(log, random_budget_failures == 0,
               std::to_string(random_budget_failures) + " random synthesis budget failures");

        // transport along 100 random paths re-verifies
        int transport_failures = 0;
        for (int i = 0; i < 100; ++i) {
            auto g = (i % 2 == 0) ? corpus::g1() : corpus::g4();
            auto roots = canonical_vertices(g);
            std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
            Path mu = oracles::random_path(rng, g, roots[pick(rng)], 6);
            try {
                auto w = witness_for_path(g, mu);
                if (!verify_witness(w, g).ok()) ++transport_failures;
            } catch (const Error&) {
                ++transport_failures;
            }
        }
        expect(log, transport_failures == 0,
               std::to_string(transport_failures) + " transported witnesses failed");
    }};

    // 5. Cover checker versus the exhaustive expansion oracle.
    Criterion cover_oracle{"5 cover oracle equivalence", 10.0, [&](std::ostringstream& log) {
        std::mt19937 rng(31337);
        int disagreements = 0, cases = 0;
        for (auto g : {corpus::g1(), corpus::g2(), corpus::g3(), corpus::g4(), corpus::g5()}) {
            auto roots = canonical_vertices(g);
            for (int i = 0; i < 1000; ++i) {
                std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
                std::uniform_int_distribution<int> fam_size(0, 4);
                VertexRef root = roots[pick(rng)];
                Path mu = oracles::random_path(rng, g, root, 2);
                std::vector<Path> family;
                int n = fam_size(rng);
                for (int k = 0; k < n; ++k) {
                    if (rng() % 3 == 0) {
                        family.push_back(oracles::random_path(rng, g, roots[pick(rng)], 4));
                    } else {
                        Path ext = mu;
                        Path tail = oracles::random_path(rng, g, path_target(g, mu), 3);
                        ext.edges.insert(ext.edges.end(), tail.edges.begin(), tail.edges.end());
                        family.push_back(std::move(ext));
                    }
                }
                bool fast = covers(family, mu, g).covered;
                bool slow = oracles::oracle_covers(family, mu, g);
                if (fast != slow) ++disagreements;
                bool part_fast = partitions(family, mu, g);
                bool pairwise = true;
                for (std::size_t a = 0; a < family.size(); ++a)
                    for (std::size_t b = a + 1; b < family.size(); ++b)
                        if (!cyl_disjoint({family[a]}, {family[b]})) pairwise = false;
                if (part_fast != (slow && pairwise)) ++disagreements;
                ++cases;
            }
        }
        expect(log, disagreements == 0, std::to_string(disagreements) + " disagreements");
        expect(log, cases >= 5000, "not enough cases");
    }};

    // 6. Obstruction sets versus truncated enumeration.
    Criterion obstruction{"6 obstruction-set oracle", 0, [&](std::ostringstream& log) {
        int disagreements = 0;
        for (const auto& p : {corpus::g3_periodic(), corpus::g4_periodic()}) {
            GraphHandle g{p};
            auto cls = classify_vertices(g);
            for (const auto& root : canonical_vertices(g))
                for (auto marker : {MarkerKind::V2Marker, MarkerKind::LoopMarker}) {
                    auto obst = bad_set(g, root, marker, cls);
                    int depth = obst.preperiod + 2 * obst.period + 2;
                    auto mat = materialize(p, depth);
                    auto oracle = oracles::oracle_good_bad(
                        mat.graph, format_vertex_ref(root),
                        oracles::oracle_marker_ids(mat.graph, marker == MarkerKind::LoopMarker));
                    for (const auto& id : mat.graph.vertices) {
                        VertexRef ref = parse_vertex_ref(id);
                        bool good = oracle.good.count(id) > 0;
                        bool reached = oracle.reached.count(id) > 0;
                        if (obst.is_good(ref) != good || obst.is_reached(ref) != reached ||
                            obst.is_bad(ref) != (reached && !good))
                            ++disagreements;
                    }
                }
        }
        expect(log, disagreements == 0, std::to_string(disagreements) + " disagreements");
    }};

    // 7. Prefix combinatorics: intersection trichotomy, first-return
    //    prefix-incomparability, and pumped-family disjointness.
    Criterion combinatorics{"7 prefix combinatorics", 0, [&](std::ostringstream& log) {
        std::mt19937 rng(99991);
        long cases = 0;
        int violations = 0;
        std::vector<GraphHandle> graphs{corpus::g1(), corpus::g3(), corpus::g4()};
        for (int i = 0; i < 60; ++i)
            graphs.push_back(GraphHandle{oracles::random_no_sink_graph(rng)});
        for (const auto& g : graphs) {
            auto roots = canonical_vertices(g);
            std::uniform_int_distribution<std::size_t> pick(0, roots.size() - 1);
            for (int i = 0; i < 200; ++i) {
                Path a = oracles::random_path(rng, g, roots[pick(rng)], 5);
                Path b = oracles::random_path(rng, g, roots[pick(rng)], 5);
                auto meet = cyl_intersect({a}, {b});
                bool trichotomy =
                    meet ? (meet->base == a || meet->base == b) : cyl_disjoint({a}, {b});
                if (!trichotomy) ++violations;
                ++cases;
            }
            for (const auto& v : roots) {
                auto outcome = first_return_cycles(g, v);
                if (outcome.count != ReturnCount::TwoOrMore) continue;
                const Path& mu = outcome.witnesses[0];
                const Path& nu = outcome.witnesses[1];
                if (path_is_prefix(mu, nu) || path_is_prefix(nu, mu)) ++violations;
                ++cases;
                std::vector<Path> family;
                for (int k = 1; k <= 8; ++k) {
                    Path word{v, {}};
                    for (int rep = 0; rep < k; ++rep)
                        word.edges.insert(word.edges.end(), mu.edges.begin(), mu.edges.end());
                    word.edges.insert(word.edges.end(), nu.edges.begin(), nu.edges.end());
                    family.push_back(std::move(word));
                }
                for (std::size_t x = 0; x < family.size(); ++x)
                    for (std::size_t y = x + 1; y < family.size(); ++y) {
                        if (!cyl_disjoint({family[x]}, {family[y]})) ++violations;
                        ++cases;
                    }
            }
        }
        expect(log, violations == 0, std::to_string(violations) + " violations");
        expect(log, cases >= 10000, "only " + std::to_string(cases) + " cases");
    }};

    for (const auto& c : {golden, counterexamples, sweep, synthesis, cover_oracle, obstruction,
                          combinatorics})
        run_criterion(c);

    if (failures) {
        std::cout << failures << " criterion(s) failed\n";
        return 1;
    }
    std::cout << "all acceptance criteria passed\n";
    return 0;
}

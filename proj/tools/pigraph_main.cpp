// pigraph: decide pure infiniteness of the graph C*-algebra of a row-finite
// directed graph without sinks, report the combinatorial conditions behind
// the verdict, and verify or synthesize paradoxical decompositions of
// cylinder sets.
//
// Exit codes: 0 success; 1 a queried property is false; 2 input or validation
// error; 3 internal consistency violation (a bug, never a property of the
// input).

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pigraph/pigraph.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPropertyFalse = 1;
constexpr int kExitInputError = 2;
constexpr int kExitInternal = 3;

void write_text(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw pigraph::Error("cannot write " + path);
    out << text;
}

const char* yesno(bool b) { return b ? "yes" : "no"; }

std::string ref_text(const pigraph::GraphHandle& g, const pigraph::VertexRef& v) {
    return pigraph::is_periodic(g) ? pigraph::format_vertex_ref(v) : v.id;
}

std::string describe_path(const pigraph::GraphHandle& g, const pigraph::Path& p) {
    std::string text = pigraph::is_periodic(g) ? pigraph::format_vertex_ref(p.base) : p.base.id;
    for (const auto& e : p.edges) {
        text += " .";
        text += pigraph::is_periodic(g) ? pigraph::format_edge_ref(e) : e.id;
    }
    return text;
}

int run_classify(const std::string& file, bool add_tails, bool witnesses,
                 const std::string& json_out, const std::string& dot_out, bool assert_pi) {
    using namespace pigraph;
    GraphHandle input = parse_graph_file(file);
    auto validation = validate(input);
    if (!validation.ok()) {
        for (const auto& err : validation.errors) std::cerr << "invalid: " << err.where << "\n";
        return kExitInputError;
    }
    ClassifyOptions opts;
    opts.add_tails = add_tails;
    opts.witnesses = witnesses;
    ClassificationReport report = classify(input, opts);
    auto violations = consistency_check(report, report.analyzed);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "consistency violation: " << v << "\n";
        return kExitInternal;
    }

    std::cout << "purely infinite:       " << yesno(report.purely_infinite) << "\n";
    std::cout << "condition (K):         " << yesno(report.conditions.K) << "\n";
    std::cout << "condition (I):         " << yesno(report.conditions.I) << "\n";
    std::cout << "condition (DI):        " << yesno(report.conditions.DI) << "\n";
    std::cout << "condition (DL):        " << yesno(report.conditions.DL) << "\n";
    std::cout << "essentially principal: " << yesno(report.conditions.essentially_principal) << "\n";
    std::cout << "property (IH):         " << yesno(report.property_ih) << "\n";
    std::cout << "locally contracting:   " << yesno(report.locally_contracting) << "\n";
    std::cout << "cofinal:               " << yesno(report.cofinal) << "\n";
    std::cout << "simple:                " << yesno(report.simple) << "\n";
    std::cout << "AF (cycle-free):       " << yesno(report.af_verdict) << "\n";
    if (report.tails_added) std::cout << "note: sinks were eliminated by adding tails\n";
    if (report.conditions.k_failure)
        std::cout << "V1 certificate: vertex "
                  << describe_path(report.analyzed,
                                   pigraph::empty_path_at(report.conditions.k_failure->vertex))
                  << " with unique cycle "
                  << describe_path(report.analyzed, report.conditions.k_failure->cycle) << "\n";
    if (witnesses)
        std::cout << "verified witnesses: " << report.witnesses.size()
                  << " (budget failures: " << report.witness_budget_failures.size() << ")\n";

    if (!json_out.empty()) write_text(json_out, render_json(report).dump(2) + "\n");
    if (!dot_out.empty()) write_text(dot_out, render_dot(report.analyzed));
    if (assert_pi && !report.purely_infinite) return kExitPropertyFalse;
    return kExitOk;
}

int run_conditions(const std::string& file) {
    using namespace pigraph;
    GraphHandle g = parse_graph_file(file);
    auto validation = validate(g);
    if (!validation.ok()) {
        for (const auto& err : validation.errors) std::cerr << "invalid: " << err.where << "\n";
        return kExitInputError;
    }
    ConditionReport report = condition_report(g);
    std::cout << "K=" << yesno(report.K) << " I=" << yesno(report.I) << " DI=" << yesno(report.DI)
              << " DL=" << yesno(report.DL)
              << " essentially_principal=" << yesno(report.essentially_principal) << "\n";
    if (report.k_failure)
        std::cout << "V1 vertex: " << ref_text(g, report.k_failure->vertex) << "\n";
    if (report.i_failure)
        std::cout << "(I) fails at: " << ref_text(g, *report.i_failure) << "\n";
    if (report.di_failure)
        std::cout << "(DI) fails at: " << ref_text(g, report.di_failure->root)
                  << " (obstructing path: prefix "
                  << describe_path(g, report.di_failure->lasso.prefix) << ", repeat "
                  << describe_path(g, report.di_failure->lasso.repeat) << ")\n";
    if (report.dl_failure)
        std::cout << "(DL) fails at: " << ref_text(g, report.dl_failure->root) << "\n";
    return kExitOk;
}

int run_tails(const std::string& file, bool oracle) {
    using namespace pigraph;
    GraphHandle g = parse_graph_file(file);
    auto validation = validate(g);
    if (!validation.ok()) {
        for (const auto& err : validation.errors) std::cerr << "invalid: " << err.where << "\n";
        return kExitInputError;
    }
    const auto* f = as_finite(g);
    if (!f) {
        std::cerr << "tail enumeration is defined for finite graphs only\n";
        return kExitInputError;
    }
    auto report = tail_report(*f);
    std::cout << "maximal tails: " << report.tails.size() << "\n";
    for (const auto& tail : report.tails) {
        std::cout << "  {";
        bool first = true;
        for (const auto& v : tail.members) {
            if (!first) std::cout << ", ";
            std::cout << v;
            first = false;
        }
        std::cout << "}  (generator " << tail.generator << ")\n";
    }
    std::cout << "loop condition: " << yesno(report.loop_condition) << "\n";
    std::cout << "exit condition: " << yesno(report.exit_condition) << "\n";
    if (oracle) {
        auto brute = brute_force_tails(*f);
        std::set<std::set<VertexId>> enumerated;
        for (const auto& tail : report.tails) enumerated.insert(tail.members);
        std::set<std::set<VertexId>> bruteset(brute.begin(), brute.end());
        if (enumerated != bruteset) {
            std::cerr << "consistency violation: enumeration disagrees with subset brute force\n";
            return kExitInternal;
        }
        std::cout << "oracle: subset brute force agrees\n";
    }
    return kExitOk;
}

int run_witness_synth(const std::string& file, const std::string& vertex, long budget,
                      const std::string& out) {
    using namespace pigraph;
    GraphHandle g = parse_graph_file(file);
    auto validation = validate(g);
    if (!validation.ok()) {
        for (const auto& err : validation.errors) std::cerr << "invalid: " << err.where << "\n";
        return kExitInputError;
    }
    VertexRef v = parse_vertex_ref(vertex);
    if (!has_vertex_ref(g, v)) {
        std::cerr << "unknown vertex: " << vertex << "\n";
        return kExitInputError;
    }
    SynthesisBudget limits;
    if (budget > 0) limits.max_assignments = budget;
    ParadoxicalWitness witness;
    try {
        witness = synthesize_witness(g, v, limits);
    } catch (const NotParadoxicalError& err) {
        std::cerr << err.what() << "\n";
        return kExitPropertyFalse;
    } catch (const SynthesisBudgetExceededError& err) {
        std::cerr << err.what() << "\n";
        return kExitInputError;
    }
    std::string text = render_witness_json(g, witness).dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text(out, text);
    return kExitOk;
}

int run_witness_verify(const std::string& file, const std::string& witness_file) {
    using namespace pigraph;
    GraphHandle g = parse_graph_file(file);
    auto validation = validate(g);
    if (!validation.ok()) {
        for (const auto& err : validation.errors) std::cerr << "invalid: " << err.where << "\n";
        return kExitInputError;
    }
    ParadoxicalWitness witness = parse_witness_file(witness_file, g);
    auto result = verify_witness(witness, g);
    if (result.ok()) {
        std::cout << "witness verified\n";
        return kExitOk;
    }
    for (const auto& v : result.violations)
        std::cout << "violation (" << v.clause << "): " << v.detail << "\n";
    return kExitPropertyFalse;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pure infiniteness of graph C*-algebras via the path groupoid"};
    app.require_subcommand(1);

    std::string file, json_out, dot_out, vertex, out, witness_file;
    bool add_tails = false, witnesses = false, assert_pi = false, oracle = false;
    long budget = 0;

    auto* classify_cmd = app.add_subcommand("classify", "full classification report");
    classify_cmd->add_option("FILE", file, "graph file (JSON)")->required();
    classify_cmd->add_flag("--add-tails", add_tails, "eliminate sinks by adding tails");
    classify_cmd->add_flag("--witnesses", witnesses, "synthesize paradoxicality witnesses");
    classify_cmd->add_option("--json", json_out, "write the JSON report here ('-' for stdout)");
    classify_cmd->add_option("--dot", dot_out, "write a DOT rendering here ('-' for stdout)");
    classify_cmd->add_flag("--assert-pi", assert_pi, "exit 1 unless purely infinite");

    auto* conditions_cmd = app.add_subcommand("conditions", "conditions (K), (I), (DI), (DL)");
    conditions_cmd->add_option("FILE", file, "graph file (JSON)")->required();

    auto* tails_cmd = app.add_subcommand("tails", "maximal tails of a finite graph");
    tails_cmd->add_option("FILE", file, "graph file (JSON)")->required();
    tails_cmd->add_flag("--oracle", oracle, "cross-check against subset brute force");

    auto* witness_cmd = app.add_subcommand("witness", "paradoxicality witnesses");
    witness_cmd->require_subcommand(1);
    auto* synth_cmd = witness_cmd->add_subcommand("synth", "synthesize a verified witness");
    synth_cmd->add_option("FILE", file, "graph file (JSON)")->required();
    synth_cmd->add_option("--vertex", vertex, "vertex reference, e.g. v or copy:2:c")->required();
    synth_cmd->add_option("--budget", budget, "max exponent assignments to try");
    synth_cmd->add_option("--out", out, "write the witness here instead of stdout");
    auto* verify_cmd = witness_cmd->add_subcommand("verify", "verify a witness file");
    verify_cmd->add_option("FILE", file, "graph file (JSON)")->required();
    verify_cmd->add_option("WITNESS_FILE", witness_file, "witness file (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify_cmd)
            return run_classify(file, add_tails, witnesses, json_out, dot_out, assert_pi);
        if (*conditions_cmd) return run_conditions(file);
        if (*tails_cmd) return run_tails(file, oracle);
        if (*synth_cmd) return run_witness_synth(file, vertex, budget, out);
        if (*verify_cmd) return run_witness_verify(file, witness_file);
    } catch (const pigraph::InternalError& err) {
        std::cerr << "internal error: " << err.what() << "\n";
        return kExitInternal;
    } catch (const pigraph::Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitInputError;
    }
    return kExitOk;
}

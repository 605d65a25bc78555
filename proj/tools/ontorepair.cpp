// Command-line front end: consistency checking, classification, concept
// refinement, axiom weakening, repair, IIC comparison and the
// weaken-vs-remove experiment harness.
//
// Exit codes: 0 success (consistent for `check`), 1 inconsistent (`check`
// only), 2 usage or input error, 3 runtime error (budgets, caps).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"

#include "orep/errors.hpp"
#include "orep/evaluation.hpp"
#include "orep/io.hpp"

namespace fs = std::filesystem;
using namespace orep;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

bool g_quiet = false;

void diag(const std::string& message) {
    if (!g_quiet) std::cerr << message << "\n";
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Ontology load_ontology(const std::string& path) {
    std::vector<std::string> warnings;
    Ontology o = parse_ontology(read_file(path), &warnings);
    for (const auto& w : warnings) diag(path + ": " + w);
    return o;
}

std::uint64_t effective_seed(const CLI::Option* seed_opt, std::uint64_t seed_value) {
    if (seed_opt->count() == 0) {
        seed_value = std::random_device{}();
    }
    // always emitted so runs can be replayed, --quiet included
    std::cerr << "seed: " << seed_value << "\n";
    return seed_value;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file: " + path);
    out << content;
}

ReferenceMode parse_reference(const std::string& value) {
    if (value == "brave") return BraveReference{};
    if (value == "cautious") return CautiousReference{};
    Ontology ref = load_ontology(value);
    return ref;
}

int run(int argc, char** argv) {
    CLI::App app{"ALC ontology repair toolkit: weakening-based repair, refinement "
                 "operators and an evaluation harness"};
    app.require_subcommand(1);
    app.add_flag("--quiet", g_quiet, "suppress diagnostics (seed lines are still printed)");

    // check
    auto* check = app.add_subcommand("check", "decide consistency (exit 0 consistent, 1 inconsistent)");
    std::string check_file;
    std::uint64_t check_budget = ReasonerOptions{}.work_budget;
    check->add_option("file", check_file, "ontology file")->required();
    check->add_option("--budget", check_budget, "tableau work budget");

    // classify
    auto* classify = app.add_subcommand("classify", "print the inferred atomic class hierarchy");
    std::string classify_file;
    classify->add_option("file", classify_file, "ontology file")->required();

    // refine
    auto* refine = app.add_subcommand("refine", "iterate a refinement operator on a concept");
    std::string refine_onto, refine_mode = "up", refine_expr;
    unsigned refine_depth = 1;
    int refine_cap = 50;
    refine->add_option("--ontology", refine_onto, "reference ontology file")->required();
    refine->add_option("--mode", refine_mode, "up or down")->check(CLI::IsMember({"up", "down"}));
    refine->add_option("--concept", refine_expr, "concept expression")->required();
    refine->add_option("--depth", refine_depth, "number of refinement iterations");
    refine->add_option("--size-cap", refine_cap, "do not expand concepts larger than this");

    // weaken
    auto* weaken = app.add_subcommand("weaken", "print all weakenings of an axiom");
    std::string weaken_ref, weaken_axiom;
    weaken->add_option("--reference", weaken_ref, "consistent reference ontology file")->required();
    weaken->add_option("--axiom", weaken_axiom, "axiom to weaken")->required();

    // repair
    auto* repair = app.add_subcommand("repair", "restore consistency by weakening or removal");
    std::string repair_file, repair_method = "weaken", repair_bad = "mis", repair_ref = "brave";
    std::string repair_mis = "auto", repair_trace, repair_out;
    std::uint64_t repair_seed = 0, repair_max_steps = 0;
    repair->add_option("file", repair_file, "ontology file")->required();
    repair->add_option("--method", repair_method, "weaken or remove")
        ->check(CLI::IsMember({"weaken", "remove"}));
    repair->add_option("--bad-axiom", repair_bad, "mis or rand")->check(CLI::IsMember({"mis", "rand"}));
    repair->add_option("--mis-samples", repair_mis, "auto or a sample count");
    repair->add_option("--reference", repair_ref, "brave, cautious, or a file path");
    auto* repair_seed_opt = repair->add_option("--seed", repair_seed, "random seed");
    repair->add_option("--max-steps", repair_max_steps, "weakening step limit (default 10x axiom count)");
    repair->add_option("--trace", repair_trace, "write the JSON repair trace here");
    repair->add_option("-o,--output", repair_out, "output file (default stdout)");

    // iic
    auto* iic_cmd = app.add_subcommand("iic", "inferable information content of two repairs");
    std::string iic_a, iic_b;
    iic_cmd->add_option("first", iic_a, "first ontology")->required();
    iic_cmd->add_option("second", iic_b, "second ontology")->required();

    // experiment
    auto* experiment = app.add_subcommand("experiment", "weaken-vs-remove comparison over a corpus");
    std::string exp_corpus, exp_out = "report.csv", exp_bad = "both";
    unsigned exp_trials = 50, exp_jobs = 1;
    std::uint64_t exp_seed = 0, exp_max_steps = 0;
    experiment->add_option("--corpus", exp_corpus, "directory of .onto files")->required();
    experiment->add_option("--trials", exp_trials, "trials per ontology and variant");
    auto* exp_seed_opt = experiment->add_option("--seed", exp_seed, "master seed");
    experiment->add_option("--bad-axiom", exp_bad, "mis, rand, or both")
        ->check(CLI::IsMember({"mis", "rand", "both"}));
    experiment->add_option("--out", exp_out, "CSV report path");
    experiment->add_option("--jobs", exp_jobs, "worker threads (results are order-independent)");
    experiment->add_option("--max-steps", exp_max_steps, "weakening step limit per repair");

    CLI11_PARSE(app, argc, argv);

    if (check->parsed()) {
        Ontology o = load_ontology(check_file);
        ReasonerOptions opts;
        opts.work_budget = check_budget;
        bool ok = is_consistent(o, opts);
        std::cout << (ok ? "consistent" : "inconsistent") << "\n";
        return ok ? 0 : 1;
    }

    if (classify->parsed()) {
        Ontology o = load_ontology(classify_file);
        auto pairs = inferred_hierarchy(o, o.concept_names());
        for (const auto& [a, b] : pairs) {
            if (a != b) std::cout << "SubClassOf(" << a << ' ' << b << ")\n";
        }
        return 0;
    }

    if (refine->parsed()) {
        Ontology o = load_ontology(refine_onto);
        RefinementContext ctx(o);
        Concept c = parse_concept(refine_expr);
        auto dir = refine_mode == "up" ? RefineDirection::Up : RefineDirection::Down;
        for (Concept r : refine_iter(ctx, c, dir, refine_depth, refine_cap)) {
            std::cout << serialize_concept(r) << "\n";
        }
        return 0;
    }

    if (weaken->parsed()) {
        Ontology ref = load_ontology(weaken_ref);
        RefinementContext ctx(ref);
        Axiom ax = parse_axiom(weaken_axiom);
        for (const Axiom& w : weakenings(ctx, ax)) {
            std::cout << serialize_axiom(w) << "\n";
        }
        return 0;
    }

    if (repair->parsed()) {
        Ontology o = load_ontology(repair_file);
        RepairConfig cfg;
        cfg.method = repair_method == "weaken" ? RepairMethod::Weaken : RepairMethod::Remove;
        cfg.bad_axiom = repair_bad == "mis" ? BadAxiomHeuristic::Mis : BadAxiomHeuristic::Rand;
        if (repair_mis != "auto") cfg.mis_samples = static_cast<unsigned>(std::stoul(repair_mis));
        cfg.reference = parse_reference(repair_ref);
        cfg.seed = effective_seed(repair_seed_opt, repair_seed);
        if (repair_max_steps > 0) cfg.max_steps = repair_max_steps;
        RepairResult result = cfg.method == RepairMethod::Weaken ? repair_weaken(o, cfg)
                                                                 : repair_remove(o, cfg);
        diag(result.trace.outcome == RepairOutcome::Repaired
                 ? "outcome: repaired in " + std::to_string(result.trace.steps.size()) + " step(s)"
                 : "outcome: step limit hit, finished by removal");
        if (!repair_trace.empty()) write_output(repair_trace, trace_to_json(result.trace) + "\n");
        write_output(repair_out, serialize_ontology(result.ontology));
        return 0;
    }

    if (iic_cmd->parsed()) {
        Ontology a = load_ontology(iic_a);
        Ontology b = load_ontology(iic_b);
        IICDetail detail = iic_detailed(a, b);
        std::cout << "iic: " << detail.value.to_decimal() << " (only_first=" << detail.only_first
                  << " only_second=" << detail.only_second << ")\n";
        return 0;
    }

    if (experiment->parsed()) {
        std::vector<std::pair<std::string, Ontology>> corpus;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(exp_corpus)) {
            if (entry.path().extension() == ".onto") files.push_back(entry.path());
        }
        std::sort(files.begin(), files.end());
        if (files.empty()) throw UsageError("no .onto files in corpus directory: " + exp_corpus);
        for (const auto& path : files) {
            corpus.emplace_back(path.stem().string(), load_ontology(path.string()));
        }

        ExperimentConfig cfg;
        cfg.master_seed = effective_seed(exp_seed_opt, exp_seed);
        cfg.jobs = exp_jobs;
        if (exp_max_steps > 0) cfg.max_steps = exp_max_steps;
        if (exp_bad == "mis") cfg.variants = {BadAxiomHeuristic::Mis};
        if (exp_bad == "rand") cfg.variants = {BadAxiomHeuristic::Rand};

        IICReport report = run_experiment(corpus, exp_trials, cfg);
        std::ostringstream csv;
        write_report_csv(csv, report);
        write_output(exp_out, csv.str());
        for (const auto& agg : report.aggregates) {
            std::ostringstream line;
            line << agg.ontology << " [" << agg.variant << "] mean=" << agg.mean
                 << " std=" << agg.stddev << " n_ok=" << agg.n_ok << " n_failed=" << agg.n_failed;
            if (agg.wilcoxon_p) line << " wilcoxon_p=" << *agg.wilcoxon_p;
            diag(line.str());
        }
        return 0;
    }

    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

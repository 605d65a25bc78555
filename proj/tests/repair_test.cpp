#include "doctest.h"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

#include "generators.hpp"
#include "orep/io.hpp"
#include "orep/repair.hpp"

using namespace orep;

namespace {

std::vector<Axiom> axioms_of(std::initializer_list<const char*> texts) {
    std::vector<Axiom> out;
    for (const char* t : texts) out.push_back(parse_axiom(t));
    std::sort(out.begin(), out.end(), AxiomLess{});
    return out;
}

}  // namespace

TEST_CASE("weakening set of a GCI and an assertion") {
    RefinementContext ctx(parse_ontology("SubClassOf(A B)"));
    CHECK(weakenings(ctx, parse_axiom("SubClassOf(A B)")) ==
          axioms_of({"SubClassOf(A B)", "SubClassOf(A Top)", "SubClassOf(Bottom B)",
                     "SubClassOf(Bottom Top)"}));
    CHECK(weakenings(ctx, parse_axiom("ClassAssertion(A x)")) ==
          axioms_of({"ClassAssertion(A x)", "ClassAssertion(B x)"}));
    CHECK(weakenings(ctx, parse_axiom("SubClassOf(Bottom Top)")) ==
          axioms_of({"SubClassOf(Bottom Top)"}));
    CHECK_THROWS_AS(weakenings(ctx, parse_axiom("PropertyAssertion(r x y)")), UnsupportedAxiomError);
}

TEST_CASE("weakenings are entailed by reference plus original") {
    Rng rng(0x1dea);
    testgen::OntologyParams params;
    params.max_axioms = 5;
    params.concepts.max_depth = 2;
    int checked = 0;
    for (int round = 0; round < 8; ++round) {
        Ontology ref = testgen::random_consistent_ontology(params, rng);
        RefinementContext ctx(ref);
        for (int i = 0; i < 3; ++i) {
            Axiom ax = Axiom::subsumption(testgen::random_concept(params.concepts, rng),
                                          testgen::random_concept(params.concepts, rng));
            Ontology extended = ref.contains(ax) ? ref : ref.with_appended(ax);
            ReasonerSession session(extended);
            for (const Axiom& weaker : weakenings(ctx, ax)) {
                CHECK(session.entails(weaker));
                ++checked;
            }
        }
    }
    CHECK(checked > 100);
}

TEST_CASE("mis bad-axiom search targets the conflict") {
    Ontology o = parse_ontology(
        "SubClassOf(A B) SubClassOf(A Not(B)) ClassAssertion(A x) ClassAssertion(C y)");
    std::set<Axiom, AxiomLess> conflict{parse_axiom("SubClassOf(A B)"),
                                        parse_axiom("SubClassOf(A Not(B))"),
                                        parse_axiom("ClassAssertion(A x)")};
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        Axiom bad = find_bad_axiom_mis(o, 3, rng);
        CHECK(conflict.count(bad) == 1);
        CHECK(bad != parse_axiom("ClassAssertion(C y)"));
    }

    Ontology two = parse_ontology("SubClassOf(A Not(A)) ClassAssertion(A x)");
    Rng rng(1);
    Axiom bad = find_bad_axiom_mis(two, 2, rng);
    CHECK(two.contains(bad));

    Rng rng2(2);
    CHECK_THROWS_AS(find_bad_axiom_mis(parse_ontology("SubClassOf(A B)"), 1, rng2),
                    ConsistencyPreconditionError);
}

TEST_CASE("sampled subsets are minimally inconsistent") {
    // the mis heuristic over an ontology with two overlapping conflicts
    Ontology o = parse_ontology(
        "SubClassOf(A B) SubClassOf(A Not(B)) ClassAssertion(A x) "
        "SubClassOf(C Not(C)) ClassAssertion(C y) SubClassOf(D E)");
    // any MIS must be one of the two conflicts; check via the public
    // heuristic with many seeds: picked axioms never come from {D ⊑ E}
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Rng rng(seed);
        Axiom bad = find_bad_axiom_mis(o, 2, rng);
        CHECK(bad != parse_axiom("SubClassOf(D E)"));
    }
}

TEST_CASE("rand bad-axiom search is uniform and seeded") {
    Ontology o = parse_ontology("SubClassOf(A B) SubClassOf(B C) SubClassOf(C D) SubClassOf(D E)");
    Rng rng_a(42), rng_b(42);
    CHECK(find_bad_axiom_rand(o, rng_a) == find_bad_axiom_rand(o, rng_b));

    std::map<std::size_t, int> freq;
    Rng rng(7);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        Axiom ax = find_bad_axiom_rand(o, rng);
        ++freq[o.index_of(ax)];
    }
    for (const auto& [idx, count] : freq) {
        CHECK(count > draws / 4 - draws / 20);  // within ±5% of 25%
        CHECK(count < draws / 4 + draws / 20);
    }
    Rng rng2(3);
    CHECK_THROWS_AS(find_bad_axiom_rand(Ontology{}, rng2), EmptyInputError);

    Ontology single = parse_ontology("SubClassOf(A B)");
    Rng rng3(9);
    CHECK(find_bad_axiom_rand(single, rng3) == parse_axiom("SubClassOf(A B)"));
}

TEST_CASE("maximal consistent subsets") {
    Rng rng(5);
    Ontology fine = parse_ontology("SubClassOf(A B) ClassAssertion(A x)");
    CHECK(maximal_consistent_subset(fine, rng) == fine);

    Ontology clash = parse_ontology("SubClassOf(A Not(A)) ClassAssertion(A x)");
    std::set<std::size_t> seen_sizes;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Rng r(seed);
        Ontology mcs = maximal_consistent_subset(clash, r);
        CHECK(mcs.axiom_count() == 1);  // both singletons are consistent-maximal
        CHECK(is_consistent(mcs));
        // maximality: adding the excluded axiom breaks consistency
        for (const auto& ax : clash.axioms()) {
            if (!mcs.contains(ax)) CHECK_FALSE(is_consistent(mcs.with_appended(ax)));
        }
        seen_sizes.insert(mcs.axiom_count());
    }

    Rng r2(0);
    CHECK(maximal_consistent_subset(Ontology{}, r2) == Ontology{});
}

TEST_CASE("cautious reference is the intersection of all MCSs") {
    CHECK(cautious_reference(parse_ontology("SubClassOf(A B)"), 1024) ==
          parse_ontology("SubClassOf(A B)"));
    CHECK(cautious_reference(parse_ontology("SubClassOf(A Not(A)) ClassAssertion(A x)"), 1024) ==
          Ontology{});
    CHECK(cautious_reference(
              parse_ontology("SubClassOf(A Not(A)) ClassAssertion(A x) ClassAssertion(B y)"), 1024) ==
          parse_ontology("ClassAssertion(B y)"));
    CHECK_THROWS_AS(cautious_reference(parse_ontology("SubClassOf(A B) SubClassOf(B C)"), 2),
                    CapExceededError);
}

TEST_CASE("weakening repair returns a consistent ontology with a replayable trace") {
    Ontology o = parse_ontology("SubClassOf(A B) SubClassOf(A Not(B)) ClassAssertion(A x)");
    RepairConfig cfg;
    cfg.seed = 11;
    auto [repaired, trace] = repair_weaken(o, cfg);
    CHECK(is_consistent(repaired));
    CHECK(trace.outcome == RepairOutcome::Repaired);
    CHECK_FALSE(trace.steps.empty());
    CHECK(replay_trace(o, trace) == repaired);
    CHECK(is_consistent(trace.reference));

    // every output axiom is entailed by reference + original axioms
    ReasonerSession session(trace.reference);
    for (const auto& ax : repaired.axioms()) {
        bool was_original = o.contains(ax);
        if (!was_original) {
            // weakened axioms must be weaker than something the input had
            bool entailed_by_some = false;
            for (const auto& orig : o.axioms()) {
                Ontology with = trace.reference.contains(orig) ? trace.reference
                                                               : trace.reference.with_appended(orig);
                ReasonerSession s2(with);
                if (s2.entails(ax)) {
                    entailed_by_some = true;
                    break;
                }
            }
            CHECK(entailed_by_some);
        }
    }
}

TEST_CASE("consistent input returns unchanged with an empty trace") {
    Ontology o = parse_ontology("SubClassOf(A B)");
    RepairConfig cfg;
    auto [out_w, trace_w] = repair_weaken(o, cfg);
    CHECK(out_w == o);
    CHECK(trace_w.steps.empty());
    auto [out_r, trace_r] = repair_remove(o, cfg);
    CHECK(out_r == o);
    CHECK(trace_r.steps.empty());
}

TEST_CASE("removal repair terminates within axiom-count steps") {
    Ontology o = parse_ontology("SubClassOf(A Not(A)) ClassAssertion(A x)");
    RepairConfig cfg;
    cfg.bad_axiom = BadAxiomHeuristic::Mis;
    cfg.seed = 3;
    auto [repaired, trace] = repair_remove(o, cfg);
    CHECK(is_consistent(repaired));
    CHECK(repaired.axiom_count() == 1);
    CHECK(trace.steps.size() == 1);
    CHECK(trace.steps.size() <= o.axiom_count());
    CHECK(replay_trace(o, trace) == repaired);
}

TEST_CASE("identical configurations give identical traces") {
    Rng seed_rng(0xd00d);
    testgen::OntologyParams params;
    params.max_axioms = 6;
    params.concepts.max_depth = 2;
    int done = 0;
    for (int i = 0; i < 60 && done < 8; ++i) {
        Ontology o = testgen::random_ontology(params, seed_rng);
        if (is_consistent(o)) continue;
        ++done;
        RepairConfig cfg;
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        cfg.bad_axiom = i % 2 ? BadAxiomHeuristic::Mis : BadAxiomHeuristic::Rand;
        auto a = repair_weaken(o, cfg);
        auto b = repair_weaken(o, cfg);
        CHECK(a.ontology == b.ontology);
        CHECK(trace_to_json(a.trace) == trace_to_json(b.trace));
        CHECK(is_consistent(a.ontology));
    }
    CHECK(done > 0);
}

TEST_CASE("role assertions are removed, never weakened") {
    // the only way to fix this ontology is dropping a role assertion or a GCI
    Ontology o = parse_ontology(
        "PropertyAssertion(r x y) ClassAssertion(All(r Bottom) x)");
    RepairConfig cfg;
    cfg.seed = 4;
    auto [repaired, trace] = repair_weaken(o, cfg);
    CHECK(is_consistent(repaired));
    for (const auto& step : trace.steps) {
        if (step.bad_axiom.kind() == AxiomKind::RoleAssertion) {
            CHECK_FALSE(step.replacement.has_value());
        }
    }
}

TEST_CASE("step limit falls back to removal and is reported") {
    Ontology o = parse_ontology("SubClassOf(A Not(A)) ClassAssertion(A x)");
    RepairConfig cfg;
    cfg.seed = 8;
    cfg.max_steps = 1;
    cfg.exclude_identity_weakening = false;  // make stalling likely
    bool saw_limit = false;
    for (std::uint64_t seed = 0; seed < 40 && !saw_limit; ++seed) {
        cfg.seed = seed;
        auto [repaired, trace] = repair_weaken(o, cfg);
        CHECK(is_consistent(repaired));  // the fallback always lands consistent
        if (trace.outcome == RepairOutcome::StepLimit) {
            saw_limit = true;
            // the tail of the trace is removals
            CHECK_FALSE(trace.steps.empty());
            CHECK_FALSE(trace.steps.back().replacement.has_value());
        }
    }
    CHECK(saw_limit);
}

TEST_CASE("trace json round-trips") {
    Ontology o = parse_ontology("SubClassOf(A B) SubClassOf(A Not(B)) ClassAssertion(A x)");
    RepairConfig cfg;
    cfg.seed = 21;
    auto [repaired, trace] = repair_weaken(o, cfg);
    RepairTrace round = trace_from_json(trace_to_json(trace));
    CHECK(round.seed == trace.seed);
    CHECK(round.outcome == trace.outcome);
    CHECK(round.reference == trace.reference);
    REQUIRE(round.steps.size() == trace.steps.size());
    for (std::size_t i = 0; i < round.steps.size(); ++i) {
        CHECK(round.steps[i].bad_axiom == trace.steps[i].bad_axiom);
        CHECK(round.steps[i].replacement == trace.steps[i].replacement);
        CHECK(round.steps[i].candidate_count == trace.steps[i].candidate_count);
    }
    CHECK(replay_trace(o, round) == repaired);
}

TEST_CASE("iterated weakening reaches the trivial axiom") {
    RefinementContext ctx(parse_ontology("SubClassOf(A B)"));
    // BFS over weakening edges from A ⊑ B must reach ⊥ ⊑ ⊤
    std::set<Axiom, AxiomLess> seen;
    std::queue<Axiom> queue;
    Axiom start = parse_axiom("SubClassOf(A B)");
    Axiom trivial = parse_axiom("SubClassOf(Bottom Top)");
    queue.push(start);
    seen.insert(start);
    bool found = false;
    while (!queue.empty() && !found) {
        Axiom cur = queue.front();
        queue.pop();
        for (const Axiom& next : weakenings(ctx, cur)) {
            if (next == trivial) found = true;
            if (seen.insert(next).second) queue.push(next);
        }
    }
    CHECK(found);

    // assertions reach ⊤(a)
    std::set<Axiom, AxiomLess> seen2;
    std::queue<Axiom> queue2;
    Axiom start2 = parse_axiom("ClassAssertion(A x)");
    Axiom trivial2 = parse_axiom("ClassAssertion(Top x)");
    queue2.push(start2);
    seen2.insert(start2);
    bool found2 = false;
    while (!queue2.empty() && !found2) {
        Axiom cur = queue2.front();
        queue2.pop();
        for (const Axiom& next : weakenings(ctx, cur)) {
            if (next == trivial2) found2 = true;
            if (seen2.insert(next).second) queue2.push(next);
        }
    }
    CHECK(found2);
}

TEST_CASE("replacing an axiom by a weakening preserves consistency") {
    Rng rng(0xfade);
    testgen::OntologyParams params;
    params.max_axioms = 5;
    params.concepts.max_depth = 2;
    int checked = 0;
    for (int round = 0; round < 10; ++round) {
        Ontology o = testgen::random_consistent_ontology(params, rng);
        if (o.empty()) continue;
        RefinementContext ctx(o);
        std::size_t idx = static_cast<std::size_t>(rng.below(o.axiom_count()));
        if (o.axiom(idx).kind() == AxiomKind::RoleAssertion) continue;
        for (const Axiom& weaker : weakenings(ctx, o.axiom(idx))) {
            CHECK(is_consistent(o.with_replaced(idx, weaker)));
            ++checked;
        }
    }
    CHECK(checked > 20);
}

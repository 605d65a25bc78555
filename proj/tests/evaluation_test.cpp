#include "doctest.h"

#include <cmath>
#include <sstream>

#include "generators.hpp"
#include "orep/evaluation.hpp"
#include "orep/io.hpp"

using namespace orep;

TEST_CASE("inferred hierarchy includes transitive and reflexive pairs") {
    Ontology o = parse_ontology("SubClassOf(A B) SubClassOf(B C)");
    auto pairs = inferred_hierarchy(o, {"A", "B", "C"});
    auto has = [&](const char* a, const char* b) {
        return std::find(pairs.begin(), pairs.end(),
                         std::make_pair(std::string(a), std::string(b))) != pairs.end();
    };
    CHECK(has("A", "C"));
    CHECK(has("A", "A"));
    CHECK(has("B", "B"));
    CHECK_FALSE(has("C", "A"));

    auto empty_pairs = inferred_hierarchy(Ontology{}, {"A", "B"});
    CHECK(empty_pairs == std::vector<std::pair<std::string, std::string>>{{"A", "A"}, {"B", "B"}});

    CHECK_THROWS_AS(inferred_hierarchy(parse_ontology("SubClassOf(Top Bottom)"), {"A"}),
                    ConsistencyPreconditionError);
}

TEST_CASE("inferred hierarchy is monotone under consistency-preserving additions") {
    Rng rng(0x777a);
    testgen::OntologyParams params;
    params.max_axioms = 5;
    params.concepts.max_depth = 2;
    int rounds = 0;
    for (int i = 0; i < 40 && rounds < 10; ++i) {
        Ontology o = testgen::random_consistent_ontology(params, rng);
        Ontology bigger = o.with_appended(Axiom::subsumption(
            testgen::random_concept(params.concepts, rng), testgen::random_concept(params.concepts, rng)));
        if (!is_consistent(bigger)) continue;
        ++rounds;
        auto before = inferred_hierarchy(o, o.concept_names());
        auto after = inferred_hierarchy(bigger, o.concept_names());
        for (const auto& p : before) {
            CHECK(std::find(after.begin(), after.end(), p) != after.end());
        }
    }
    CHECK(rounds > 0);
}

TEST_CASE("iic formula and special cases") {
    Ontology a = parse_ontology("SubClassOf(A B) SubClassOf(B C)");
    Ontology b = parse_ontology("SubClassOf(A B)");
    // Inf(a) strictly contains Inf(b) within the union signature
    CHECK(iic(a, b) == Ratio::of(1, 1));
    CHECK(iic(b, a) == Ratio::of(0, 1));
    CHECK(iic(a, a) == Ratio::of(1, 2));

    // differences 3 vs 1 give 0.75
    Ontology c1 = parse_ontology("SubClassOf(A B) SubClassOf(B C) SubClassOf(C D)");
    Ontology c2 = parse_ontology("SubClassOf(D C)");
    IICDetail detail = iic_detailed(c1, c2);
    CHECK(detail.only_first == 6);
    CHECK(detail.only_second == 1);
    CHECK(detail.value == Ratio::of(6, 7));

    CHECK_THROWS_AS(iic(parse_ontology("SubClassOf(Top Bottom)"), a), ConsistencyPreconditionError);
}

TEST_CASE("iic properties on random consistent pairs") {
    Rng rng(0xaaaa);
    testgen::OntologyParams params;
    params.max_axioms = 5;
    params.concepts.max_depth = 2;
    for (int i = 0; i < 40; ++i) {
        Ontology o1 = testgen::random_consistent_ontology(params, rng);
        Ontology o2 = testgen::random_consistent_ontology(params, rng);
        IICDetail d12 = iic_detailed(o1, o2);
        IICDetail d21 = iic_detailed(o2, o1);
        // range
        CHECK(d12.value.num >= 0);
        CHECK(d12.value.num <= d12.value.den);
        // exact antisymmetry
        CHECK(d12.value.den == d21.value.den);
        CHECK(d12.value.num + d21.value.num == d12.value.den);
        // 0.5, 1 and majority characterizations
        CHECK((d12.value == Ratio::of(1, 2)) == (d12.only_first == d12.only_second));
        CHECK((d12.value == Ratio::of(1, 1)) ==
              (d12.only_second == 0 && d12.only_first > 0));
        CHECK((d12.value.to_double() > 0.5) == (d12.only_first > d12.only_second));
    }
}

TEST_CASE("iic ignores inferences shared by both sides") {
    Ontology o1 = parse_ontology("SubClassOf(A B)");
    Ontology o2 = parse_ontology("SubClassOf(A C)");
    Ratio before = iic(o1, o2);
    // E ⊑ E-style knowledge entailed by both leaves the comparison unchanged
    Axiom shared = parse_axiom("SubClassOf(Bottom Top)");
    Ratio after = iic(o1.with_appended(shared), o2.with_appended(shared));
    CHECK(before == after);
}

TEST_CASE("injection produces inconsistency and is reversible") {
    Ontology o = parse_ontology(
        "SubClassOf(Dog Mammal) SubClassOf(Cat Mammal) SubClassOf(And(Dog Cat) Bottom) "
        "ClassAssertion(Dog rex) ClassAssertion(Cat tom)");
    InjectionConfig cfg;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(seed);
        auto [broken, injected] = inject_inconsistency(o, cfg, rng);
        CHECK_FALSE(is_consistent(broken));
        CHECK_FALSE(injected.empty());
        // removing the injected axioms restores consistency
        Ontology restored = broken;
        for (const auto& ax : injected) {
            restored = restored.without_index(restored.index_of(ax));
        }
        CHECK(restored == o);
        CHECK(is_consistent(restored));
    }

    CHECK_THROWS_AS(
        {
            Rng rng(0);
            inject_inconsistency(parse_ontology("SubClassOf(Top Bottom)"), cfg, rng);
        },
        ConsistencyPreconditionError);
}

TEST_CASE("wilcoxon signed-rank: exact branch") {
    auto r = wilcoxon_signed_rank({0.6, 0.7, 0.8}, 0.5);
    CHECK(r.exact);
    CHECK(r.n_used == 3);
    CHECK(r.w_plus == doctest::Approx(6.0));
    CHECK(r.p_one_sided == doctest::Approx(0.125));

    CHECK_THROWS_AS(wilcoxon_signed_rank({0.5, 0.5, 0.5}, 0.5), TooFewSamplesError);
    CHECK_THROWS_AS(wilcoxon_signed_rank({0.4, 0.6}, 0.5), TooFewSamplesError);

    // data symmetric around mu0: the null is symmetric and p lands at 0.5.
    // Note the magnitudes are compared as doubles, so |0.45-0.5| and
    // |0.55-0.5| differ in the last ulp and are not tied.
    std::vector<double> sym_values{0.4, 0.6, 0.45, 0.55};
    auto sym = wilcoxon_signed_rank(sym_values, 0.5);
    CHECK(sym.p_one_sided == doctest::Approx(0.5));

    // independent oracle: enumerate all sign assignments over the ranks
    std::vector<double> diffs;
    for (double v : sym_values) diffs.push_back(v - 0.5);
    std::vector<std::size_t> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return std::fabs(diffs[a]) < std::fabs(diffs[b]); });
    std::vector<double> rank(4);
    for (std::size_t i = 0; i < 4;) {
        std::size_t j = i;
        while (j < 4 && std::fabs(diffs[order[j]]) == std::fabs(diffs[order[i]])) ++j;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = (double(i + 1) + double(j)) / 2.0;
        i = j;
    }
    double w_obs = 0;
    for (std::size_t i = 0; i < 4; ++i)
        if (diffs[i] > 0) w_obs += rank[i];
    int at_least = 0;
    for (unsigned mask = 0; mask < 16; ++mask) {
        double w = 0;
        for (std::size_t i = 0; i < 4; ++i)
            if (mask & (1u << i)) w += rank[i];
        if (w >= w_obs - 1e-12) ++at_least;
    }
    CHECK(sym.w_plus == doctest::Approx(w_obs));
    CHECK(sym.p_one_sided == doctest::Approx(at_least / 16.0));
}

TEST_CASE("wilcoxon normal approximation matches exact near the boundary") {
    // same data evaluated exactly (n = 12) and approximately (n = 13 with a
    // tiny perturbation) should give nearby p-values
    std::vector<double> values;
    for (int i = 0; i < 12; ++i) values.push_back(0.5 + 0.01 * (i % 2 ? 1 : 3) + 0.001 * i);
    values[3] = 0.42;
    values[7] = 0.35;
    auto exact = wilcoxon_signed_rank(values, 0.5);
    CHECK(exact.exact);
    values.push_back(0.505);
    auto approx = wilcoxon_signed_rank(values, 0.5);
    CHECK_FALSE(approx.exact);
    CHECK(std::abs(approx.p_one_sided - exact.p_one_sided) < 0.08);
}

TEST_CASE("experiment report: determinism and accounting") {
    std::vector<std::pair<std::string, Ontology>> corpus{
        {"toy", parse_ontology("SubClassOf(Dog Mammal) SubClassOf(Cat Mammal) "
                               "SubClassOf(Mammal Animal) SubClassOf(And(Dog Cat) Bottom) "
                               "ClassAssertion(Dog rex) ClassAssertion(Cat tom)")}};
    ExperimentConfig cfg;
    cfg.master_seed = 99;
    cfg.variants = {BadAxiomHeuristic::Mis, BadAxiomHeuristic::Rand};

    IICReport first = run_experiment(corpus, 4, cfg);
    CHECK(first.trials.size() == 8);
    CHECK(first.aggregates.size() == 2);

    std::ostringstream csv1, csv2, csv3;
    write_report_csv(csv1, first);
    IICReport second = run_experiment(corpus, 4, cfg);
    write_report_csv(csv2, second);
    CHECK(csv1.str() == csv2.str());

    cfg.jobs = 4;
    IICReport parallel = run_experiment(corpus, 4, cfg);
    write_report_csv(csv3, parallel);
    CHECK(csv1.str() == csv3.str());

    for (const auto& rec : first.trials) {
        if (rec.outcome == "ok") {
            REQUIRE(rec.iic_value.has_value());
            CHECK(rec.iic_value->num >= 0);
            CHECK(rec.iic_value->num <= rec.iic_value->den);
        }
    }

    IICReport empty = run_experiment(corpus, 0, cfg);
    CHECK(empty.trials.empty());
    CHECK(empty.aggregates.size() == 2);
    CHECK(empty.aggregates[0].n_ok == 0);
}

TEST_CASE("ratio decimal rendering") {
    CHECK(Ratio::of(1, 2).to_decimal() == "0.500000");
    CHECK(Ratio::of(2, 3).to_decimal() == "0.666667");
    CHECK(Ratio::of(1, 1).to_decimal() == "1.000000");
    CHECK(Ratio::of(0, 1).to_decimal() == "0.000000");
}

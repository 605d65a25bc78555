#include "doctest.h"

#include "generators.hpp"
#include "orep/io.hpp"

using namespace orep;

TEST_CASE("statements map onto the expected axioms") {
    CHECK(parse_axiom("SubClassOf(A B)") ==
          Axiom::subsumption(Concept::name("A"), Concept::name("B")));
    CHECK(parse_axiom("ClassAssertion(Some(r A) x)") ==
          Axiom::class_assertion(Concept::exists("r", Concept::name("A")), "x"));
    CHECK(parse_axiom("PropertyAssertion(r x y)") == Axiom::role_assertion("r", "x", "y"));
}

TEST_CASE("n-ary And/Or desugar left-associatively") {
    CHECK(parse_concept("And(A B C)") ==
          Concept::conj(Concept::conj(Concept::name("A"), Concept::name("B")), Concept::name("C")));
    CHECK(parse_concept("Or(A B C D)") == parse_concept("Or(Or(Or(A B) C) D)"));
    CHECK(parse_concept("And(A)") == Concept::name("A"));
}

TEST_CASE("whitespace and comments are ignored") {
    Ontology o = parse_ontology("  # leading comment\n SubClassOf( A\n\t B ) # trailing\n");
    CHECK(o.axiom_count() == 1);
    CHECK(o.axiom(0) == parse_axiom("SubClassOf(A B)"));
}

TEST_CASE("syntax errors carry line and column") {
    CHECK_THROWS_AS(parse_ontology("SubClassOf(A"), ParseError);
    try {
        parse_ontology("SubClassOf(A B)\nSubClassOf(A");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 13);
    }
    CHECK_THROWS_AS(parse_ontology("EquivalentTo(A B)"), ParseError);
    CHECK_THROWS_AS(parse_ontology("SubClassOf(A B))"), ParseError);
    CHECK_THROWS_AS(parse_concept("Some(r)"), ParseError);
    CHECK_THROWS_AS(parse_ontology("SubClassOf(A B) @"), ParseError);
}

TEST_CASE("reserved names are rejected") {
    CHECK_THROWS_AS(parse_ontology("ClassAssertion(A Top)"), ParseError);
    CHECK_THROWS_AS(parse_ontology("ClassAssertion(A __fresh_0)"), ParseError);
    CHECK_THROWS_AS(parse_ontology("PropertyAssertion(Not x y)"), ParseError);
}

TEST_CASE("serialization goldens") {
    CHECK(serialize_ontology(parse_ontology("SubClassOf(A B)")) == "SubClassOf(A B)\n");
    CHECK(serialize_ontology(Ontology{}) == "");
    CHECK(serialize_axiom(parse_axiom("ClassAssertion(Some(r A) x)")) ==
          "ClassAssertion(Some(r A) x)");
    // n-ary input re-emits the binary desugared form
    CHECK(serialize_concept(parse_concept("And(A B C)")) == "And(And(A B) C)");
}

TEST_CASE("duplicate axioms are dropped with a warning") {
    std::vector<std::string> warnings;
    Ontology o = parse_ontology("SubClassOf(A B)\nSubClassOf(A B)\n", &warnings);
    CHECK(o.axiom_count() == 1);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("duplicate") != std::string::npos);
}

TEST_CASE("parse of serialize is the identity on random ontologies") {
    Rng rng(0x5eed);
    testgen::OntologyParams params;
    for (int i = 0; i < 200; ++i) {
        Ontology o = testgen::random_ontology(params, rng);
        Ontology round = parse_ontology(serialize_ontology(o));
        CHECK(round == o);
    }
}

TEST_CASE("serialize of parse canonicalizes well-formed text") {
    std::string text = " SubClassOf( And(A B C)  Top )\n# c\nClassAssertion(Or(A B) x)";
    std::string canonical = serialize_ontology(parse_ontology(text));
    CHECK(canonical == "SubClassOf(And(And(A B) C) Top)\nClassAssertion(Or(A B) x)\n");
    CHECK(serialize_ontology(parse_ontology(canonical)) == canonical);
}

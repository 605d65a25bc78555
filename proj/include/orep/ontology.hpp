#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "orep/axioms.hpp"

namespace orep {

// Ordered, duplicate-free collection of axioms with a derived signature.
// Immutable after construction; editing operations return new ontologies.
// Axiom order is stable, which keeps seeded runs reproducible.
class Ontology {
public:
    Ontology() = default;

    // Keeps the first occurrence of each axiom. When `duplicate_count` is
    // given it receives the number of dropped duplicates.
    explicit Ontology(std::vector<Axiom> axioms, std::size_t* duplicate_count = nullptr);

    const std::vector<Axiom>& axioms() const { return axioms_; }
    std::size_t axiom_count() const { return axioms_.size(); }
    bool empty() const { return axioms_.empty(); }
    const Axiom& axiom(std::size_t i) const { return axioms_[i]; }

    bool contains(const Axiom& ax) const;
    // Index of the axiom, or axiom_count() if absent.
    std::size_t index_of(const Axiom& ax) const;

    Ontology with_appended(const Axiom& ax) const;
    Ontology without_index(std::size_t i) const;
    // Replaces axiom i; if the replacement already occurs elsewhere the
    // ontology shrinks by one (duplicates are never stored).
    Ontology with_replaced(std::size_t i, const Axiom& replacement) const;

    // Names occurring syntactically in the axioms, sorted and unique.
    const std::vector<std::string>& concept_names() const { return concept_names_; }
    const std::vector<std::string>& role_names() const { return role_names_; }
    const std::vector<std::string>& individuals() const { return individuals_; }

    friend bool operator==(const Ontology& a, const Ontology& b) { return a.axioms_ == b.axioms_; }
    friend bool operator!=(const Ontology& a, const Ontology& b) { return !(a == b); }

private:
    std::vector<Axiom> axioms_;
    std::vector<std::string> concept_names_;
    std::vector<std::string> role_names_;
    std::vector<std::string> individuals_;
};

// sub(O): every subconcept of every GCI side and every class-assertion
// concept, plus ⊤ and ⊥. Sorted by the structural order.
std::vector<Concept> subconcepts(const Ontology& o);

// Sum of |C| + |D| over GCIs plus |C| over class assertions. Role
// assertions carry no concepts and contribute nothing.
int ontology_size(const Ontology& o);

}  // namespace orep

#pragma once

// Random inputs for the property suites. Everything is driven by orep::Rng,
// so a fixed seed reproduces the exact same population on every platform.

#include <string>
#include <vector>

#include "orep/ontology.hpp"
#include "orep/reasoner.hpp"
#include "orep/rng.hpp"

namespace orep::testgen {

struct ConceptParams {
    std::vector<std::string> names{"A", "B", "C"};
    std::vector<std::string> roles{"r"};
    unsigned max_depth = 3;
    bool allow_negation = true;
};

inline Concept random_concept(const ConceptParams& p, Rng& rng, unsigned depth = 0) {
    bool leaf = depth >= p.max_depth || rng.below(100) < 40;
    if (leaf) {
        std::uint64_t pick = rng.below(p.names.size() + 2);
        if (pick == 0) return Concept::top();
        if (pick == 1) return Concept::bottom();
        return Concept::name(p.names[pick - 2]);
    }
    std::uint64_t ctor = rng.below(p.roles.empty() ? 3 : 5);
    switch (ctor) {
        case 0:
            if (p.allow_negation) return Concept::negation(random_concept(p, rng, depth + 1));
            return Concept::conj(random_concept(p, rng, depth + 1), random_concept(p, rng, depth + 1));
        case 1:
            return Concept::conj(random_concept(p, rng, depth + 1), random_concept(p, rng, depth + 1));
        case 2:
            return Concept::disj(random_concept(p, rng, depth + 1), random_concept(p, rng, depth + 1));
        case 3:
            return Concept::exists(p.roles[rng.below(p.roles.size())], random_concept(p, rng, depth + 1));
        default:
            return Concept::forall(p.roles[rng.below(p.roles.size())], random_concept(p, rng, depth + 1));
    }
}

struct OntologyParams {
    ConceptParams concepts;
    unsigned max_axioms = 8;
    unsigned min_axioms = 1;
    bool with_abox = true;
    std::vector<std::string> individuals{"x", "y"};
};

inline Ontology random_ontology(const OntologyParams& p, Rng& rng) {
    unsigned count = p.min_axioms + static_cast<unsigned>(rng.below(p.max_axioms - p.min_axioms + 1));
    std::vector<Axiom> axioms;
    for (unsigned i = 0; i < count; ++i) {
        std::uint64_t kind = p.with_abox ? rng.below(10) : 0;
        if (kind < 7) {
            axioms.push_back(Axiom::subsumption(random_concept(p.concepts, rng),
                                                random_concept(p.concepts, rng)));
        } else if (kind < 9) {
            axioms.push_back(Axiom::class_assertion(random_concept(p.concepts, rng),
                                                    p.individuals[rng.below(p.individuals.size())]));
        } else if (!p.concepts.roles.empty()) {
            axioms.push_back(Axiom::role_assertion(p.concepts.roles[rng.below(p.concepts.roles.size())],
                                                   p.individuals[rng.below(p.individuals.size())],
                                                   p.individuals[rng.below(p.individuals.size())]));
        }
    }
    return Ontology(std::move(axioms));
}

// Rejection-samples a consistent ontology; property suites over refinement
// contexts need one.
inline Ontology random_consistent_ontology(const OntologyParams& p, Rng& rng,
                                           const ReasonerOptions& opts = {}) {
    for (int attempt = 0; attempt < 200; ++attempt) {
        Ontology o = random_ontology(p, rng);
        if (is_consistent(o, opts)) return o;
    }
    return Ontology{};  // the empty ontology is consistent
}

}  // namespace orep::testgen

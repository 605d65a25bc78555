#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>

#include "orep/ontology.hpp"

namespace orep {

// An explicit interpretation over a finite domain {0, ..., domain_size-1}.
// Used by the brute-force oracle and as the certificate format for models
// extracted from the tableau.
struct FiniteInterpretation {
    int domain_size = 1;
    std::map<std::string, std::set<int>> concept_ext;
    std::map<std::string, std::set<std::pair<int, int>>> role_ext;
    std::map<std::string, int> individual_map;
};

std::set<int> evaluate(const FiniteInterpretation& interp, Concept c);
bool satisfies(const FiniteInterpretation& interp, const Axiom& ax);
bool is_model(const FiniteInterpretation& interp, const Ontology& o);

struct OracleOptions {
    // Hard cap on the number of candidate interpretations that a single
    // query may enumerate. The enumeration is exponential in the signature,
    // so the caller must keep inputs tiny.
    std::uint64_t enumeration_cap = 200'000'000;
};

// Exhaustive model search up to the given domain size. Returns the first
// model in enumeration order, or nullopt if none exists within the bound.
// Finding a model proves consistency; exhausting the bound does not prove
// inconsistency, since a larger domain might still work. Throws
// CapExceededError when the signature is too large to enumerate.
std::optional<FiniteInterpretation> oracle_find_model(const Ontology& o, int max_domain,
                                                      const OracleOptions& opts = {});

bool oracle_consistent(const Ontology& o, int max_domain, const OracleOptions& opts = {});

// True iff every model of `o` with at most `max_domain` elements satisfies
// `ax`. A `false` answer is definitive (a countermodel was found); a `true`
// answer is sound only up to the domain bound.
bool oracle_entails(const Ontology& o, const Axiom& ax, int max_domain, const OracleOptions& opts = {});

}  // namespace orep

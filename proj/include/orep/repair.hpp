#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "orep/refinement.hpp"
#include "orep/rng.hpp"

namespace orep {

enum class RepairMethod { Weaken, Remove };
enum class BadAxiomHeuristic { Mis, Rand };

struct BraveReference {};
struct CautiousReference {};
// Brave: one random maximally consistent subset. Cautious: intersection of
// all of them. Explicit: a caller-supplied consistent ontology.
using ReferenceMode = std::variant<BraveReference, CautiousReference, Ontology>;

struct RepairConfig {
    RepairMethod method = RepairMethod::Weaken;
    BadAxiomHeuristic bad_axiom = BadAxiomHeuristic::Mis;
    // nullopt resolves to max(1, axiom_count / 10) at each selection.
    std::optional<unsigned> mis_samples;
    ReferenceMode reference = BraveReference{};
    std::uint64_t seed = 0;
    // nullopt resolves to max(1, 10 * axiom_count) at the start of a run.
    std::optional<std::uint64_t> max_steps;
    // g(φ) contains φ itself; dropping it (when alternatives exist) keeps
    // the random walk from stalling on identity replacements.
    bool exclude_identity_weakening = true;
    unsigned cautious_subset_cap = 1u << 16;
    ReasonerOptions reasoner;
};

struct RepairStep {
    Axiom bad_axiom;
    std::size_t candidate_count = 0;               // size of the weakening set (0 for removals)
    std::optional<Axiom> replacement;              // nullopt: axiom was removed
    bool consistent_after = false;
};

enum class RepairOutcome { Repaired, StepLimit };

// Full record of one repair run. Replaying the steps over the input
// ontology reproduces the output exactly.
struct RepairTrace {
    std::uint64_t seed = 0;
    Ontology reference;
    std::vector<RepairStep> steps;
    RepairOutcome outcome = RepairOutcome::Repaired;
};

struct RepairResult {
    Ontology ontology;
    RepairTrace trace;
};

// g(φ) w.r.t. the context's reference: a GCI C ⊑ D maps to every C' ⊑ D'
// with C' ∈ ρ(C), D' ∈ γ(D); an assertion C(a) to every C'(a) with
// C' ∈ γ(C). Role assertions have no weakenings and are rejected.
std::vector<Axiom> weakenings(RefinementContext& ctx, const Axiom& ax);

// `mis`: samples k minimally inconsistent subsets and returns a uniformly
// random axiom among those occurring most often. Requires an inconsistent,
// non-empty ontology.
Axiom find_bad_axiom_mis(const Ontology& o, unsigned k, Rng& rng, const ReasonerOptions& opts = {});
// `rand`: uniform over all axioms.
Axiom find_bad_axiom_rand(const Ontology& o, Rng& rng);

// Greedy random maximally consistent subset; equals o when o is consistent.
Ontology maximal_consistent_subset(const Ontology& o, Rng& rng, const ReasonerOptions& opts = {});

// Intersection of all maximally consistent subsets, by exhaustive subset
// enumeration. Throws CapExceededError when 2^axiom_count exceeds the cap.
Ontology cautious_reference(const Ontology& o, std::uint64_t subset_cap,
                            const ReasonerOptions& opts = {});

// Weakening-based repair: picks a bad axiom and replaces it with a random
// member of its weakening set w.r.t. a reference ontology fixed at the
// start, until consistent. If the step limit is hit the remaining conflicts
// are resolved by removal and the trace reports StepLimit. Role-assertion
// bad axioms are removed (recorded in the trace). The returned ontology is
// always consistent.
RepairResult repair_weaken(const Ontology& o, const RepairConfig& cfg);

// Removal-based repair: deletes bad axioms until consistent.
RepairResult repair_remove(const Ontology& o, const RepairConfig& cfg);

Ontology replay_trace(const Ontology& o, const RepairTrace& trace);

std::string trace_to_json(const RepairTrace& trace);
RepairTrace trace_from_json(const std::string& text);

}  // namespace orep

#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <utility>

#include "orep/oracle.hpp"
#include "orep/ontology.hpp"

namespace orep {

namespace detail {
struct SessionState;
}

struct ReasonerOptions {
    // Budget on tableau work (node creations plus label insertions).
    // Exceeding it raises ResourceLimitError; it is never converted into a
    // consistency verdict.
    std::uint64_t work_budget = 1'000'000;
};

// Decides consistency, subsumption and entailment for one fixed ontology
// via an ALC tableau with GCI internalization, semantic branching on
// disjunctions and subset blocking. Subsumption answers are memoized on
// NNF-canonicalized pairs; the cache lives as long as the session (the
// ontology is immutable). Sessions are single-threaded; run one per task.
class ReasonerSession {
public:
    explicit ReasonerSession(Ontology o, ReasonerOptions opts = {});
    ~ReasonerSession();
    ReasonerSession(ReasonerSession&&) noexcept;
    ReasonerSession& operator=(ReasonerSession&&) noexcept;

    const Ontology& ontology() const { return ontology_; }
    // Conjunction of nnf(¬C ⊔ D) over all GCIs; ⊤ for a GCI-free ontology.
    Concept internalized_tbox() const { return internalized_; }

    bool is_consistent();
    // C ⊑ D w.r.t. the ontology, decided as inconsistency of
    // O ∪ {(C ⊓ nnf(¬D))(x₀)} for a fresh individual x₀.
    bool is_subsumed(Concept c, Concept d);
    // C ⊑ D and not D ⊑ C. Issues two counted subsumption decisions.
    bool strictly_subsumed(Concept c, Concept d);
    bool equivalent(Concept c, Concept d);

    // GCIs reduce to subsumption, class assertions to inconsistency of
    // O ∪ {¬C(a)}. Role assertions are entailed iff asserted: ALC cannot
    // derive new role atoms between named individuals.
    bool entails(const Axiom& ax);

    // Every top-level consistency/subsumption decision counts, including
    // ones answered from the cache; cache hits are also tallied separately.
    void reset_counter() { call_count_ = 0; }
    std::uint64_t call_count() const { return call_count_; }
    std::uint64_t cache_hits() const { return cache_hits_; }

private:
    struct PairHash {
        std::size_t operator()(const std::pair<Concept, Concept>& p) const {
            return p.first.raw_hash() * 0x9e3779b97f4a7c15ULL ^ p.second.raw_hash();
        }
    };

    bool subsumed_uncounted(Concept c, Concept d);
    bool consistent_uncounted();

    Ontology ontology_;
    ReasonerOptions opts_;
    Concept internalized_;
    std::vector<Concept> tc_parts_;
    std::unique_ptr<detail::SessionState> state_;  // shared subtree memo
    std::optional<bool> consistent_;
    std::unordered_map<std::pair<Concept, Concept>, bool, PairHash> subsumption_cache_;
    std::uint64_t call_count_ = 0;
    std::uint64_t cache_hits_ = 0;
};

bool is_consistent(const Ontology& o, ReasonerOptions opts = {});

// Runs the tableau and, when satisfiable, turns the completed graph into an
// explicit finite model (blocked nodes are redirected to their blockers).
// Returns nullopt when the ontology is inconsistent. Test infrastructure:
// the result is meant to be checked with is_model().
std::optional<FiniteInterpretation> extract_model(const Ontology& o, ReasonerOptions opts = {});

}  // namespace orep

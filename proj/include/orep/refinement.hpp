#pragma once

#include <functional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "orep/reasoner.hpp"

namespace orep {

struct RefinementOptions {
    // Test hook: covers over an inconsistent reference degenerate to the
    // whole subconcept set, so normal construction rejects such references.
    bool allow_inconsistent_reference = false;
    ReasonerOptions reasoner;
};

// Cover and refinement computations relative to one consistent reference
// ontology. Owns the reasoner session and caches covers; not meant to be
// shared across threads.
class RefinementContext {
public:
    explicit RefinementContext(Ontology reference, RefinementOptions opts = {});

    const Ontology& reference() const { return session_.ontology(); }
    ReasonerSession& session() { return session_; }

    // sub(O) of the reference, sorted by the structural order.
    const std::vector<Concept>& sub_concepts() const { return sub_; }
    bool in_sub(Concept c) const { return sub_index_.count(c) > 0; }

    const std::vector<Concept>& upcov_cached(Concept c);
    const std::vector<Concept>& downcov_cached(Concept c);

private:
    ReasonerSession session_;
    std::vector<Concept> sub_;
    std::unordered_set<Concept, ConceptHash> sub_index_;
    std::unordered_map<Concept, std::vector<Concept>, ConceptHash> upcov_cache_;
    std::unordered_map<Concept, std::vector<Concept>, ConceptHash> downcov_cache_;
};

// Most specific members of sub(O) that subsume c: the D with c ⊑ D and no
// D' in sub(O) strictly between. Sorted, duplicate-free.
std::vector<Concept> upcov(RefinementContext& ctx, Concept c);
// Dual: most general members of sub(O) subsumed by c.
std::vector<Concept> downcov(RefinementContext& ctx, Concept c);

using CoverFn = std::function<std::vector<Concept>(RefinementContext&, Concept)>;

// Abstract refinement operator: rewrites one subterm via itself, unions the
// `up` cover of the whole concept; atomic negation maps through `down` on
// the negated name. The input is NNF-canonicalized on entry, since the
// negation case is only defined for atomic arguments.
std::vector<Concept> zeta(RefinementContext& ctx, const CoverFn& up, const CoverFn& down, Concept c);

// γ: zeta instantiated with (upcov, downcov). With `strict`, members
// provably equivalent to the input are dropped.
std::vector<Concept> generalize(RefinementContext& ctx, Concept c, bool strict = false);
// ρ: zeta instantiated with (downcov, upcov).
std::vector<Concept> specialize(RefinementContext& ctx, Concept c, bool strict = false);

enum class RefineDirection { Up, Down };

// Cumulative i-th refinement iteration. Members whose size exceeds
// `size_cap` stay in the result but are not expanded further; unbounded
// iteration can otherwise grow forever (∃r.∃r...∃r.A chains).
std::vector<Concept> refine_iter(RefinementContext& ctx, Concept c, RefineDirection direction,
                                 unsigned depth, int size_cap = 50);

// Decides d ∈ upcov(c) with the four-condition scan over sub(O); issues at
// most 1 + 4·card(sub(O)) subsumption calls on the session counter.
bool upcov_membership(RefinementContext& ctx, Concept c, Concept d);
bool downcov_membership(RefinementContext& ctx, Concept c, Concept d);

// Decides d ∈ γ(c) (resp. ρ) by structural recursion, materializing covers
// of subterms only along matching decompositions of d.
bool gamma_membership(RefinementContext& ctx, Concept c, Concept d);
bool rho_membership(RefinementContext& ctx, Concept c, Concept d);

}  // namespace orep

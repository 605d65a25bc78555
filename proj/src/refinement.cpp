#include "orep/refinement.hpp"

#include <algorithm>

#include "orep/errors.hpp"

namespace orep {

RefinementContext::RefinementContext(Ontology reference, RefinementOptions opts)
    : session_(std::move(reference), opts.reasoner) {
    if (!opts.allow_inconsistent_reference && !session_.is_consistent()) {
        throw ConsistencyPreconditionError("refinement requires a consistent reference ontology");
    }
    sub_ = subconcepts(session_.ontology());
    sub_index_.insert(sub_.begin(), sub_.end());
}

namespace {

// Shared cover computation: collects the sub(O) members related to c on the
// given side, then filters out anything with a strictly intermediate
// member. All subsumption queries go through the session cache, so pairwise
// checks between sub(O) members are only computed once per context.
std::vector<Concept> cover(RefinementContext& ctx, Concept c, bool upward) {
    auto& session = ctx.session();
    std::vector<Concept> candidates;
    for (Concept d : ctx.sub_concepts()) {
        bool related = upward ? session.is_subsumed(c, d) : session.is_subsumed(d, c);
        if (related) candidates.push_back(d);
    }
    // strict_c[i]: candidate i is strictly between-capable on the c side,
    // i.e. c ⊏ candidate (upward) or candidate ⊏ c (downward).
    std::vector<bool> strict_c(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        strict_c[i] = upward ? !session.is_subsumed(candidates[i], c)
                             : !session.is_subsumed(c, candidates[i]);
    }
    std::vector<Concept> result;
    for (Concept d : candidates) {
        bool minimal = true;
        for (std::size_t j = 0; j < candidates.size() && minimal; ++j) {
            if (!strict_c[j]) continue;
            Concept e = candidates[j];
            if (e == d) continue;
            bool between = upward ? (session.is_subsumed(e, d) && !session.is_subsumed(d, e))
                                  : (session.is_subsumed(d, e) && !session.is_subsumed(e, d));
            if (between) minimal = false;
        }
        if (minimal) result.push_back(d);
    }
    sort_unique(result);
    return result;
}

}  // namespace

const std::vector<Concept>& RefinementContext::upcov_cached(Concept c) {
    auto it = upcov_cache_.find(c);
    if (it != upcov_cache_.end()) return it->second;
    auto result = cover(*this, c, true);
    return upcov_cache_.emplace(c, std::move(result)).first->second;
}

const std::vector<Concept>& RefinementContext::downcov_cached(Concept c) {
    auto it = downcov_cache_.find(c);
    if (it != downcov_cache_.end()) return it->second;
    auto result = cover(*this, c, false);
    return downcov_cache_.emplace(c, std::move(result)).first->second;
}

std::vector<Concept> upcov(RefinementContext& ctx, Concept c) { return ctx.upcov_cached(c); }

std::vector<Concept> downcov(RefinementContext& ctx, Concept c) { return ctx.downcov_cached(c); }

namespace {

// Case split of the abstract operator; `c` must be in NNF.
void zeta_into(RefinementContext& ctx, const CoverFn& up, const CoverFn& down, Concept c,
               std::vector<Concept>& out) {
    switch (c.kind()) {
        case ConceptKind::Name:
        case ConceptKind::Top:
        case ConceptKind::Bottom:
            break;  // only the cover of the whole concept applies
        case ConceptKind::Not: {
            for (Concept inner : down(ctx, c.child())) {
                out.push_back(nnf_complement(inner));
            }
            break;
        }
        case ConceptKind::And:
        case ConceptKind::Or: {
            std::vector<Concept> left_ref, right_ref;
            zeta_into(ctx, up, down, c.left(), left_ref);
            for (Concept l : up(ctx, c.left())) left_ref.push_back(l);
            std::vector<Concept> tmp;
            zeta_into(ctx, up, down, c.right(), tmp);
            for (Concept r : up(ctx, c.right())) tmp.push_back(r);
            right_ref = std::move(tmp);
            bool conj = c.kind() == ConceptKind::And;
            for (Concept l : left_ref) {
                out.push_back(conj ? Concept::conj(l, c.right()) : Concept::disj(l, c.right()));
            }
            for (Concept r : right_ref) {
                out.push_back(conj ? Concept::conj(c.left(), r) : Concept::disj(c.left(), r));
            }
            break;
        }
        case ConceptKind::Forall:
        case ConceptKind::Exists: {
            std::vector<Concept> arg_ref;
            zeta_into(ctx, up, down, c.child(), arg_ref);
            for (Concept a : up(ctx, c.child())) arg_ref.push_back(a);
            for (Concept a : arg_ref) {
                out.push_back(c.kind() == ConceptKind::Forall ? Concept::forall(c.label(), a)
                                                              : Concept::exists(c.label(), a));
            }
            break;
        }
    }
}

}  // namespace

std::vector<Concept> zeta(RefinementContext& ctx, const CoverFn& up, const CoverFn& down, Concept c) {
    Concept cn = nnf(c);
    std::vector<Concept> out;
    zeta_into(ctx, up, down, cn, out);
    for (Concept whole : up(ctx, cn)) out.push_back(whole);
    sort_unique(out);
    return out;
}

std::vector<Concept> generalize(RefinementContext& ctx, Concept c, bool strict) {
    auto up = [](RefinementContext& x, Concept v) { return upcov(x, v); };
    auto down = [](RefinementContext& x, Concept v) { return downcov(x, v); };
    auto out = zeta(ctx, up, down, c);
    if (strict) {
        Concept cn = nnf(c);
        std::erase_if(out, [&](Concept x) { return ctx.session().equivalent(x, cn); });
    }
    return out;
}

std::vector<Concept> specialize(RefinementContext& ctx, Concept c, bool strict) {
    auto up = [](RefinementContext& x, Concept v) { return downcov(x, v); };
    auto down = [](RefinementContext& x, Concept v) { return upcov(x, v); };
    auto out = zeta(ctx, up, down, c);
    if (strict) {
        Concept cn = nnf(c);
        std::erase_if(out, [&](Concept x) { return ctx.session().equivalent(x, cn); });
    }
    return out;
}

std::vector<Concept> refine_iter(RefinementContext& ctx, Concept c, RefineDirection direction,
                                 unsigned depth, int size_cap) {
    Concept seed = nnf(c);
    std::unordered_set<Concept, ConceptHash> seen{seed};
    std::vector<Concept> frontier{seed};
    for (unsigned i = 0; i < depth && !frontier.empty(); ++i) {
        std::vector<Concept> next;
        for (Concept x : frontier) {
            if (x.size() > size_cap) continue;  // kept in the set, not expanded
            auto expansion = direction == RefineDirection::Up ? generalize(ctx, x) : specialize(ctx, x);
            for (Concept y : expansion) {
                if (seen.insert(y).second) next.push_back(y);
            }
        }
        frontier = std::move(next);
    }
    std::vector<Concept> out(seen.begin(), seen.end());
    sort_unique(out);
    return out;
}

namespace {

bool cover_membership(RefinementContext& ctx, Concept c, Concept d, bool upward) {
    if (!ctx.in_sub(d)) return false;
    auto& session = ctx.session();
    bool related = upward ? session.is_subsumed(c, d) : session.is_subsumed(d, c);
    if (!related) return false;
    for (Concept e : ctx.sub_concepts()) {
        bool between = upward ? (session.is_subsumed(c, e) && session.is_subsumed(e, d) &&
                                 !session.is_subsumed(e, c) && !session.is_subsumed(d, e))
                              : (session.is_subsumed(d, e) && session.is_subsumed(e, c) &&
                                 !session.is_subsumed(e, d) && !session.is_subsumed(c, e));
        if (between) return false;
    }
    return true;
}

// Membership in ζ(c) without materializing the recursive rebuild sets:
// recursion only follows decompositions of d that share the untouched
// sibling with c.
bool zeta_membership(RefinementContext& ctx, Concept c, Concept d, bool gamma) {
    switch (c.kind()) {
        case ConceptKind::Name:
        case ConceptKind::Top:
        case ConceptKind::Bottom:
            return cover_membership(ctx, c, d, gamma);
        case ConceptKind::Not: {
            const auto& flip = gamma ? ctx.downcov_cached(c.child()) : ctx.upcov_cached(c.child());
            for (Concept inner : flip) {
                if (nnf_complement(inner) == d) return true;
            }
            return cover_membership(ctx, c, d, gamma);
        }
        case ConceptKind::And:
        case ConceptKind::Or: {
            if (d.kind() == c.kind()) {
                if (d.right() == c.right() && zeta_membership(ctx, c.left(), d.left(), gamma)) return true;
                if (d.left() == c.left() && zeta_membership(ctx, c.right(), d.right(), gamma)) return true;
            }
            return cover_membership(ctx, c, d, gamma);
        }
        case ConceptKind::Forall:
        case ConceptKind::Exists: {
            if (d.kind() == c.kind() && d.label() == c.label() &&
                zeta_membership(ctx, c.child(), d.child(), gamma)) {
                return true;
            }
            return cover_membership(ctx, c, d, gamma);
        }
    }
    return false;
}

}  // namespace

bool upcov_membership(RefinementContext& ctx, Concept c, Concept d) {
    return cover_membership(ctx, c, d, true);
}

bool downcov_membership(RefinementContext& ctx, Concept c, Concept d) {
    return cover_membership(ctx, c, d, false);
}

bool gamma_membership(RefinementContext& ctx, Concept c, Concept d) {
    return zeta_membership(ctx, nnf(c), d, true);
}

bool rho_membership(RefinementContext& ctx, Concept c, Concept d) {
    return zeta_membership(ctx, nnf(c), d, false);
}

}  // namespace orep

#include "orep/oracle.hpp"

#include <cmath>

#include "orep/errors.hpp"

namespace orep {

namespace {

// Mask-based evaluation for the enumeration loops: element i is bit i of a
// concept mask, pair (s, t) is bit s*n + t of a role mask. Limits the
// enumerated domains to 8 elements, far beyond what the cap admits anyway.
constexpr int kMaxMaskDomain = 8;

struct MaskInterpretation {
    int n = 1;
    std::uint64_t full = 1;
    std::vector<std::uint64_t> concept_masks;            // by concept-name index
    std::vector<std::uint64_t> role_masks;               // by role-name index
    std::vector<int> individual_elems;                   // by individual index
};

struct CompiledSignature {
    std::vector<std::string> concept_names;
    std::vector<std::string> role_names;
    std::vector<std::string> individuals;

    int concept_index(const std::string& s) const {
        for (std::size_t i = 0; i < concept_names.size(); ++i)
            if (concept_names[i] == s) return static_cast<int>(i);
        return -1;
    }
    int role_index(const std::string& s) const {
        for (std::size_t i = 0; i < role_names.size(); ++i)
            if (role_names[i] == s) return static_cast<int>(i);
        return -1;
    }
    int individual_index(const std::string& s) const {
        for (std::size_t i = 0; i < individuals.size(); ++i)
            if (individuals[i] == s) return static_cast<int>(i);
        return -1;
    }
};

std::uint64_t eval_mask(const MaskInterpretation& m, const CompiledSignature& sig, Concept c) {
    switch (c.kind()) {
        case ConceptKind::Top:
            return m.full;
        case ConceptKind::Bottom:
            return 0;
        case ConceptKind::Name:
            return m.concept_masks[static_cast<std::size_t>(sig.concept_index(c.label()))];
        case ConceptKind::Not:
            return m.full & ~eval_mask(m, sig, c.child());
        case ConceptKind::And:
            return eval_mask(m, sig, c.left()) & eval_mask(m, sig, c.right());
        case ConceptKind::Or:
            return eval_mask(m, sig, c.left()) | eval_mask(m, sig, c.right());
        case ConceptKind::Forall: {
            std::uint64_t role = m.role_masks[static_cast<std::size_t>(sig.role_index(c.label()))];
            std::uint64_t arg = eval_mask(m, sig, c.child());
            std::uint64_t out = 0;
            for (int e = 0; e < m.n; ++e) {
                std::uint64_t row = (role >> (e * m.n)) & m.full;
                if ((row & ~arg) == 0) out |= 1ULL << e;
            }
            return out;
        }
        case ConceptKind::Exists: {
            std::uint64_t role = m.role_masks[static_cast<std::size_t>(sig.role_index(c.label()))];
            std::uint64_t arg = eval_mask(m, sig, c.child());
            std::uint64_t out = 0;
            for (int e = 0; e < m.n; ++e) {
                std::uint64_t row = (role >> (e * m.n)) & m.full;
                if ((row & arg) != 0) out |= 1ULL << e;
            }
            return out;
        }
    }
    return 0;
}

bool gci_holds(const MaskInterpretation& m, const CompiledSignature& sig, const Axiom& ax) {
    std::uint64_t lhs = eval_mask(m, sig, ax.lhs());
    std::uint64_t rhs = eval_mask(m, sig, ax.rhs());
    return (lhs & ~rhs) == 0;
}

bool concept_mentions_role(Concept c) {
    switch (c.kind()) {
        case ConceptKind::Forall:
        case ConceptKind::Exists:
            return true;
        case ConceptKind::Not:
            return concept_mentions_role(c.child());
        case ConceptKind::And:
        case ConceptKind::Or:
            return concept_mentions_role(c.left()) || concept_mentions_role(c.right());
        default:
            return false;
    }
}

FiniteInterpretation materialize(const MaskInterpretation& m, const CompiledSignature& sig) {
    FiniteInterpretation out;
    out.domain_size = m.n;
    for (std::size_t i = 0; i < sig.concept_names.size(); ++i) {
        std::set<int> ext;
        for (int e = 0; e < m.n; ++e)
            if (m.concept_masks[i] & (1ULL << e)) ext.insert(e);
        out.concept_ext[sig.concept_names[i]] = std::move(ext);
    }
    for (std::size_t i = 0; i < sig.role_names.size(); ++i) {
        std::set<std::pair<int, int>> ext;
        for (int s = 0; s < m.n; ++s)
            for (int t = 0; t < m.n; ++t)
                if (m.role_masks[i] & (1ULL << (s * m.n + t))) ext.emplace(s, t);
        out.role_ext[sig.role_names[i]] = std::move(ext);
    }
    for (std::size_t i = 0; i < sig.individuals.size(); ++i) {
        out.individual_map[sig.individuals[i]] = m.individual_elems[i];
    }
    return out;
}

// Visits every interpretation with exactly n elements; returns true when the
// visitor accepts one. TBox axioms without roles are checked before the role
// loop, the rest before the individual loop, so failing assignments are
// pruned early.
template <typename Visitor>
bool enumerate_domain(const Ontology& o, const CompiledSignature& sig, int n, Visitor&& visit) {
    MaskInterpretation m;
    m.n = n;
    m.full = (n == 64) ? ~0ULL : ((1ULL << n) - 1);
    m.concept_masks.assign(sig.concept_names.size(), 0);
    m.role_masks.assign(sig.role_names.size(), 0);
    m.individual_elems.assign(sig.individuals.size(), 0);

    std::vector<const Axiom*> rolefree_gcis, roleful_gcis, assertions;
    for (const auto& ax : o.axioms()) {
        if (ax.kind() == AxiomKind::Subsumption) {
            bool roles = concept_mentions_role(ax.lhs()) || concept_mentions_role(ax.rhs());
            (roles ? roleful_gcis : rolefree_gcis).push_back(&ax);
        } else {
            assertions.push_back(&ax);
        }
    }

    const int cbits = static_cast<int>(sig.concept_names.size()) * n;
    const int rbits = static_cast<int>(sig.role_names.size()) * n * n;
    const std::uint64_t c_total = 1ULL << cbits;
    const std::uint64_t r_total = 1ULL << rbits;

    for (std::uint64_t cword = 0; cword < c_total; ++cword) {
        std::uint64_t rest = cword;
        for (auto& mask : m.concept_masks) {
            mask = rest & m.full;
            rest >>= n;
        }
        bool ok = true;
        for (const Axiom* ax : rolefree_gcis) {
            if (!gci_holds(m, sig, *ax)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;

        for (std::uint64_t rword = 0; rword < r_total; ++rword) {
            std::uint64_t rrest = rword;
            const std::uint64_t pair_full = (n * n == 64) ? ~0ULL : ((1ULL << (n * n)) - 1);
            for (auto& mask : m.role_masks) {
                mask = rrest & pair_full;
                rrest >>= n * n;
            }
            bool gcis_ok = true;
            for (const Axiom* ax : roleful_gcis) {
                if (!gci_holds(m, sig, *ax)) {
                    gcis_ok = false;
                    break;
                }
            }
            if (!gcis_ok) continue;

            // Individual assignments: mixed-radix counter over n^k maps.
            std::fill(m.individual_elems.begin(), m.individual_elems.end(), 0);
            while (true) {
                bool abox_ok = true;
                for (const Axiom* ax : assertions) {
                    if (ax->kind() == AxiomKind::ClassAssertion) {
                        int e = m.individual_elems[static_cast<std::size_t>(
                            sig.individual_index(ax->individual()))];
                        std::uint64_t ext = eval_mask(m, sig, ax->concept_arg());
                        if (!(ext & (1ULL << e))) {
                            abox_ok = false;
                            break;
                        }
                    } else {
                        int s = m.individual_elems[static_cast<std::size_t>(sig.individual_index(ax->subject()))];
                        int t = m.individual_elems[static_cast<std::size_t>(sig.individual_index(ax->object()))];
                        std::uint64_t role =
                            m.role_masks[static_cast<std::size_t>(sig.role_index(ax->role()))];
                        if (!(role & (1ULL << (s * n + t)))) {
                            abox_ok = false;
                            break;
                        }
                    }
                }
                if (abox_ok && visit(m)) return true;

                // advance the counter
                std::size_t pos = 0;
                while (pos < m.individual_elems.size()) {
                    if (++m.individual_elems[pos] < n) break;
                    m.individual_elems[pos] = 0;
                    ++pos;
                }
                if (pos == m.individual_elems.size()) break;
            }
        }
    }
    return false;
}

CompiledSignature compile_signature(const Ontology& o, const Axiom* extra) {
    std::vector<Axiom> axioms = o.axioms();
    if (extra) axioms.push_back(*extra);
    Ontology combined(std::move(axioms));
    return CompiledSignature{combined.concept_names(), combined.role_names(), combined.individuals()};
}

void check_cap(const CompiledSignature& sig, int max_domain, const OracleOptions& opts) {
    double total = 0;
    for (int n = 1; n <= max_domain; ++n) {
        if (n > kMaxMaskDomain) throw CapExceededError("oracle domain bound exceeds 8 elements");
        double cbits = static_cast<double>(sig.concept_names.size()) * n;
        double rbits = static_cast<double>(sig.role_names.size()) * n * n;
        if (cbits + rbits >= 62) throw CapExceededError("oracle signature too large to enumerate");
        total += std::pow(2.0, cbits + rbits) *
                 std::pow(static_cast<double>(n), static_cast<double>(sig.individuals.size()));
        if (total > static_cast<double>(opts.enumeration_cap)) {
            throw CapExceededError("oracle enumeration would exceed the configured cap");
        }
    }
}

}  // namespace

std::set<int> evaluate(const FiniteInterpretation& interp, Concept c) {
    auto all = [&] {
        std::set<int> s;
        for (int i = 0; i < interp.domain_size; ++i) s.insert(i);
        return s;
    };
    switch (c.kind()) {
        case ConceptKind::Top:
            return all();
        case ConceptKind::Bottom:
            return {};
        case ConceptKind::Name: {
            auto it = interp.concept_ext.find(c.label());
            return it == interp.concept_ext.end() ? std::set<int>{} : it->second;
        }
        case ConceptKind::Not: {
            auto arg = evaluate(interp, c.child());
            std::set<int> out;
            for (int i = 0; i < interp.domain_size; ++i)
                if (!arg.count(i)) out.insert(i);
            return out;
        }
        case ConceptKind::And: {
            auto l = evaluate(interp, c.left());
            auto r = evaluate(interp, c.right());
            std::set<int> out;
            for (int e : l)
                if (r.count(e)) out.insert(e);
            return out;
        }
        case ConceptKind::Or: {
            auto out = evaluate(interp, c.left());
            auto r = evaluate(interp, c.right());
            out.insert(r.begin(), r.end());
            return out;
        }
        case ConceptKind::Forall:
        case ConceptKind::Exists: {
            auto arg = evaluate(interp, c.child());
            auto it = interp.role_ext.find(c.label());
            static const std::set<std::pair<int, int>> kEmpty;
            const auto& pairs = it == interp.role_ext.end() ? kEmpty : it->second;
            std::set<int> out;
            for (int e = 0; e < interp.domain_size; ++e) {
                bool has_witness = false, all_in = true;
                for (const auto& [s, t] : pairs) {
                    if (s != e) continue;
                    if (arg.count(t))
                        has_witness = true;
                    else
                        all_in = false;
                }
                if (c.kind() == ConceptKind::Exists ? has_witness : all_in) out.insert(e);
            }
            return out;
        }
    }
    return {};
}

bool satisfies(const FiniteInterpretation& interp, const Axiom& ax) {
    switch (ax.kind()) {
        case AxiomKind::Subsumption: {
            auto lhs = evaluate(interp, ax.lhs());
            auto rhs = evaluate(interp, ax.rhs());
            for (int e : lhs)
                if (!rhs.count(e)) return false;
            return true;
        }
        case AxiomKind::ClassAssertion: {
            auto it = interp.individual_map.find(ax.individual());
            if (it == interp.individual_map.end()) return false;
            return evaluate(interp, ax.concept_arg()).count(it->second) > 0;
        }
        case AxiomKind::RoleAssertion: {
            auto s = interp.individual_map.find(ax.subject());
            auto t = interp.individual_map.find(ax.object());
            if (s == interp.individual_map.end() || t == interp.individual_map.end()) return false;
            auto r = interp.role_ext.find(ax.role());
            if (r == interp.role_ext.end()) return false;
            return r->second.count({s->second, t->second}) > 0;
        }
    }
    return false;
}

bool is_model(const FiniteInterpretation& interp, const Ontology& o) {
    for (const auto& ax : o.axioms()) {
        if (!satisfies(interp, ax)) return false;
    }
    return true;
}

std::optional<FiniteInterpretation> oracle_find_model(const Ontology& o, int max_domain,
                                                      const OracleOptions& opts) {
    CompiledSignature sig = compile_signature(o, nullptr);
    check_cap(sig, max_domain, opts);
    std::optional<FiniteInterpretation> found;
    for (int n = 1; n <= max_domain && !found; ++n) {
        enumerate_domain(o, sig, n, [&](const MaskInterpretation& m) {
            found = materialize(m, sig);
            return true;
        });
    }
    return found;
}

bool oracle_consistent(const Ontology& o, int max_domain, const OracleOptions& opts) {
    return oracle_find_model(o, max_domain, opts).has_value();
}

bool oracle_entails(const Ontology& o, const Axiom& ax, int max_domain, const OracleOptions& opts) {
    CompiledSignature sig = compile_signature(o, &ax);
    check_cap(sig, max_domain, opts);
    for (int n = 1; n <= max_domain; ++n) {
        bool counter = enumerate_domain(o, sig, n, [&](const MaskInterpretation& m) {
            FiniteInterpretation interp = materialize(m, sig);
            return !satisfies(interp, ax);
        });
        if (counter) return false;
    }
    return true;
}

}  // namespace orep

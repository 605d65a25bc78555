#include "orep/ontology.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

namespace orep {

int compare(const Axiom& a, const Axiom& b) {
    auto ka = static_cast<int>(a.kind());
    auto kb = static_cast<int>(b.kind());
    if (ka != kb) return ka < kb ? -1 : 1;
    switch (a.kind()) {
        case AxiomKind::Subsumption: {
            int c = compare(a.lhs(), b.lhs());
            return c != 0 ? c : compare(a.rhs(), b.rhs());
        }
        case AxiomKind::ClassAssertion: {
            int c = compare(a.concept_arg(), b.concept_arg());
            return c != 0 ? c : a.individual().compare(b.individual());
        }
        case AxiomKind::RoleAssertion: {
            int c = a.role().compare(b.role());
            if (c != 0) return c;
            c = a.subject().compare(b.subject());
            return c != 0 ? c : a.object().compare(b.object());
        }
    }
    return 0;
}

std::size_t AxiomHash::operator()(const Axiom& ax) const {
    std::size_t h = static_cast<std::size_t>(ax.kind());
    auto mix = [&h](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    switch (ax.kind()) {
        case AxiomKind::Subsumption:
            mix(ax.lhs().raw_hash());
            mix(ax.rhs().raw_hash());
            break;
        case AxiomKind::ClassAssertion:
            mix(ax.concept_arg().raw_hash());
            mix(std::hash<std::string>{}(ax.individual()));
            break;
        case AxiomKind::RoleAssertion:
            mix(std::hash<std::string>{}(ax.role()));
            mix(std::hash<std::string>{}(ax.subject()));
            mix(std::hash<std::string>{}(ax.object()));
            break;
    }
    return h;
}

namespace {

void collect_concept_names(Concept c, std::set<std::string>& names, std::set<std::string>& roles) {
    switch (c.kind()) {
        case ConceptKind::Name:
            names.insert(c.label());
            break;
        case ConceptKind::Not:
            collect_concept_names(c.child(), names, roles);
            break;
        case ConceptKind::And:
        case ConceptKind::Or:
            collect_concept_names(c.left(), names, roles);
            collect_concept_names(c.right(), names, roles);
            break;
        case ConceptKind::Forall:
        case ConceptKind::Exists:
            roles.insert(c.label());
            collect_concept_names(c.child(), names, roles);
            break;
        default:
            break;
    }
}

}  // namespace

Ontology::Ontology(std::vector<Axiom> axioms, std::size_t* duplicate_count) {
    std::unordered_set<Axiom, AxiomHash> seen;
    std::size_t duplicates = 0;
    axioms_.reserve(axioms.size());
    for (auto& ax : axioms) {
        if (seen.insert(ax).second) {
            axioms_.push_back(std::move(ax));
        } else {
            ++duplicates;
        }
    }
    if (duplicate_count) *duplicate_count = duplicates;

    std::set<std::string> names, roles, inds;
    for (const auto& ax : axioms_) {
        switch (ax.kind()) {
            case AxiomKind::Subsumption:
                collect_concept_names(ax.lhs(), names, roles);
                collect_concept_names(ax.rhs(), names, roles);
                break;
            case AxiomKind::ClassAssertion:
                collect_concept_names(ax.concept_arg(), names, roles);
                inds.insert(ax.individual());
                break;
            case AxiomKind::RoleAssertion:
                roles.insert(ax.role());
                inds.insert(ax.subject());
                inds.insert(ax.object());
                break;
        }
    }
    concept_names_.assign(names.begin(), names.end());
    role_names_.assign(roles.begin(), roles.end());
    individuals_.assign(inds.begin(), inds.end());
}

bool Ontology::contains(const Axiom& ax) const { return index_of(ax) < axioms_.size(); }

std::size_t Ontology::index_of(const Axiom& ax) const {
    for (std::size_t i = 0; i < axioms_.size(); ++i) {
        if (axioms_[i] == ax) return i;
    }
    return axioms_.size();
}

Ontology Ontology::with_appended(const Axiom& ax) const {
    auto copy = axioms_;
    copy.push_back(ax);
    return Ontology(std::move(copy));
}

Ontology Ontology::without_index(std::size_t i) const {
    auto copy = axioms_;
    copy.erase(copy.begin() + static_cast<std::ptrdiff_t>(i));
    return Ontology(std::move(copy));
}

Ontology Ontology::with_replaced(std::size_t i, const Axiom& replacement) const {
    auto copy = axioms_;
    copy[i] = replacement;
    return Ontology(std::move(copy));
}

std::vector<Concept> subconcepts(const Ontology& o) {
    std::vector<Concept> out;
    out.push_back(Concept::top());
    out.push_back(Concept::bottom());
    for (const auto& ax : o.axioms()) {
        switch (ax.kind()) {
            case AxiomKind::Subsumption: {
                auto l = subconcepts(ax.lhs());
                auto r = subconcepts(ax.rhs());
                out.insert(out.end(), l.begin(), l.end());
                out.insert(out.end(), r.begin(), r.end());
                break;
            }
            case AxiomKind::ClassAssertion: {
                auto c = subconcepts(ax.concept_arg());
                out.insert(out.end(), c.begin(), c.end());
                break;
            }
            case AxiomKind::RoleAssertion:
                break;
        }
    }
    sort_unique(out);
    return out;
}

int ontology_size(const Ontology& o) {
    int total = 0;
    for (const auto& ax : o.axioms()) {
        switch (ax.kind()) {
            case AxiomKind::Subsumption:
                total += ax.lhs().size() + ax.rhs().size();
                break;
            case AxiomKind::ClassAssertion:
                total += ax.concept_arg().size();
                break;
            case AxiomKind::RoleAssertion:
                break;
        }
    }
    return total;
}

}  // namespace orep

#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "orep/concepts.hpp"

namespace orep {

enum class AxiomKind : std::uint8_t { Subsumption, ClassAssertion, RoleAssertion };

// A GCI C ⊑ D, a class assertion C(a), or a role assertion R(a,b).
// Immutable value type with structural equality.
class Axiom {
public:
    static Axiom subsumption(Concept lhs, Concept rhs) {
        Axiom ax;
        ax.kind_ = AxiomKind::Subsumption;
        ax.lhs_ = lhs;
        ax.rhs_ = rhs;
        return ax;
    }

    static Axiom class_assertion(Concept c, std::string_view individual) {
        Axiom ax;
        ax.kind_ = AxiomKind::ClassAssertion;
        ax.lhs_ = c;
        ax.subject_ = individual;
        return ax;
    }

    static Axiom role_assertion(std::string_view role, std::string_view subject, std::string_view object) {
        Axiom ax;
        ax.kind_ = AxiomKind::RoleAssertion;
        ax.role_ = role;
        ax.subject_ = subject;
        ax.object_ = object;
        return ax;
    }

    AxiomKind kind() const { return kind_; }

    Concept lhs() const { return lhs_; }            // Subsumption
    Concept rhs() const { return rhs_; }            // Subsumption
    Concept concept_arg() const { return lhs_; }    // ClassAssertion
    const std::string& individual() const { return subject_; }  // ClassAssertion
    const std::string& role() const { return role_; }           // RoleAssertion
    const std::string& subject() const { return subject_; }     // RoleAssertion
    const std::string& object() const { return object_; }       // RoleAssertion

    friend bool operator==(const Axiom& a, const Axiom& b) {
        return a.kind_ == b.kind_ && a.lhs_ == b.lhs_ && a.rhs_ == b.rhs_ && a.role_ == b.role_ &&
               a.subject_ == b.subject_ && a.object_ == b.object_;
    }
    friend bool operator!=(const Axiom& a, const Axiom& b) { return !(a == b); }

private:
    Axiom() = default;
    AxiomKind kind_ = AxiomKind::Subsumption;
    Concept lhs_;
    Concept rhs_;
    std::string role_;
    std::string subject_;
    std::string object_;
};

int compare(const Axiom& a, const Axiom& b);

struct AxiomLess {
    bool operator()(const Axiom& a, const Axiom& b) const { return compare(a, b) < 0; }
};

struct AxiomHash {
    std::size_t operator()(const Axiom& ax) const;
};

}  // namespace orep

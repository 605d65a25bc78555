#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace orep {

enum class ConceptKind : std::uint8_t { Top, Bottom, Name, Not, And, Or, Forall, Exists };

// Immutable concept expression. Instances are hash-consed: structurally
// equal concepts share one node, so equality and hashing are O(1). Handles
// are cheap to copy and safe to share across threads.
class Concept {
public:
    Concept() = default;

    static Concept top();
    static Concept bottom();
    static Concept name(std::string_view name);
    static Concept negation(Concept arg);
    static Concept conj(Concept left, Concept right);
    static Concept disj(Concept left, Concept right);
    static Concept forall(std::string_view role, Concept arg);
    static Concept exists(std::string_view role, Concept arg);

    bool valid() const { return node_ != nullptr; }
    ConceptKind kind() const;

    // Name for Name nodes, role name for Forall/Exists nodes.
    const std::string& label() const;

    // Single child of Not/Forall/Exists.
    Concept child() const;
    // Children of And/Or.
    Concept left() const;
    Concept right() const;

    // Syntactic size: names and constants count 1, every constructor adds 1
    // (quantifier plus role count as a single node).
    int size() const;

    bool is_atomic() const {
        auto k = kind();
        return k == ConceptKind::Name || k == ConceptKind::Top || k == ConceptKind::Bottom;
    }

    friend bool operator==(Concept a, Concept b) { return a.node_ == b.node_; }
    friend bool operator!=(Concept a, Concept b) { return a.node_ != b.node_; }

    std::size_t raw_hash() const;

    struct Node;  // interned representation, defined in concepts.cpp

private:
    explicit Concept(const Node* node) : node_(node) {}
    const Node* node_ = nullptr;
};

struct ConceptHash {
    std::size_t operator()(Concept c) const { return c.raw_hash(); }
};

// Total structural order, independent of interning order. Used wherever a
// deterministic iteration order is required (set-valued results, sampling).
int compare(Concept a, Concept b);

struct ConceptLess {
    bool operator()(Concept a, Concept b) const { return compare(a, b) < 0; }
};

// Negation normal form: negation pushed onto concept names, double
// negations removed. Logically equivalent to the input and idempotent.
Concept nnf(Concept c);

// nnf of the complement. Cheaper than nnf(negation(c)).
Concept nnf_complement(Concept c);

int concept_size(Concept c);

// sub(C): the concept itself plus the subconcepts of its arguments.
// Returned sorted by the structural order, without duplicates.
std::vector<Concept> subconcepts(Concept c);

// Sorts by the structural order and drops duplicates in place.
void sort_unique(std::vector<Concept>& concepts);

}  // namespace orep

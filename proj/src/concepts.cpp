#include "orep/concepts.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_set>

namespace orep {

struct Concept::Node {
    ConceptKind kind;
    int size;
    std::size_t hash;
    std::string label;  // concept name or role name
    const Node* a;      // child / left
    const Node* b;      // right
};

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
    return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t node_hash(ConceptKind kind, const std::string& label, const void* a, const void* b) {
    std::size_t h = static_cast<std::size_t>(kind) * 0x100000001b3ULL;
    h = mix(h, std::hash<std::string>{}(label));
    h = mix(h, std::hash<const void*>{}(a));
    h = mix(h, std::hash<const void*>{}(b));
    return h;
}

struct PoolHash {
    std::size_t operator()(const Concept::Node* n) const { return n->hash; }
};
struct PoolEq {
    bool operator()(const Concept::Node* x, const Concept::Node* y) const {
        return x->kind == y->kind && x->a == y->a && x->b == y->b && x->label == y->label;
    }
};

// Process-wide intern pool. Nodes live for the lifetime of the process;
// the deque keeps addresses stable.
struct Pool {
    std::mutex mutex;
    std::deque<Concept::Node> storage;
    std::unordered_set<const Concept::Node*, PoolHash, PoolEq> index;

    const Concept::Node* intern(ConceptKind kind, std::string_view label, const Concept::Node* a,
                                const Concept::Node* b, int size) {
        Concept::Node probe{kind, size, 0, std::string(label), a, b};
        probe.hash = node_hash(kind, probe.label, a, b);
        std::lock_guard<std::mutex> lock(mutex);
        auto it = index.find(&probe);
        if (it != index.end()) return *it;
        storage.push_back(std::move(probe));
        const Concept::Node* node = &storage.back();
        index.insert(node);
        return node;
    }
};

Pool& pool() {
    static Pool instance;
    return instance;
}

}  // namespace

Concept Concept::top() {
    static const Node* n = pool().intern(ConceptKind::Top, "", nullptr, nullptr, 1);
    return Concept(n);
}

Concept Concept::bottom() {
    static const Node* n = pool().intern(ConceptKind::Bottom, "", nullptr, nullptr, 1);
    return Concept(n);
}

Concept Concept::name(std::string_view name) {
    return Concept(pool().intern(ConceptKind::Name, name, nullptr, nullptr, 1));
}

Concept Concept::negation(Concept arg) {
    return Concept(pool().intern(ConceptKind::Not, "", arg.node_, nullptr, 1 + arg.size()));
}

Concept Concept::conj(Concept left, Concept right) {
    return Concept(pool().intern(ConceptKind::And, "", left.node_, right.node_, 1 + left.size() + right.size()));
}

Concept Concept::disj(Concept left, Concept right) {
    return Concept(pool().intern(ConceptKind::Or, "", left.node_, right.node_, 1 + left.size() + right.size()));
}

Concept Concept::forall(std::string_view role, Concept arg) {
    return Concept(pool().intern(ConceptKind::Forall, role, arg.node_, nullptr, 1 + arg.size()));
}

Concept Concept::exists(std::string_view role, Concept arg) {
    return Concept(pool().intern(ConceptKind::Exists, role, arg.node_, nullptr, 1 + arg.size()));
}

ConceptKind Concept::kind() const { return node_->kind; }
const std::string& Concept::label() const { return node_->label; }
Concept Concept::child() const { return Concept(node_->a); }
Concept Concept::left() const { return Concept(node_->a); }
Concept Concept::right() const { return Concept(node_->b); }
int Concept::size() const { return node_->size; }
std::size_t Concept::raw_hash() const { return std::hash<const void*>{}(node_); }

int compare(Concept a, Concept b) {
    if (a == b) return 0;
    auto ka = static_cast<int>(a.kind());
    auto kb = static_cast<int>(b.kind());
    if (ka != kb) return ka < kb ? -1 : 1;
    switch (a.kind()) {
        case ConceptKind::Top:
        case ConceptKind::Bottom:
            return 0;
        case ConceptKind::Name:
            return a.label().compare(b.label());
        case ConceptKind::Not:
            return compare(a.child(), b.child());
        case ConceptKind::And:
        case ConceptKind::Or: {
            int c = compare(a.left(), b.left());
            return c != 0 ? c : compare(a.right(), b.right());
        }
        case ConceptKind::Forall:
        case ConceptKind::Exists: {
            int c = a.label().compare(b.label());
            return c != 0 ? c : compare(a.child(), b.child());
        }
    }
    return 0;
}

Concept nnf(Concept c) {
    switch (c.kind()) {
        case ConceptKind::Top:
        case ConceptKind::Bottom:
        case ConceptKind::Name:
            return c;
        case ConceptKind::Not:
            return nnf_complement(c.child());
        case ConceptKind::And: {
            Concept l = nnf(c.left()), r = nnf(c.right());
            return (l == c.left() && r == c.right()) ? c : Concept::conj(l, r);
        }
        case ConceptKind::Or: {
            Concept l = nnf(c.left()), r = nnf(c.right());
            return (l == c.left() && r == c.right()) ? c : Concept::disj(l, r);
        }
        case ConceptKind::Forall: {
            Concept a = nnf(c.child());
            return a == c.child() ? c : Concept::forall(c.label(), a);
        }
        case ConceptKind::Exists: {
            Concept a = nnf(c.child());
            return a == c.child() ? c : Concept::exists(c.label(), a);
        }
    }
    return c;
}

Concept nnf_complement(Concept c) {
    switch (c.kind()) {
        case ConceptKind::Top:
            return Concept::bottom();
        case ConceptKind::Bottom:
            return Concept::top();
        case ConceptKind::Name:
            return Concept::negation(c);
        case ConceptKind::Not:
            return nnf(c.child());
        case ConceptKind::And:
            return Concept::disj(nnf_complement(c.left()), nnf_complement(c.right()));
        case ConceptKind::Or:
            return Concept::conj(nnf_complement(c.left()), nnf_complement(c.right()));
        case ConceptKind::Forall:
            return Concept::exists(c.label(), nnf_complement(c.child()));
        case ConceptKind::Exists:
            return Concept::forall(c.label(), nnf_complement(c.child()));
    }
    return c;
}

int concept_size(Concept c) { return c.size(); }

namespace {

void collect_subconcepts(Concept c, std::vector<Concept>& out) {
    out.push_back(c);
    switch (c.kind()) {
        case ConceptKind::Not:
        case ConceptKind::Forall:
        case ConceptKind::Exists:
            collect_subconcepts(c.child(), out);
            break;
        case ConceptKind::And:
        case ConceptKind::Or:
            collect_subconcepts(c.left(), out);
            collect_subconcepts(c.right(), out);
            break;
        default:
            break;
    }
}

}  // namespace

std::vector<Concept> subconcepts(Concept c) {
    std::vector<Concept> out;
    collect_subconcepts(c, out);
    sort_unique(out);
    return out;
}

void sort_unique(std::vector<Concept>& concepts) {
    std::sort(concepts.begin(), concepts.end(), ConceptLess{});
    concepts.erase(std::unique(concepts.begin(), concepts.end()), concepts.end());
}

}  // namespace orep

#include "orep/reasoner.hpp"

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_set>

#include "orep/errors.hpp"

namespace orep {

namespace {

std::vector<Concept> internalize_parts(const Ontology& o) {
    std::vector<Concept> parts;
    for (const auto& ax : o.axioms()) {
        if (ax.kind() == AxiomKind::Subsumption) {
            parts.push_back(Concept::disj(nnf_complement(ax.lhs()), nnf(ax.rhs())));
        }
    }
    return parts;
}

// Sorted structurally, not by pointer, so processing order (and with it
// branch exploration) is identical across runs and threads.
using LabelKey = std::vector<Concept>;

struct LabelKeyHash {
    std::size_t operator()(const LabelKey& key) const {
        std::size_t h = key.size();
        for (Concept c : key) h ^= c.raw_hash() + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

LabelKey make_key(std::vector<Concept> concepts) {
    sort_unique(concepts);
    return concepts;
}

bool key_subset(const LabelKey& small, const LabelKey& big) {
    if (small.size() > big.size()) return false;
    std::size_t j = 0;
    for (Concept c : small) {
        while (j < big.size() && compare(big[j], c) < 0) ++j;
        if (j >= big.size() || big[j] != c) return false;
    }
    return true;
}

// Branch-level dependency set for dependency-directed backtracking; sorted.
using DepSet = std::vector<std::uint32_t>;

DepSet dep_union(const DepSet& a, const DepSet& b) {
    DepSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool dep_contains(const DepSet& deps, std::uint32_t level) {
    return std::binary_search(deps.begin(), deps.end(), level);
}

DepSet dep_without(DepSet deps, std::uint32_t level) {
    deps.erase(std::remove(deps.begin(), deps.end(), level), deps.end());
    return deps;
}

// Counts tableau nodes: completion-graph nodes, anonymous subtree
// evaluations and disjunction branch attempts. Label insertions are not
// charged; they are bounded per node by the closure size.
struct Budget {
    std::uint64_t limit;
    std::uint64_t used = 0;
    void bump() {
        if (++used > limit) throw ResourceLimitError("tableau work budget exceeded");
    }
};

#ifdef OREP_DIAG
struct Diag {
    std::uint64_t dfs_calls = 0, tree_sat = 0, memo_hits = 0, engines = 0, adds = 0;
    static Diag& get() { static Diag d; return d; }
};
#endif

// Optional record of the completed graph, for model extraction. Nodes of
// abandoned branches are marked dead; they never gained outgoing edges, so
// dropping them leaves a closed graph.
struct Recorder {
    struct Node {
        std::vector<Concept> label;
        std::vector<std::pair<std::string, int>> edges;
        std::string individual;  // empty for anonymous nodes
        bool dead = false;
    };
    std::vector<Node> nodes;
    int add(std::vector<Concept> label, std::string individual = {}) {
        nodes.push_back({std::move(label), {}, std::move(individual), false});
        return static_cast<int>(nodes.size()) - 1;
    }
};

// Propositional completion engine over a fixed set of nodes (the named
// individuals, or one anonymous node). Conjunctions and universals are
// queued once; disjunctions use semantic branching with watched concepts,
// so a disjunct is forced as soon as the complement of its sibling appears.
// Every label entry carries the set of branch levels it depends on; a
// failed branch reports the union of the clash participants' levels, and
// levels outside that set are skipped on the way up (backjumping).
class Engine {
public:
    Engine(const std::vector<Concept>& tc_parts, Budget& budget)
        : tc_parts_(tc_parts), budget_(budget) {
#ifdef OREP_DIAG
        ++Diag::get().engines;
#endif
    }

    int add_node(const std::string& name) {
        budget_.bump();
        nodes_.push_back({});
        nodes_.back().individual = name;
        return static_cast<int>(nodes_.size()) - 1;
    }

    void add_edge(int from, const std::string& role, int to) {
        nodes_[static_cast<std::size_t>(from)].edges.emplace_back(role, to);
    }

    // Seeds may be added before solve(); returns false on immediate clash.
    bool seed(int node, Concept c) { return add(node, nnf(c), {}); }

    bool seed_tc(int node) {
        for (Concept part : tc_parts_) {
            if (!add(node, part, {})) return false;
        }
        return true;
    }

    std::size_t node_count() const { return nodes_.size(); }
    const std::string& individual(int n) const { return nodes_[static_cast<std::size_t>(n)].individual; }
    const std::vector<Concept>& label(int n) const { return nodes_[static_cast<std::size_t>(n)].label; }
    const std::vector<Concept>& existentials(int n) const {
        return nodes_[static_cast<std::size_t>(n)].exists;
    }
    const std::vector<std::pair<std::string, int>>& edges(int n) const {
        return nodes_[static_cast<std::size_t>(n)].edges;
    }
    bool has(int n, Concept c) const { return nodes_[static_cast<std::size_t>(n)].in_label.count(c) > 0; }

    const DepSet& dep_of(int n, Concept c) const {
        return nodes_[static_cast<std::size_t>(n)].in_label.at(c);
    }

    std::vector<Concept> forall_children(int n, const std::string& role) const {
        std::vector<Concept> out;
        for (Concept c : nodes_[static_cast<std::size_t>(n)].label) {
            if (c.kind() == ConceptKind::Forall && c.label() == role) out.push_back(c.child());
        }
        return out;
    }

    // Reason for the most recent failure: flipping only branch levels
    // outside this set cannot repair it.
    const DepSet& conflict() const { return conflict_; }
    void set_conflict(DepSet conflict) { conflict_ = std::move(conflict); }

    // Explores propositional alternatives; on_complete is called on each
    // clash-free saturated state and may reject it by returning false with
    // a conflict set (triggering backtracking into the disjunction
    // choices).
    template <typename OnComplete>
    bool solve(const OnComplete& on_complete) {
        if (clash_) return false;
        return dfs(on_complete, 0);
    }

private:
    struct Node {
        std::vector<Concept> label;
        std::unordered_map<Concept, DepSet, ConceptHash> in_label;
        std::vector<Concept> ors;
        std::vector<Concept> exists;
        std::vector<std::pair<std::string, int>> edges;
        std::string individual;
    };

    struct Watch {
        int node;
        std::uint32_t or_index;
    };

    struct TrailEntry {
        enum Kind : std::uint8_t { Label, WatchKey } kind;
        int node;
        Concept concept_added;  // Label: the concept; WatchKey: the key
    };

    bool add(int n, Concept c, DepSet deps) {
#ifdef OREP_DIAG
        ++Diag::get().adds;
#endif
        Node& node = nodes_[static_cast<std::size_t>(n)];
        if (node.in_label.count(c)) return !clash_;
        node.label.push_back(c);
        node.in_label.emplace(c, std::move(deps));
        trail_.push_back({TrailEntry::Label, n, c});
        switch (c.kind()) {
            case ConceptKind::Bottom:
                fail(n, c, c);
                break;
            case ConceptKind::Name:
                if (node.in_label.count(Concept::negation(c))) fail(n, c, Concept::negation(c));
                break;
            case ConceptKind::Not:
                if (node.in_label.count(c.child())) fail(n, c, c.child());
                break;
            case ConceptKind::And:
            case ConceptKind::Forall:
                work_queue_.emplace_back(n, c);
                break;
            case ConceptKind::Or: {
                node.ors.push_back(c);
                std::uint32_t index = static_cast<std::uint32_t>(node.ors.size() - 1);
                watch(n, c.left(), index);
                watch(n, c.right(), index);
                watch(n, nnf_complement(c.left()), index);
                watch(n, nnf_complement(c.right()), index);
                recheck_.emplace_back(n, index);
                break;
            }
            case ConceptKind::Exists:
                node.exists.push_back(c);
                break;
            default:
                break;
        }
        if (!clash_) trigger(n, c);
        return !clash_;
    }

    void fail(int n, Concept a, Concept b) {
        clash_ = true;
        const Node& node = nodes_[static_cast<std::size_t>(n)];
        conflict_ = dep_union(node.in_label.at(a), node.in_label.at(b));
    }

    void watch(int n, Concept key, std::uint32_t index) {
        watchers_[{n, key}].push_back({n, index});
        trail_.push_back({TrailEntry::WatchKey, n, key});
    }

    void trigger(int n, Concept c) {
        auto it = watchers_.find({n, c});
        if (it == watchers_.end()) return;
        for (const Watch& w : it->second) {
            recheck_.emplace_back(w.node, w.or_index);
        }
    }

    std::size_t mark() const { return trail_.size(); }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            TrailEntry e = trail_.back();
            trail_.pop_back();
            Node& node = nodes_[static_cast<std::size_t>(e.node)];
            if (e.kind == TrailEntry::Label) {
                node.label.pop_back();
                node.in_label.erase(e.concept_added);
                if (e.concept_added.kind() == ConceptKind::Or) node.ors.pop_back();
                if (e.concept_added.kind() == ConceptKind::Exists) node.exists.pop_back();
            } else {
                auto it = watchers_.find({e.node, e.concept_added});
                it->second.pop_back();
                if (it->second.empty()) watchers_.erase(it);
            }
        }
        work_queue_.clear();
        recheck_.clear();
        clash_ = false;
    }

    // Processes conjunctions, universals and forced disjunctions until
    // fixpoint; false on clash.
    bool saturate() {
        while (!clash_ && (!work_queue_.empty() || !recheck_.empty())) {
            if (!work_queue_.empty()) {
                auto [n, c] = work_queue_.front();
                work_queue_.pop_front();
                const DepSet deps = nodes_[static_cast<std::size_t>(n)].in_label.at(c);
                if (c.kind() == ConceptKind::And) {
                    if (!add(n, c.left(), deps) || !add(n, c.right(), deps)) return false;
                } else {  // Forall
                    const auto& edges = nodes_[static_cast<std::size_t>(n)].edges;
                    for (std::size_t i = 0; i < edges.size(); ++i) {
                        auto [role, target] = edges[i];
                        if (role == c.label() && !add(target, c.child(), deps)) return false;
                    }
                }
                continue;
            }
            auto [n, index] = recheck_.front();
            recheck_.pop_front();
            const Node& node = nodes_[static_cast<std::size_t>(n)];
            if (index >= node.ors.size()) continue;  // rolled back
            Concept c = node.ors[index];
            if (node.in_label.count(c.left()) || node.in_label.count(c.right())) continue;
            auto left_neg = node.in_label.find(nnf_complement(c.left()));
            if (left_neg != node.in_label.end()) {
                if (!add(n, c.right(), dep_union(node.in_label.at(c), left_neg->second))) return false;
                continue;
            }
            auto right_neg = node.in_label.find(nnf_complement(c.right()));
            if (right_neg != node.in_label.end()) {
                if (!add(n, c.left(), dep_union(node.in_label.at(c), right_neg->second))) return false;
            }
        }
        return !clash_;
    }

    bool find_choice(int& node_out, Concept& or_out) {
        for (std::size_t n = 0; n < nodes_.size(); ++n) {
            const Node& node = nodes_[n];
            for (Concept c : node.ors) {
                if (node.in_label.count(c.left()) || node.in_label.count(c.right())) continue;
                node_out = static_cast<int>(n);
                or_out = c;
                return true;
            }
        }
        return false;
    }

    template <typename OnComplete>
    bool dfs(const OnComplete& on_complete, std::uint32_t level) {
#ifdef OREP_DIAG
        ++Diag::get().dfs_calls;
#endif
        if (!saturate()) return false;
        int n = -1;
        Concept c;
        if (!find_choice(n, c)) {
            return on_complete();
        }
        budget_.bump();
        std::size_t m = mark();
        DepSet base = nodes_[static_cast<std::size_t>(n)].in_label.at(c);

        DepSet left_deps = dep_union(base, DepSet{level});
        if (add(n, c.left(), std::move(left_deps)) && dfs(on_complete, level + 1)) return true;
        DepSet reason = conflict_;
        undo(m);
        if (!dep_contains(reason, level)) {
            conflict_ = std::move(reason);  // this choice is irrelevant: backjump
            return false;
        }
        DepSet second = dep_union(base, dep_without(std::move(reason), level));
        if (!add(n, nnf_complement(c.left()), second)) return false;
        if (!add(n, c.right(), std::move(second))) return false;
        return dfs(on_complete, level + 1);
    }

    struct NodeConceptHash {
        std::size_t operator()(const std::pair<int, Concept>& p) const {
            return static_cast<std::size_t>(p.first) * 0x9e3779b97f4a7c15ULL ^ p.second.raw_hash();
        }
    };

    const std::vector<Concept>& tc_parts_;
    Budget& budget_;
    std::vector<Node> nodes_;
    std::deque<std::pair<int, Concept>> work_queue_;
    std::deque<std::pair<int, std::uint32_t>> recheck_;
    std::unordered_map<std::pair<int, Concept>, std::vector<Watch>, NodeConceptHash> watchers_;
    std::vector<TrailEntry> trail_;
    bool clash_ = false;
    DepSet conflict_;
};

// Satisfiability of anonymous tree nodes, memoized by the seed label.
// `false` results are context independent and always cached. A `true`
// result that leaned on subset blocking against an in-flight ancestor is
// only conditionally true; it is parked under the index of the shallowest
// frame it depends on and promoted to the absolute cache once that frame
// (or the whole root attempt) completes successfully. Failed attempts
// discard their parked entries.
class TreeSolver {
public:
    TreeSolver(const std::vector<Concept>& tc_parts, Budget& budget, Recorder* recorder)
        : tc_parts_(tc_parts), budget_(budget), recorder_(recorder) {}

    static constexpr std::size_t kNoDep = static_cast<std::size_t>(-1);

    struct Outcome {
        bool sat = false;
        std::size_t min_dep = kNoDep;  // shallowest in-flight frame relied on
        int node_id = -1;              // recorder id when recording
    };

    struct Frame {
        LabelKey label;  // saturated ancestor label snapshot
        int node_id;
    };

    // Root attempts park conditional results under frame index 0.
    void begin_attempt() { discard_pending(0); }
    void commit_attempt() { promote_pending(0); }

    Outcome sat(const LabelKey& seed, std::vector<Frame>& stack) {
        budget_.bump();
        if (auto it = memo_.find(seed); it != memo_.end()) {
            if (!it->second.sat) return {false, kNoDep, -1};
            return {true, kNoDep, it->second.node_id};
        }
        for (std::size_t i = stack.size(); i-- > 0;) {
            if (key_subset(seed, stack[i].label)) {
                return {true, i, stack[i].node_id};
            }
        }

        const std::size_t depth = stack.size();
        if (pending_.size() <= depth) pending_.resize(depth + 1);

        Engine engine(tc_parts_, budget_);
        int node = engine.add_node("");
        bool seeded = true;
        for (Concept c : seed) seeded = seeded && engine.seed(node, c);

        Outcome outcome;
        bool sat_result =
            seeded && engine.solve([&]() { return expand_leaves(engine, node, stack, outcome); });
        if (!sat_result) {
            discard_pending(depth);
            memo_.emplace(seed, Memo{false, -1});
            return {false, kNoDep, -1};
        }
        if (outcome.min_dep >= depth) {
            // no dependence shallower than this frame: the cycle (if any)
            // closes here and everything parked on it becomes absolute
            memo_.emplace(seed, Memo{true, outcome.node_id});
            promote_pending(depth);
            return {true, kNoDep, outcome.node_id};
        }
        // conditional: re-park everything (and this result) one level up
        auto& own = pending_[depth];
        auto& target = pending_[outcome.min_dep];
        target.insert(target.end(), own.begin(), own.end());
        own.clear();
        target.push_back({seed, outcome.node_id});
        return {true, outcome.min_dep, outcome.node_id};
    }

private:
    bool expand_leaves(Engine& engine, int node, std::vector<Frame>& stack, Outcome& outcome) {
        const std::size_t depth = stack.size();
        discard_pending(depth);  // fresh attempt for this frame
        LabelKey my_label = make_key(engine.label(node));
        int my_id = recorder_ ? recorder_->add(engine.label(node)) : -1;
        std::size_t min_dep = kNoDep;

        std::vector<std::pair<std::string, int>> child_edges;
        for (Concept ex : engine.existentials(node)) {
            LabelKey child_seed = make_key([&] {
                std::vector<Concept> s = engine.forall_children(node, ex.label());
                s.push_back(ex.child());
                s.insert(s.end(), tc_parts_.begin(), tc_parts_.end());
                return s;
            }());
            stack.push_back({my_label, my_id});
            Outcome child = sat(child_seed, stack);
            stack.pop_back();
            if (!child.sat) {
                if (recorder_) recorder_->nodes[static_cast<std::size_t>(my_id)].dead = true;
                // the subtree is impossible given this existential and the
                // universals feeding its seed
                DepSet conflict = engine.dep_of(node, ex);
                for (Concept c : engine.label(node)) {
                    if (c.kind() == ConceptKind::Forall && c.label() == ex.label()) {
                        conflict = dep_union(conflict, engine.dep_of(node, c));
                    }
                }
                engine.set_conflict(std::move(conflict));
                return false;  // try another propositional branch
            }
            min_dep = std::min(min_dep, child.min_dep);
            if (recorder_) child_edges.emplace_back(ex.label(), child.node_id);
        }
        if (recorder_) {
            recorder_->nodes[static_cast<std::size_t>(my_id)].edges = std::move(child_edges);
            // the saturated label may differ per branch; refresh it
            recorder_->nodes[static_cast<std::size_t>(my_id)].label = engine.label(node);
        }
        outcome.min_dep = min_dep;
        outcome.node_id = my_id;
        return true;
    }

    void promote_pending(std::size_t level) {
        if (level >= pending_.size()) return;
        for (auto& [seed, node_id] : pending_[level]) {
            memo_.emplace(std::move(seed), Memo{true, node_id});
        }
        pending_[level].clear();
    }

    void discard_pending(std::size_t level) {
        if (level < pending_.size()) pending_[level].clear();
    }

    struct Memo {
        bool sat;
        int node_id;
    };

    const std::vector<Concept>& tc_parts_;
    Budget& budget_;
    Recorder* recorder_;
    std::unordered_map<LabelKey, Memo, LabelKeyHash> memo_;
    std::vector<std::vector<std::pair<LabelKey, int>>> pending_;
};

struct AssertionSeed {
    std::string individual;
    Concept expr;
};

// Decides satisfiability of one group of named individuals (connected via
// ABox role edges) together with their anonymous subtrees.
bool solve_root_group(const std::vector<std::string>& individuals,
                      const std::vector<const Axiom*>& class_assertions,
                      const std::vector<const Axiom*>& role_assertions,
                      const std::vector<AssertionSeed>& extra, const std::vector<Concept>& tc_parts,
                      Budget& budget, TreeSolver& trees, Recorder* recorder,
                      LabelKey* completed_root_label = nullptr) {
    Engine engine(tc_parts, budget);
    std::unordered_map<std::string, int> root_of;
    if (individuals.empty()) {
        engine.add_node("");
    } else {
        for (const auto& name : individuals) root_of[name] = engine.add_node(name);
    }

    bool ok = true;
    for (const Axiom* ax : class_assertions) {
        ok = ok && engine.seed(root_of.at(ax->individual()), ax->concept_arg());
    }
    for (const Axiom* ax : role_assertions) {
        engine.add_edge(root_of.at(ax->subject()), ax->role(), root_of.at(ax->object()));
    }
    for (const auto& seed : extra) {
        int node = individuals.empty() ? 0 : root_of.at(seed.individual);
        ok = ok && engine.seed(node, seed.expr);
    }
    for (std::size_t n = 0; ok && n < engine.node_count(); ++n) {
        ok = engine.seed_tc(static_cast<int>(n));
    }
    if (!ok) return false;

    // On each propositionally complete root state, satisfy every root
    // existential: either an ABox neighbour already carries the filler, or
    // an anonymous subtree must be satisfiable.
    auto complete = [&]() {
        trees.begin_attempt();
        std::vector<int> root_ids(engine.node_count(), -1);
        if (recorder) {
            for (std::size_t n = 0; n < engine.node_count(); ++n) {
                root_ids[n] = recorder->add(engine.label(static_cast<int>(n)),
                                            engine.individual(static_cast<int>(n)));
            }
        }
        auto abandon = [&]() {
            if (!recorder) return;
            for (int id : root_ids) recorder->nodes[static_cast<std::size_t>(id)].dead = true;
        };
        for (std::size_t n = 0; n < engine.node_count(); ++n) {
            int ni = static_cast<int>(n);
            std::vector<std::pair<std::string, int>> tree_edges;
            for (Concept ex : engine.existentials(ni)) {
                bool fulfilled = false;
                for (const auto& [role, target] : engine.edges(ni)) {
                    if (role == ex.label() && engine.has(target, ex.child())) {
                        fulfilled = true;
                        break;
                    }
                }
                if (fulfilled) continue;
                LabelKey child_seed = make_key([&] {
                    std::vector<Concept> s = engine.forall_children(ni, ex.label());
                    s.push_back(ex.child());
                    s.insert(s.end(), tc_parts.begin(), tc_parts.end());
                    return s;
                }());
                std::vector<TreeSolver::Frame> stack{{make_key(engine.label(ni)), root_ids[n]}};
                TreeSolver::Outcome child = trees.sat(child_seed, stack);
                if (!child.sat) {
                    abandon();
                    DepSet conflict = engine.dep_of(ni, ex);
                    for (Concept c : engine.label(ni)) {
                        if (c.kind() == ConceptKind::Forall && c.label() == ex.label()) {
                            conflict = dep_union(conflict, engine.dep_of(ni, c));
                        }
                    }
                    engine.set_conflict(std::move(conflict));
                    return false;
                }
                if (recorder) tree_edges.emplace_back(ex.label(), child.node_id);
            }
            if (recorder) {
                auto& rec = recorder->nodes[static_cast<std::size_t>(root_ids[n])];
                rec.label = engine.label(ni);
                for (const auto& [role, target] : engine.edges(ni)) {
                    rec.edges.emplace_back(role, root_ids[static_cast<std::size_t>(target)]);
                }
                rec.edges.insert(rec.edges.end(), tree_edges.begin(), tree_edges.end());
            }
        }
        return true;
    };
    bool ok_result = engine.solve(complete);
    if (ok_result) {
        trees.commit_attempt();
        if (completed_root_label && engine.node_count() == 1) {
            *completed_root_label = make_key(engine.label(0));
        }
    }
    return ok_result;
}

// Runs the tableau for `o` plus extra assertions. With `tbox_only` the ABox
// is ignored and one anonymous node is used; sound for subsumption checks
// because ALC is closed under disjoint unions, so over a consistent
// ontology the ABox cannot force new concept subsumptions. The same closure
// property lets the named individuals be split into components connected by
// role assertions and solved independently; singletons without edges go
// through the memoized tree solver directly.
bool tableau_consistent(const Ontology& o, const std::vector<Concept>& tc_parts,
                        const std::vector<AssertionSeed>& extra, bool tbox_only,
                        const ReasonerOptions& opts, Recorder* recorder = nullptr,
                        TreeSolver* shared_trees = nullptr, Budget* shared_budget = nullptr,
                        LabelKey* completed_root_label = nullptr) {
    Budget local_budget{opts.work_budget};
    Budget& budget = shared_budget ? *shared_budget : local_budget;
    TreeSolver local_trees(tc_parts, budget, recorder);
    TreeSolver& trees = shared_trees ? *shared_trees : local_trees;

    std::vector<std::string> individuals;
    if (!tbox_only) individuals = o.individuals();
    for (const auto& seed : extra) {
        if (std::find(individuals.begin(), individuals.end(), seed.individual) == individuals.end()) {
            individuals.push_back(seed.individual);
        }
    }
    std::sort(individuals.begin(), individuals.end());

    std::vector<const Axiom*> class_assertions, role_assertions;
    if (!tbox_only) {
        for (const auto& ax : o.axioms()) {
            if (ax.kind() == AxiomKind::ClassAssertion) class_assertions.push_back(&ax);
            if (ax.kind() == AxiomKind::RoleAssertion) role_assertions.push_back(&ax);
        }
    }

    if (individuals.empty()) {
        return solve_root_group({}, {}, {}, extra, tc_parts, budget, trees, recorder,
                                completed_root_label);
    }

    // union-find over individuals, merged along role assertions
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < individuals.size(); ++i) index[individuals[i]] = i;
    std::vector<std::size_t> parent(individuals.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = i;
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const Axiom* ax : role_assertions) {
        parent[find(index.at(ax->subject()))] = find(index.at(ax->object()));
    }

    std::vector<std::vector<std::string>> groups(individuals.size());
    for (std::size_t i = 0; i < individuals.size(); ++i) {
        groups[find(i)].push_back(individuals[i]);
    }

    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (groups[g].empty()) continue;
        const auto& members = groups[g];
        std::vector<const Axiom*> group_class, group_role;
        std::vector<AssertionSeed> group_extra;
        for (const Axiom* ax : class_assertions) {
            if (index.count(ax->individual()) && find(index.at(ax->individual())) == g) {
                group_class.push_back(ax);
            }
        }
        for (const Axiom* ax : role_assertions) {
            if (find(index.at(ax->subject())) == g) group_role.push_back(ax);
        }
        for (const auto& seed : extra) {
            if (find(index.at(seed.individual)) == g) group_extra.push_back(seed);
        }

        bool group_ok;
        if (members.size() == 1 && group_role.empty() && !recorder) {
            // isolated individual: exactly an anonymous node's problem
            std::vector<Concept> seed_concepts(tc_parts.begin(), tc_parts.end());
            for (const Axiom* ax : group_class) seed_concepts.push_back(nnf(ax->concept_arg()));
            for (const auto& seed : group_extra) seed_concepts.push_back(nnf(seed.expr));
            std::vector<TreeSolver::Frame> stack;
            trees.begin_attempt();
            group_ok = trees.sat(make_key(std::move(seed_concepts)), stack).sat;
            if (group_ok) trees.commit_attempt();
        } else {
            group_ok = solve_root_group(members, group_class, group_role, group_extra, tc_parts,
                                        budget, trees, recorder);
        }
        if (!group_ok) return false;
    }
    return true;
}

FiniteInterpretation interpretation_from(const Recorder& recorder) {
    // blocking edges may point at an ancestor that was later abandoned;
    // anything referencing a dead node belongs to the same abandoned branch
    std::vector<bool> dead(recorder.nodes.size());
    for (std::size_t i = 0; i < recorder.nodes.size(); ++i) dead[i] = recorder.nodes[i].dead;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < recorder.nodes.size(); ++i) {
            if (dead[i]) continue;
            for (const auto& [role, target] : recorder.nodes[i].edges) {
                if (dead[static_cast<std::size_t>(target)]) {
                    dead[i] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    std::vector<int> element(recorder.nodes.size(), -1);
    int next = 0;
    for (std::size_t i = 0; i < recorder.nodes.size(); ++i) {
        if (!dead[i]) element[i] = next++;
    }
    FiniteInterpretation interp;
    interp.domain_size = next == 0 ? 1 : next;
    for (std::size_t i = 0; i < recorder.nodes.size(); ++i) {
        if (element[i] < 0) continue;
        const auto& node = recorder.nodes[i];
        for (Concept c : node.label) {
            if (c.kind() == ConceptKind::Name) interp.concept_ext[c.label()].insert(element[i]);
        }
        for (const auto& [role, target] : node.edges) {
            interp.role_ext[role].insert({element[i], element[static_cast<std::size_t>(target)]});
        }
        if (!node.individual.empty()) interp.individual_map[node.individual] = element[i];
    }
    return interp;
}

}  // namespace

namespace detail {
// Per-session solver state: one anonymous-subtree memo shared by every
// query (the budget is reset per top-level decision), plus completed root
// labels from earlier subsumption checks. Such a label is a satisfiable
// configuration under the session TBox: any pair (C, D) with C and ¬D both
// in it is refuted without a new search.
struct SessionState {
    SessionState(const std::vector<Concept>& tc_parts, std::uint64_t limit)
        : budget{limit}, trees(tc_parts, budget, nullptr) {}
    Budget budget;
    TreeSolver trees;
    std::vector<LabelKey> witnesses;

    bool witness_refutes(Concept cn, Concept dn_complement) const {
        for (const auto& label : witnesses) {
            if (std::binary_search(label.begin(), label.end(), cn, ConceptLess{}) &&
                std::binary_search(label.begin(), label.end(), dn_complement, ConceptLess{})) {
                return true;
            }
        }
        return false;
    }

    void remember_witness(LabelKey label) {
        if (witnesses.size() < 64 && !label.empty()) witnesses.push_back(std::move(label));
    }
};
}  // namespace detail

ReasonerSession::ReasonerSession(Ontology o, ReasonerOptions opts)
    : ontology_(std::move(o)), opts_(opts), tc_parts_(internalize_parts(ontology_)) {
    internalized_ = Concept::top();
    if (!tc_parts_.empty()) {
        internalized_ = tc_parts_.front();
        for (std::size_t i = 1; i < tc_parts_.size(); ++i) {
            internalized_ = Concept::conj(internalized_, tc_parts_[i]);
        }
    }
    state_ = std::make_unique<detail::SessionState>(tc_parts_, opts_.work_budget);
}

ReasonerSession::~ReasonerSession() = default;
ReasonerSession::ReasonerSession(ReasonerSession&&) noexcept = default;
ReasonerSession& ReasonerSession::operator=(ReasonerSession&&) noexcept = default;

bool ReasonerSession::consistent_uncounted() {
    if (!consistent_) {
        state_->budget.used = 0;
        consistent_ = tableau_consistent(ontology_, tc_parts_, {}, false, opts_, nullptr,
                                         &state_->trees, &state_->budget);
    }
    return *consistent_;
}

bool ReasonerSession::is_consistent() {
    ++call_count_;
    return consistent_uncounted();
}

bool ReasonerSession::subsumed_uncounted(Concept c, Concept d) {
    Concept cn = nnf(c), dn = nnf(d);
    auto key = std::make_pair(cn, dn);
    auto it = subsumption_cache_.find(key);
    if (it != subsumption_cache_.end()) {
        ++cache_hits_;
        return it->second;
    }
    bool result;
    if (!consistent_uncounted()) {
        result = true;  // everything is subsumed under an inconsistent ontology
    } else if (state_->witness_refutes(cn, nnf_complement(dn))) {
        result = false;
    } else {
        AssertionSeed seed{"__fresh_0", Concept::conj(cn, nnf_complement(dn))};
        state_->budget.used = 0;
        LabelKey witness;
        result = !tableau_consistent(ontology_, tc_parts_, {seed}, true, opts_, nullptr,
                                     &state_->trees, &state_->budget, &witness);
        if (!result) state_->remember_witness(std::move(witness));
    }
    subsumption_cache_.emplace(key, result);
    return result;
}

bool ReasonerSession::is_subsumed(Concept c, Concept d) {
    ++call_count_;
    return subsumed_uncounted(c, d);
}

bool ReasonerSession::strictly_subsumed(Concept c, Concept d) {
    return is_subsumed(c, d) && !is_subsumed(d, c);
}

bool ReasonerSession::equivalent(Concept c, Concept d) {
    return is_subsumed(c, d) && is_subsumed(d, c);
}

bool ReasonerSession::entails(const Axiom& ax) {
    switch (ax.kind()) {
        case AxiomKind::Subsumption:
            return is_subsumed(ax.lhs(), ax.rhs());
        case AxiomKind::ClassAssertion: {
            ++call_count_;
            if (!consistent_uncounted()) return true;
            AssertionSeed seed{ax.individual(), nnf_complement(ax.concept_arg())};
            state_->budget.used = 0;
            return !tableau_consistent(ontology_, tc_parts_, {seed}, false, opts_, nullptr,
                                       &state_->trees, &state_->budget);
        }
        case AxiomKind::RoleAssertion:
            ++call_count_;
            return ontology_.contains(ax);
    }
    return false;
}

bool is_consistent(const Ontology& o, ReasonerOptions opts) {
    return tableau_consistent(o, internalize_parts(o), {}, false, opts);
}

std::optional<FiniteInterpretation> extract_model(const Ontology& o, ReasonerOptions opts) {
    auto tc_parts = internalize_parts(o);
    Recorder recorder;
    if (!tableau_consistent(o, tc_parts, {}, false, opts, &recorder)) return std::nullopt;
    return interpretation_from(recorder);
}

}  // namespace orep

#ifdef OREP_DIAG
#include <cstdio>
namespace orep {
void print_diag() {
    auto& d = Diag::get();
    std::printf("diag: engines=%llu dfs=%llu adds=%llu tree_sat=%llu memo_hits=%llu\n",
                (unsigned long long)d.engines, (unsigned long long)d.dfs_calls,
                (unsigned long long)d.adds, (unsigned long long)d.tree_sat,
                (unsigned long long)d.memo_hits);
    d = Diag{};
}
}
#endif

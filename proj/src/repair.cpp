#include "orep/repair.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

#include "orep/errors.hpp"
#include "orep/io.hpp"

#include "json.hpp"

namespace orep {

std::vector<Axiom> weakenings(RefinementContext& ctx, const Axiom& ax) {
    std::vector<Axiom> out;
    switch (ax.kind()) {
        case AxiomKind::Subsumption: {
            auto lhs_versions = specialize(ctx, ax.lhs());
            auto rhs_versions = generalize(ctx, ax.rhs());
            out.reserve(lhs_versions.size() * rhs_versions.size());
            for (Concept l : lhs_versions) {
                for (Concept r : rhs_versions) {
                    out.push_back(Axiom::subsumption(l, r));
                }
            }
            break;
        }
        case AxiomKind::ClassAssertion: {
            for (Concept c : generalize(ctx, ax.concept_arg())) {
                out.push_back(Axiom::class_assertion(c, ax.individual()));
            }
            break;
        }
        case AxiomKind::RoleAssertion:
            throw UnsupportedAxiomError("role assertions have no weakenings");
    }
    std::sort(out.begin(), out.end(), AxiomLess{});
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

Ontology subset_by_indices(const Ontology& o, const std::vector<std::size_t>& indices) {
    std::vector<Axiom> axioms;
    axioms.reserve(indices.size());
    for (std::size_t i : indices) axioms.push_back(o.axiom(i));
    return Ontology(std::move(axioms));
}

// One minimally inconsistent subset: grow a shuffled prefix until it turns
// inconsistent, then shrink by deletion. Every check runs on a fresh
// sub-ontology; the shuffle gives sample diversity.
std::vector<std::size_t> sample_mis(const Ontology& o, Rng& rng, const ReasonerOptions& opts) {
    std::vector<std::size_t> order(o.axiom_count());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<std::size_t> prefix;
    for (std::size_t idx : order) {
        prefix.push_back(idx);
        if (!is_consistent(subset_by_indices(o, prefix), opts)) break;
    }

    std::vector<std::size_t> core = prefix;
    for (std::size_t victim = 0; victim < prefix.size(); ++victim) {
        std::vector<std::size_t> attempt;
        for (std::size_t idx : core) {
            if (idx != prefix[victim]) attempt.push_back(idx);
        }
        if (attempt.size() < core.size() && !is_consistent(subset_by_indices(o, attempt), opts)) {
            core = std::move(attempt);
        }
    }
    std::sort(core.begin(), core.end());
    return core;
}

}  // namespace

Axiom find_bad_axiom_mis(const Ontology& o, unsigned k, Rng& rng, const ReasonerOptions& opts) {
    if (k == 0) throw Error("mis sample count must be at least 1");
    if (is_consistent(o, opts)) {
        throw ConsistencyPreconditionError("bad-axiom search requires an inconsistent ontology");
    }
    std::vector<unsigned> occurrences(o.axiom_count(), 0);
    for (unsigned sample = 0; sample < k; ++sample) {
        for (std::size_t idx : sample_mis(o, rng, opts)) {
            ++occurrences[idx];
        }
    }
    unsigned best = *std::max_element(occurrences.begin(), occurrences.end());
    std::vector<std::size_t> winners;
    for (std::size_t i = 0; i < occurrences.size(); ++i) {
        if (occurrences[i] == best) winners.push_back(i);
    }
    return o.axiom(rng.pick(winners));
}

Axiom find_bad_axiom_rand(const Ontology& o, Rng& rng) {
    if (o.empty()) throw EmptyInputError("cannot pick an axiom from an empty ontology");
    return o.axiom(static_cast<std::size_t>(rng.below(o.axiom_count())));
}

Ontology maximal_consistent_subset(const Ontology& o, Rng& rng, const ReasonerOptions& opts) {
    std::vector<std::size_t> order(o.axiom_count());
    std::iota(order.begin(), order.end(), 0);
    rng.shuffle(order);

    std::vector<std::size_t> kept;
    for (std::size_t idx : order) {
        kept.push_back(idx);
        if (!is_consistent(subset_by_indices(o, kept), opts)) kept.pop_back();
    }
    std::sort(kept.begin(), kept.end());  // original axiom order
    return subset_by_indices(o, kept);
}

Ontology cautious_reference(const Ontology& o, std::uint64_t subset_cap, const ReasonerOptions& opts) {
    const std::size_t n = o.axiom_count();
    if (n >= 63 || (1ULL << n) > subset_cap) {
        throw CapExceededError("too many subsets to enumerate for the cautious reference");
    }
    const std::uint64_t total = 1ULL << n;

    // popcount-descending order; consistency of a subset follows from any
    // consistent superset, so most consistent masks need no tableau run.
    std::vector<std::uint64_t> masks(total);
    std::iota(masks.begin(), masks.end(), 0);
    std::stable_sort(masks.begin(), masks.end(), [](std::uint64_t a, std::uint64_t b) {
        return std::popcount(a) > std::popcount(b);
    });

    std::vector<std::uint8_t> consistent(total, 0);
    std::vector<std::uint64_t> mcs;
    for (std::uint64_t mask : masks) {
        bool known = false;
        for (std::size_t bit = 0; bit < n && !known; ++bit) {
            if (!(mask & (1ULL << bit)) && consistent[mask | (1ULL << bit)]) known = true;
        }
        if (!known) {
            std::vector<std::size_t> indices;
            for (std::size_t bit = 0; bit < n; ++bit) {
                if (mask & (1ULL << bit)) indices.push_back(bit);
            }
            known = is_consistent(subset_by_indices(o, indices), opts);
            if (!known) continue;
        }
        consistent[mask] = 1;
        bool maximal = true;
        for (std::size_t bit = 0; bit < n && maximal; ++bit) {
            if (!(mask & (1ULL << bit)) && consistent[mask | (1ULL << bit)]) maximal = false;
        }
        if (maximal) mcs.push_back(mask);
    }

    std::uint64_t intersection = total - 1;
    for (std::uint64_t mask : mcs) intersection &= mask;
    std::vector<std::size_t> indices;
    for (std::size_t bit = 0; bit < n; ++bit) {
        if (intersection & (1ULL << bit)) indices.push_back(bit);
    }
    return subset_by_indices(o, indices);
}

namespace {

Ontology build_reference(const Ontology& o, const RepairConfig& cfg, Rng& rng) {
    if (std::holds_alternative<BraveReference>(cfg.reference)) {
        return maximal_consistent_subset(o, rng, cfg.reasoner);
    }
    if (std::holds_alternative<CautiousReference>(cfg.reference)) {
        return cautious_reference(o, cfg.cautious_subset_cap, cfg.reasoner);
    }
    return std::get<Ontology>(cfg.reference);
}

Axiom select_bad_axiom(const Ontology& current, const RepairConfig& cfg, Rng& rng) {
    if (cfg.bad_axiom == BadAxiomHeuristic::Rand) {
        return find_bad_axiom_rand(current, rng);
    }
    unsigned k = cfg.mis_samples.value_or(
        std::max<unsigned>(1, static_cast<unsigned>(current.axiom_count() / 10)));
    return find_bad_axiom_mis(current, k, rng, cfg.reasoner);
}

void remove_until_consistent(Ontology& current, bool& consistent, const RepairConfig& cfg, Rng& rng,
                             RepairTrace& trace) {
    while (!consistent) {
        Axiom bad = select_bad_axiom(current, cfg, rng);
        current = current.without_index(current.index_of(bad));
        consistent = is_consistent(current, cfg.reasoner);
        trace.steps.push_back({bad, 0, std::nullopt, consistent});
    }
}

}  // namespace

RepairResult repair_weaken(const Ontology& o, const RepairConfig& cfg) {
    Rng rng(cfg.seed);
    RepairTrace trace;
    trace.seed = cfg.seed;

    Ontology current = o;
    bool consistent = is_consistent(current, cfg.reasoner);
    if (consistent) {
        trace.reference = o;
        return {current, trace};
    }

    trace.reference = build_reference(o, cfg, rng);
    RefinementOptions ref_opts;
    ref_opts.reasoner = cfg.reasoner;
    RefinementContext ctx(trace.reference, ref_opts);

    const std::uint64_t max_steps =
        cfg.max_steps.value_or(std::max<std::uint64_t>(1, 10 * o.axiom_count()));

    std::uint64_t steps = 0;
    while (!consistent && steps < max_steps) {
        Axiom bad = select_bad_axiom(current, cfg, rng);
        if (bad.kind() == AxiomKind::RoleAssertion) {
            // no refinement is defined for role atoms; removal is the only weakening
            current = current.without_index(current.index_of(bad));
            consistent = is_consistent(current, cfg.reasoner);
            trace.steps.push_back({bad, 0, std::nullopt, consistent});
        } else {
            auto candidates = weakenings(ctx, bad);
            std::size_t full_size = candidates.size();
            if (cfg.exclude_identity_weakening && candidates.size() > 1) {
                std::erase(candidates, bad);
            }
            Axiom chosen = rng.pick(candidates);
            current = current.with_replaced(current.index_of(bad), chosen);
            consistent = is_consistent(current, cfg.reasoner);
            trace.steps.push_back({bad, full_size, chosen, consistent});
        }
        ++steps;
    }

    if (!consistent) {
        trace.outcome = RepairOutcome::StepLimit;
        remove_until_consistent(current, consistent, cfg, rng, trace);
    } else {
        trace.outcome = RepairOutcome::Repaired;
    }
    return {current, trace};
}

RepairResult repair_remove(const Ontology& o, const RepairConfig& cfg) {
    Rng rng(cfg.seed);
    RepairTrace trace;
    trace.seed = cfg.seed;
    trace.reference = Ontology{};  // removal needs no reference

    Ontology current = o;
    bool consistent = is_consistent(current, cfg.reasoner);
    remove_until_consistent(current, consistent, cfg, rng, trace);
    trace.outcome = RepairOutcome::Repaired;
    return {current, trace};
}

Ontology replay_trace(const Ontology& o, const RepairTrace& trace) {
    Ontology current = o;
    for (const auto& step : trace.steps) {
        std::size_t idx = current.index_of(step.bad_axiom);
        if (idx == current.axiom_count()) {
            throw Error("trace replay: bad axiom not present in the ontology");
        }
        current = step.replacement ? current.with_replaced(idx, *step.replacement)
                                   : current.without_index(idx);
    }
    return current;
}

std::string trace_to_json(const RepairTrace& trace) {
    nlohmann::json j;
    j["seed"] = trace.seed;
    j["outcome"] = trace.outcome == RepairOutcome::Repaired ? "repaired" : "step-limit";
    nlohmann::json ref = nlohmann::json::array();
    for (const auto& ax : trace.reference.axioms()) ref.push_back(serialize_axiom(ax));
    j["reference"] = std::move(ref);
    nlohmann::json steps = nlohmann::json::array();
    for (const auto& step : trace.steps) {
        nlohmann::json s;
        s["bad_axiom"] = serialize_axiom(step.bad_axiom);
        s["candidate_count"] = step.candidate_count;
        s["action"] = step.replacement ? "weaken" : "remove";
        if (step.replacement) s["replacement"] = serialize_axiom(*step.replacement);
        s["consistent_after"] = step.consistent_after;
        steps.push_back(std::move(s));
    }
    j["steps"] = std::move(steps);
    return j.dump(2);
}

RepairTrace trace_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RepairTrace trace;
    trace.seed = j.at("seed").get<std::uint64_t>();
    trace.outcome =
        j.at("outcome").get<std::string>() == "repaired" ? RepairOutcome::Repaired : RepairOutcome::StepLimit;
    std::vector<Axiom> ref;
    for (const auto& s : j.at("reference")) ref.push_back(parse_axiom(s.get<std::string>()));
    trace.reference = Ontology(std::move(ref));
    for (const auto& s : j.at("steps")) {
        RepairStep step{parse_axiom(s.at("bad_axiom").get<std::string>()),
                        s.at("candidate_count").get<std::size_t>(), std::nullopt,
                        s.at("consistent_after").get<bool>()};
        if (s.contains("replacement")) step.replacement = parse_axiom(s.at("replacement").get<std::string>());
        trace.steps.push_back(std::move(step));
    }
    return trace;
}

}  // namespace orep

#include "orep/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <set>
#include <thread>

#include "orep/errors.hpp"
#include "orep/io.hpp"

namespace orep {

Ratio Ratio::of(std::int64_t num, std::int64_t den) {
    std::int64_t g = std::gcd(num, den);
    if (g == 0) g = 1;
    return Ratio{num / g, den / g};
}

std::string Ratio::to_decimal(int digits) const {
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    std::int64_t scaled = (num * scale + den / 2) / den;  // round half up
    std::int64_t whole = scaled / scale;
    std::int64_t frac = scaled % scale;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%lld.%0*lld", static_cast<long long>(whole), digits,
                  static_cast<long long>(frac));
    return buf;
}

std::vector<std::pair<std::string, std::string>> inferred_hierarchy(
    const Ontology& o, const std::vector<std::string>& signature, const ReasonerOptions& opts) {
    ReasonerSession session(o, opts);
    if (!session.is_consistent()) {
        throw ConsistencyPreconditionError("inferred hierarchy requires a consistent ontology");
    }
    std::vector<std::string> names = signature;
    std::sort(names.begin(), names.end());
    names.erase(std::unique(names.begin(), names.end()), names.end());
    const std::size_t n = names.size();

    std::vector<Concept> atoms;
    atoms.reserve(n);
    for (const auto& name : names) atoms.push_back(Concept::name(name));

    // positive[i] holds the j with names[i] ⊑ names[j] discovered so far;
    // anything reachable through positives is entailed by transitivity and
    // skips the reasoner call.
    std::vector<std::vector<std::size_t>> positive(n);
    std::vector<std::pair<std::string, std::string>> result;

    auto reachable = [&](std::size_t from, std::size_t to) {
        std::vector<bool> seen(n, false);
        std::vector<std::size_t> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            std::size_t cur = stack.back();
            stack.pop_back();
            if (cur == to) return true;
            for (std::size_t next : positive[cur]) {
                if (!seen[next]) {
                    seen[next] = true;
                    stack.push_back(next);
                }
            }
        }
        return false;
    };

    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) {
                result.emplace_back(names[i], names[j]);
                continue;
            }
            bool holds = reachable(i, j) || session.is_subsumed(atoms[i], atoms[j]);
            if (holds) {
                positive[i].push_back(j);
                result.emplace_back(names[i], names[j]);
            }
        }
    }
    return result;
}

IICDetail iic_detailed(const Ontology& o1, const Ontology& o2, const ReasonerOptions& opts) {
    std::vector<std::string> signature = o1.concept_names();
    signature.insert(signature.end(), o2.concept_names().begin(), o2.concept_names().end());

    auto inf1_vec = inferred_hierarchy(o1, signature, opts);
    auto inf2_vec = inferred_hierarchy(o2, signature, opts);
    std::set<std::pair<std::string, std::string>> inf1(inf1_vec.begin(), inf1_vec.end());
    std::set<std::pair<std::string, std::string>> inf2(inf2_vec.begin(), inf2_vec.end());

    IICDetail detail;
    for (const auto& p : inf1)
        if (!inf2.count(p)) ++detail.only_first;
    for (const auto& p : inf2)
        if (!inf1.count(p)) ++detail.only_second;

    detail.value = (detail.only_first == 0 && detail.only_second == 0)
                       ? Ratio::of(1, 2)
                       : Ratio::of(detail.only_first, detail.only_first + detail.only_second);
    return detail;
}

Ratio iic(const Ontology& o1, const Ontology& o2, const ReasonerOptions& opts) {
    return iic_detailed(o1, o2, opts).value;
}

namespace {

Concept random_concept(const std::vector<std::string>& names, const std::vector<std::string>& roles,
                       unsigned depth_left, bool allow_negation, Rng& rng) {
    auto atomic = [&]() {
        if (names.empty()) return rng.below(2) == 0 ? Concept::top() : Concept::bottom();
        return Concept::name(rng.pick(names));
    };
    if (depth_left == 0) return atomic();
    // constructor weights: atomic .40, ¬ .15, ⊓ .15, ⊔ .15, ∃ .10, ∀ .05
    std::uint64_t roll = rng.below(100);
    if (roll < 40) return atomic();
    if (roll < 55) {
        if (!allow_negation) return atomic();
        return Concept::negation(random_concept(names, roles, depth_left - 1, allow_negation, rng));
    }
    if (roll < 70) {
        return Concept::conj(random_concept(names, roles, depth_left - 1, allow_negation, rng),
                             random_concept(names, roles, depth_left - 1, allow_negation, rng));
    }
    if (roll < 85) {
        return Concept::disj(random_concept(names, roles, depth_left - 1, allow_negation, rng),
                             random_concept(names, roles, depth_left - 1, allow_negation, rng));
    }
    if (roles.empty()) return atomic();
    const std::string& role = rng.pick(roles);
    Concept arg = random_concept(names, roles, depth_left - 1, allow_negation, rng);
    return roll < 95 ? Concept::exists(role, arg) : Concept::forall(role, arg);
}

}  // namespace

std::pair<Ontology, std::vector<Axiom>> inject_inconsistency(const Ontology& o,
                                                             const InjectionConfig& cfg, Rng& rng) {
    if (!is_consistent(o, cfg.reasoner)) {
        throw ConsistencyPreconditionError("injection expects a consistent ontology");
    }
    Ontology current = o;
    std::vector<Axiom> injected;
    for (unsigned attempt = 0; attempt < cfg.max_attempts; ++attempt) {
        Concept lhs = random_concept(o.concept_names(), o.role_names(), cfg.max_depth,
                                     cfg.allow_negation, rng);
        Concept rhs = random_concept(o.concept_names(), o.role_names(), cfg.max_depth,
                                     cfg.allow_negation, rng);
        Axiom ax = Axiom::subsumption(lhs, rhs);
        if (current.contains(ax)) continue;
        current = current.with_appended(ax);
        injected.push_back(ax);
        if (!is_consistent(current, cfg.reasoner)) {
            return {std::move(current), std::move(injected)};
        }
    }
    throw InjectionError("could not reach inconsistency within the attempt budget");
}

WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& values, double mu0) {
    std::vector<double> diffs;
    for (double v : values) {
        double d = v - mu0;
        if (d != 0.0) diffs.push_back(d);
    }
    const std::size_t n = diffs.size();
    if (n < 3) {
        throw TooFewSamplesError("need at least 3 non-zero differences for the signed-rank test");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(diffs[a]) < std::abs(diffs[b]);
    });

    std::vector<double> rank(n, 0);
    std::vector<std::size_t> tie_sizes;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && std::abs(diffs[order[j]]) == std::abs(diffs[order[i]])) ++j;
        double avg = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k) rank[order[k]] = avg;
        tie_sizes.push_back(j - i);
        i = j;
    }

    double w_plus = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (diffs[i] > 0) w_plus += rank[i];
    }

    WilcoxonResult result;
    result.w_plus = w_plus;
    result.n_used = static_cast<unsigned>(n);

    if (n <= 12) {
        // exact null: all 2^n sign assignments of the observed ranks
        result.exact = true;
        const std::uint64_t total = 1ULL << n;
        std::uint64_t at_least = 0;
        for (std::uint64_t mask = 0; mask < total; ++mask) {
            double sum = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (mask & (1ULL << i)) sum += rank[i];
            }
            if (sum >= w_plus - 1e-12) ++at_least;
        }
        result.p_one_sided = static_cast<double>(at_least) / static_cast<double>(total);
    } else {
        result.exact = false;
        double dn = static_cast<double>(n);
        double mean = dn * (dn + 1) / 4.0;
        double var = dn * (dn + 1) * (2 * dn + 1) / 24.0;
        for (std::size_t t : tie_sizes) {
            double dt = static_cast<double>(t);
            var -= (dt * dt * dt - dt) / 48.0;
        }
        double z = (w_plus - mean - 0.5) / std::sqrt(var);
        result.p_one_sided = 0.5 * std::erfc(z / std::sqrt(2.0));
    }
    return result;
}

namespace {

std::uint64_t derived_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
    return Rng::derive(master, path).next();
}

TrialRecord run_trial(const std::string& name, const Ontology& o, BadAxiomHeuristic variant,
                      unsigned trial, std::uint64_t trial_seed, const ExperimentConfig& cfg) {
    TrialRecord record;
    record.ontology = name;
    record.variant = variant == BadAxiomHeuristic::Mis ? "mis" : "rand";
    record.trial = trial;
    record.seed = trial_seed;
    try {
        Rng inject_rng = Rng::derive(trial_seed, {1});
        auto [broken, injected] = inject_inconsistency(o, cfg.injection, inject_rng);

        RepairConfig weaken_cfg;
        weaken_cfg.method = RepairMethod::Weaken;
        weaken_cfg.bad_axiom = variant;
        weaken_cfg.reference = o;  // the original ontology steers the weakening
        weaken_cfg.seed = derived_seed(trial_seed, {2});
        weaken_cfg.max_steps = cfg.max_steps;
        weaken_cfg.reasoner = cfg.reasoner;

        RepairConfig remove_cfg;
        remove_cfg.method = RepairMethod::Remove;
        remove_cfg.bad_axiom = variant;
        remove_cfg.seed = derived_seed(trial_seed, {3});
        remove_cfg.reasoner = cfg.reasoner;

        RepairResult weakened = repair_weaken(broken, weaken_cfg);
        RepairResult removed = repair_remove(broken, remove_cfg);
        record.steps_weaken = weakened.trace.steps.size();
        record.steps_remove = removed.trace.steps.size();
        record.iic_value = iic(weakened.ontology, removed.ontology, cfg.reasoner);
        record.outcome = weakened.trace.outcome == RepairOutcome::Repaired ? "ok" : "weaken-step-limit";
    } catch (const InjectionError&) {
        record.outcome = "inject-failed";
    } catch (const Error& e) {
        record.outcome = std::string("error: ") + e.what();
    }
    return record;
}

}  // namespace

IICReport run_experiment(const std::vector<std::pair<std::string, Ontology>>& corpus, unsigned trials,
                         const ExperimentConfig& cfg) {
    IICReport report;
    report.master_seed = cfg.master_seed;

    struct Task {
        std::size_t ontology_index;
        std::size_t variant_index;
        unsigned trial;
    };
    std::vector<Task> tasks;
    for (std::size_t oi = 0; oi < corpus.size(); ++oi) {
        for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
            for (unsigned t = 0; t < trials; ++t) tasks.push_back({oi, vi, t});
        }
    }

    std::vector<TrialRecord> records(tasks.size());
    auto run_task = [&](std::size_t task_index) {
        const Task& task = tasks[task_index];
        const auto& [name, ontology] = corpus[task.ontology_index];
        BadAxiomHeuristic variant = cfg.variants[task.variant_index];
        std::uint64_t variant_tag = variant == BadAxiomHeuristic::Mis ? 0 : 1;
        std::uint64_t trial_seed =
            derived_seed(cfg.master_seed, {task.ontology_index, variant_tag, task.trial});
        records[task_index] = run_trial(name, ontology, variant, task.trial, trial_seed, cfg);
    };

    if (cfg.jobs <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) run_task(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> workers;
        unsigned count = std::min<unsigned>(cfg.jobs, std::max<std::size_t>(tasks.size(), 1));
        for (unsigned w = 0; w < count; ++w) {
            workers.emplace_back([&] {
                while (true) {
                    std::size_t i = next.fetch_add(1);
                    if (i >= tasks.size()) break;
                    run_task(i);
                }
            });
        }
        for (auto& worker : workers) worker.join();
    }

    report.trials = std::move(records);

    for (std::size_t oi = 0; oi < corpus.size(); ++oi) {
        for (std::size_t vi = 0; vi < cfg.variants.size(); ++vi) {
            AggregateRecord agg;
            agg.ontology = corpus[oi].first;
            agg.variant = cfg.variants[vi] == BadAxiomHeuristic::Mis ? "mis" : "rand";
            std::vector<double> ok_values;
            for (const auto& rec : report.trials) {
                if (rec.ontology != agg.ontology || rec.variant != agg.variant) continue;
                if (rec.outcome == "ok" && rec.iic_value) {
                    ok_values.push_back(rec.iic_value->to_double());
                } else {
                    ++agg.n_failed;
                }
            }
            agg.n_ok = static_cast<unsigned>(ok_values.size());
            if (!ok_values.empty()) {
                double sum = std::accumulate(ok_values.begin(), ok_values.end(), 0.0);
                agg.mean = sum / static_cast<double>(ok_values.size());
                if (ok_values.size() > 1) {
                    double sq = 0;
                    for (double v : ok_values) sq += (v - agg.mean) * (v - agg.mean);
                    agg.stddev = std::sqrt(sq / static_cast<double>(ok_values.size() - 1));
                }
                try {
                    agg.wilcoxon_p = wilcoxon_signed_rank(ok_values, 0.5).p_one_sided;
                } catch (const TooFewSamplesError&) {
                    agg.wilcoxon_p = std::nullopt;
                }
            }
            report.aggregates.push_back(std::move(agg));
        }
    }
    return report;
}

void write_report_csv(std::ostream& os, const IICReport& report) {
    char buf[64];
    os << "# ontology repair experiment, master_seed=" << report.master_seed << "\n";
    os << "# wilcoxon_p values are raw one-sided p-values per ontology; to correct across m\n";
    os << "# ontologies apply Holm-Bonferroni: sort ascending, reject p_(i) while p_(i) <= alpha/(m-i+1)\n";
    os << "ontology,variant,trial,seed,iic,steps_weaken,steps_remove,outcome,mean,std,wilcoxon_p\n";
    for (const auto& rec : report.trials) {
        os << rec.ontology << ',' << rec.variant << ',' << rec.trial << ',' << rec.seed << ',';
        if (rec.iic_value) os << rec.iic_value->to_decimal();
        os << ',' << rec.steps_weaken << ',' << rec.steps_remove << ',' << rec.outcome << ",,,\n";
    }
    for (const auto& agg : report.aggregates) {
        std::snprintf(buf, sizeof(buf), "%.6f", agg.mean);
        os << agg.ontology << ',' << agg.variant << ",,,,,," << "aggregate(n_ok=" << agg.n_ok
           << ";n_failed=" << agg.n_failed << ")," << (agg.n_ok ? buf : "");
        std::snprintf(buf, sizeof(buf), "%.6f", agg.stddev);
        os << ',' << (agg.n_ok ? buf : "") << ',';
        if (agg.wilcoxon_p) {
            std::snprintf(buf, sizeof(buf), "%.6g", *agg.wilcoxon_p);
            os << buf;
        }
        os << "\n";
    }
}

}  // namespace orep

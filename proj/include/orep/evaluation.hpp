#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orep/repair.hpp"

namespace orep {

// Exact rational in [0, 1]; IIC values are ratios of small set cardinalities
// and the antisymmetry identity IIC(a,b) = 1 - IIC(b,a) holds exactly in
// this representation.
struct Ratio {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Ratio of(std::int64_t num, std::int64_t den);
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string to_decimal(int digits = 6) const;

    friend bool operator==(const Ratio& a, const Ratio& b) { return a.num == b.num && a.den == b.den; }
};

// Inf(O) restricted to the given concept names: all pairs (A, B) with
// O ⊨ A ⊑ B, reflexive pairs included. Requires a consistent ontology
// (over an inconsistent one the set degenerates to all pairs).
std::vector<std::pair<std::string, std::string>> inferred_hierarchy(
    const Ontology& o, const std::vector<std::string>& signature, const ReasonerOptions& opts = {});

// Inferable information content of o1 w.r.t. o2 over the union of their
// concept names: |Inf1 \ Inf2| / (|Inf1 \ Inf2| + |Inf2 \ Inf1|), or 1/2
// when the Inf sets coincide.
Ratio iic(const Ontology& o1, const Ontology& o2, const ReasonerOptions& opts = {});

struct IICDetail {
    Ratio value;
    std::int64_t only_first = 0;   // |Inf(o1) \ Inf(o2)|
    std::int64_t only_second = 0;  // |Inf(o2) \ Inf(o1)|
};

IICDetail iic_detailed(const Ontology& o1, const Ontology& o2, const ReasonerOptions& opts = {});

struct InjectionConfig {
    unsigned max_depth = 3;
    bool allow_negation = true;
    unsigned max_attempts = 10'000;
    ReasonerOptions reasoner;
};

// Appends random GCIs over o's signature until the result is inconsistent.
// Returns the inconsistent ontology together with the injected axioms.
// Throws InjectionError when max_attempts is exhausted.
std::pair<Ontology, std::vector<Axiom>> inject_inconsistency(const Ontology& o,
                                                             const InjectionConfig& cfg, Rng& rng);

struct WilcoxonResult {
    double w_plus = 0;       // sum of ranks of positive differences
    double p_one_sided = 1;  // P(W+ >= observed) under the signed-rank null
    unsigned n_used = 0;     // non-zero differences after discarding ties with mu0
    bool exact = true;       // exact enumeration (n <= 12) vs normal approximation
};

// One-sided Wilcoxon signed-rank test against the alternative
// "median > mu0". Ties with mu0 are discarded; tied magnitudes get average
// ranks. Exact enumeration of all sign assignments for n <= 12, normal
// approximation with tie correction above. Throws TooFewSamplesError when
// fewer than 3 non-zero differences remain.
WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& values, double mu0);

struct TrialRecord {
    std::string ontology;
    std::string variant;  // "mis" or "rand"
    unsigned trial = 0;
    std::uint64_t seed = 0;
    std::optional<Ratio> iic_value;
    std::uint64_t steps_weaken = 0;
    std::uint64_t steps_remove = 0;
    std::string outcome;  // "ok", "weaken-step-limit", "inject-failed", "error: ..."
};

struct AggregateRecord {
    std::string ontology;
    std::string variant;
    unsigned n_ok = 0;
    unsigned n_failed = 0;
    double mean = 0;
    double stddev = 0;
    std::optional<double> wilcoxon_p;  // absent when too few informative trials
};

struct IICReport {
    std::uint64_t master_seed = 0;
    std::vector<TrialRecord> trials;
    std::vector<AggregateRecord> aggregates;
};

struct ExperimentConfig {
    std::vector<BadAxiomHeuristic> variants{BadAxiomHeuristic::Mis, BadAxiomHeuristic::Rand};
    std::uint64_t master_seed = 0;
    std::optional<std::uint64_t> max_steps;  // per repair run; default 10 * axiom count
    unsigned mis_samples_auto_min = 1;
    InjectionConfig injection;
    ReasonerOptions reasoner;
    unsigned jobs = 1;  // trial-level parallelism; results are fold-order deterministic
};

// Per ontology and variant: inject an inconsistency, repair by weakening and
// by removal (both using the original ontology as explicit reference for the
// weakening), then score IIC(weaken-result, remove-result). Failed trials
// are recorded and excluded from the aggregates. Identical configurations
// produce identical reports, serial or parallel.
IICReport run_experiment(const std::vector<std::pair<std::string, Ontology>>& corpus, unsigned trials,
                         const ExperimentConfig& cfg);

// CSV with one row per trial and one aggregate row per (ontology, variant);
// the header comment documents the seed and the Holm-Bonferroni
// post-processing formula for cross-ontology correction.
void write_report_csv(std::ostream& os, const IICReport& report);

}  // namespace orep

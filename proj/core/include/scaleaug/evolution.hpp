#ifndef SCALEAUG_EVOLUTION_HPP
#define SCALEAUG_EVOLUTION_HPP

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "scaleaug/metric.hpp"
#include "scaleaug/policy.hpp"
#include "scaleaug/random.hpp"

namespace scaleaug {

// ---------------------------------------------------------------------------
// Evolutionary policy search
//
// Generational loop over 37-gene genomes: generation 0 is sampled uniformly
// from the searched space; every later generation is produced by uniform
// gene-wise crossover of two random top-k parents followed by per-gene
// mutation.  A global best (smallest metric, ties to the earlier evaluation)
// accumulates across generations.  Evaluators plug in behind a single-method
// interface: a deterministic surrogate for tests and an external-process
// protocol for real training.
// ---------------------------------------------------------------------------

/// Search hyper-parameters.
struct SearchConfig {
    int population_size = 50;
    int top_k = 10;               ///< parents selected per generation
    int iterations = 10;          ///< generations in total, the first being random
    double mutation_rate = 0.05;  ///< per-gene resampling probability
    std::uint64_t seed = 0;
    int parallelism = 1;          ///< concurrent evaluator invocations

    friend bool operator==(const SearchConfig&, const SearchConfig&) = default;
};

/// Throws ValidationError unless 0 < top_k <= population_size,
/// mutation_rate in (0, 1], iterations >= 0 and parallelism >= 1.
void validate_config(const SearchConfig& config);

/// Parses a search-config document; unknown fields raise ParseError.
/// All fields are optional and default as in SearchConfig.
[[nodiscard]] SearchConfig parse_search_config(const std::string& text);

// --------------------------------------------------------------------------
// Evaluators
// --------------------------------------------------------------------------

/// Boundary behind which a candidate policy is scored.  Implementations may
/// be slow and may fail; failures are reported by throwing EvaluationError.
class Evaluator {
 public:
    virtual ~Evaluator() = default;

    [[nodiscard]] virtual ScaleStats evaluate(const Policy& policy) = 0;
};

/// Builds the deterministic stats a surrogate run reports for a candidate at
/// normalized Hamming distance d = hamming/37 from the target:
/// losses {1+d, 1, 1-0.5d}; ap_after.small = ap_before.small * (1 - 0.5d).
/// The resulting metric is 0 iff d = 0 and strictly increases with d.
[[nodiscard]] ScaleStats surrogate_stats(const Genome& candidate, const Genome& target);

/// Deterministic test evaluator with a hidden target genome.
class SurrogateEvaluator : public Evaluator {
 public:
    explicit SurrogateEvaluator(Genome target) : target_(target) {}

    [[nodiscard]] ScaleStats evaluate(const Policy& policy) override {
        return surrogate_stats(encode_policy(policy), target_);
    }

    [[nodiscard]] const Genome& target() const { return target_; }

 private:
    Genome target_;
};

/// Runs an external command per candidate.  The command template must
/// contain the placeholders `{policy}` and `{stats}`; they are substituted
/// with a freshly written policy file and the expected stats output path
/// inside `workdir`.  Nonzero exit status, timeout (timeout_seconds > 0), or
/// a malformed stats document raise EvaluationError.
class ExternalEvaluator : public Evaluator {
 public:
    ExternalEvaluator(std::string command_template, std::filesystem::path workdir,
                      double timeout_seconds = 0.0);

    [[nodiscard]] ScaleStats evaluate(const Policy& policy) override;

 private:
    std::string command_template_;
    std::filesystem::path workdir_;
    double timeout_seconds_;
    std::atomic<std::uint64_t> invocation_count_{0};
};

// --------------------------------------------------------------------------
// Operators and the search loop
// --------------------------------------------------------------------------

/// Per-gene mutation: with probability `rate` a gene is resampled uniformly
/// from its searched value grid (possibly drawing the same value).
[[nodiscard]] Genome mutate(const Genome& g, double rate, Rng& rng);

/// Uniform gene-wise crossover: each gene comes from `a` or `b` with equal
/// probability.
[[nodiscard]] Genome crossover(const Genome& a, const Genome& b, Rng& rng);

/// One evaluated genome.  For successful evaluations, `metric` equals
/// pareto_scale_balance(stats); failed evaluations carry `failed = true`,
/// zeroed stats, and an infinite metric value.
struct EvaluationRecord {
    Genome genome{};
    ScaleStats stats;
    MetricValue metric;
    int generation = 0;
    bool failed = false;
};

struct SearchResult {
    Policy best_policy;
    Genome best_genome{};
    MetricValue best_metric;
    std::vector<EvaluationRecord> history;  ///< population_size x generations entries
};

/// Invoked once per evaluation, in deterministic submission order (suitable
/// for streaming a history log).
using EvaluationCallback = std::function<void(const EvaluationRecord&)>;

/// Runs the generational search.  iterations = 0 behaves as 1: the initial
/// random generation is always sampled and evaluated, and its best returned.
/// Evaluator failures score +infinity and the search continues; if an entire
/// generation fails, EvaluationError is thrown.
[[nodiscard]] SearchResult run_search(const SearchConfig& config, Evaluator& evaluator,
                                      const EvaluationCallback& on_evaluation = {});

}  // namespace scaleaug

#endif  // SCALEAUG_EVOLUTION_HPP

#include "scaleaug/evolution.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include <json.hpp>

#include <csignal>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include "scaleaug/error.hpp"

namespace scaleaug {

namespace {

using nlohmann::ordered_json;

/// Replaces every occurrence of `placeholder` in `text`; returns the count.
int substitute_all(std::string& text, const std::string& placeholder,
                   const std::string& value) {
    int count = 0;
    std::size_t pos = 0;
    while ((pos = text.find(placeholder, pos)) != std::string::npos) {
        text.replace(pos, placeholder.size(), value);
        pos += value.size();
        ++count;
    }
    return count;
}

/// Runs a shell command in its own process group, enforcing an optional
/// timeout (seconds; <= 0 disables).  Returns the exit status.  Throws
/// EvaluationError on timeout or spawn failure.
int run_command(const std::string& command, double timeout_seconds) {
    const pid_t pid = fork();
    if (pid < 0) {
        throw EvaluationError("evaluator: fork failed");
    }
    if (pid == 0) {
        // Child: new process group so a timeout can kill the whole tree.
        setpgid(0, 0);
        execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
        _exit(127);
    }

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(timeout_seconds));
    int status = 0;
    while (true) {
        const pid_t r = waitpid(pid, &status, timeout_seconds > 0.0 ? WNOHANG : 0);
        if (r == pid) {
            break;
        }
        if (r < 0) {
            throw EvaluationError("evaluator: waitpid failed");
        }
        if (timeout_seconds > 0.0 && std::chrono::steady_clock::now() >= deadline) {
            kill(-pid, SIGKILL);
            waitpid(pid, &status, 0);
            throw EvaluationError("evaluator: command timed out after " +
                                  std::to_string(timeout_seconds) + " s");
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    if (WIFSIGNALED(status)) {
        throw EvaluationError("evaluator: command killed by signal " +
                              std::to_string(WTERMSIG(status)));
    }
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

void validate_config(const SearchConfig& config) {
    if (config.population_size < 1) {
        throw ValidationError("search config: population_size must be >= 1");
    }
    if (config.top_k < 1 || config.top_k > config.population_size) {
        throw ValidationError("search config: top_k must satisfy 0 < top_k <= population_size");
    }
    if (!(config.mutation_rate > 0.0 && config.mutation_rate <= 1.0)) {
        throw ValidationError("search config: mutation_rate must lie in (0, 1]");
    }
    if (config.iterations < 0) {
        throw ValidationError("search config: iterations must be >= 0");
    }
    if (config.parallelism < 1) {
        throw ValidationError("search config: parallelism must be >= 1");
    }
}

SearchConfig parse_search_config(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError("search config", e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("search config", "expected an object");
    }

    SearchConfig config;
    for (const auto& [key, value] : doc.items()) {
        const std::string path = "search config." + key;
        const auto as_int = [&](int lo) {
            if (!value.is_number_integer()) {
                throw ParseError(path, "expected an integer");
            }
            const long long v = value.get<long long>();
            if (v < lo) {
                throw ParseError(path, "must be >= " + std::to_string(lo));
            }
            return static_cast<int>(v);
        };
        if (key == "population_size") {
            config.population_size = as_int(1);
        } else if (key == "top_k") {
            config.top_k = as_int(1);
        } else if (key == "iterations") {
            config.iterations = as_int(0);
        } else if (key == "mutation_rate") {
            if (!value.is_number()) {
                throw ParseError(path, "expected a number");
            }
            config.mutation_rate = value.get<double>();
        } else if (key == "seed") {
            if (!value.is_number_integer()) {
                throw ParseError(path, "expected an integer");
            }
            config.seed = value.get<std::uint64_t>();
        } else if (key == "parallelism") {
            config.parallelism = as_int(1);
        } else {
            throw ParseError(path, "unknown field");
        }
    }
    validate_config(config);
    return config;
}

// ---------------------------------------------------------------------------
// Surrogate evaluator
// ---------------------------------------------------------------------------

ScaleStats surrogate_stats(const Genome& candidate, const Genome& target) {
    const double d = static_cast<double>(hamming_distance(candidate, target)) /
                     static_cast<double>(kGenomeLength);
    ScaleStats stats;
    stats.losses = ScaleTriple{1.0 + d, 1.0, 1.0 - 0.5 * d};
    stats.ap_before = ScaleTriple{0.4, 0.5, 0.6};
    stats.ap_after = ScaleTriple{0.4 * (1.0 - 0.5 * d), 0.5, 0.6};
    stats.overall_ap_after =
        (stats.ap_after.small + stats.ap_after.middle + stats.ap_after.large) / 3.0;
    return stats;
}

// ---------------------------------------------------------------------------
// External evaluator
// ---------------------------------------------------------------------------

ExternalEvaluator::ExternalEvaluator(std::string command_template,
                                     std::filesystem::path workdir, double timeout_seconds)
    : command_template_(std::move(command_template)),
      workdir_(std::move(workdir)),
      timeout_seconds_(timeout_seconds) {
    if (command_template_.find("{policy}") == std::string::npos ||
        command_template_.find("{stats}") == std::string::npos) {
        throw ValidationError(
            "evaluator command template must contain the {policy} and {stats} placeholders");
    }
}

ScaleStats ExternalEvaluator::evaluate(const Policy& policy) {
    const std::uint64_t n = invocation_count_.fetch_add(1);
    std::error_code ec;
    std::filesystem::create_directories(workdir_, ec);
    const std::filesystem::path policy_path =
        workdir_ / ("candidate_" + std::to_string(n) + ".json");
    const std::filesystem::path stats_path =
        workdir_ / ("stats_" + std::to_string(n) + ".json");

    {
        std::ofstream out(policy_path);
        if (!out) {
            throw EvaluationError("evaluator: cannot write " + policy_path.string());
        }
        out << serialize_policy(policy);
    }
    std::filesystem::remove(stats_path, ec);

    std::string command = command_template_;
    substitute_all(command, "{policy}", policy_path.string());
    substitute_all(command, "{stats}", stats_path.string());

    const int status = run_command(command, timeout_seconds_);
    if (status != 0) {
        throw EvaluationError("evaluator: command exited with status " +
                              std::to_string(status));
    }

    std::ifstream in(stats_path);
    if (!in) {
        throw EvaluationError("evaluator: no stats document at " + stats_path.string());
    }
    const std::string text((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
    try {
        return parse_stats(text);
    } catch (const Error& e) {
        throw EvaluationError(std::string("evaluator: invalid stats document: ") + e.what());
    }
}

// ---------------------------------------------------------------------------
// Operators
// ---------------------------------------------------------------------------

Genome mutate(const Genome& g, double rate, Rng& rng) {
    Genome out = g;
    for (int i = 0; i < kGenomeLength; ++i) {
        if (rng.uniform_unit() < rate) {
            const std::vector<int>& values = gene_search_values(i);
            out[static_cast<std::size_t>(i)] =
                values[static_cast<std::size_t>(rng.uniform_index(values.size()))];
        }
    }
    return out;
}

Genome crossover(const Genome& a, const Genome& b, Rng& rng) {
    Genome out{};
    for (int i = 0; i < kGenomeLength; ++i) {
        out[static_cast<std::size_t>(i)] =
            (rng.uniform_index(2) == 0) ? a[static_cast<std::size_t>(i)]
                                        : b[static_cast<std::size_t>(i)];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Search loop
// ---------------------------------------------------------------------------

namespace {

/// Evaluates one genome, converting evaluator failures into failed records.
[[nodiscard]] EvaluationRecord evaluate_one(const Genome& genome, int generation,
                                            Evaluator& evaluator) {
    EvaluationRecord record;
    record.genome = genome;
    record.generation = generation;
    try {
        record.stats = evaluator.evaluate(decode_genome(genome));
        record.metric = pareto_scale_balance(record.stats);
    } catch (const EvaluationError&) {
        record.failed = true;
        record.metric.value = std::numeric_limits<double>::infinity();
        record.metric.std_component = std::numeric_limits<double>::infinity();
        record.metric.penalty_component = 1.0;
    }
    return record;
}

/// Evaluates a full generation, preserving submission order in the result.
[[nodiscard]] std::vector<EvaluationRecord> evaluate_generation(
    const std::vector<Genome>& population, int generation, Evaluator& evaluator,
    int parallelism) {
    std::vector<EvaluationRecord> records(population.size());
    if (parallelism <= 1 || population.size() <= 1) {
        for (std::size_t i = 0; i < population.size(); ++i) {
            records[i] = evaluate_one(population[i], generation, evaluator);
        }
        return records;
    }

    std::atomic<std::size_t> next{0};
    const int workers =
        std::min<int>(parallelism, static_cast<int>(population.size()));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            while (true) {
                const std::size_t i = next.fetch_add(1);
                if (i >= population.size()) {
                    return;
                }
                records[i] = evaluate_one(population[i], generation, evaluator);
            }
        });
    }
    for (std::thread& t : pool) {
        t.join();
    }
    return records;
}

}  // namespace

SearchResult run_search(const SearchConfig& config, Evaluator& evaluator,
                        const EvaluationCallback& on_evaluation) {
    validate_config(config);
    // The initial random generation is always sampled and evaluated;
    // iterations = 0 therefore behaves as a single generation.
    const int generations = std::max(1, config.iterations);
    const std::size_t population_size = static_cast<std::size_t>(config.population_size);

    Rng rng(config.seed);
    std::vector<Genome> population(population_size);
    for (Genome& g : population) {
        g = random_genome(rng);
    }

    SearchResult result;
    result.history.reserve(population_size * static_cast<std::size_t>(generations));
    bool have_best = false;

    for (int generation = 0; generation < generations; ++generation) {
        std::vector<EvaluationRecord> records =
            evaluate_generation(population, generation, evaluator, config.parallelism);

        std::size_t failures = 0;
        for (const EvaluationRecord& record : records) {
            failures += record.failed ? 1 : 0;
            if (on_evaluation) {
                on_evaluation(record);
            }
            // Global best: strictly smaller metric wins, so earlier
            // evaluations keep ties (stable accumulator).
            if (!record.failed && (!have_best || record.metric.value < result.best_metric.value)) {
                have_best = true;
                result.best_genome = record.genome;
                result.best_metric = record.metric;
            }
            result.history.push_back(record);
        }
        if (failures == records.size()) {
            throw EvaluationError("all " + std::to_string(records.size()) +
                                  " evaluations failed in generation " +
                                  std::to_string(generation));
        }

        if (generation + 1 == generations) {
            break;
        }

        // Select the top_k metric-smallest members of this generation (ties
        // to the earlier index) as parents.
        std::vector<std::size_t> order(records.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (records[a].metric.value != records[b].metric.value) {
                return records[a].metric.value < records[b].metric.value;
            }
            return a < b;
        });
        std::vector<Genome> parents;
        parents.reserve(static_cast<std::size_t>(config.top_k));
        for (int k = 0; k < config.top_k; ++k) {
            parents.push_back(population[order[static_cast<std::size_t>(k)]]);
        }

        // Full replacement: every next-generation member is bred from two
        // random parents (drawn with replacement) and then mutated.
        std::vector<Genome> next_population(population_size);
        for (Genome& child : next_population) {
            const Genome& a = parents[static_cast<std::size_t>(
                rng.uniform_index(static_cast<std::uint64_t>(config.top_k)))];
            const Genome& b = parents[static_cast<std::size_t>(
                rng.uniform_index(static_cast<std::uint64_t>(config.top_k)))];
            child = mutate(crossover(a, b, rng), config.mutation_rate, rng);
        }
        population = std::move(next_population);
    }

    result.best_policy = decode_genome(result.best_genome);
    return result;
}

}  // namespace scaleaug

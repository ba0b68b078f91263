#include "proxyvote/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>

#include "proxyvote/decision.hpp"
#include "proxyvote/errors.hpp"

namespace proxyvote {

namespace {

// Stream tags keep the fixed network's stream apart from trial streams.
constexpr std::uint64_t kFixedNetworkTag = 0;
constexpr std::uint64_t kTrialTag = 1;

std::vector<std::size_t> sorted_sizes(const ExperimentConfig& config) {
    auto sizes = config.active_sizes;
    std::sort(sizes.begin(), sizes.end());
    sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
    return sizes;
}

struct MeanStderr {
    double mean;
    double stderr_;
};

template <typename Get>
MeanStderr mean_stderr(std::span<const TrialOutcome> outcomes, Get get) {
    const double count = static_cast<double>(outcomes.size());
    double sum = 0.0;
    for (const auto& o : outcomes) sum += get(o);
    const double mean = sum / count;
    if (outcomes.size() < 2) return {mean, 0.0};
    double sq = 0.0;
    for (const auto& o : outcomes) {
        const double d = get(o) - mean;
        sq += d * d;
    }
    const double sd = std::sqrt(sq / (count - 1.0));
    return {mean, sd / std::sqrt(count)};
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n < 2) throw InvalidInput("n must be >= 2");
    if (k < 1 || k > n - 1) {
        throw InvalidInput("k=" + std::to_string(k) + " must lie in [1, " + std::to_string(n - 1) +
                           "]");
    }
    if (trials < 1) throw InvalidInput("trials must be >= 1");
    if (active_sizes.empty()) throw InvalidInput("no active sizes requested");
    for (std::size_t a : active_sizes) {
        if (a < 1 || a > n) {
            throw InvalidInput("active size " + std::to_string(a) + " outside [1, " +
                               std::to_string(n) + "]");
        }
    }
    propagation.validate();
}

TrialOutcome evaluate_instance(const TrustNetwork& network, const ActiveSet& active,
                               const PropagationConfig& propagation, WeightSolver solver) {
    const WeightVector weights =
        solver == WeightSolver::exact
            ? compute_weights_exact(network, active, propagation.stranded_policy)
            : compute_weights_iterative(network, active, propagation);
    const DecisionReport report = decide(network, active, &weights);
    return {report.error_traditional, *report.error_weighted, weights.stranded_mass > 0.0};
}

TrustNetwork experiment_network(const ExperimentConfig& config) {
    auto rng = RandomStream::derive(config.master_seed, kFixedNetworkTag, 0, 0);
    return generate_network(config.n, config.k, rng);
}

TrialOutcome run_trial(const ExperimentConfig& config, std::size_t active_size,
                       std::size_t trial_index, const TrustNetwork* fixed) {
    if (active_size < 1 || active_size > config.n) {
        throw InvalidInput("active size " + std::to_string(active_size) + " outside [1, " +
                           std::to_string(config.n) + "]");
    }
    auto rng = RandomStream::derive(config.master_seed, kTrialTag, active_size, trial_index);
    TrustNetwork fresh;
    if (fixed == nullptr) {
        fresh = config.fresh_network_per_trial ? generate_network(config.n, config.k, rng)
                                               : experiment_network(config);
        fixed = &fresh;
    }
    std::vector<NodeId> members;
    for (std::size_t id : sample_without_replacement(fixed->size(), active_size, rng)) {
        members.emplace_back(id);
    }
    const ActiveSet active(std::move(members), fixed->size());
    return evaluate_instance(*fixed, active, config.propagation, config.solver);
}

ResultRow summarize(std::size_t active_size, std::span<const TrialOutcome> outcomes) {
    if (outcomes.empty()) throw InvalidInput("cannot summarize zero trials");
    const auto trad = mean_stderr(outcomes, [](const TrialOutcome& o) { return o.err_traditional; });
    const auto wtd = mean_stderr(outcomes, [](const TrialOutcome& o) { return o.err_weighted; });
    std::size_t stranded = 0;
    for (const auto& o : outcomes) stranded += o.stranded ? 1 : 0;
    return {active_size,
            outcomes.size(),
            trad.mean,
            trad.stderr_,
            wtd.mean,
            wtd.stderr_,
            static_cast<double>(stranded) / static_cast<double>(outcomes.size())};
}

ExperimentResult run_experiment_serial(const ExperimentConfig& config) {
    config.validate();
    const auto sizes = sorted_sizes(config);
    std::optional<TrustNetwork> shared;
    if (!config.fresh_network_per_trial) shared = experiment_network(config);
    const TrustNetwork* fixed = shared ? &*shared : nullptr;

    ExperimentResult result{config, {}};
    std::vector<TrialOutcome> outcomes(config.trials);
    for (std::size_t size : sizes) {
        for (std::size_t t = 0; t < config.trials; ++t) {
            outcomes[t] = run_trial(config, size, t, fixed);
        }
        result.rows.push_back(summarize(size, outcomes));
    }
    return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();
    const auto sizes = sorted_sizes(config);
    std::optional<TrustNetwork> shared;
    if (!config.fresh_network_per_trial) shared = experiment_network(config);
    const TrustNetwork* fixed = shared ? &*shared : nullptr;

    const auto trials = static_cast<std::int64_t>(config.trials);
    const auto total = static_cast<std::int64_t>(sizes.size()) * trials;
    std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(total));

    // Exceptions cannot cross the parallel region. Keep the one from the
    // lowest job index so the reported error does not depend on scheduling.
    std::exception_ptr first_error;
    std::int64_t first_error_job = total;

#pragma omp parallel for schedule(dynamic, 64)
    for (std::int64_t job = 0; job < total; ++job) {
        const auto size = sizes[static_cast<std::size_t>(job / trials)];
        const auto trial = static_cast<std::size_t>(job % trials);
        try {
            outcomes[static_cast<std::size_t>(job)] = run_trial(config, size, trial, fixed);
        } catch (...) {
#pragma omp critical(proxyvote_trial_error)
            {
                if (job < first_error_job) {
                    first_error_job = job;
                    first_error = std::current_exception();
                }
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);

    ExperimentResult result{config, {}};
    const std::span<const TrialOutcome> all(outcomes);
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        result.rows.push_back(summarize(sizes[i], all.subspan(i * config.trials, config.trials)));
    }
    return result;
}

double analytic_traditional_error(std::size_t active_size, std::size_t n) {
    if (active_size < 1 || active_size > n) {
        throw InvalidInput("active size " + std::to_string(active_size) + " outside [1, " +
                           std::to_string(n) + "]");
    }
    if (active_size == n) return 0.0;
    const double variance =
        (1.0 / 12.0) * (1.0 / static_cast<double>(active_size) - 1.0 / static_cast<double>(n));
    return std::sqrt(2.0 / std::numbers::pi) * std::sqrt(variance);
}

}  // namespace proxyvote

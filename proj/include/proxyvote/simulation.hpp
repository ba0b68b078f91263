#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "proxyvote/delegation.hpp"
#include "proxyvote/trust_network.hpp"

namespace proxyvote {

enum class WeightSolver { iterative, exact };

struct ExperimentConfig {
    std::size_t n = 100;
    std::size_t k = 3;
    std::size_t trials = 10'000;
    std::vector<std::size_t> active_sizes;
    std::uint64_t master_seed = 1;
    PropagationConfig propagation{.stranded_policy = StrandedPolicy::uniform_to_active};
    bool fresh_network_per_trial = true;
    WeightSolver solver = WeightSolver::iterative;

    /// Throws InvalidInput on any out-of-range field.
    void validate() const;
};

struct TrialOutcome {
    double err_traditional = 0.0;
    double err_weighted = 0.0;
    bool stranded = false;

    friend bool operator==(const TrialOutcome&, const TrialOutcome&) = default;
};

struct ResultRow {
    std::size_t active_size = 0;
    std::size_t trials = 0;
    double mean_err_traditional = 0.0;
    double stderr_traditional = 0.0;
    double mean_err_weighted = 0.0;
    double stderr_weighted = 0.0;
    double stranded_fraction = 0.0;

    friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

struct ExperimentResult {
    ExperimentConfig config;
    /// One row per distinct active size, ascending.
    std::vector<ResultRow> rows;
};

/// Both decision errors for one network and active set.
TrialOutcome evaluate_instance(const TrustNetwork& network, const ActiveSet& active,
                               const PropagationConfig& propagation, WeightSolver solver);

/// The network shared by every trial when fresh_network_per_trial is false.
TrustNetwork experiment_network(const ExperimentConfig& config);

/// One trial, drawing from the stream keyed by (master_seed, active_size,
/// trial_index). `fixed` is used instead of a fresh network when given.
TrialOutcome run_trial(const ExperimentConfig& config, std::size_t active_size,
                       std::size_t trial_index, const TrustNetwork* fixed = nullptr);

/// Mean and standard error per method, in trial order.
ResultRow summarize(std::size_t active_size, std::span<const TrialOutcome> outcomes);

/// Trials run in parallel with OpenMP; results are bit-identical to
/// run_experiment_serial for any thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

/// Single-threaded reference implementation.
ExperimentResult run_experiment_serial(const ExperimentConfig& config);

/// Normal approximation of E|group - expected| for i.i.d. uniform opinions:
/// sqrt(2/pi) * sqrt((1/12) * (1/active_size - 1/n)).
double analytic_traditional_error(std::size_t active_size, std::size_t n);

}  // namespace proxyvote

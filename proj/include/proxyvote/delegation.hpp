#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "proxyvote/trust_network.hpp"

namespace proxyvote {

/// What to do with trust units that can never reach an active node.
enum class StrandedPolicy {
    reject,            ///< throw StrandedTrustError
    uniform_to_active  ///< split stranded mass equally among active nodes
};

std::string_view to_string(StrandedPolicy policy) noexcept;
/// Accepts "reject", "uniform" and "uniform-to-active".
std::optional<StrandedPolicy> parse_stranded_policy(std::string_view text) noexcept;

struct PropagationConfig {
    double tolerance = 1e-9;
    std::size_t max_iterations = 10'000'000;
    StrandedPolicy stranded_policy = StrandedPolicy::reject;
    /// Keep the mobile-trust total after each sweep in WeightVector::residuals.
    bool record_residuals = false;

    /// Throws InvalidInput on tolerance <= 0 or max_iterations == 0.
    void validate() const;
};

/// Delegation weight per active node. `nodes` mirrors ActiveSet::members().
struct WeightVector {
    std::vector<NodeId> nodes;
    std::vector<double> weights;
    /// Trust mass that could not reach an active node and was redistributed
    /// by the stranded policy. Zero when nothing stranded.
    double stranded_mass = 0.0;
    /// Redistribution sweeps performed (iterative solver only).
    std::size_t iterations = 0;
    /// Mobile trust after each sweep, when requested.
    std::vector<double> residuals;

    double total() const noexcept;
    /// Throws InvalidInput if `id` has no weight.
    double weight_of(NodeId id) const;

    friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

struct ReachabilityPartition {
    /// Non-active nodes with a positive-trust path to some active node.
    std::vector<NodeId> transient;
    /// Non-active nodes with no such path. Dangling non-active nodes land here.
    std::vector<NodeId> stranded;
};

/// Requires a normalized network. Out-edges of active nodes are ignored.
ReachabilityPartition reachability_partition(const TrustNetwork& network,
                                             const ActiveSet& active);

/// Synchronous trust propagation: every node starts with one unit; each sweep
/// every transient node passes on what it received in the previous sweep,
/// split by normalized trust, while active nodes only collect. Stops once the
/// mobile total drops below config.tolerance.
///
/// Throws StrandedTrustError (policy reject, stranded set non-empty) or
/// NoConvergenceError (max_iterations reached).
WeightVector compute_weights_iterative(const TrustNetwork& network, const ActiveSet& active,
                                       const PropagationConfig& config);

/// Closed form of the same process: absorption probabilities of the absorbing
/// chain whose transient states are the transient nodes, from (I - Q) X = R.
WeightVector compute_weights_exact(const TrustNetwork& network, const ActiveSet& active,
                                   StrandedPolicy policy);

}  // namespace proxyvote

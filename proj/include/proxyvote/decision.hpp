#pragma once

#include <optional>

#include "proxyvote/delegation.hpp"
#include "proxyvote/trust_network.hpp"

namespace proxyvote {

struct DecisionReport {
    double group_decision = 0.0;
    double expected_decision = 0.0;
    std::optional<double> weighted_group_decision;
    double error_traditional = 0.0;
    std::optional<double> error_weighted;
};

/// Unweighted mean of the active members' opinions.
double group_decision(const TrustNetwork& network, const ActiveSet& active);

/// Mean opinion of the whole population. Throws InvalidInput on an empty network.
double expected_decision(const TrustNetwork& network);

/// (1/n) * sum over active p of weight(p) * opinion(p).
///
/// The divisor is the population size, not the weight total, so the weights
/// must conserve trust: |sum(weights) - n| <= conservation_tolerance, and
/// they must cover exactly the active set. Otherwise InvalidInput.
double weighted_group_decision(const TrustNetwork& network, const ActiveSet& active,
                               const WeightVector& weights,
                               double conservation_tolerance = 1e-6);

double decision_error(double outcome, double expected) noexcept;

DecisionReport decide(const TrustNetwork& network, const ActiveSet& active,
                      const WeightVector* weights = nullptr);

}  // namespace proxyvote

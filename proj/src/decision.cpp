#include "proxyvote/decision.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "proxyvote/errors.hpp"

namespace proxyvote {

double group_decision(const TrustNetwork& network, const ActiveSet& active) {
    double sum = 0.0;
    for (NodeId p : active.members()) sum += network.opinion(p);
    return sum / static_cast<double>(active.size());
}

double expected_decision(const TrustNetwork& network) {
    if (network.size() == 0) throw InvalidInput("expected decision of an empty network");
    double sum = 0.0;
    for (double v : network.opinions()) sum += v;
    return sum / static_cast<double>(network.size());
}

double weighted_group_decision(const TrustNetwork& network, const ActiveSet& active,
                               const WeightVector& weights, double conservation_tolerance) {
    if (weights.nodes.size() != weights.weights.size() ||
        !std::equal(weights.nodes.begin(), weights.nodes.end(), active.members().begin(),
                    active.members().end())) {
        throw InvalidInput("weight vector does not match the active set");
    }
    const double n = static_cast<double>(network.size());
    const double total = weights.total();
    if (!(std::fabs(total - n) <= conservation_tolerance)) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << total << " but the population is " << network.size();
        throw InvalidInput(os.str());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.nodes.size(); ++i) {
        sum += weights.weights[i] * network.opinion(weights.nodes[i]);
    }
    return sum / n;
}

double decision_error(double outcome, double expected) noexcept {
    return std::fabs(outcome - expected);
}

DecisionReport decide(const TrustNetwork& network, const ActiveSet& active,
                      const WeightVector* weights) {
    DecisionReport r;
    r.group_decision = group_decision(network, active);
    r.expected_decision = expected_decision(network);
    r.error_traditional = decision_error(r.group_decision, r.expected_decision);
    if (weights != nullptr) {
        r.weighted_group_decision = weighted_group_decision(network, active, *weights);
        r.error_weighted = decision_error(*r.weighted_group_decision, r.expected_decision);
    }
    return r;
}

}  // namespace proxyvote

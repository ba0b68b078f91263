#include "proxyvote/delegation.hpp"

#include <algorithm>
#include <cmath>

#include "proxyvote/dense_solver.hpp"
#include "proxyvote/errors.hpp"

namespace proxyvote {

namespace {

enum class NodeClass : unsigned char { active, transient, stranded };

void require_normalized(const TrustNetwork& network) {
    if (!network.is_normalized()) {
        throw InvalidInput("trust network must be normalized before propagation");
    }
}

void require_active_fits(const TrustNetwork& network, const ActiveSet& active) {
    if (active.members().back().value() >= network.size()) {
        throw InvalidInput("active set references node " +
                           std::to_string(active.members().back().value()) + " of a " +
                           std::to_string(network.size()) + "-node network");
    }
}

std::vector<NodeClass> classify(const TrustNetwork& network, const ActiveSet& active) {
    const std::size_t n = network.size();

    // Reverse adjacency over positive-trust edges leaving non-active nodes.
    std::vector<std::size_t> in_offsets(n + 1, 0);
    const auto is_active = active.mask(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (is_active[s]) continue;
        for (const auto& e : network.out_edges(NodeId(s))) {
            if (e.normalized_trust > 0.0) ++in_offsets[e.target.value() + 1];
        }
    }
    for (std::size_t i = 0; i < n; ++i) in_offsets[i + 1] += in_offsets[i];
    std::vector<std::size_t> in_sources(in_offsets[n]);
    auto fill = in_offsets;
    for (std::size_t s = 0; s < n; ++s) {
        if (is_active[s]) continue;
        for (const auto& e : network.out_edges(NodeId(s))) {
            if (e.normalized_trust > 0.0) in_sources[fill[e.target.value()]++] = s;
        }
    }

    std::vector<NodeClass> cls(n, NodeClass::stranded);
    std::vector<std::size_t> frontier;
    for (NodeId a : active.members()) {
        cls[a.value()] = NodeClass::active;
        frontier.push_back(a.value());
    }
    while (!frontier.empty()) {
        const std::size_t v = frontier.back();
        frontier.pop_back();
        for (std::size_t i = in_offsets[v]; i < in_offsets[v + 1]; ++i) {
            const std::size_t u = in_sources[i];
            if (cls[u] == NodeClass::stranded) {
                cls[u] = NodeClass::transient;
                frontier.push_back(u);
            }
        }
    }
    return cls;
}

WeightVector unit_weights(const ActiveSet& active) {
    WeightVector w;
    w.nodes.assign(active.members().begin(), active.members().end());
    w.weights.assign(w.nodes.size(), 1.0);
    return w;
}

[[noreturn]] void reject_stranded(const std::vector<NodeClass>& cls) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        if (cls[i] == NodeClass::stranded) ids.push_back(i);
    }
    throw StrandedTrustError(std::move(ids));
}

void spread_stranded(WeightVector& w, double mass) {
    w.stranded_mass = mass;
    if (mass == 0.0) return;
    const double share = mass / static_cast<double>(w.weights.size());
    for (double& x : w.weights) x += share;
}

}  // namespace

std::string_view to_string(StrandedPolicy policy) noexcept {
    switch (policy) {
        case StrandedPolicy::reject:
            return "reject";
        case StrandedPolicy::uniform_to_active:
            return "uniform";
    }
    return "unknown";
}

std::optional<StrandedPolicy> parse_stranded_policy(std::string_view text) noexcept {
    if (text == "reject") return StrandedPolicy::reject;
    if (text == "uniform" || text == "uniform-to-active") return StrandedPolicy::uniform_to_active;
    return std::nullopt;
}

void PropagationConfig::validate() const {
    if (!(tolerance > 0.0)) throw InvalidInput("tolerance must be > 0");
    if (max_iterations < 1) throw InvalidInput("max_iterations must be >= 1");
}

double WeightVector::total() const noexcept {
    double sum = 0.0;
    for (double x : weights) sum += x;
    return sum;
}

double WeightVector::weight_of(NodeId id) const {
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), id);
    if (it == nodes.end() || *it != id) {
        throw InvalidInput("node " + std::to_string(id.value()) + " has no delegation weight");
    }
    return weights[static_cast<std::size_t>(it - nodes.begin())];
}

ReachabilityPartition reachability_partition(const TrustNetwork& network,
                                             const ActiveSet& active) {
    require_normalized(network);
    require_active_fits(network, active);
    const auto cls = classify(network, active);
    ReachabilityPartition part;
    for (std::size_t i = 0; i < cls.size(); ++i) {
        if (cls[i] == NodeClass::transient) part.transient.emplace_back(i);
        if (cls[i] == NodeClass::stranded) part.stranded.emplace_back(i);
    }
    return part;
}

WeightVector compute_weights_iterative(const TrustNetwork& network, const ActiveSet& active,
                                       const PropagationConfig& config) {
    config.validate();
    require_normalized(network);
    require_active_fits(network, active);

    const std::size_t n = network.size();
    const auto cls = classify(network, active);
    std::vector<std::size_t> transient;
    std::size_t stranded_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] == NodeClass::transient) transient.push_back(i);
        if (cls[i] == NodeClass::stranded) ++stranded_count;
    }
    if (stranded_count > 0 && config.stranded_policy == StrandedPolicy::reject) {
        reject_stranded(cls);
    }

    // Slot of each active node inside WeightVector::weights.
    std::vector<std::size_t> slot(n, 0);
    for (std::size_t i = 0; i < active.size(); ++i) slot[active.members()[i].value()] = i;

    WeightVector w = unit_weights(active);
    std::vector<double> held(n, 0.0);
    std::vector<double> incoming(n, 0.0);
    for (std::size_t t : transient) held[t] = 1.0;

    double stranded = static_cast<double>(stranded_count);
    double residual = static_cast<double>(transient.size());
    std::size_t sweeps = 0;
    while (residual >= config.tolerance) {
        if (sweeps == config.max_iterations) throw NoConvergenceError(sweeps, residual);
        for (std::size_t t : transient) {
            const double mass = held[t];
            if (mass == 0.0) continue;
            for (const auto& e : network.out_edges(NodeId(t))) {
                const double share = mass * e.normalized_trust;
                const std::size_t dst = e.target.value();
                switch (cls[dst]) {
                    case NodeClass::active:
                        w.weights[slot[dst]] += share;
                        break;
                    case NodeClass::transient:
                        incoming[dst] += share;
                        break;
                    case NodeClass::stranded:
                        stranded += share;
                        break;
                }
            }
        }
        residual = 0.0;
        for (std::size_t t : transient) {
            held[t] = incoming[t];
            incoming[t] = 0.0;
            residual += held[t];
        }
        ++sweeps;
        if (config.record_residuals) w.residuals.push_back(residual);
    }

    w.iterations = sweeps;
    spread_stranded(w, stranded);
    return w;
}

WeightVector compute_weights_exact(const TrustNetwork& network, const ActiveSet& active,
                                   StrandedPolicy policy) {
    require_normalized(network);
    require_active_fits(network, active);

    const std::size_t n = network.size();
    const auto cls = classify(network, active);

    std::vector<std::size_t> row_of(n, 0);
    std::vector<std::size_t> transient;
    std::size_t stranded_count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (cls[i] == NodeClass::transient) {
            row_of[i] = transient.size();
            transient.push_back(i);
        }
        if (cls[i] == NodeClass::stranded) ++stranded_count;
    }
    if (stranded_count > 0 && policy == StrandedPolicy::reject) reject_stranded(cls);
    WeightVector w = unit_weights(active);
    if (transient.empty()) {
        spread_stranded(w, static_cast<double>(stranded_count));
        return w;
    }

    std::vector<std::size_t> col_of(n, 0);
    for (std::size_t i = 0; i < active.size(); ++i) col_of[active.members()[i].value()] = i;

    // Columns of R: one per active node, plus a sink column for flow into
    // stranded nodes.
    const std::size_t t_count = transient.size();
    const std::size_t sink = active.size();
    DenseMatrix lhs = DenseMatrix::identity(t_count);
    DenseMatrix rhs(t_count, active.size() + 1);
    for (std::size_t r = 0; r < t_count; ++r) {
        for (const auto& e : network.out_edges(NodeId(transient[r]))) {
            const std::size_t dst = e.target.value();
            switch (cls[dst]) {
                case NodeClass::transient:
                    lhs(r, row_of[dst]) -= e.normalized_trust;
                    break;
                case NodeClass::active:
                    rhs(r, col_of[dst]) += e.normalized_trust;
                    break;
                case NodeClass::stranded:
                    rhs(r, sink) += e.normalized_trust;
                    break;
            }
        }
    }

    const DenseMatrix absorbed = solve_dense(std::move(lhs), std::move(rhs));
    double stranded = static_cast<double>(stranded_count);
    for (std::size_t r = 0; r < t_count; ++r) {
        for (std::size_t c = 0; c < active.size(); ++c) w.weights[c] += absorbed(r, c);
        stranded += absorbed(r, sink);
    }
    spread_stranded(w, stranded);
    return w;
}

}  // namespace proxyvote

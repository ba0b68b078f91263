#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "proxyvote/delegation.hpp"
#include "proxyvote/errors.hpp"
#include "test_support.hpp"

using namespace proxyvote;

namespace {

TrustNetwork build(std::vector<double> opinions, std::vector<TrustEdge> edges) {
    return normalize_outgoing(TrustNetwork::from_edges(std::move(opinions), std::move(edges)))
        .network;
}

TrustEdge edge(std::size_t s, std::size_t t, double w) { return {NodeId(s), NodeId(t), w, 0.0}; }

PropagationConfig uniform_policy() {
    PropagationConfig c;
    c.stranded_policy = StrandedPolicy::uniform_to_active;
    return c;
}

}  // namespace

// --- reachability -----------------------------------------------------------

TEST(Reachability, FourNodeExample) {
    const auto part = reachability_partition(test::four_node_network(), test::four_node_active());
    EXPECT_EQ(part.transient, (std::vector<NodeId>{NodeId(0), NodeId(1)}));
    EXPECT_TRUE(part.stranded.empty());
}

TEST(Reachability, IsolatedNodeIsStranded) {
    const auto net = build({0.1, 0.2, 0.3}, {edge(0, 2, 1.0)});
    const auto part = reachability_partition(net, ActiveSet({NodeId(2)}, 3));
    EXPECT_EQ(part.transient, std::vector<NodeId>{NodeId(0)});
    EXPECT_EQ(part.stranded, std::vector<NodeId>{NodeId(1)});
}

TEST(Reachability, AllActiveLeavesNothing) {
    const auto net = test::four_node_network();
    const auto part = reachability_partition(
        net, ActiveSet({NodeId(0), NodeId(1), NodeId(2), NodeId(3)}, 4));
    EXPECT_TRUE(part.transient.empty());
    EXPECT_TRUE(part.stranded.empty());
}

TEST(Reachability, IgnoresZeroTrustEdges) {
    // 0 -> 1 has zero raw trust, so node 0 is dangling and cannot delegate.
    const auto net = build({0.0, 1.0}, {edge(0, 1, 0.0)});
    const auto part = reachability_partition(net, ActiveSet({NodeId(1)}, 2));
    EXPECT_EQ(part.stranded, std::vector<NodeId>{NodeId(0)});
}

TEST(Reachability, RequiresNormalizedNetwork) {
    const auto raw = TrustNetwork::from_edges({0.1, 0.2}, {edge(0, 1, 1.0)});
    EXPECT_THROW(reachability_partition(raw, ActiveSet({NodeId(1)}, 2)), InvalidInput);
}

// --- iterative ----------------------------------------------------------------

TEST(IterativeWeights, FourNodeExample) {
    const auto w = compute_weights_iterative(test::four_node_network(), test::four_node_active(),
                                             PropagationConfig{});
    EXPECT_NEAR(w.weight_of(NodeId(2)), 1.5, 1e-6);
    EXPECT_NEAR(w.weight_of(NodeId(3)), 2.5, 1e-6);
    EXPECT_EQ(w.stranded_mass, 0.0);
}

TEST(IterativeWeights, AllActiveIsIdentity) {
    const auto net = test::four_node_network();
    const auto w = compute_weights_iterative(
        net, ActiveSet({NodeId(0), NodeId(1), NodeId(2), NodeId(3)}, 4), PropagationConfig{});
    EXPECT_EQ(w.weights, std::vector<double>(4, 1.0));
    EXPECT_EQ(w.iterations, 0u);
}

TEST(IterativeWeights, ChainCollectsEverything) {
    const auto net = build({0.5, 0.5, 0.5}, {edge(0, 1, 1.0), edge(1, 2, 1.0)});
    const auto w = compute_weights_iterative(net, ActiveSet({NodeId(2)}, 3), PropagationConfig{});
    EXPECT_NEAR(w.weight_of(NodeId(2)), 3.0, 1e-9);
}

TEST(IterativeWeights, StrandedPairUnderUniformPolicy) {
    // x <-> y trust only each other, u and v are unreachable representatives.
    const auto net = build({0.1, 0.3, 0.5, 0.7}, {edge(0, 1, 0.8), edge(1, 0, 0.8)});
    const ActiveSet active({NodeId(2), NodeId(3)}, 4);
    const auto w = compute_weights_iterative(net, active, uniform_policy());
    EXPECT_NEAR(w.weight_of(NodeId(2)), 2.0, 1e-12);
    EXPECT_NEAR(w.weight_of(NodeId(3)), 2.0, 1e-12);
    EXPECT_DOUBLE_EQ(w.stranded_mass, 2.0);

    const auto exact = compute_weights_exact(net, active, StrandedPolicy::uniform_to_active);
    EXPECT_NEAR(exact.weight_of(NodeId(2)), 2.0, 1e-12);
    EXPECT_NEAR(exact.weight_of(NodeId(3)), 2.0, 1e-12);
}

TEST(IterativeWeights, StrandedPairRejectedByDefault) {
    const auto net = build({0.1, 0.3, 0.5, 0.7}, {edge(0, 1, 0.8), edge(1, 0, 0.8)});
    const ActiveSet active({NodeId(2), NodeId(3)}, 4);
    try {
        compute_weights_iterative(net, active, PropagationConfig{});
        FAIL() << "expected StrandedTrustError";
    } catch (const StrandedTrustError& e) {
        EXPECT_EQ(e.stranded_nodes(), (std::vector<std::size_t>{0, 1}));
    }
    EXPECT_THROW(compute_weights_exact(net, active, StrandedPolicy::reject), StrandedTrustError);
}

TEST(IterativeWeights, FlowIntoStrandedNodeIsRedistributed) {
    // 0 splits evenly between active 1 and dangling 2; 3 is an isolated
    // representative. Hand trace: stranded mass = 1 (node 2) + 0.5 (from 0),
    // split 0.75 / 0.75; so w1 = 1 + 0.5 + 0.75, w3 = 1 + 0.75.
    const auto net = build({0.5, 0.5, 0.5, 0.5}, {edge(0, 1, 0.5), edge(0, 2, 0.5)});
    const ActiveSet active({NodeId(1), NodeId(3)}, 4);
    const auto it = compute_weights_iterative(net, active, uniform_policy());
    const auto ex = compute_weights_exact(net, active, StrandedPolicy::uniform_to_active);
    for (const auto& w : {it, ex}) {
        EXPECT_NEAR(w.weight_of(NodeId(1)), 2.25, 1e-12);
        EXPECT_NEAR(w.weight_of(NodeId(3)), 1.75, 1e-12);
        EXPECT_NEAR(w.stranded_mass, 1.5, 1e-12);
    }
}

TEST(IterativeWeights, NoConvergenceWhenCapTooLow) {
    const auto net = build({0.5, 0.5, 0.5}, {edge(0, 1, 1.0), edge(1, 2, 1.0)});
    PropagationConfig c;
    c.max_iterations = 1;
    EXPECT_THROW(compute_weights_iterative(net, ActiveSet({NodeId(2)}, 3), c), NoConvergenceError);
    c.max_iterations = 2;
    EXPECT_NO_THROW(compute_weights_iterative(net, ActiveSet({NodeId(2)}, 3), c));
}

TEST(IterativeWeights, RejectsBadConfig) {
    PropagationConfig c;
    c.tolerance = 0.0;
    EXPECT_THROW(compute_weights_iterative(test::four_node_network(), test::four_node_active(), c),
                 InvalidInput);
    c = PropagationConfig{};
    c.max_iterations = 0;
    EXPECT_THROW(c.validate(), InvalidInput);
}

TEST(IterativeWeights, ActiveSetLargerThanNetworkRejected) {
    EXPECT_THROW(compute_weights_iterative(test::four_node_network(), ActiveSet({NodeId(7)}, 8),
                                           PropagationConfig{}),
                 InvalidInput);
}

TEST(IterativeWeights, ResidualIsMonotone) {
    RandomStream rng(31);
    for (int rep = 0; rep < 50; ++rep) {
        auto inst = test::random_instance(rng, 10, 80);
        auto c = uniform_policy();
        c.record_residuals = true;
        const auto w = compute_weights_iterative(inst.network, inst.active, c);
        double prev = static_cast<double>(inst.network.size());
        for (double r : w.residuals) {
            if (prev > 0.0) {
                EXPECT_LT(r, prev);
            } else {
                EXPECT_EQ(r, 0.0);
            }
            prev = r;
        }
    }
}

// --- exact ----------------------------------------------------------------------

TEST(ExactWeights, FourNodeExample) {
    const auto w = compute_weights_exact(test::four_node_network(), test::four_node_active(),
                                         StrandedPolicy::reject);
    EXPECT_NEAR(w.weight_of(NodeId(2)), 1.5, 1e-12);
    EXPECT_NEAR(w.weight_of(NodeId(3)), 2.5, 1e-12);
}

TEST(ExactWeights, StarCenterCollectsAllSpokes) {
    for (std::size_t spokes : {1u, 3u, 10u}) {
        std::vector<TrustEdge> edges;
        for (std::size_t s = 1; s <= spokes; ++s) edges.push_back(edge(s, 0, 0.9));
        const auto net = build(std::vector<double>(spokes + 1, 0.4), edges);
        const auto w = compute_weights_exact(net, ActiveSet({NodeId(0)}, spokes + 1),
                                             StrandedPolicy::reject);
        EXPECT_NEAR(w.weight_of(NodeId(0)), static_cast<double>(spokes + 1), 1e-12);
    }
}

TEST(ExactWeights, AgreesWithIterativeOnSeededNetwork) {
    RandomStream rng(50);
    const auto net = generate_network(50, 3, rng);
    std::vector<NodeId> members;
    for (auto id : sample_without_replacement(50, 5, rng)) members.emplace_back(id);
    const ActiveSet active(members, 50);
    const auto ex = compute_weights_exact(net, active, StrandedPolicy::uniform_to_active);
    const auto it = compute_weights_iterative(net, active, uniform_policy());
    ASSERT_EQ(ex.nodes, it.nodes);
    for (std::size_t i = 0; i < ex.weights.size(); ++i) {
        EXPECT_NEAR(ex.weights[i], it.weights[i], 1e-6);
    }
}

// --- properties -------------------------------------------------------------------

TEST(DelegationProperties, ConservationAndLowerBound) {
    RandomStream rng(1001);
    for (int rep = 0; rep < 300; ++rep) {
        auto inst = test::random_instance(rng);
        const double n = static_cast<double>(inst.network.size());
        const auto it = compute_weights_iterative(inst.network, inst.active, uniform_policy());
        const auto ex =
            compute_weights_exact(inst.network, inst.active, StrandedPolicy::uniform_to_active);
        EXPECT_LE(std::fabs(it.total() - n), 1e-6);
        EXPECT_LE(std::fabs(ex.total() - n), 1e-9);
        for (double w : it.weights) EXPECT_GE(w, 1.0 - 1e-9);
        for (double w : ex.weights) EXPECT_GE(w, 1.0 - 1e-9);
    }
}

TEST(DelegationProperties, OracleEquivalence) {
    RandomStream rng(2002);
    for (int rep = 0; rep < 200; ++rep) {
        auto inst = test::random_instance(rng);
        const auto it = compute_weights_iterative(inst.network, inst.active, uniform_policy());
        const auto ex =
            compute_weights_exact(inst.network, inst.active, StrandedPolicy::uniform_to_active);
        for (std::size_t i = 0; i < it.weights.size(); ++i) {
            ASSERT_NEAR(it.weights[i], ex.weights[i], 1e-6) << "instance " << rep;
        }
    }
}

TEST(DelegationProperties, PermutationEquivariance) {
    RandomStream rng(3003);
    for (int rep = 0; rep < 50; ++rep) {
        auto inst = test::random_instance(rng, 4, 60);
        const std::size_t n = inst.network.size();
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_index(i)]);

        std::vector<double> ops(n);
        for (std::size_t i = 0; i < n; ++i) ops[perm[i]] = inst.network.opinion(NodeId(i));
        std::vector<TrustEdge> edges;
        for (const auto& e : inst.network.edges()) {
            edges.push_back(edge(perm[e.source.value()], perm[e.target.value()], e.raw_trust));
        }
        const auto permuted = build(ops, edges);
        std::vector<NodeId> members;
        for (NodeId a : inst.active.members()) members.emplace_back(perm[a.value()]);
        const ActiveSet active(members, n);

        const auto before =
            compute_weights_exact(inst.network, inst.active, StrandedPolicy::uniform_to_active);
        const auto after = compute_weights_exact(permuted, active, StrandedPolicy::uniform_to_active);
        for (NodeId a : inst.active.members()) {
            EXPECT_NEAR(before.weight_of(a), after.weight_of(NodeId(perm[a.value()])), 1e-9);
        }
    }
}

TEST(DelegationProperties, RawScaleInvariance) {
    RandomStream rng(4004);
    for (int rep = 0; rep < 50; ++rep) {
        auto inst = test::random_instance(rng, 4, 60);
        const std::size_t scaled_node = rng.uniform_index(inst.network.size());
        const double c = 0.01 + 10.0 * rng.uniform01();
        std::vector<TrustEdge> edges;
        for (const auto& e : inst.network.edges()) {
            const double w = e.source.value() == scaled_node ? e.raw_trust * c : e.raw_trust;
            edges.push_back(edge(e.source.value(), e.target.value(), w));
        }
        std::vector<double> ops(inst.network.opinions().begin(), inst.network.opinions().end());
        const auto scaled = build(ops, edges);
        const auto a =
            compute_weights_exact(inst.network, inst.active, StrandedPolicy::uniform_to_active);
        const auto b = compute_weights_exact(scaled, inst.active, StrandedPolicy::uniform_to_active);
        for (std::size_t i = 0; i < a.weights.size(); ++i) {
            EXPECT_NEAR(a.weights[i], b.weights[i], 1e-9);
        }
    }
}

TEST(DelegationProperties, AllActiveIdentityOnRandomNetworks) {
    RandomStream rng(5005);
    for (int rep = 0; rep < 20; ++rep) {
        const std::size_t n = 2 + rng.uniform_index(50);
        const auto net = generate_network(n, 1, rng);
        std::vector<NodeId> all;
        for (std::size_t i = 0; i < n; ++i) all.emplace_back(i);
        const ActiveSet active(all, n);
        EXPECT_EQ(compute_weights_iterative(net, active, PropagationConfig{}).weights,
                  std::vector<double>(n, 1.0));
        EXPECT_EQ(compute_weights_exact(net, active, StrandedPolicy::reject).weights,
                  std::vector<double>(n, 1.0));
    }
}

TEST(StrandedPolicyText, ParsesKnownNames) {
    EXPECT_EQ(parse_stranded_policy("reject"), StrandedPolicy::reject);
    EXPECT_EQ(parse_stranded_policy("uniform"), StrandedPolicy::uniform_to_active);
    EXPECT_EQ(parse_stranded_policy("uniform-to-active"), StrandedPolicy::uniform_to_active);
    EXPECT_FALSE(parse_stranded_policy("drop").has_value());
    EXPECT_EQ(to_string(StrandedPolicy::reject), "reject");
}

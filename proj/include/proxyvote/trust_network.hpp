#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "proxyvote/random_stream.hpp"

namespace proxyvote {

/// Dense node index in [0, n).
struct NodeId {
    std::uint32_t index = 0;

    constexpr NodeId() = default;
    constexpr explicit NodeId(std::size_t i) : index(static_cast<std::uint32_t>(i)) {}

    constexpr std::size_t value() const noexcept { return index; }

    friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

/// An opinion in [0, 1]. Construction rejects anything else (including NaN).
class Opinion {
  public:
    explicit Opinion(double value);

    double value() const noexcept { return value_; }

  private:
    double value_;
};

/// Trust one individual places in another: 1 - |p - q|. Symmetric, in [0, 1].
double trust_value(Opinion p, Opinion q) noexcept;

struct TrustEdge {
    NodeId source;
    NodeId target;
    double raw_trust = 0.0;
    /// raw_trust divided by the source's total raw outgoing trust; 0 until
    /// the network has been normalized, and 0 on dangling nodes.
    double normalized_trust = 0.0;

    friend bool operator==(const TrustEdge&, const TrustEdge&) = default;
};

/// Directed trust network over n individuals.
///
/// Immutable once built. The constructor does not validate: use
/// validate_network() to list violations, and normalize_outgoing() to get a
/// network usable for propagation. Out-edges of each node are kept sorted by
/// target.
class TrustNetwork {
  public:
    TrustNetwork() = default;
    TrustNetwork(std::vector<double> opinions, std::vector<std::vector<TrustEdge>> out_edges,
                 bool normalized = false);

    /// Groups a flat edge list by source. Every source must be < opinions.size().
    static TrustNetwork from_edges(std::vector<double> opinions, std::vector<TrustEdge> edges);

    std::size_t size() const noexcept { return opinions_.size(); }
    std::size_t edge_count() const noexcept;
    bool is_normalized() const noexcept { return normalized_; }

    double opinion(NodeId id) const { return opinions_.at(id.value()); }
    std::span<const double> opinions() const noexcept { return opinions_; }
    std::span<const TrustEdge> out_edges(NodeId id) const { return out_edges_.at(id.value()); }

    /// All edges, ordered by (source, target).
    std::vector<TrustEdge> edges() const;

    friend bool operator==(const TrustNetwork&, const TrustNetwork&) = default;

  private:
    std::vector<double> opinions_;
    std::vector<std::vector<TrustEdge>> out_edges_;
    bool normalized_ = false;
};

/// Non-empty, sorted, duplicate-free set of representatives.
class ActiveSet {
  public:
    /// Throws InvalidInput if `members` is empty, has duplicates, or holds an
    /// id >= n.
    ActiveSet(std::vector<NodeId> members, std::size_t n);

    std::span<const NodeId> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool contains(NodeId id) const noexcept;

    /// Membership mask of length n.
    std::vector<char> mask(std::size_t n) const;

    friend bool operator==(const ActiveSet&, const ActiveSet&) = default;

  private:
    std::vector<NodeId> members_;
};

struct NormalizedNetwork {
    TrustNetwork network;
    /// Nodes with no out-edges or zero total raw trust, ascending.
    std::vector<NodeId> dangling;
};

NormalizedNetwork normalize_outgoing(const TrustNetwork& network);

/// Random network with `k` distinct non-self out-neighbours per node, opinions
/// uniform in [0, 1), raw trusts from trust_value(). Returned normalized.
/// Throws InvalidInput unless n >= 2 and 1 <= k <= n - 1.
TrustNetwork generate_network(std::size_t n, std::size_t k, RandomStream& rng);

/// Every violated structural invariant, one message per violation. Empty iff
/// the network is valid.
std::vector<std::string> validate_network(const TrustNetwork& network);

/// `count` distinct values from [0, population), ascending (Floyd's algorithm).
std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    RandomStream& rng);

}  // namespace proxyvote

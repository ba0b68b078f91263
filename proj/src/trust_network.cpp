#include "proxyvote/trust_network.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "proxyvote/errors.hpp"

namespace proxyvote {

Opinion::Opinion(double value) : value_(value) {
    if (!(value >= 0.0 && value <= 1.0)) {
        std::ostringstream os;
        os << "opinion " << value << " outside [0, 1]";
        throw InvalidInput(os.str());
    }
}

double trust_value(Opinion p, Opinion q) noexcept {
    return 1.0 - std::fabs(p.value() - q.value());
}

TrustNetwork::TrustNetwork(std::vector<double> opinions,
                           std::vector<std::vector<TrustEdge>> out_edges, bool normalized)
    : opinions_(std::move(opinions)), out_edges_(std::move(out_edges)), normalized_(normalized) {
    out_edges_.resize(opinions_.size());
    for (auto& list : out_edges_) {
        std::stable_sort(list.begin(), list.end(), [](const TrustEdge& a, const TrustEdge& b) {
            return a.target < b.target;
        });
    }
}

TrustNetwork TrustNetwork::from_edges(std::vector<double> opinions, std::vector<TrustEdge> edges) {
    std::vector<std::vector<TrustEdge>> out(opinions.size());
    for (const auto& e : edges) {
        if (e.source.value() >= opinions.size()) {
            throw InvalidInput("edge source " + std::to_string(e.source.value()) +
                               " out of range for " + std::to_string(opinions.size()) +
                               " nodes");
        }
        out[e.source.value()].push_back(e);
    }
    return TrustNetwork(std::move(opinions), std::move(out));
}

std::size_t TrustNetwork::edge_count() const noexcept {
    std::size_t total = 0;
    for (const auto& list : out_edges_) total += list.size();
    return total;
}

std::vector<TrustEdge> TrustNetwork::edges() const {
    std::vector<TrustEdge> all;
    all.reserve(edge_count());
    for (const auto& list : out_edges_) all.insert(all.end(), list.begin(), list.end());
    return all;
}

ActiveSet::ActiveSet(std::vector<NodeId> members, std::size_t n) : members_(std::move(members)) {
    if (members_.empty()) throw InvalidInput("active set is empty");
    std::sort(members_.begin(), members_.end());
    if (std::adjacent_find(members_.begin(), members_.end()) != members_.end()) {
        throw InvalidInput("active set contains duplicate ids");
    }
    if (members_.back().value() >= n) {
        throw InvalidInput("active id " + std::to_string(members_.back().value()) +
                           " out of range for " + std::to_string(n) + " nodes");
    }
}

bool ActiveSet::contains(NodeId id) const noexcept {
    return std::binary_search(members_.begin(), members_.end(), id);
}

std::vector<char> ActiveSet::mask(std::size_t n) const {
    std::vector<char> m(n, 0);
    for (NodeId id : members_) m[id.value()] = 1;
    return m;
}

NormalizedNetwork normalize_outgoing(const TrustNetwork& network) {
    const std::size_t n = network.size();
    std::vector<std::vector<TrustEdge>> out(n);
    std::vector<NodeId> dangling;
    for (std::size_t i = 0; i < n; ++i) {
        const auto edges = network.out_edges(NodeId(i));
        double total = 0.0;
        for (const auto& e : edges) total += e.raw_trust;
        out[i].assign(edges.begin(), edges.end());
        if (total > 0.0) {
            for (auto& e : out[i]) e.normalized_trust = e.raw_trust / total;
        } else {
            for (auto& e : out[i]) e.normalized_trust = 0.0;
            dangling.emplace_back(i);
        }
    }
    std::vector<double> opinions(network.opinions().begin(), network.opinions().end());
    return {TrustNetwork(std::move(opinions), std::move(out), true), std::move(dangling)};
}

std::vector<std::size_t> sample_without_replacement(std::size_t population, std::size_t count,
                                                    RandomStream& rng) {
    if (count > population) {
        throw InvalidInput("cannot sample " + std::to_string(count) + " of " +
                           std::to_string(population));
    }
    std::vector<std::size_t> picked;
    picked.reserve(count);
    // Small samples use linear membership checks; large ones a mask.
    const bool use_mask = count * count > population;
    std::vector<char> seen(use_mask ? population : 0, 0);
    auto contains = [&](std::size_t v) {
        return use_mask ? seen[v] != 0
                        : std::find(picked.begin(), picked.end(), v) != picked.end();
    };
    auto insert = [&](std::size_t v) {
        picked.push_back(v);
        if (use_mask) seen[v] = 1;
    };
    for (std::size_t j = population - count; j < population; ++j) {
        const auto t = static_cast<std::size_t>(rng.uniform_index(j + 1));
        insert(contains(t) ? j : t);
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

TrustNetwork generate_network(std::size_t n, std::size_t k, RandomStream& rng) {
    if (n < 2) throw InvalidInput("network needs at least 2 nodes, got " + std::to_string(n));
    if (k < 1 || k > n - 1) {
        throw InvalidInput("out-degree k=" + std::to_string(k) + " must lie in [1, " +
                           std::to_string(n - 1) + "]");
    }

    std::vector<double> opinions(n);
    for (auto& v : opinions) v = rng.uniform01();

    std::vector<std::vector<TrustEdge>> out(n);
    for (std::size_t src = 0; src < n; ++src) {
        const Opinion own(opinions[src]);
        // Indices in [0, n - 1) skip over the source itself.
        for (std::size_t idx : sample_without_replacement(n - 1, k, rng)) {
            const std::size_t dst = idx < src ? idx : idx + 1;
            out[src].push_back(
                {NodeId(src), NodeId(dst), trust_value(own, Opinion(opinions[dst])), 0.0});
        }
    }
    return normalize_outgoing(TrustNetwork(std::move(opinions), std::move(out))).network;
}

std::vector<std::string> validate_network(const TrustNetwork& network) {
    std::vector<std::string> violations;
    const std::size_t n = network.size();
    auto report = [&](auto&&... parts) {
        std::ostringstream os;
        (os << ... << parts);
        violations.push_back(os.str());
    };

    for (std::size_t i = 0; i < n; ++i) {
        const double v = network.opinion(NodeId(i));
        if (!(v >= 0.0 && v <= 1.0)) report("node ", i, ": opinion ", v, " outside [0, 1]");
    }

    for (std::size_t i = 0; i < n; ++i) {
        const auto edges = network.out_edges(NodeId(i));
        for (std::size_t j = 0; j < edges.size(); ++j) {
            const auto& e = edges[j];
            const auto s = e.source.value();
            const auto t = e.target.value();
            if (s != i) report("edge (", s, ",", t, "): stored under node ", i);
            if (t >= n) {
                report("edge (", s, ",", t, "): target ", t, " out of range [0, ", n, ")");
            }
            if (s == t) report("node ", s, ": self-loop edge (", s, ",", t, ")");
            if (!(e.raw_trust >= 0.0 && e.raw_trust <= 1.0)) {
                report("edge (", s, ",", t, "): raw trust ", e.raw_trust, " outside [0, 1]");
            }
            if (j > 0 && edges[j - 1].target == e.target) {
                report("edge (", s, ",", t, "): duplicate edge");
            }
        }
        if (network.is_normalized() && !edges.empty()) {
            double raw = 0.0;
            double normalized = 0.0;
            for (const auto& e : edges) {
                raw += e.raw_trust;
                normalized += e.normalized_trust;
            }
            const double expected = raw > 0.0 ? 1.0 : 0.0;
            if (!(std::fabs(normalized - expected) <= 1e-12)) {
                report("node ", i, ": normalized out-trust sums to ", normalized, ", expected ",
                       expected);
            }
        }
    }
    return violations;
}

}  // namespace proxyvote

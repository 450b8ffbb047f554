#include "clutternav/centrality.hpp"

#include <algorithm>

namespace clutternav {

CentralityMap::CentralityMap(int width, int height, std::vector<double> values, std::uint64_t snapshot_id,
                             int diameter)
    : width_(width), height_(height), values_(std::move(values)), snapshot_id_(snapshot_id), diameter_(diameter) {}

double CentralityMap::at(Cell c) const {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return 0.0;
    return values_[static_cast<std::size_t>(c.y) * width_ + c.x];
}

CentralityMap betweenness(const TraversalMask& mask) {
    const std::size_t size = mask.size();
    std::vector<double> bc(size, 0.0);

    // Compact node numbering with adjacency lists.
    std::vector<int> node_of(size, -1);
    std::vector<std::size_t> cell_of;
    for (std::size_t i = 0; i < size; ++i) {
        if (mask.bits()[i]) {
            node_of[i] = static_cast<int>(cell_of.size());
            cell_of.push_back(i);
        }
    }
    const int n = static_cast<int>(cell_of.size());
    std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) {
        const Cell c = mask.cell(cell_of[static_cast<std::size_t>(v)]);
        for (Cell d : kNeighborOffsets) {
            const Cell m{c.x + d.x, c.y + d.y};
            if (mask.open(m)) adj[static_cast<std::size_t>(v)].push_back(node_of[mask.index(m)]);
        }
    }

    int diameter = 0;
    std::vector<double> acc(static_cast<std::size_t>(n), 0.0);
    std::vector<double> sigma(static_cast<std::size_t>(n));
    std::vector<double> delta(static_cast<std::size_t>(n));
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) {
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(delta.begin(), delta.end(), 0.0);
        std::fill(dist.begin(), dist.end(), -1);
        order.clear();
        sigma[static_cast<std::size_t>(s)] = 1.0;
        dist[static_cast<std::size_t>(s)] = 0;
        order.push_back(s);
        for (std::size_t head = 0; head < order.size(); ++head) {
            const int v = order[head];
            for (int w : adj[static_cast<std::size_t>(v)]) {
                auto& dw = dist[static_cast<std::size_t>(w)];
                if (dw < 0) {
                    dw = dist[static_cast<std::size_t>(v)] + 1;
                    order.push_back(w);
                }
                if (dw == dist[static_cast<std::size_t>(v)] + 1)
                    sigma[static_cast<std::size_t>(w)] += sigma[static_cast<std::size_t>(v)];
            }
        }
        diameter = std::max(diameter, dist[static_cast<std::size_t>(order.back())]);
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int w = *it;
            for (int v : adj[static_cast<std::size_t>(w)]) {
                if (dist[static_cast<std::size_t>(v)] == dist[static_cast<std::size_t>(w)] - 1) {
                    delta[static_cast<std::size_t>(v)] += sigma[static_cast<std::size_t>(v)] /
                                                          sigma[static_cast<std::size_t>(w)] *
                                                          (1.0 + delta[static_cast<std::size_t>(w)]);
                }
            }
            if (w != s) acc[static_cast<std::size_t>(w)] += delta[static_cast<std::size_t>(w)];
        }
    }

    if (n >= 3) {
        const double z = static_cast<double>(n - 1) * static_cast<double>(n - 2);
        for (int v = 0; v < n; ++v)
            bc[cell_of[static_cast<std::size_t>(v)]] = std::clamp(acc[static_cast<std::size_t>(v)] / z, 0.0, 1.0);
    }
    return CentralityMap(mask.width(), mask.height(), std::move(bc), mask.fingerprint(), diameter);
}

CentralityMap betweenness(const GridGraph& graph) { return betweenness(graph.mask()); }

std::shared_ptr<const CentralityMap> CentralityCache::get(const TraversalMask& mask) {
    const std::uint64_t key = mask.fingerprint();
    {
        std::lock_guard lock(mutex_);
        if (auto it = entries_.find(key); it != entries_.end()) return it->second;
    }
    auto computed = std::make_shared<const CentralityMap>(betweenness(mask));
    std::lock_guard lock(mutex_);
    ++misses_;
    auto [it, inserted] = entries_.emplace(key, computed);
    if (inserted) {
        order_.push_back(key);
        if (order_.size() > capacity_) {
            entries_.erase(order_.front());
            order_.erase(order_.begin());
        }
    }
    return it->second;
}

std::size_t CentralityCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

std::size_t CentralityCache::misses() const {
    std::lock_guard lock(mutex_);
    return misses_;
}

}  // namespace clutternav

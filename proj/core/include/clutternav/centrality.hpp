#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "clutternav/grid.hpp"

namespace clutternav {

/// Normalized betweenness per cell of one traversability snapshot. Closed
/// cells hold 0.
class CentralityMap {
public:
    CentralityMap() = default;
    CentralityMap(int width, int height, std::vector<double> values, std::uint64_t snapshot_id, int diameter);

    double at(Cell c) const;
    const std::vector<double>& values() const { return values_; }
    std::uint64_t snapshot_id() const { return snapshot_id_; }
    /// Longest finite shortest-path step count between two open cells.
    int diameter() const { return diameter_; }
    int width() const { return width_; }
    int height() const { return height_; }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> values_;
    std::uint64_t snapshot_id_ = 0;
    int diameter_ = 0;
};

/// Brandes betweenness over ordered pairs of open cells, divided by
/// (n - 1)(n - 2). Fewer than three open cells gives an all-zero map.
CentralityMap betweenness(const TraversalMask& mask);
CentralityMap betweenness(const GridGraph& graph);

/// Thread-safe memo of centrality maps keyed by mask fingerprint.
class CentralityCache {
public:
    explicit CentralityCache(std::size_t capacity = 64) : capacity_(capacity) {}

    std::shared_ptr<const CentralityMap> get(const TraversalMask& mask);
    std::size_t size() const;
    std::size_t misses() const;

private:
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::map<std::uint64_t, std::shared_ptr<const CentralityMap>> entries_;
    std::vector<std::uint64_t> order_;
    std::size_t misses_ = 0;
};

}  // namespace clutternav

#pragma once

#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "clutternav/cell.hpp"
#include "clutternav/floorplan.hpp"

namespace clutternav {

/// Boolean occupancy lattice: `open` cells are nodes, and 4-adjacent open
/// cells share an edge. Every path query runs on one of these.
class TraversalMask {
public:
    TraversalMask() = default;
    TraversalMask(int width, int height, bool open = false);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return bits_.size(); }

    bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width_ && c.y < height_; }
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.y) * width_ + c.x; }
    Cell cell(std::size_t index) const {
        return {static_cast<int>(index % width_), static_cast<int>(index / width_)};
    }

    bool open(Cell c) const { return in_bounds(c) && bits_[index(c)] != 0; }
    void set_open(Cell c, bool value = true) { bits_[index(c)] = value ? 1 : 0; }

    std::size_t open_count() const;
    std::size_t edge_count() const;
    std::vector<Cell> open_cells() const;

    /// Content hash; equal masks share a fingerprint.
    std::uint64_t fingerprint() const;

    const std::vector<std::uint8_t>& bits() const { return bits_; }

    friend bool operator==(const TraversalMask&, const TraversalMask&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<std::uint8_t> bits_;
};

/// Single-source shortest-path distances (unit edge weights).
class DistanceField {
public:
    static constexpr int kUnreachable = -1;

    DistanceField(TraversalMask mask, Cell source, std::vector<int> steps);

    Cell source() const { return source_; }

    /// Steps from the source to an open cell, or kUnreachable.
    int steps_to(Cell c) const;

    /// Steps to `target` when the target itself may be closed (an obstacle or a
    /// fixture being approached): 1 + best open neighbour. Equals steps_to for
    /// open targets.
    int steps_to_target(Cell target) const;

    /// Canonical shortest path from the source to `target`, inclusive of both
    /// ends. Walks back from the target, always stepping to the predecessor
    /// with the smallest (y, x) key. A closed target is entered from its best
    /// open neighbour.
    std::optional<Path> path_to(Cell target) const;

    const std::vector<int>& steps() const { return steps_; }
    const TraversalMask& mask() const { return mask_; }

private:
    TraversalMask mask_;
    Cell source_;
    std::vector<int> steps_;
};

/// Dijkstra over the mask from an open source cell.
DistanceField shortest_distances(const TraversalMask& mask, Cell source);

std::optional<Path> shortest_path(const TraversalMask& mask, Cell src, Cell dst);
std::vector<Cell> reachable_set(const TraversalMask& mask, Cell src);

enum class CellKind : std::uint8_t { Free, Wall, Obstacle, StaticFixture };

struct CellState {
    CellKind kind = CellKind::Wall;
    int object = -1;

    friend bool operator==(const CellState&, const CellState&) = default;
};

/// An object occupying a cell when building a graph.
struct Placement {
    int object = -1;
    Cell cell;
    bool fixture = false;
};

/// Immutable ground-truth traversability graph. Mutating operations return a
/// new snapshot.
class GridGraph {
public:
    GridGraph(std::shared_ptr<const Floorplan> plan, std::vector<CellState> states);

    const Floorplan& floorplan() const { return *plan_; }
    const std::shared_ptr<const Floorplan>& floorplan_ptr() const { return plan_; }
    int width() const { return mask_.width(); }
    int height() const { return mask_.height(); }

    CellState state(Cell c) const;
    bool is_free(Cell c) const { return mask_.open(c); }
    const TraversalMask& mask() const { return mask_; }
    const std::vector<CellState>& states() const { return states_; }

    std::size_t free_count() const { return mask_.open_count(); }
    std::size_t edge_count() const { return mask_.edge_count(); }
    std::uint64_t snapshot_id() const { return mask_.fingerprint(); }

    GridGraph with_state(Cell c, CellState state) const;

private:
    std::shared_ptr<const Floorplan> plan_;
    std::vector<CellState> states_;
    TraversalMask mask_;
};

/// Free cells are exactly the room and door cells not covered by a placement.
/// Several placements may share a cell (stacked obstacles); the lowest id is
/// reported. Throws PlacementError for placements on walls or off-grid.
GridGraph build_grid_graph(std::shared_ptr<const Floorplan> plan, std::span<const Placement> placements);

/// Throws ArgumentError when either endpoint is not Free.
std::optional<Path> shortest_path(const GridGraph& graph, Cell src, Cell dst);

/// Shortest-path step count times `step_time`; +infinity when disconnected.
double geodesic_time(const GridGraph& graph, Cell a, Cell b, double step_time = 1.0);

std::vector<Cell> reachable_set(const GridGraph& graph, Cell src);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace clutternav

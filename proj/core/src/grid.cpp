#include "clutternav/grid.hpp"

#include <algorithm>
#include <queue>
#include <tuple>

#include "clutternav/errors.hpp"

namespace clutternav {

TraversalMask::TraversalMask(int width, int height, bool open)
    : width_(width), height_(height),
      bits_(static_cast<std::size_t>(std::max(width, 0)) * std::max(height, 0), open ? 1 : 0) {
    if (width < 0 || height < 0) throw ArgumentError("negative grid dimensions");
}

std::size_t TraversalMask::open_count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::size_t TraversalMask::edge_count() const {
    std::size_t edges = 0;
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            if (!open({x, y})) continue;
            if (open({x + 1, y})) ++edges;
            if (open({x, y + 1})) ++edges;
        }
    }
    return edges;
}

std::vector<Cell> TraversalMask::open_cells() const {
    std::vector<Cell> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) out.push_back(cell(i));
    }
    return out;
}

std::uint64_t TraversalMask::fingerprint() const {
    // FNV-1a over dimensions and bits.
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t v) {
        h ^= v;
        h *= 1099511628211ULL;
    };
    mix(static_cast<std::uint64_t>(width_));
    mix(static_cast<std::uint64_t>(height_));
    for (auto b : bits_) mix(b);
    return h;
}

DistanceField::DistanceField(TraversalMask mask, Cell source, std::vector<int> steps)
    : mask_(std::move(mask)), source_(source), steps_(std::move(steps)) {}

int DistanceField::steps_to(Cell c) const {
    if (!mask_.in_bounds(c)) return kUnreachable;
    return steps_[mask_.index(c)];
}

int DistanceField::steps_to_target(Cell target) const {
    if (!mask_.in_bounds(target)) return kUnreachable;
    if (mask_.open(target)) return steps_to(target);
    int best = kUnreachable;
    for (Cell d : kNeighborOffsets) {
        const int s = steps_to({target.x + d.x, target.y + d.y});
        if (s != kUnreachable && (best == kUnreachable || s < best)) best = s;
    }
    return best == kUnreachable ? kUnreachable : best + 1;
}

std::optional<Path> DistanceField::path_to(Cell target) const {
    if (steps_to_target(target) == kUnreachable) return std::nullopt;
    Path reversed{target};
    Cell cur = target;
    if (!mask_.open(target)) {
        // Enter a closed target from its nearest open neighbour.
        int best = kUnreachable;
        Cell pick{};
        for (Cell d : kNeighborOffsets) {
            const Cell n{target.x + d.x, target.y + d.y};
            const int s = steps_to(n);
            if (s != kUnreachable && (best == kUnreachable || s < best)) {
                best = s;
                pick = n;
            }
        }
        cur = pick;
        reversed.push_back(cur);
    }
    while (cur != source_) {
        const int want = steps_to(cur) - 1;
        for (Cell d : kNeighborOffsets) {
            const Cell n{cur.x + d.x, cur.y + d.y};
            if (steps_to(n) == want) {
                cur = n;
                break;
            }
        }
        reversed.push_back(cur);
    }
    std::reverse(reversed.begin(), reversed.end());
    return reversed;
}

DistanceField shortest_distances(const TraversalMask& mask, Cell source) {
    if (!mask.open(source)) throw ArgumentError("shortest_distances: source cell is not traversable");
    std::vector<int> dist(mask.size(), DistanceField::kUnreachable);
    using Entry = std::tuple<int, int, int>;  // steps, y, x
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    dist[mask.index(source)] = 0;
    open.emplace(0, source.y, source.x);
    while (!open.empty()) {
        auto [d, y, x] = open.top();
        open.pop();
        const Cell c{x, y};
        if (d != dist[mask.index(c)]) continue;
        for (Cell off : kNeighborOffsets) {
            const Cell n{c.x + off.x, c.y + off.y};
            if (!mask.open(n)) continue;
            int& nd = dist[mask.index(n)];
            if (nd == DistanceField::kUnreachable || d + 1 < nd) {
                nd = d + 1;
                open.emplace(nd, n.y, n.x);
            }
        }
    }
    return DistanceField(mask, source, std::move(dist));
}

std::optional<Path> shortest_path(const TraversalMask& mask, Cell src, Cell dst) {
    if (!mask.open(src) || !mask.open(dst)) throw ArgumentError("shortest_path: endpoints must be free cells");
    return shortest_distances(mask, src).path_to(dst);
}

std::vector<Cell> reachable_set(const TraversalMask& mask, Cell src) {
    if (!mask.open(src)) throw ArgumentError("reachable_set: source cell is not traversable");
    std::vector<std::uint8_t> seen(mask.size(), 0);
    std::vector<Cell> stack{src};
    std::vector<Cell> out;
    seen[mask.index(src)] = 1;
    while (!stack.empty()) {
        const Cell c = stack.back();
        stack.pop_back();
        out.push_back(c);
        for (Cell off : kNeighborOffsets) {
            const Cell n{c.x + off.x, c.y + off.y};
            if (mask.open(n) && !seen[mask.index(n)]) {
                seen[mask.index(n)] = 1;
                stack.push_back(n);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

GridGraph::GridGraph(std::shared_ptr<const Floorplan> plan, std::vector<CellState> states)
    : plan_(std::move(plan)), states_(std::move(states)) {
    if (!plan_) throw ArgumentError("GridGraph requires a floorplan");
    if (states_.size() != static_cast<std::size_t>(plan_->width) * plan_->height)
        throw ArgumentError("GridGraph state vector does not match floorplan size");
    mask_ = TraversalMask(plan_->width, plan_->height);
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (states_[i].kind == CellKind::Free) mask_.set_open(mask_.cell(i));
    }
}

CellState GridGraph::state(Cell c) const {
    if (!mask_.in_bounds(c)) return {CellKind::Wall, -1};
    return states_[mask_.index(c)];
}

GridGraph GridGraph::with_state(Cell c, CellState state) const {
    if (!mask_.in_bounds(c)) throw ArgumentError("with_state: cell out of bounds");
    if (states_[mask_.index(c)].kind == CellKind::Wall || state.kind == CellKind::Wall)
        throw PlacementError("wall cells never change state");
    auto next = states_;
    next[mask_.index(c)] = state;
    return GridGraph(plan_, std::move(next));
}

GridGraph build_grid_graph(std::shared_ptr<const Floorplan> plan, std::span<const Placement> placements) {
    if (!plan) throw ArgumentError("build_grid_graph requires a floorplan");
    const TraversalMask base = traversable_mask(*plan);
    std::vector<CellState> states(base.size(), CellState{CellKind::Wall, -1});
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base.bits()[i]) states[i] = {CellKind::Free, -1};
    }
    for (const Placement& p : placements) {
        if (!base.in_bounds(p.cell)) throw PlacementError("placement outside the floorplan");
        if (!base.open(p.cell)) throw PlacementError("placement on a wall cell");
        CellState& s = states[base.index(p.cell)];
        const CellKind kind = p.fixture ? CellKind::StaticFixture : CellKind::Obstacle;
        if (s.kind == CellKind::Free) {
            s = {kind, p.object};
        } else if (s.kind != kind) {
            throw PlacementError("fixture and obstacle share a cell");
        } else if (p.object < s.object) {
            s.object = p.object;
        }
    }
    return GridGraph(std::move(plan), std::move(states));
}

std::optional<Path> shortest_path(const GridGraph& graph, Cell src, Cell dst) {
    if (!graph.is_free(src) || !graph.is_free(dst)) throw ArgumentError("shortest_path: endpoints must be Free");
    return shortest_path(graph.mask(), src, dst);
}

double geodesic_time(const GridGraph& graph, Cell a, Cell b, double step_time) {
    if (!(step_time > 0.0)) throw ArgumentError("geodesic_time: step_time must be positive");
    if (!graph.is_free(a) || !graph.is_free(b)) throw ArgumentError("geodesic_time: endpoints must be Free");
    const int steps = shortest_distances(graph.mask(), a).steps_to(b);
    return steps == DistanceField::kUnreachable ? kInfinity : steps * step_time;
}

std::vector<Cell> reachable_set(const GridGraph& graph, Cell src) {
    if (!graph.is_free(src)) throw ArgumentError("reachable_set: source must be Free");
    return reachable_set(graph.mask(), src);
}

}  // namespace clutternav

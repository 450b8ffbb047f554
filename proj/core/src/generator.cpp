#include "clutternav/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "clutternav/centrality.hpp"
#include "clutternav/errors.hpp"

namespace clutternav {

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(static_cast<std::size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int v) {
        while (parent[static_cast<std::size_t>(v)] != v) v = parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
        return v;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[static_cast<std::size_t>(b)] = a;
        return true;
    }
};

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool is_connected(const TraversalMask& mask) {
    const auto open = mask.open_cells();
    return open.empty() || reachable_set(mask, open.front()).size() == open.size();
}

int chebyshev(Cell a, Cell b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

// Closing `c` keeps every other pairwise distance: no two opposite open
// neighbours, and every perpendicular pair also meets at the diagonal cell.
bool removal_preserves_distances(const TraversalMask& mask, Cell c) {
    const Cell up{c.x, c.y - 1}, down{c.x, c.y + 1}, left{c.x - 1, c.y}, right{c.x + 1, c.y};
    if (mask.open(up) && mask.open(down)) return false;
    if (mask.open(left) && mask.open(right)) return false;
    for (Cell v : {up, down}) {
        for (Cell h : {left, right}) {
            if (mask.open(v) && mask.open(h) && !mask.open({h.x, v.y})) return false;
        }
    }
    return mask.open(up) || mask.open(down) || mask.open(left) || mask.open(right);
}

template <typename T>
std::vector<T> shuffled_cycle(const std::vector<T>& items, std::size_t count, std::mt19937_64& rng) {
    std::vector<T> base = items;
    std::shuffle(base.begin(), base.end(), rng);
    std::vector<T> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(base[i % base.size()]);
    return out;
}

}  // namespace

void FloorplanStyle::validate() const {
    if (room_min < 4 || room_max < room_min) throw ArgumentError("room sides must satisfy 4 <= min <= max");
    if (doorway_width < 1 || doorway_width > room_min - 2)
        throw ArgumentError("doorway width must lie in [1, room_min - 2]");
    if (loop_door_p < 0.0 || loop_door_p > 1.0) throw ArgumentError("loop door probability must lie in [0, 1]");
}

Floorplan generate_floorplan(int n_rooms, std::uint64_t seed, const FloorplanStyle& style) {
    if (n_rooms < kMinRooms || n_rooms > kMaxRooms) throw ArgumentError("n_rooms must lie in [1, 10]");
    style.validate();
    std::mt19937_64 rng(seed);
    const int lo = style.room_min;
    const int hi = style.room_max;
    const int dw = style.doorway_width;
    const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n_rooms))));
    const int rows = (n_rooms + cols - 1) / cols;
    std::vector<int> widths(static_cast<std::size_t>(cols)), heights(static_cast<std::size_t>(rows));
    for (auto& w : widths) w = uniform(rng, lo, hi);
    for (auto& h : heights) h = uniform(rng, lo, hi);
    std::vector<int> x0(static_cast<std::size_t>(cols)), y0(static_cast<std::size_t>(rows));
    int width = 1;
    for (int c = 0; c < cols; ++c) {
        x0[static_cast<std::size_t>(c)] = width;
        width += widths[static_cast<std::size_t>(c)] + 1;
    }
    int height = 1;
    for (int r = 0; r < rows; ++r) {
        y0[static_cast<std::size_t>(r)] = height;
        height += heights[static_cast<std::size_t>(r)] + 1;
    }

    // Snake order keeps consecutive rooms adjacent.
    std::vector<std::pair<int, int>> slots;
    for (int r = 0; r < rows && static_cast<int>(slots.size()) < n_rooms; ++r) {
        for (int k = 0; k < cols && static_cast<int>(slots.size()) < n_rooms; ++k)
            slots.emplace_back(r, r % 2 == 0 ? k : cols - 1 - k);
    }

    std::vector<RoomType> types(std::begin(kAllRoomTypes), std::end(kAllRoomTypes));
    types = shuffled_cycle(types, static_cast<std::size_t>(n_rooms), rng);

    Floorplan plan;
    plan.width = width;
    plan.height = height;
    for (int i = 0; i < n_rooms; ++i) {
        const auto [r, c] = slots[static_cast<std::size_t>(i)];
        Room room;
        room.id = i;
        room.type = types[static_cast<std::size_t>(i)];
        for (int y = y0[static_cast<std::size_t>(r)]; y < y0[static_cast<std::size_t>(r)] + heights[static_cast<std::size_t>(r)]; ++y) {
            for (int x = x0[static_cast<std::size_t>(c)]; x < x0[static_cast<std::size_t>(c)] + widths[static_cast<std::size_t>(c)]; ++x)
                room.cells.push_back({x, y});
        }
        plan.rooms.push_back(std::move(room));
    }

    std::vector<std::pair<int, int>> edges;
    for (int a = 0; a < n_rooms; ++a) {
        for (int b = a + 1; b < n_rooms; ++b) {
            const auto [ra, ca] = slots[static_cast<std::size_t>(a)];
            const auto [rb, cb] = slots[static_cast<std::size_t>(b)];
            if ((ra == rb && std::abs(ca - cb) == 1) || (ca == cb && std::abs(ra - rb) == 1)) edges.emplace_back(a, b);
        }
    }
    std::shuffle(edges.begin(), edges.end(), rng);
    DisjointSet sets(n_rooms);
    std::vector<std::pair<int, int>> chosen;
    for (const auto& e : edges) {
        if (sets.unite(e.first, e.second)) {
            chosen.push_back(e);
        } else if (std::bernoulli_distribution(style.loop_door_p)(rng)) {
            chosen.push_back(e);
        }
    }
    std::sort(chosen.begin(), chosen.end());
    for (const auto& [a, b] : chosen) {
        const auto [ra, ca] = slots[static_cast<std::size_t>(a)];
        const auto [rb, cb] = slots[static_cast<std::size_t>(b)];
        Cell door;
        if (ra == rb) {
            const int c = std::min(ca, cb);
            door.x = x0[static_cast<std::size_t>(c)] + widths[static_cast<std::size_t>(c)];
            door.y = uniform(rng, y0[static_cast<std::size_t>(ra)] + 1, y0[static_cast<std::size_t>(ra)] + heights[static_cast<std::size_t>(ra)] - 1 - dw);
            for (int k = 0; k < dw; ++k) plan.doors.push_back({a, b, {door.x, door.y + k}});
        } else {
            const int r = std::min(ra, rb);
            door.y = y0[static_cast<std::size_t>(r)] + heights[static_cast<std::size_t>(r)];
            door.x = uniform(rng, x0[static_cast<std::size_t>(ca)] + 1, x0[static_cast<std::size_t>(ca)] + widths[static_cast<std::size_t>(ca)] - 1 - dw);
            for (int k = 0; k < dw; ++k) plan.doors.push_back({a, b, {door.x + k, door.y}});
        }
    }

    const TraversalMask open = traversable_mask(plan);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            if (!open.open({x, y})) plan.walls.push_back({x, y});
        }
    }
    validate(plan);
    return plan;
}

int clutter_count(const ClutterConfig& config, std::size_t free_cells) {
    config.validate();
    return static_cast<int>(std::lround(config.base_fraction * config.density * static_cast<double>(free_cells)));
}

std::vector<double> clutter_weights(const GridGraph& free_graph, std::span<const Cell> forbidden) {
    const CentralityMap bc = betweenness(free_graph);
    std::vector<double> w = bc.values();
    for (Cell c : forbidden) {
        if (free_graph.mask().in_bounds(c)) w[free_graph.mask().index(c)] = 0.0;
    }
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    if (total > 0.0) {
        for (auto& v : w) v /= total;
    }
    return w;
}

std::vector<Cell> place_clutter(const GridGraph& free_graph, const ClutterConfig& config,
                                std::span<const Cell> forbidden) {
    const int k = clutter_count(config, free_graph.free_count());
    if (!is_connected(free_graph.mask())) throw GenerationError("obstacle-free graph is not connected");
    std::vector<double> w = clutter_weights(free_graph, forbidden);
    const auto positive = std::count_if(w.begin(), w.end(), [](double v) { return v > 0.0; });
    if (positive < k) throw GenerationError("fewer positive-weight clutter candidates than requested obstacles");
    std::mt19937_64 rng(config.seed);
    std::vector<Cell> out;
    for (int i = 0; i < k; ++i) {
        std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
        const std::size_t idx = pick(rng);
        w[idx] = 0.0;
        out.push_back(free_graph.mask().cell(idx));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Cell> place_clutter(const Floorplan& plan, const ClutterConfig& config, std::span<const Cell> forbidden) {
    const GridGraph graph = build_grid_graph(std::make_shared<const Floorplan>(plan), {});
    return place_clutter(graph, config, forbidden);
}

int sample_room(const RoomPriors& priors, std::string_view category, const Floorplan& plan, std::mt19937_64& rng) {
    const auto w = priors.room_weights(category, plan);
    if (std::accumulate(w.begin(), w.end(), 0.0) <= 0.0) return uniform(rng, 0, static_cast<int>(plan.rooms.size()) - 1);
    return static_cast<int>(std::discrete_distribution<int>(w.begin(), w.end())(rng));
}

std::vector<Task> generate_tasks(std::span<const ObjectSpec> objects, int g, std::uint64_t seed) {
    if (g < 0) throw ArgumentError("horizon must be non-negative");
    std::vector<int> movable, receptacles;
    for (const auto& o : objects) {
        if (o.kind == ObjectKind::TaskObject) movable.push_back(o.id);
        if (o.kind == ObjectKind::Receptacle) receptacles.push_back(o.id);
    }
    if (static_cast<int>(movable.size()) < g) throw GenerationError("not enough task objects for the horizon");
    if (g > 0 && receptacles.empty()) throw GenerationError("no receptacle for the tasks");
    std::mt19937_64 rng(seed);
    std::shuffle(movable.begin(), movable.end(), rng);
    std::vector<Task> tasks;
    for (int i = 0; i < g; ++i) {
        const int r = receptacles[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(receptacles.size()) - 1))];
        tasks.push_back({movable[static_cast<std::size_t>(i)], r});
    }
    return tasks;
}

Episode generate_episode(const GenerationConfig& config) {
    config.clutter.validate();
    if (config.horizon < 1) throw ConfigError("horizon must be at least 1");
    if (config.effort < 0.0) throw ConfigError("manipulation effort must be non-negative");
    const RoomPriors& priors = config.priors ? *config.priors : RoomPriors::builtin();

    Episode ep;
    ep.seed = config.seed;
    ep.horizon = config.horizon;
    ep.floorplan = generate_floorplan(config.n_rooms, config.seed, config.floorplan);
    const Floorplan& plan = ep.floorplan;
    const FloorplanIndex index(plan);
    std::mt19937_64 rng(config.seed * 0x9E3779B97F4A7C15ULL + 0x632BE59BD9B4E019ULL);

    TraversalMask mask = traversable_mask(plan);
    auto door_adjacent = [&](Cell c) {
        for (Cell d : kNeighborOffsets) {
            if (index.is_door({c.x + d.x, c.y + d.y})) return true;
        }
        return false;
    };
    auto wall_sides = [&](Cell c) {
        int n = 0;
        bool vertical = false, horizontal = false;
        for (Cell d : kNeighborOffsets) {
            const Cell m{c.x + d.x, c.y + d.y};
            if (!index.is_traversable(m)) {
                ++n;
                (d.x == 0 ? vertical : horizontal) = true;
            }
        }
        return std::pair{n, vertical && horizontal};
    };

    // Receptacles: against a wall, away from corners, doors and each other.
    std::vector<Cell> fixtures;
    const int n_receptacles = std::max(2, config.n_rooms + 1);
    const auto receptacle_cats = shuffled_cycle(receptacle_categories(), static_cast<std::size_t>(n_receptacles), rng);
    for (int i = 0; i < n_receptacles; ++i) {
        bool placed = false;
        for (int attempt = 0; attempt < 20 && !placed; ++attempt) {
            const int room = sample_room(priors, receptacle_cats[static_cast<std::size_t>(i)], plan, rng);
            std::vector<Cell> candidates;
            for (Cell c : plan.room(room).cells) {
                const auto [walls, corner] = wall_sides(c);
                if (walls == 0 || corner || door_adjacent(c) || !mask.open(c)) continue;
                if (std::any_of(fixtures.begin(), fixtures.end(), [&](Cell f) { return chebyshev(f, c) <= 1; })) continue;
                candidates.push_back(c);
            }
            std::shuffle(candidates.begin(), candidates.end(), rng);
            for (Cell c : candidates) {
                mask.set_open(c, false);
                if (is_connected(mask)) {
                    fixtures.push_back(c);
                    ep.objects.push_back({static_cast<int>(ep.objects.size()), receptacle_cats[static_cast<std::size_t>(i)],
                                          ObjectKind::Receptacle, c, config.effort});
                    placed = true;
                    break;
                }
                mask.set_open(c, true);
            }
        }
        if (!placed) throw GenerationError("could not place a receptacle");
    }

    // Drop zones: lowest-centrality cells whose closure leaves all other
    // distances unchanged; kept apart so they are independent of each other.
    const CentralityMap bc = betweenness(mask);
    for (const Room& room : plan.rooms) {
        std::vector<Cell> cells;
        for (Cell c : room.cells) {
            if (mask.open(c) && !door_adjacent(c)) cells.push_back(c);
        }
        std::stable_sort(cells.begin(), cells.end(), [&](Cell a, Cell b) { return bc.at(a) < bc.at(b); });
        int taken = 0;
        for (Cell c : cells) {
            if (taken == 2) break;
            if (!removal_preserves_distances(mask, c)) continue;
            if (std::any_of(ep.drop_zones.begin(), ep.drop_zones.end(), [&](const DropZone& z) { return chebyshev(z.cell, c) < 3; }))
                continue;
            ep.drop_zones.push_back({static_cast<int>(ep.drop_zones.size()), c, room.id});
            ++taken;
        }
    }

    std::set<Cell> reserved(fixtures.begin(), fixtures.end());
    for (const auto& z : ep.drop_zones) reserved.insert(z.cell);
    auto free_cells_in = [&](int room) {
        std::vector<Cell> out;
        for (Cell c : plan.room(room).cells) {
            if (!reserved.count(c)) out.push_back(c);
        }
        return out;
    };

    {
        const auto start_cells = free_cells_in(0);
        if (start_cells.empty()) throw GenerationError("no start cell");
        ep.start = start_cells[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(start_cells.size()) - 1))];
        reserved.insert(ep.start);
    }

    // Task objects go to rooms drawn from the prior table; full rooms drop out.
    const int n_task_objects = config.horizon + 2;
    const auto task_cats = shuffled_cycle(task_object_categories(), static_cast<std::size_t>(n_task_objects), rng);
    std::vector<Cell> task_cells;
    for (int i = 0; i < n_task_objects; ++i) {
        const std::string& cat = task_cats[static_cast<std::size_t>(i)];
        auto weights = priors.room_weights(cat, plan);
        for (std::size_t r = 0; r < weights.size(); ++r) {
            if (free_cells_in(static_cast<int>(r)).empty()) weights[r] = 0.0;
        }
        if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0) {
            if (i >= config.horizon) break;
            throw GenerationError("not enough free cells for the task objects");
        }
        const int room = static_cast<int>(std::discrete_distribution<int>(weights.begin(), weights.end())(rng));
        const auto cells = free_cells_in(room);
        const Cell c = cells[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cells.size()) - 1))];
        reserved.insert(c);
        task_cells.push_back(c);
        ep.objects.push_back({static_cast<int>(ep.objects.size()), cat, ObjectKind::TaskObject, c, config.effort});
    }

    ClutterConfig clutter = config.clutter;
    clutter.seed = rng();
    const std::uint64_t task_seed = rng();
    std::vector<Cell> forbidden(task_cells);
    for (const auto& z : ep.drop_zones) forbidden.push_back(z.cell);
    forbidden.push_back(ep.start);
    std::vector<Placement> fixture_placements;
    for (const auto& o : ep.objects) {
        if (o.kind == ObjectKind::Receptacle) fixture_placements.push_back({o.id, o.cell, true});
    }
    const GridGraph free_graph = build_grid_graph(std::make_shared<const Floorplan>(plan), fixture_placements);
    ep.clutter_cells = place_clutter(free_graph, clutter, forbidden);
    for (Cell c : ep.clutter_cells) {
        const auto& cats = obstacle_categories();
        ep.objects.push_back({static_cast<int>(ep.objects.size()),
                              cats[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(cats.size()) - 1))],
                              ObjectKind::Obstacle, c, config.effort});
    }

    ep.tasks = generate_tasks(ep.objects, config.horizon, task_seed);
    validate(ep);
    return ep;
}

}  // namespace clutternav

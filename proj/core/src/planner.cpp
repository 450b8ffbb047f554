#include "clutternav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "clutternav/errors.hpp"

namespace clutternav {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_unknown_traversable(const SceneGraph& scene, Cell c) {
    return scene.index().is_traversable(c) && !scene.belief().known(c);
}

// Steps from the obstacle cell to every drop zone, plus the approach leg.
struct ObstacleLegs {
    int approach = DistanceField::kUnreachable;
    std::vector<int> carry;  // per zone id
};

ObstacleLegs obstacle_legs(const SceneGraph& scene, const SceneObject& o) {
    TraversalMask mask = scene.strict_mask();
    mask.set_open(o.cell);
    ObstacleLegs legs;
    legs.approach = shortest_distances(mask, scene.robot()).steps_to(o.cell);
    legs.carry.assign(scene.zones().size(), DistanceField::kUnreachable);
    if (legs.approach == DistanceField::kUnreachable) return legs;
    const DistanceField from_obstacle = shortest_distances(mask, o.cell);
    for (const auto& z : scene.zones()) {
        if (z.cell == o.cell) continue;
        legs.carry[static_cast<std::size_t>(z.id)] = from_obstacle.steps_to_target(z.cell);
    }
    return legs;
}

bool movable(const SceneObject& o) { return o.kind == ObjectKind::Obstacle && !o.carried && !o.stowed; }

std::vector<int> obstacles_on(const SceneGraph& scene, const Path& path, std::size_t skip_first) {
    std::vector<int> out;
    for (std::size_t i = skip_first; i < path.size(); ++i) {
        const BeliefCell b = scene.belief().at(path[i]);
        if (b.kind == Knowledge::Obstacle && std::find(out.begin(), out.end(), b.object) == out.end())
            out.push_back(b.object);
    }
    return out;
}

Path trim_to_approach(Path path, const TraversalMask& mask, Cell target) {
    if (path.size() >= 2 || !mask.open(target)) path.pop_back();
    if (path.empty()) path.push_back(target);
    return path;
}

// Lexicographic (obstacle cells entered, steps) path over the relaxed mask.
std::optional<Path> fewest_blocker_approach(const SceneGraph& scene, Cell from, Cell target) {
    const TraversalMask& mask = scene.relaxed_mask();
    if (!mask.open(from)) return std::nullopt;
    const long long heavy = static_cast<long long>(mask.size()) + 1;
    auto enter = [&](Cell c) {
        return scene.belief().at(c).kind == Knowledge::Obstacle ? heavy + 1 : 1LL;
    };
    constexpr long long kNone = -1;
    std::vector<long long> dist(mask.size(), kNone);
    using Entry = std::tuple<long long, int, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    dist[mask.index(from)] = 0;
    open.emplace(0, from.y, from.x);
    while (!open.empty()) {
        auto [d, y, x] = open.top();
        open.pop();
        const Cell c{x, y};
        if (d != dist[mask.index(c)]) continue;
        for (Cell off : kNeighborOffsets) {
            const Cell n{c.x + off.x, c.y + off.y};
            if (!mask.open(n)) continue;
            long long& nd = dist[mask.index(n)];
            const long long cand = d + enter(n);
            if (nd == kNone || cand < nd) {
                nd = cand;
                open.emplace(nd, n.y, n.x);
            }
        }
    }
    auto at = [&](Cell c) { return mask.open(c) ? dist[mask.index(c)] : kNone; };
    Path reversed{target};
    Cell cur = target;
    if (!mask.open(target)) {
        long long best = kNone;
        for (Cell d : kNeighborOffsets) {
            const Cell n{target.x + d.x, target.y + d.y};
            const long long s = at(n);
            if (s != kNone && (best == kNone || s < best)) {
                best = s;
                cur = n;
            }
        }
        if (best == kNone) return std::nullopt;
        reversed.push_back(cur);
    } else if (at(target) == kNone) {
        return std::nullopt;
    }
    while (cur != from) {
        const long long want = at(cur) - enter(cur);
        for (Cell d : kNeighborOffsets) {
            const Cell n{cur.x + d.x, cur.y + d.y};
            if (at(n) == want) {
                cur = n;
                break;
            }
        }
        reversed.push_back(cur);
    }
    std::reverse(reversed.begin(), reversed.end());
    return trim_to_approach(std::move(reversed), mask, target);
}

}  // namespace

void ReasonerConfig::validate() const {
    if (!(effort >= 0.0) || !std::isfinite(effort)) throw ConfigError("manipulation effort e must be non-negative");
    if (beta && (!(*beta >= 0.0) || !std::isfinite(*beta))) throw ConfigError("centrality weight beta must be non-negative");
    if (history < 0) throw ConfigError("history length h must be non-negative");
}

double effective_beta(const SceneGraph& scene, const ReasonerConfig& config) {
    if (config.beta) return *config.beta;
    return scene.centrality() ? scene.centrality()->diameter() * scene.step_time() : 0.0;
}

double removal_cost(const SceneGraph& scene, int obstacle, int zone, double effort) {
    const SceneObject& o = scene.object(obstacle);
    if (o.kind != ObjectKind::Obstacle) throw LookupError("object " + std::to_string(obstacle) + " is not an obstacle");
    scene.zone(zone);
    if (!movable(o)) return kInf;
    const ObstacleLegs legs = obstacle_legs(scene, o);
    const int carry = legs.carry[static_cast<std::size_t>(zone)];
    if (legs.approach == DistanceField::kUnreachable || carry == DistanceField::kUnreachable) return kInf;
    return legs.approach * scene.step_time() + 2.0 * effort + carry * scene.step_time();
}

std::vector<int> movable_obstacles(const SceneGraph& scene) {
    std::vector<int> out;
    for (const auto& [id, o] : scene.objects()) {
        if (movable(o)) out.push_back(id);
    }
    return out;
}

std::optional<Intervention> select_intervention(const SceneGraph& scene, std::span<const int> obstacles,
                                                const ReasonerConfig& config) {
    const double beta = effective_beta(scene, config);
    std::optional<Intervention> best;
    std::vector<int> ids(obstacles.begin(), obstacles.end());
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (int id : ids) {
        if (!scene.discovered(id)) continue;
        const SceneObject& o = scene.object(id);
        if (!movable(o)) continue;
        const ObstacleLegs legs = obstacle_legs(scene, o);
        if (legs.approach == DistanceField::kUnreachable) continue;
        for (const auto& z : scene.zones()) {
            const int carry = legs.carry[static_cast<std::size_t>(z.id)];
            if (carry == DistanceField::kUnreachable) continue;
            Intervention c;
            c.obstacle = id;
            c.zone = z.id;
            c.cost = legs.approach * scene.step_time() + 2.0 * config.effort + carry * scene.step_time();
            c.score = c.cost - beta * o.attributes.centrality;
            if (!best || std::tie(c.score, c.cost, c.obstacle, c.zone) <
                             std::tie(best->score, best->cost, best->obstacle, best->zone))
                best = c;
        }
    }
    return best;
}

std::optional<Path> approach_path(const TraversalMask& mask, Cell from, Cell target) {
    auto path = shortest_distances(mask, from).path_to(target);
    if (!path) return std::nullopt;
    return trim_to_approach(std::move(*path), mask, target);
}

namespace {

template <typename Approach>
std::optional<TaskRoute> build_task_route(const SceneGraph& scene, const TraversalMask& mask, Cell start,
                                          const Task& task, Approach approach) {
    const bool carrying = scene.carried() && *scene.carried() == task.object;
    if (!scene.discovered(task.receptacle)) return std::nullopt;
    if (!carrying && !scene.discovered(task.object)) return std::nullopt;
    if (!mask.open(start)) return std::nullopt;
    TaskRoute route;
    Cell pick_cell = start;
    if (!carrying) {
        const Cell object_cell = scene.object(task.object).cell;
        auto leg = approach(start, object_cell);
        if (!leg) return std::nullopt;
        route.to_object = std::move(*leg);
        pick_cell = route.to_object.back();
        if (!mask.open(pick_cell)) return std::nullopt;
    }
    auto leg = approach(pick_cell, scene.object(task.receptacle).cell);
    if (!leg) return std::nullopt;
    route.to_receptacle = std::move(*leg);
    route.steps = static_cast<int>(route.to_receptacle.size()) - 1;
    if (!route.to_object.empty()) route.steps += static_cast<int>(route.to_object.size()) - 1;
    Path all = route.to_object;
    all.insert(all.end(), route.to_receptacle.begin(), route.to_receptacle.end());
    route.blockers = obstacles_on(scene, all, 0);
    return route;
}

}  // namespace

std::optional<TaskRoute> task_route_from(const SceneGraph& scene, const TraversalMask& mask, Cell start,
                                         const Task& task) {
    return build_task_route(scene, mask, start, task,
                            [&](Cell from, Cell target) { return approach_path(mask, from, target); });
}

std::optional<TaskRoute> fewest_blocker_route(const SceneGraph& scene, const Task& task) {
    return build_task_route(scene, scene.relaxed_mask(), scene.robot(), task, [&](Cell from, Cell target) {
        return fewest_blocker_approach(scene, from, target);
    });
}

std::optional<TaskRoute> task_route(const SceneGraph& scene, const Task& task, bool relaxed) {
    return task_route_from(scene, relaxed ? scene.relaxed_mask() : scene.strict_mask(), scene.robot(), task);
}

std::optional<ExploreTarget> explore_target(const SceneGraph& scene, int room, bool relaxed) {
    const FloorplanIndex& index = scene.index();
    if (room < 0 || room >= index.room_count()) throw LookupError("unknown room id");
    const DistanceField& field = relaxed ? scene.relaxed_from_robot() : scene.strict_from_robot();
    const TraversalMask& mask = relaxed ? scene.relaxed_mask() : scene.strict_mask();
    std::optional<std::tuple<int, int, Cell>> best;  // score, steps, cell
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (!mask.bits()[i]) continue;
        const Cell c = mask.cell(i);
        const int steps = field.steps_to(c);
        if (steps == DistanceField::kUnreachable) continue;
        bool border = false;
        for (Cell d : kNeighborOffsets) border = border || is_unknown_traversable(scene, {c.x + d.x, c.y + d.y});
        if (!border) continue;
        const int to_room = index.distance_to_room(room, c);
        if (to_room < 0) continue;
        const auto key = std::make_tuple(steps + to_room, steps, c);
        if (!best || key < *best) best = key;
    }
    if (!best) return std::nullopt;
    ExploreTarget t;
    t.room = room;
    t.cell = std::get<2>(*best);
    t.path = *field.path_to(t.cell);
    t.score = std::get<0>(*best) * scene.step_time();
    return t;
}

HeuristicReasoner::HeuristicReasoner(ReasonerConfig config, const RoomPriors* priors)
    : config_(config), priors_(priors ? priors : &RoomPriors::builtin()) {
    config_.validate();
}

Decision HeuristicReasoner::explore(const SceneGraph& scene, const TaskInfo& task) const {
    const bool carrying = scene.carried() && *scene.carried() == task.task.object;
    std::vector<std::string> missing;
    if (!carrying && !scene.discovered(task.task.object)) missing.push_back(task.object_category);
    if (!scene.discovered(task.task.receptacle)) missing.push_back(task.receptacle_category);

    auto prior = [&](int room) {
        double p = 0.0;
        for (const auto& cat : missing) p += priors_->weight(cat, scene.rooms()[static_cast<std::size_t>(room)].type);
        return p;
    };

    // Rank candidate rooms by prior, then by exploration cost.
    auto best_room = [&](const std::vector<int>& rooms, bool relaxed) -> std::optional<ExploreTarget> {
        std::optional<ExploreTarget> best;
        double best_prior = -1.0;
        for (int r : rooms) {
            if (scene.rooms()[static_cast<std::size_t>(r)].unknown_cells == 0) continue;
            auto t = explore_target(scene, r, relaxed);
            if (!t) continue;
            const double p = prior(r);
            if (!best || p > best_prior || (p == best_prior && std::tie(t->score, t->room) < std::tie(best->score, best->room))) {
                best = t;
                best_prior = p;
            }
        }
        return best;
    };

    std::vector<int> frontier = scene.frontier_rooms();
    std::vector<int> all_rooms;
    for (const auto& r : scene.rooms()) all_rooms.push_back(r.id);

    for (const auto* rooms : {&frontier, &all_rooms}) {
        if (auto t = best_room(*rooms, false)) return ExploreRoom{t->room, t->path};
        if (auto t = best_room(*rooms, true)) {
            const auto blockers = obstacles_on(scene, t->path, 1);
            auto pick = select_intervention(scene, blockers, config_);
            if (!pick) pick = select_intervention(scene, movable_obstacles(scene), config_);
            if (pick) return MoveObstacle{pick->obstacle, pick->zone};
        }
    }
    return GiveUp{"no reachable unexplored space left"};
}

bool HeuristicReasoner::favorable(const SceneGraph& scene, const Intervention& pick, const Task& task,
                                  int strict_steps) const {
    const SceneObject& o = scene.object(pick.obstacle);
    const SceneZone& z = scene.zone(pick.zone);
    // Where the robot stands after stowing: the zone neighbour closest to
    // the obstacle's cell on the carry leg.
    TraversalMask carry_mask = scene.strict_mask();
    carry_mask.set_open(o.cell);
    const auto carry = approach_path(carry_mask, o.cell, z.cell);
    if (!carry) return false;
    TraversalMask after = scene.relaxed_mask();
    after.set_open(z.cell, false);
    after.set_open(o.cell);
    const auto route = task_route_from(scene, after, carry->back(), task);
    if (!route) return false;
    const double beta = effective_beta(scene, config_);
    const double with_move = pick.cost + route->steps * scene.step_time() - beta * o.attributes.centrality;
    return with_move < strict_steps * scene.step_time();
}

Decision HeuristicReasoner::decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision>) const {
    const Task& t = task.task;
    const bool carrying = scene.carried() && *scene.carried() == t.object;
    if ((!carrying && !scene.discovered(t.object)) || !scene.discovered(t.receptacle)) return explore(scene, task);

    const auto relaxed = task_route(scene, t, true);
    if (!relaxed) {
        // Targets known but walled off by unknown space: look around them first.
        for (int target : {t.object, t.receptacle}) {
            if (target == t.object && carrying) continue;
            const int room = scene.index().region_of(scene.object(target).cell);
            if (room < 0) continue;
            if (auto e = explore_target(scene, room, false)) return ExploreRoom{e->room, e->path};
        }
        const Decision d = explore(scene, task);
        if (std::holds_alternative<GiveUp>(d)) return GiveUp{"task targets are unreachable"};
        return d;
    }
    const auto strict = task_route(scene, t, false);
    if (relaxed->blockers.empty() && strict) {
        return AttemptTask{t.object, t.receptacle, strict->to_object, strict->to_receptacle};
    }
    auto pick = select_intervention(scene, relaxed->blockers, config_);
    if (strict) {
        if (pick && favorable(scene, *pick, t, strict->steps)) return MoveObstacle{pick->obstacle, pick->zone};
        return Detour{t.object, t.receptacle, strict->to_object, strict->to_receptacle};
    }
    if (const auto fewest = fewest_blocker_route(scene, t)) pick = select_intervention(scene, fewest->blockers, config_);
    if (!pick) pick = select_intervention(scene, movable_obstacles(scene), config_);
    if (pick) return MoveObstacle{pick->obstacle, pick->zone};
    return GiveUp{"no feasible intervention restores the route"};
}

Decision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history,
                const ReasonerConfig& config) {
    return HeuristicReasoner(config).decide(scene, task, history);
}

std::string check_decision(const SceneGraph& scene, const TaskInfo& task, const Decision& decision) {
    const Task& t = task.task;
    auto check_route = [&](int object, int receptacle, const Path& to_object, const Path& to_receptacle) -> std::string {
        if (object != t.object || receptacle != t.receptacle) return "decision names a different task";
        const auto route = task_route(scene, t, false);
        if (!route) return "no obstacle-free route to the task targets";
        for (const Path* p : {&to_object, &to_receptacle}) {
            for (std::size_t i = 0; i < p->size(); ++i) {
                if (!scene.strict_mask().open((*p)[i])) return "path crosses a cell that is not known free";
                if (i > 0 && manhattan((*p)[i], (*p)[i - 1]) != 1) return "path is not 4-connected";
            }
        }
        return {};
    };
    struct Visitor {
        const SceneGraph& scene;
        const TaskInfo& task;
        decltype(check_route)& route;
        std::string operator()(const AttemptTask& d) const {
            return route(d.object, d.receptacle, d.to_object, d.to_receptacle);
        }
        std::string operator()(const Detour& d) const {
            return route(d.object, d.receptacle, d.to_object, d.to_receptacle);
        }
        std::string operator()(const MoveObstacle& d) const {
            if (!scene.discovered(d.obstacle)) return "obstacle is not discovered";
            if (scene.object(d.obstacle).kind != ObjectKind::Obstacle) return "object is not an obstacle";
            if (d.zone < 0 || d.zone >= static_cast<int>(scene.zones().size())) return "unknown drop zone";
            if (!std::isfinite(removal_cost(scene, d.obstacle, d.zone, 0.0))) return "obstacle or drop zone unreachable";
            return {};
        }
        std::string operator()(const ExploreRoom& d) const {
            if (d.room < 0 || d.room >= static_cast<int>(scene.rooms().size())) return "unknown room";
            if (d.path.empty() || d.path.front() != scene.robot()) return "exploration path must start at the robot";
            for (std::size_t i = 0; i < d.path.size(); ++i) {
                if (!scene.strict_mask().open(d.path[i])) return "path crosses a cell that is not known free";
                if (i > 0 && manhattan(d.path[i], d.path[i - 1]) != 1) return "path is not 4-connected";
            }
            return {};
        }
        std::string operator()(const GiveUp&) const { return {}; }
    };
    return std::visit(Visitor{scene, task, check_route}, decision);
}

std::optional<Decision> materialize(const SceneGraph& scene, const TaskInfo& task, const Command& command) {
    const Task& t = task.task;
    switch (command.verb) {
        case Verb::Attempt:
        case Verb::Detour: {
            const auto route = task_route(scene, t, false);
            if (!route) return std::nullopt;
            if (command.verb == Verb::Attempt) return AttemptTask{t.object, t.receptacle, route->to_object, route->to_receptacle};
            return Detour{t.object, t.receptacle, route->to_object, route->to_receptacle};
        }
        case Verb::Move: {
            const Decision d = MoveObstacle{command.obstacle, command.zone};
            if (!check_decision(scene, task, d).empty()) return std::nullopt;
            return d;
        }
        case Verb::Explore: {
            if (command.room < 0 || command.room >= static_cast<int>(scene.rooms().size())) return std::nullopt;
            const auto target = explore_target(scene, command.room, false);
            if (!target) return std::nullopt;
            return ExploreRoom{command.room, target->path};
        }
        case Verb::GiveUp: return GiveUp{command.reason.empty() ? "external reasoner gave up" : command.reason};
    }
    return std::nullopt;
}

}  // namespace clutternav

#include "clutternav/policies.hpp"

#include <algorithm>
#include <tuple>

#include "clutternav/errors.hpp"

namespace clutternav {

namespace {

struct Reach {
    int obstacle = -1;
    int approach = DistanceField::kUnreachable;
    std::vector<int> carry;
};

Reach reach_of(const SceneGraph& scene, const SceneObject& o) {
    TraversalMask mask = scene.strict_mask();
    mask.set_open(o.cell);
    Reach r;
    r.obstacle = o.id;
    r.approach = shortest_distances(mask, scene.robot()).steps_to(o.cell);
    r.carry.assign(scene.zones().size(), DistanceField::kUnreachable);
    if (r.approach == DistanceField::kUnreachable) return r;
    const DistanceField from = shortest_distances(mask, o.cell);
    for (const auto& z : scene.zones()) {
        if (z.cell != o.cell) r.carry[static_cast<std::size_t>(z.id)] = from.steps_to_target(z.cell);
    }
    return r;
}

std::optional<int> nearest_in(const Reach& r, const SceneGraph& scene, std::span<const Cell> avoid) {
    std::optional<std::pair<int, int>> best, best_any;  // steps, zone
    for (const auto& z : scene.zones()) {
        const int s = r.carry[static_cast<std::size_t>(z.id)];
        if (s == DistanceField::kUnreachable) continue;
        const std::pair<int, int> key{s, z.id};
        if (!best_any || key < *best_any) best_any = key;
        if (std::find(avoid.begin(), avoid.end(), z.cell) != avoid.end()) continue;
        if (!best || key < *best) best = key;
    }
    if (best) return best->second;
    if (best_any) return best_any->second;
    return std::nullopt;
}

std::vector<Cell> route_cells(const SceneGraph& scene, const Task& task) {
    std::vector<Cell> cells;
    for (bool relaxed : {false, true}) {
        if (auto r = task_route(scene, task, relaxed)) {
            cells.insert(cells.end(), r->to_object.begin(), r->to_object.end());
            cells.insert(cells.end(), r->to_receptacle.begin(), r->to_receptacle.end());
        }
    }
    return cells;
}

}  // namespace

std::string_view to_string(MapMode mode) { return mode == MapMode::KnownMap ? "KnownMap" : "UnknownMap"; }

std::optional<MapMode> parse_map_mode(std::string_view name) {
    if (name == "KnownMap" || name == "known") return MapMode::KnownMap;
    if (name == "UnknownMap" || name == "unknown") return MapMode::UnknownMap;
    return std::nullopt;
}

std::optional<int> nearest_zone(const SceneGraph& scene, int obstacle, std::span<const Cell> avoid) {
    const SceneObject& o = scene.object(obstacle);
    if (o.kind != ObjectKind::Obstacle || o.carried || o.stowed) return std::nullopt;
    return nearest_in(reach_of(scene, o), scene, avoid);
}

Decision baseline_always_detour(const SceneGraph& scene, const TaskInfo& task) {
    if (auto r = task_route(scene, task.task, false))
        return AttemptTask{task.task.object, task.task.receptacle, r->to_object, r->to_receptacle};
    return GiveUp{"no obstacle-free route"};
}

Decision baseline_always_interact(const SceneGraph& scene, const TaskInfo& task) {
    const auto relaxed = task_route(scene, task.task, true);
    if (!relaxed) return GiveUp{"task targets are unreachable"};
    if (relaxed->blockers.empty()) return baseline_always_detour(scene, task);
    const int first = relaxed->blockers.front();
    const auto avoid = route_cells(scene, task.task);
    if (auto z = nearest_zone(scene, first, avoid)) return MoveObstacle{first, *z};
    return GiveUp{"blocking obstacle has no reachable drop zone"};
}

Decision baseline_clean_sp(const SceneGraph& scene, const TaskInfo& task) {
    std::optional<std::tuple<int, int, int, int>> best;  // approach, carry, obstacle, zone
    for (int id : movable_obstacles(scene)) {
        const Reach r = reach_of(scene, scene.object(id));
        if (r.approach == DistanceField::kUnreachable) continue;
        const auto z = nearest_in(r, scene, {});
        if (!z) continue;
        const auto key = std::make_tuple(r.approach, r.carry[static_cast<std::size_t>(*z)], id, *z);
        if (!best || key < *best) best = key;
    }
    if (best) return MoveObstacle{std::get<2>(*best), std::get<3>(*best)};
    return baseline_always_detour(scene, task);
}

PolicyDecision AlwaysDetourPolicy::decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision>) {
    return {baseline_always_detour(scene, task), false, {}};
}

PolicyDecision AlwaysInteractPolicy::decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision>) {
    return {baseline_always_interact(scene, task), false, {}};
}

PolicyDecision CleanSpPolicy::decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision>) {
    return {baseline_clean_sp(scene, task), false, {}};
}

HeuristicPolicy::HeuristicPolicy(std::string name, ReasonerConfig config, std::optional<MapMode> mode,
                                 const RoomPriors* priors)
    : name_(std::move(name)), reasoner_(config, priors), mode_(mode) {}

PolicyDecision HeuristicPolicy::decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history) {
    return {reasoner_.decide(scene, task, history), false, {}};
}

ExternalPolicy::ExternalPolicy(std::shared_ptr<LlmClient> client, ReasonerConfig config, const RoomPriors* priors)
    : client_(std::move(client)), fallback_(config, priors) {
    if (!client_) throw ConfigError("the llm method requires a client");
}

PolicyDecision ExternalPolicy::decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history) {
    auto out = external_decide(scene, task, history, *client_, fallback_);
    return {std::move(out.decision), out.fallback, std::move(out.note)};
}

const std::vector<std::string>& method_names() {
    static const std::vector<std::string> names = {"always_detour", "always_interact", "clean_sp", "ours",
                                                   "ours_known",    "ours_unknown",    "llm"};
    return names;
}

std::unique_ptr<Policy> make_policy(std::string_view method, const ReasonerConfig& config,
                                    std::shared_ptr<LlmClient> client, const RoomPriors* priors) {
    if (method == "always_detour") return std::make_unique<AlwaysDetourPolicy>();
    if (method == "always_interact") return std::make_unique<AlwaysInteractPolicy>();
    if (method == "clean_sp") return std::make_unique<CleanSpPolicy>();
    if (method == "ours") return std::make_unique<HeuristicPolicy>("ours", config, std::nullopt, priors);
    if (method == "ours_known") return std::make_unique<HeuristicPolicy>("ours_known", config, MapMode::KnownMap, priors);
    if (method == "ours_unknown")
        return std::make_unique<HeuristicPolicy>("ours_unknown", config, MapMode::UnknownMap, priors);
    if (method == "llm") {
        if (!client) throw ConfigError("method 'llm' requires a completion client");
        return std::make_unique<ExternalPolicy>(std::move(client), config, priors);
    }
    throw ConfigError("unknown method '" + std::string(method) + "'");
}

}  // namespace clutternav

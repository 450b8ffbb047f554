#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clutternav/decision.hpp"
#include "clutternav/room_priors.hpp"
#include "clutternav/scene_graph.hpp"

namespace clutternav {

enum class ReasonerMode { Heuristic, External };

struct ReasonerConfig {
    double effort = 5.0;         // e: seconds per pick and per place
    std::optional<double> beta;  // centrality weight; defaults to relaxed-graph diameter times step time
    int history = 3;             // h: decisions shown to an external reasoner
    ReasonerMode mode = ReasonerMode::Heuristic;
    bool centrality_buckets = false;

    /// Throws ConfigError unless e, beta and h are non-negative.
    void validate() const;
};

double effective_beta(const SceneGraph& scene, const ReasonerConfig& config);

/// d(r, o) + 2e + d(o, z) in seconds. The approach leg runs on known free
/// cells with only the obstacle's own cell opened; the carry leg starts on
/// that cell. Infinity when either leg is disconnected. Throws LookupError
/// for unknown ids or non-obstacles.
double removal_cost(const SceneGraph& scene, int obstacle, int zone, double effort);

struct Intervention {
    int obstacle = 0;
    int zone = 0;
    double cost = 0.0;   // removal_cost
    double score = 0.0;  // cost - beta * bc

    friend bool operator==(const Intervention&, const Intervention&) = default;
};

/// Argmin of removal_cost - beta * bc over `obstacles` x all drop zones,
/// restricted to finite costs and to obstacles that are movable (discovered,
/// resting on the floor). Ties: lower cost, lower obstacle id, lower zone id.
std::optional<Intervention> select_intervention(const SceneGraph& scene, std::span<const int> obstacles,
                                                const ReasonerConfig& config);

/// Discovered obstacles that rest on the floor (not stowed, not carried).
std::vector<int> movable_obstacles(const SceneGraph& scene);

/// Robot -> object (stop next to it) -> receptacle (stop next to it).
struct TaskRoute {
    Path to_object;      // empty when the object is carried
    Path to_receptacle;
    int steps = 0;
    std::vector<int> blockers;  // obstacles crossed, in route order, unique
};

/// Route over the relaxed (obstacles passable) or strict view of the scene.
/// Empty when either target is undiscovered or unreachable.
std::optional<TaskRoute> task_route(const SceneGraph& scene, const Task& task, bool relaxed);

/// Relaxed route crossing the fewest obstacle cells, ties broken by steps.
std::optional<TaskRoute> fewest_blocker_route(const SceneGraph& scene, const Task& task);
std::optional<TaskRoute> task_route_from(const SceneGraph& scene, const TraversalMask& mask, Cell start,
                                         const Task& task);

/// Walk to `target` and stop on the last open cell before it. For open
/// targets that is the cell before the target; a path of one cell means the
/// robot is already adjacent (or on it).
std::optional<Path> approach_path(const TraversalMask& mask, Cell from, Cell target);

/// Exploration target for a room: a reachable known cell bordering unknown
/// traversable space, minimizing travel plus floorplan distance into the room.
struct ExploreTarget {
    int room = 0;
    Cell cell;
    Path path;
    double score = 0.0;
};
std::optional<ExploreTarget> explore_target(const SceneGraph& scene, int room, bool relaxed);

/// Deterministic planner following the cost-benefit decision flow. History
/// does not influence the result.
class HeuristicReasoner {
public:
    explicit HeuristicReasoner(ReasonerConfig config = {}, const RoomPriors* priors = nullptr);

    Decision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history = {}) const;

    /// Chooses a room to explore for the task; GiveUp when nothing is left.
    Decision explore(const SceneGraph& scene, const TaskInfo& task) const;

    /// Whether relocating (o, z) beats taking the obstacle-free detour.
    bool favorable(const SceneGraph& scene, const Intervention& pick, const Task& task, int strict_steps) const;

    const ReasonerConfig& config() const { return config_; }

private:
    ReasonerConfig config_;
    const RoomPriors* priors_;
};

/// Free function form.
Decision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history,
                const ReasonerConfig& config);

/// Checks that a decision can be executed against the scene: ids exist and
/// the required paths are feasible on known free cells. Empty when valid.
std::string check_decision(const SceneGraph& scene, const TaskInfo& task, const Decision& decision);

/// Completes a parsed command into a decision with concrete paths. Empty when
/// the command cannot be executed in this scene.
std::optional<Decision> materialize(const SceneGraph& scene, const TaskInfo& task, const Command& command);

}  // namespace clutternav

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "clutternav/centrality.hpp"
#include "clutternav/decision.hpp"
#include "clutternav/episode.hpp"
#include "clutternav/perception.hpp"

namespace clutternav {

struct ObjectAttributes {
    std::optional<double> path_cost;    // relaxed route time from the robot
    std::vector<int> blockers;          // obstacles on that route, in path order
    double centrality = 0.0;            // betweenness of the occupied cell
    std::optional<double> detour_cost;  // route time avoiding every obstacle

    friend bool operator==(const ObjectAttributes&, const ObjectAttributes&) = default;
};

struct SceneObject {
    int id = 0;
    std::string category;
    ObjectKind kind = ObjectKind::TaskObject;
    Cell cell;
    int room = -1;
    bool carried = false;
    bool stowed = false;
    ObjectAttributes attributes;

    friend bool operator==(const SceneObject&, const SceneObject&) = default;
};

struct SceneRoom {
    int id = 0;
    RoomType type = RoomType::LivingRoom;
    RoomStatus status = RoomStatus::Unexplored;
    int unknown_cells = 0;

    friend bool operator==(const SceneRoom&, const SceneRoom&) = default;
};

struct SceneZone {
    int id = 0;
    Cell cell;
    int room = 0;
    std::optional<double> reach_cost;  // obstacle-avoiding time to stand next to it
    int load = 0;                      // obstacles already stowed

    friend bool operator==(const SceneZone&, const SceneZone&) = default;
};

/// The current task as the agent sees it.
struct TaskInfo {
    Task task;
    std::string object_category;
    std::string receptacle_category;
    int index = 0;    // 0-based position in the episode
    int horizon = 1;
};

struct SceneOptions {
    double step_time = 1.0;
    bool compute_centrality = true;
};

/// Snapshot of the agent's world model: discovered objects with attributes,
/// blocking relation, rooms, drop zones and the two traversal views.
/// The relaxed view treats movable obstacles as passable; the strict view
/// only known Free cells.
class SceneGraph {
public:
    Cell robot() const { return robot_; }
    int timestep() const { return timestep_; }
    std::optional<int> carried() const { return carried_; }
    double step_time() const { return step_time_; }

    const std::map<int, SceneObject>& objects() const { return objects_; }
    bool discovered(int id) const { return objects_.count(id) != 0; }
    /// Throws LookupError for undiscovered ids.
    const SceneObject& object(int id) const;

    const std::vector<SceneRoom>& rooms() const { return rooms_; }
    const std::vector<SceneZone>& zones() const { return zones_; }
    const SceneZone& zone(int id) const;

    /// Obstacle i lies on the canonical relaxed path from the robot to j.
    bool blocking(int i, int j) const;
    const std::set<std::pair<int, int>>& blocking_edges() const { return edges_; }

    /// Rooms not yet Explored: Unexplored first, then by time to the nearest
    /// door cell of the room, then id.
    std::vector<int> frontier_rooms() const;

    const TraversalMask& relaxed_mask() const { return relaxed_; }
    const TraversalMask& strict_mask() const { return strict_; }
    const DistanceField& relaxed_from_robot() const { return *relaxed_field_; }
    const DistanceField& strict_from_robot() const { return *strict_field_; }
    /// Relaxed-graph centrality; null when not computed.
    const CentralityMap* centrality() const { return centrality_.get(); }
    const Belief& belief() const { return *belief_; }
    const FloorplanIndex& index() const { return belief_->index(); }

    friend bool operator==(const SceneGraph& a, const SceneGraph& b);

private:
    friend SceneGraph update(const Belief&, Cell, std::span<const DropZone>, const SceneOptions&, CentralityCache*);

    Cell robot_;
    int timestep_ = 0;
    std::optional<int> carried_;
    double step_time_ = 1.0;
    std::map<int, SceneObject> objects_;
    std::vector<SceneRoom> rooms_;
    std::vector<SceneZone> zones_;
    std::set<std::pair<int, int>> edges_;
    std::vector<std::optional<double>> door_time_;
    TraversalMask relaxed_;
    TraversalMask strict_;
    std::shared_ptr<const DistanceField> relaxed_field_;
    std::shared_ptr<const DistanceField> strict_field_;
    std::shared_ptr<const CentralityMap> centrality_;
    std::shared_ptr<const Belief> belief_;
};

/// Relaxed mask: known Free cells plus cells of movable, non-stowed obstacles.
TraversalMask relaxed_mask(const Belief& belief);
/// Strict mask: known Free cells only.
TraversalMask strict_mask(const Belief& belief);

/// Rebuilds every attribute from the belief. Drop zones are known a priori.
SceneGraph update(const Belief& belief, Cell robot, std::span<const DropZone> zones,
                  const SceneOptions& options = {}, CentralityCache* cache = nullptr);

struct SerializeOptions {
    int history = 3;                  // last h decisions
    bool centrality_buckets = false;  // low / medium / high instead of numbers
};

std::string centrality_bucket(double bc);

/// Deterministic line-oriented rendering used as the reasoner input.
std::string serialize_to_text(const SceneGraph& scene, const std::optional<TaskInfo>& task,
                              std::span<const Decision> history, const SerializeOptions& options = {});

}  // namespace clutternav

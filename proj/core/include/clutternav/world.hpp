#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clutternav/episode.hpp"
#include "clutternav/grid.hpp"

namespace clutternav {

struct StepAction {
    Cell to;
    friend bool operator==(const StepAction&, const StepAction&) = default;
};

struct PickAction {
    int object = 0;
    friend bool operator==(const PickAction&, const PickAction&) = default;
};

struct PlaceAction {
    int object = 0;
    Cell cell;
    friend bool operator==(const PlaceAction&, const PlaceAction&) = default;
};

using Action = std::variant<StepAction, PickAction, PlaceAction>;

/// "step x y", "pick id", "place id x y".
std::string to_string(const Action& action);
/// Throws FormatError.
Action parse_action(std::string_view text);

struct ObjectState {
    ObjectSpec spec;
    Cell cell;             // last resting cell; meaningless while carried
    bool carried = false;
    bool stowed = false;   // obstacle resting on a drop zone
};

struct ActionOutcome {
    bool ok = false;
    int cost = 0;        // timesteps charged
    std::string error;   // empty when ok
};

/// Ground-truth simulation state of one episode.
class World {
public:
    explicit World(const Episode& episode);

    const GridGraph& graph() const { return graph_; }
    const Floorplan& floorplan() const { return graph_.floorplan(); }
    Cell robot() const { return robot_; }
    int timestep() const { return timestep_; }
    std::optional<int> carried() const { return carried_; }

    const std::vector<ObjectState>& objects() const { return objects_; }
    const ObjectState& object(int id) const;
    const std::vector<DropZone>& drop_zones() const { return zones_; }
    std::optional<int> zone_at(Cell c) const;

    /// Ids of objects resting on `c` (not carried), ascending.
    std::vector<int> objects_at(Cell c) const;
    /// Cells of obstacles not yet stowed on a drop zone, sorted.
    std::vector<Cell> floor_obstacle_cells() const;
    bool task_done(const Task& task) const;
    int effort_steps(int object) const;

    /// Validates and executes one primitive. A rejected action leaves the
    /// world unchanged and reports the reason.
    ActionOutcome apply(const Action& action);
    /// Reason an action would be rejected, or empty when it is valid.
    std::string check(const Action& action) const;

private:
    std::string check_place(const PlaceAction& place) const;

    GridGraph graph_;
    std::vector<ObjectState> objects_;
    std::vector<DropZone> zones_;
    Cell robot_;
    std::optional<int> carried_;
    int timestep_ = 0;
};

/// Functional form: returns the successor world. Throws StateError when the
/// action is rejected.
World apply(World world, const Action& action);

}  // namespace clutternav

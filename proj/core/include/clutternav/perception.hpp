#pragma once

#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "clutternav/floorplan.hpp"
#include "clutternav/grid.hpp"
#include "clutternav/world.hpp"

namespace clutternav {

enum class Knowledge : std::uint8_t { Unknown, Free, Wall, Obstacle, StaticFixture };

struct BeliefCell {
    Knowledge kind = Knowledge::Unknown;
    int object = -1;

    friend bool operator==(const BeliefCell&, const BeliefCell&) = default;
};

BeliefCell to_belief(CellState state);

enum class RoomStatus : std::uint8_t { Unexplored, Partial, Explored };
std::string_view to_string(RoomStatus status);

struct SensorConfig {
    int range = 5;  // Chebyshev radius in cells
};

struct ObjectSighting {
    int id = 0;
    std::string category;
    ObjectKind kind = ObjectKind::TaskObject;
    Cell cell;

    friend bool operator==(const ObjectSighting&, const ObjectSighting&) = default;
};

struct Observation {
    Cell robot;
    int timestep = 0;
    std::vector<std::pair<Cell, BeliefCell>> cells;  // sorted by cell
    std::vector<ObjectSighting> objects;             // sorted by id
};

/// What the agent knows about one object.
struct KnownObject {
    int id = 0;
    std::string category;
    ObjectKind kind = ObjectKind::TaskObject;
    Cell cell;
    bool carried = false;
    bool stowed = false;

    friend bool operator==(const KnownObject&, const KnownObject&) = default;
};

inline constexpr double kExploredFraction = 0.9;

/// The agent's partial map. Starts all Unknown; the floorplan geometry (room
/// extents and doors) is known separately through FloorplanIndex.
class Belief {
public:
    explicit Belief(std::shared_ptr<const Floorplan> plan);
    /// Full observability: every cell and object known, every room Explored.
    static Belief from_ground_truth(const World& world);

    const Floorplan& floorplan() const { return *plan_; }
    const std::shared_ptr<const Floorplan>& floorplan_ptr() const { return plan_; }
    const FloorplanIndex& index() const { return *index_; }

    BeliefCell at(Cell c) const;
    bool known(Cell c) const { return at(c).kind != Knowledge::Unknown; }
    std::size_t known_count() const { return known_count_; }

    const std::map<int, KnownObject>& objects() const { return objects_; }
    bool discovered(int id) const { return objects_.count(id) != 0; }
    const KnownObject& object(int id) const;

    RoomStatus room_status(int room) const;
    const std::vector<RoomStatus>& room_statuses() const { return status_; }
    /// Number of Unknown cells in the room.
    int unknown_in_room(int room) const;
    int last_update() const { return last_update_; }

    /// Copies every visible cell and sighting. Throws ArgumentError when the
    /// observation is older than the last update.
    void integrate(const Observation& obs);

    /// The agent's own manipulations are known without sensing.
    void note_pick(int object, CellState cell_after);
    void note_place(int object, Cell cell, CellState cell_after, bool stowed);

    friend bool operator==(const Belief& a, const Belief& b);

private:
    void set_cell(Cell c, BeliefCell value);
    void refresh_rooms();

    std::shared_ptr<const Floorplan> plan_;
    std::shared_ptr<const FloorplanIndex> index_;
    std::vector<BeliefCell> cells_;
    std::size_t known_count_ = 0;
    std::vector<int> room_known_;
    std::vector<int> room_size_;
    std::vector<RoomStatus> status_;
    std::map<int, KnownObject> objects_;
    int last_update_ = -1;
};

/// Cells crossed by the segment between two cell centres, including both
/// ends. Where the segment passes exactly through a corner both side cells
/// are included.
std::vector<Cell> supercover_line(Cell from, Cell to);

/// Cells within Chebyshev `range` whose line of sight from the robot is not
/// interrupted by a closed cell. Closed cells are themselves visible. Throws
/// StateError when the robot cell is not free.
Observation observe(const World& world, Cell robot, const SensorConfig& sensor);

/// Functional form of Belief::integrate.
Belief integrate(Belief belief, const Observation& obs);

/// One JSON-lines record.
std::string observation_to_json(const Observation& obs);

}  // namespace clutternav

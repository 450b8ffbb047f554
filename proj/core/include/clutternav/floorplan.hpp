#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clutternav/cell.hpp"

namespace clutternav {

class TraversalMask;

enum class RoomType { Kitchen, LivingRoom, Bedroom, Bathroom, Hallway, Office };

inline constexpr RoomType kAllRoomTypes[] = {RoomType::Kitchen,  RoomType::LivingRoom,
                                             RoomType::Bedroom,  RoomType::Bathroom,
                                             RoomType::Hallway,  RoomType::Office};

std::string_view to_string(RoomType type);
std::optional<RoomType> parse_room_type(std::string_view name);

struct Room {
    int id = 0;
    RoomType type = RoomType::LivingRoom;
    std::vector<Cell> cells;  // sorted in (y, x) order
};

/// One-cell doorway joining rooms `a` and `b`.
struct Door {
    int a = 0;
    int b = 0;
    Cell cell;
};

/// Static building layout. Cells that belong to neither a room nor a door are
/// walls, whether or not they are listed in `walls`.
struct Floorplan {
    int width = 0;
    int height = 0;
    double resolution_m = 0.25;
    std::vector<Room> rooms;
    std::vector<Door> doors;
    std::vector<Cell> walls;

    bool in_bounds(Cell c) const { return c.x >= 0 && c.y >= 0 && c.x < width && c.y < height; }
    const Room& room(int id) const;
};

/// Throws FormatError when rooms overlap, doors are not adjacent to both of
/// their rooms, cells fall outside the grid, or the room/door cells do not
/// form one connected region.
void validate(const Floorplan& plan);

/// Room and door cells.
TraversalMask traversable_mask(const Floorplan& plan);

std::string floorplan_to_json(const Floorplan& plan);
Floorplan floorplan_from_json(std::string_view text);

/// Precomputed lookups over a floorplan: which room owns a cell, door cells per
/// room, and obstacle-free distances from every room.
class FloorplanIndex {
public:
    explicit FloorplanIndex(const Floorplan& plan);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return room_of_.size(); }

    /// Room id owning the cell, or -1 for doors and walls.
    int room_of(Cell c) const;
    /// Room id for room cells; for a door cell, the lower of its two room ids.
    int region_of(Cell c) const;
    bool is_door(Cell c) const;
    bool is_traversable(Cell c) const;
    const std::vector<Cell>& door_cells(int room) const;
    /// Obstacle-free step distance from `c` to the nearest cell of `room`
    /// (fixtures ignored), or -1 when disconnected.
    int distance_to_room(int room, Cell c) const;
    int room_count() const { return static_cast<int>(doors_by_room_.size()); }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<int> room_of_;
    std::vector<int> door_rooms_;
    std::vector<std::uint8_t> traversable_;
    std::vector<std::vector<Cell>> doors_by_room_;
    std::vector<std::vector<int>> room_distance_;
};

}  // namespace clutternav

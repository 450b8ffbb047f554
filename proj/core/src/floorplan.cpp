#include "clutternav/floorplan.hpp"

#include <algorithm>
#include <array>
#include <deque>

#include "clutternav/errors.hpp"
#include "clutternav/grid.hpp"
#include "json_io.hpp"

namespace clutternav {

namespace {

constexpr std::array<std::string_view, 6> kRoomTypeNames = {"Kitchen",  "LivingRoom", "Bedroom",
                                                            "Bathroom", "Hallway",    "Office"};

Floorplan floorplan_from(const detail::Json& j) {
    using detail::require;
    Floorplan plan;
    plan.width = require<int>(j, "width");
    plan.height = require<int>(j, "height");
    plan.resolution_m = require<double>(j, "resolution_m");
    for (const auto& r : detail::require_field(j, "rooms")) {
        Room room;
        room.id = require<int>(r, "id");
        const auto type = parse_room_type(require<std::string>(r, "type"));
        if (!type) throw FormatError("unknown room type");
        room.type = *type;
        room.cells = detail::cells_from_json(detail::require_field(r, "cells"));
        std::sort(room.cells.begin(), room.cells.end());
        plan.rooms.push_back(std::move(room));
    }
    for (const auto& d : detail::require_field(j, "doors")) {
        plan.doors.push_back({require<int>(d, "a"), require<int>(d, "b"),
                              detail::cell_from_json(detail::require_field(d, "cell"))});
    }
    plan.walls = detail::cells_from_json(detail::require_field(j, "walls"));
    std::sort(plan.walls.begin(), plan.walls.end());
    validate(plan);
    return plan;
}

}  // namespace

std::string_view to_string(RoomType type) { return kRoomTypeNames[static_cast<std::size_t>(type)]; }

std::optional<RoomType> parse_room_type(std::string_view name) {
    for (std::size_t i = 0; i < kRoomTypeNames.size(); ++i) {
        if (kRoomTypeNames[i] == name) return static_cast<RoomType>(i);
    }
    return std::nullopt;
}

const Room& Floorplan::room(int id) const {
    if (id < 0 || id >= static_cast<int>(rooms.size())) throw LookupError("unknown room id");
    return rooms[static_cast<std::size_t>(id)];
}

void validate(const Floorplan& plan) {
    if (plan.width <= 0 || plan.height <= 0) throw FormatError("floorplan dimensions must be positive");
    if (!(plan.resolution_m > 0.0)) throw FormatError("resolution_m must be positive");
    const std::size_t n = static_cast<std::size_t>(plan.width) * plan.height;
    // 0 unclaimed, 1 room, 2 door, 3 wall
    std::vector<std::uint8_t> claim(n, 0);
    std::vector<int> owner(n, -1);
    auto idx = [&](Cell c) { return static_cast<std::size_t>(c.y) * plan.width + c.x; };
    for (std::size_t i = 0; i < plan.rooms.size(); ++i) {
        const Room& r = plan.rooms[i];
        if (r.id != static_cast<int>(i)) throw FormatError("room ids must be 0..n-1 in order");
        if (r.cells.empty()) throw FormatError("room without cells");
        for (Cell c : r.cells) {
            if (!plan.in_bounds(c)) throw FormatError("room cell out of bounds");
            if (claim[idx(c)] != 0) throw FormatError("rooms overlap");
            claim[idx(c)] = 1;
            owner[idx(c)] = r.id;
        }
    }
    auto adjacent_to_room = [&](Cell c, int room) {
        for (Cell d : kNeighborOffsets) {
            const Cell m{c.x + d.x, c.y + d.y};
            if (plan.in_bounds(m) && owner[idx(m)] == room) return true;
        }
        return false;
    };
    for (const Door& d : plan.doors) {
        if (!plan.in_bounds(d.cell)) throw FormatError("door cell out of bounds");
        if (claim[idx(d.cell)] != 0) throw FormatError("door cell overlaps a room or another door");
        if (d.a == d.b || d.a < 0 || d.b < 0 || d.a >= static_cast<int>(plan.rooms.size()) ||
            d.b >= static_cast<int>(plan.rooms.size()))
            throw FormatError("door references unknown rooms");
        if (!adjacent_to_room(d.cell, d.a) || !adjacent_to_room(d.cell, d.b))
            throw FormatError("door cell must be adjacent to both of its rooms");
        claim[idx(d.cell)] = 2;
    }
    for (Cell w : plan.walls) {
        if (!plan.in_bounds(w)) throw FormatError("wall cell out of bounds");
        if (claim[idx(w)] == 1 || claim[idx(w)] == 2) throw FormatError("wall overlaps a room or door");
    }
    const TraversalMask mask = traversable_mask(plan);
    const auto open = mask.open_cells();
    if (!open.empty() && reachable_set(mask, open.front()).size() != open.size())
        throw FormatError("floorplan rooms are not connected");
}

TraversalMask traversable_mask(const Floorplan& plan) {
    TraversalMask mask(plan.width, plan.height);
    for (const Room& r : plan.rooms) {
        for (Cell c : r.cells) {
            if (mask.in_bounds(c)) mask.set_open(c);
        }
    }
    for (const Door& d : plan.doors) {
        if (mask.in_bounds(d.cell)) mask.set_open(d.cell);
    }
    return mask;
}

std::string floorplan_to_json(const Floorplan& plan) {
    detail::Json j;
    j["width"] = plan.width;
    j["height"] = plan.height;
    j["resolution_m"] = plan.resolution_m;
    j["rooms"] = detail::Json::array();
    for (const Room& r : plan.rooms) {
        j["rooms"].push_back({{"id", r.id}, {"type", std::string(to_string(r.type))}, {"cells", detail::cells_to_json(r.cells)}});
    }
    j["doors"] = detail::Json::array();
    for (const Door& d : plan.doors) {
        j["doors"].push_back({{"a", d.a}, {"b", d.b}, {"cell", detail::cell_to_json(d.cell)}});
    }
    j["walls"] = detail::cells_to_json(plan.walls);
    return j.dump();
}

Floorplan floorplan_from_json(std::string_view text) { return floorplan_from(detail::parse_json(text)); }

namespace detail {
// Used by the episode serialiser, which embeds the floorplan object.
Json floorplan_json(const Floorplan& plan) { return Json::parse(floorplan_to_json(plan)); }
Floorplan floorplan_from_json_value(const Json& j) { return floorplan_from(j); }
}  // namespace detail

FloorplanIndex::FloorplanIndex(const Floorplan& plan)
    : width_(plan.width),
      height_(plan.height),
      room_of_(static_cast<std::size_t>(plan.width) * plan.height, -1),
      door_rooms_(room_of_.size(), -1),
      traversable_(room_of_.size(), 0),
      doors_by_room_(plan.rooms.size()) {
    auto idx = [&](Cell c) { return static_cast<std::size_t>(c.y) * width_ + c.x; };
    for (const Room& r : plan.rooms) {
        for (Cell c : r.cells) {
            room_of_[idx(c)] = r.id;
            traversable_[idx(c)] = 1;
        }
    }
    for (const Door& d : plan.doors) {
        door_rooms_[idx(d.cell)] = std::min(d.a, d.b);
        traversable_[idx(d.cell)] = 1;
        doors_by_room_[static_cast<std::size_t>(d.a)].push_back(d.cell);
        doors_by_room_[static_cast<std::size_t>(d.b)].push_back(d.cell);
    }
    for (auto& v : doors_by_room_) std::sort(v.begin(), v.end());

    room_distance_.resize(plan.rooms.size());
    for (const Room& r : plan.rooms) {
        std::vector<int> dist(room_of_.size(), -1);
        std::deque<Cell> queue;
        for (Cell c : r.cells) {
            dist[idx(c)] = 0;
            queue.push_back(c);
        }
        while (!queue.empty()) {
            const Cell c = queue.front();
            queue.pop_front();
            for (Cell d : kNeighborOffsets) {
                const Cell m{c.x + d.x, c.y + d.y};
                if (!is_traversable(m) || dist[idx(m)] != -1) continue;
                dist[idx(m)] = dist[idx(c)] + 1;
                queue.push_back(m);
            }
        }
        room_distance_[static_cast<std::size_t>(r.id)] = std::move(dist);
    }
}

int FloorplanIndex::room_of(Cell c) const {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return -1;
    return room_of_[static_cast<std::size_t>(c.y) * width_ + c.x];
}

int FloorplanIndex::region_of(Cell c) const {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return -1;
    const std::size_t i = static_cast<std::size_t>(c.y) * width_ + c.x;
    return room_of_[i] >= 0 ? room_of_[i] : door_rooms_[i];
}

bool FloorplanIndex::is_door(Cell c) const {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return false;
    return door_rooms_[static_cast<std::size_t>(c.y) * width_ + c.x] >= 0;
}

bool FloorplanIndex::is_traversable(Cell c) const {
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return false;
    return traversable_[static_cast<std::size_t>(c.y) * width_ + c.x] != 0;
}

const std::vector<Cell>& FloorplanIndex::door_cells(int room) const {
    if (room < 0 || room >= room_count()) throw LookupError("unknown room id");
    return doors_by_room_[static_cast<std::size_t>(room)];
}

int FloorplanIndex::distance_to_room(int room, Cell c) const {
    if (room < 0 || room >= room_count()) throw LookupError("unknown room id");
    if (c.x < 0 || c.y < 0 || c.x >= width_ || c.y >= height_) return -1;
    return room_distance_[static_cast<std::size_t>(room)][static_cast<std::size_t>(c.y) * width_ + c.x];
}

}  // namespace clutternav

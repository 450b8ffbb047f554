#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "clutternav/floorplan.hpp"
#include "clutternav/grid.hpp"

namespace clutternav {

enum class ObjectKind { TaskObject, Receptacle, Obstacle };

std::string_view to_string(ObjectKind kind);
std::optional<ObjectKind> parse_object_kind(std::string_view name);

struct ObjectSpec {
    int id = 0;
    std::string category;
    ObjectKind kind = ObjectKind::TaskObject;
    Cell cell;
    double effort = 5.0;  // seconds per pick or place

    friend bool operator==(const ObjectSpec&, const ObjectSpec&) = default;
};

struct DropZone {
    int id = 0;
    Cell cell;
    int room = 0;

    friend bool operator==(const DropZone&, const DropZone&) = default;
};

struct ClutterConfig {
    double base_fraction = 0.10;
    double density = 1.0;
    std::uint64_t seed = 0;

    /// Throws ConfigError unless 0 < base_fraction * density < 0.5.
    void validate() const;
};

struct Task {
    int object = 0;
    int receptacle = 0;

    friend bool operator==(const Task&, const Task&) = default;
};

inline constexpr int kEpisodeVersion = 1;

struct Episode {
    Floorplan floorplan;
    std::vector<ObjectSpec> objects;  // ids are 0..n-1 in order
    std::vector<DropZone> drop_zones;  // ids are 0..n-1 in order
    std::vector<Cell> clutter_cells;  // sorted; the cells of the Obstacle objects
    std::vector<Task> tasks;
    int horizon = 20;
    std::uint64_t seed = 0;
    Cell start;

    const ObjectSpec& object(int id) const;
    const DropZone& drop_zone(int id) const;
    int room_count() const { return static_cast<int>(floorplan.rooms.size()); }
};

bool operator==(const Episode& a, const Episode& b);

/// Checks ids, cell validity and the clutter exclusions. Throws FormatError.
void validate(const Episode& episode);

/// Ground-truth graph with receptacles as fixtures and obstacles placed.
GridGraph episode_graph(const Episode& episode);
/// Same, without the movable obstacles.
GridGraph obstacle_free_graph(const Episode& episode);

/// Canonical JSON: fixed key order, no whitespace variance.
std::string episode_to_json(const Episode& episode);
Episode episode_from_json(std::string_view text);

/// Writes atomically (temp file + rename). Throws FormatError on I/O failure.
void save_episode(const std::string& path, const Episode& episode);
/// Throws FormatError on malformed content or a version mismatch.
Episode load_episode(const std::string& path);

}  // namespace clutternav

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "clutternav/episode.hpp"
#include "clutternav/room_priors.hpp"

namespace clutternav {

inline constexpr int kMinRooms = 1;
inline constexpr int kMaxRooms = 10;

/// Room and doorway dimensions in cells (0.25 m each by default).
struct FloorplanStyle {
    int room_min = 8;          // side length
    int room_max = 12;
    int doorway_width = 4;     // door cells per connection
    double loop_door_p = 0.5;  // chance of a door between adjacent rooms beyond the spanning tree

    /// Throws ArgumentError.
    void validate() const;
};

/// Rooms laid out on a grid of slots with one-cell walls; doorways form a
/// random spanning tree plus optional loops. Each doorway is a straight run
/// of `doorway_width` door cells. Throws ArgumentError for n_rooms outside
/// [1, 10].
Floorplan generate_floorplan(int n_rooms, std::uint64_t seed, const FloorplanStyle& style = {});

/// Number of obstacles for a graph with `free_cells` open cells.
int clutter_count(const ClutterConfig& config, std::size_t free_cells);

/// Sampling weight per cell index: bc / sum(bc) over eligible cells, 0 for
/// closed, forbidden or zero-centrality cells.
std::vector<double> clutter_weights(const GridGraph& free_graph, std::span<const Cell> forbidden);

/// Samples clutter_count cells without replacement, weights proportional to
/// betweenness on `free_graph`. Returns cells sorted in (y, x) order. Throws
/// GenerationError when too few cells have positive weight.
std::vector<Cell> place_clutter(const GridGraph& free_graph, const ClutterConfig& config,
                                std::span<const Cell> forbidden = {});
std::vector<Cell> place_clutter(const Floorplan& plan, const ClutterConfig& config,
                                std::span<const Cell> forbidden = {});

/// Draws a room for an object of `category` from the prior table.
int sample_room(const RoomPriors& priors, std::string_view category, const Floorplan& plan, std::mt19937_64& rng);

/// g distinct task objects, each paired with a uniformly drawn receptacle.
/// Throws GenerationError when fewer than g task objects or no receptacle.
std::vector<Task> generate_tasks(std::span<const ObjectSpec> objects, int g, std::uint64_t seed);

struct GenerationConfig {
    int n_rooms = 5;
    FloorplanStyle floorplan;
    ClutterConfig clutter;
    int horizon = 20;
    double effort = 5.0;
    std::uint64_t seed = 0;
    const RoomPriors* priors = nullptr;  // builtin table when null
};

/// Full episode; a pure function of the config.
Episode generate_episode(const GenerationConfig& config);

}  // namespace clutternav

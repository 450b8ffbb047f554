#pragma once

#include <memory>
#include <string>
#include <vector>

#include "clutternav/episode.hpp"
#include "clutternav/grid.hpp"
#include "clutternav/perception.hpp"
#include "clutternav/scene_graph.hpp"
#include "clutternav/world.hpp"

namespace clutternav::testing {

// Map legend: '#' wall, '.' floor, '@' robot start, 'T' task object,
// 'R' receptacle, 'O' obstacle, 'Z' drop zone. Every non-wall cell belongs to
// one room. Objects get ids in (y, x) scan order; task k pairs the k-th 'T'
// with the k-th 'R' (or the last one when there are fewer).
inline Episode ascii_episode(const std::vector<std::string>& rows, double effort = 5.0) {
    Episode ep;
    ep.floorplan.height = static_cast<int>(rows.size());
    ep.floorplan.width = rows.empty() ? 0 : static_cast<int>(rows.front().size());
    Room room;
    room.id = 0;
    room.type = RoomType::LivingRoom;
    std::vector<int> task_objects;
    std::vector<int> receptacles;
    for (int y = 0; y < ep.floorplan.height; ++y) {
        for (int x = 0; x < ep.floorplan.width; ++x) {
            const char ch = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            const Cell c{x, y};
            if (ch == '#') {
                ep.floorplan.walls.push_back(c);
                continue;
            }
            room.cells.push_back(c);
            ObjectSpec o;
            o.id = static_cast<int>(ep.objects.size());
            o.cell = c;
            o.effort = effort;
            switch (ch) {
                case '@': ep.start = c; break;
                case 'Z': ep.drop_zones.push_back({static_cast<int>(ep.drop_zones.size()), c, 0}); break;
                case 'T':
                    o.kind = ObjectKind::TaskObject;
                    o.category = "Mug";
                    task_objects.push_back(o.id);
                    ep.objects.push_back(o);
                    break;
                case 'R':
                    o.kind = ObjectKind::Receptacle;
                    o.category = "DiningTable";
                    receptacles.push_back(o.id);
                    ep.objects.push_back(o);
                    break;
                case 'O':
                    o.kind = ObjectKind::Obstacle;
                    o.category = "Box";
                    ep.clutter_cells.push_back(c);
                    ep.objects.push_back(o);
                    break;
                default: break;
            }
        }
    }
    ep.floorplan.rooms.push_back(std::move(room));
    for (std::size_t k = 0; k < task_objects.size() && !receptacles.empty(); ++k)
        ep.tasks.push_back({task_objects[k], receptacles[std::min(k, receptacles.size() - 1)]});
    ep.horizon = static_cast<int>(ep.tasks.size());
    validate(ep);
    return ep;
}

// Open cells of an ASCII grid: anything but '#' and 'O'.
inline TraversalMask ascii_mask(const std::vector<std::string>& rows) {
    TraversalMask mask(static_cast<int>(rows.front().size()), static_cast<int>(rows.size()));
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            const char ch = rows[static_cast<std::size_t>(y)][static_cast<std::size_t>(x)];
            if (ch != '#' && ch != 'O') mask.set_open({x, y});
        }
    }
    return mask;
}

inline int object_at(const Episode& ep, Cell c) {
    for (const auto& o : ep.objects) {
        if (o.cell == c) return o.id;
    }
    return -1;
}

// Full-observability scene for the episode's initial state.
inline SceneGraph known_scene(const World& world, const SceneOptions& options = {}) {
    return update(Belief::from_ground_truth(world), world.robot(), world.drop_zones(), options);
}

}  // namespace clutternav::testing

#include "clutternav/scene_graph.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "clutternav/errors.hpp"

namespace clutternav {

namespace {

std::string fmt_cost(const std::optional<double>& v) { return v ? fmt::format("{:.2f}", *v) : "none"; }
std::string fmt_cell(Cell c) { return fmt::format("({},{})", c.x, c.y); }

std::optional<double> to_time(int steps, double step_time) {
    if (steps == DistanceField::kUnreachable) return std::nullopt;
    return steps * step_time;
}

}  // namespace

TraversalMask strict_mask(const Belief& belief) {
    const Floorplan& plan = belief.floorplan();
    TraversalMask m(plan.width, plan.height);
    for (int y = 0; y < plan.height; ++y) {
        for (int x = 0; x < plan.width; ++x) {
            if (belief.at({x, y}).kind == Knowledge::Free) m.set_open({x, y});
        }
    }
    return m;
}

TraversalMask relaxed_mask(const Belief& belief) {
    TraversalMask m = strict_mask(belief);
    for (const auto& [id, o] : belief.objects()) {
        if (o.kind != ObjectKind::Obstacle || o.carried || o.stowed) continue;
        const BeliefCell b = belief.at(o.cell);
        if (b.kind == Knowledge::Obstacle) m.set_open(o.cell);
    }
    return m;
}

const SceneObject& SceneGraph::object(int id) const {
    const auto it = objects_.find(id);
    if (it == objects_.end()) throw LookupError("object " + std::to_string(id) + " is not in the scene graph");
    return it->second;
}

const SceneZone& SceneGraph::zone(int id) const {
    if (id < 0 || id >= static_cast<int>(zones_.size())) throw LookupError("unknown drop zone id");
    return zones_[static_cast<std::size_t>(id)];
}

bool SceneGraph::blocking(int i, int j) const {
    object(i);
    object(j);
    return edges_.count({i, j}) != 0;
}

std::vector<int> SceneGraph::frontier_rooms() const {
    std::vector<int> out;
    for (const auto& r : rooms_) {
        if (r.status != RoomStatus::Explored) out.push_back(r.id);
    }
    const double inf = std::numeric_limits<double>::infinity();
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) {
        const auto& ra = rooms_[static_cast<std::size_t>(a)];
        const auto& rb = rooms_[static_cast<std::size_t>(b)];
        if (ra.status != rb.status) return ra.status < rb.status;
        const double ta = door_time_[static_cast<std::size_t>(a)].value_or(inf);
        const double tb = door_time_[static_cast<std::size_t>(b)].value_or(inf);
        if (ta != tb) return ta < tb;
        return a < b;
    });
    return out;
}

bool operator==(const SceneGraph& a, const SceneGraph& b) {
    return a.robot_ == b.robot_ && a.timestep_ == b.timestep_ && a.carried_ == b.carried_ &&
           a.objects_ == b.objects_ && a.rooms_ == b.rooms_ && a.zones_ == b.zones_ && a.edges_ == b.edges_ &&
           a.door_time_ == b.door_time_ && a.relaxed_ == b.relaxed_ && a.strict_ == b.strict_;
}

SceneGraph update(const Belief& belief, Cell robot, std::span<const DropZone> zones, const SceneOptions& options,
                  CentralityCache* cache) {
    if (!(options.step_time > 0.0)) throw ArgumentError("step_time must be positive");
    SceneGraph s;
    s.belief_ = std::make_shared<const Belief>(belief);
    s.robot_ = robot;
    s.timestep_ = belief.last_update();
    s.step_time_ = options.step_time;
    s.relaxed_ = relaxed_mask(belief);
    s.strict_ = strict_mask(belief);
    // The robot always stands on a free cell it knows about.
    s.relaxed_.set_open(robot);
    s.strict_.set_open(robot);
    s.relaxed_field_ = std::make_shared<const DistanceField>(shortest_distances(s.relaxed_, robot));
    s.strict_field_ = std::make_shared<const DistanceField>(shortest_distances(s.strict_, robot));
    if (options.compute_centrality) {
        s.centrality_ = cache ? cache->get(s.relaxed_) : std::make_shared<const CentralityMap>(betweenness(s.relaxed_));
    }

    const FloorplanIndex& index = belief.index();
    for (const auto& [id, k] : belief.objects()) {
        SceneObject o;
        o.id = id;
        o.category = k.category;
        o.kind = k.kind;
        o.cell = k.cell;
        o.carried = k.carried;
        o.stowed = k.stowed;
        o.room = k.carried ? index.region_of(robot) : index.region_of(k.cell);
        if (k.carried) s.carried_ = id;
        if (!k.carried && !k.stowed) {
            auto& a = o.attributes;
            a.path_cost = to_time(s.relaxed_field_->steps_to_target(k.cell), options.step_time);
            a.detour_cost = to_time(s.strict_field_->steps_to_target(k.cell), options.step_time);
            if (s.centrality_) a.centrality = s.centrality_->at(k.cell);
            if (a.path_cost) {
                const auto path = s.relaxed_field_->path_to(k.cell);
                for (std::size_t i = 1; i + 1 < path->size(); ++i) {
                    const BeliefCell b = belief.at((*path)[i]);
                    if (b.kind == Knowledge::Obstacle) a.blockers.push_back(b.object);
                }
            }
        }
        s.objects_.emplace(id, std::move(o));
    }
    for (const auto& [j, o] : s.objects_) {
        for (int i : o.attributes.blockers) s.edges_.insert({i, j});
    }

    for (const auto& r : belief.floorplan().rooms) {
        s.rooms_.push_back({r.id, r.type, belief.room_status(r.id), belief.unknown_in_room(r.id)});
        std::optional<double> best;
        for (Cell d : index.door_cells(r.id)) {
            const auto t = to_time(s.strict_field_->steps_to_target(d), options.step_time);
            if (t && (!best || *t < *best)) best = t;
        }
        if (!best && index.door_cells(r.id).empty()) {
            // A single-room layout has no doors; use distance into the room.
            for (Cell c : r.cells) {
                const auto t = to_time(s.strict_field_->steps_to(c), options.step_time);
                if (t && (!best || *t < *best)) best = t;
            }
        }
        s.door_time_.push_back(best);
    }

    for (const auto& z : zones) {
        SceneZone sz{z.id, z.cell, z.room, std::nullopt, 0};
        const BeliefCell b = belief.at(z.cell);
        if (b.kind == Knowledge::Obstacle) {
            for (const auto& [id, k] : belief.objects()) {
                if (k.stowed && !k.carried && k.cell == z.cell) ++sz.load;
            }
        }
        // Standing next to the zone; the zone cell itself may be closed.
        int best = DistanceField::kUnreachable;
        for (Cell d : kNeighborOffsets) {
            const int st = s.strict_field_->steps_to({z.cell.x + d.x, z.cell.y + d.y});
            if (st != DistanceField::kUnreachable && (best == DistanceField::kUnreachable || st < best)) best = st;
        }
        sz.reach_cost = to_time(best, options.step_time);
        s.zones_.push_back(sz);
    }
    return s;
}

std::string centrality_bucket(double bc) {
    if (bc >= 0.2) return "high";
    if (bc >= 0.05) return "medium";
    return "low";
}

std::string serialize_to_text(const SceneGraph& scene, const std::optional<TaskInfo>& task,
                              std::span<const Decision> history, const SerializeOptions& options) {
    std::string out;
    if (task) {
        out += fmt::format("TASK {}/{} place o{} {} on o{} {}\n", task->index + 1, task->horizon, task->task.object,
                           task->object_category, task->task.receptacle, task->receptacle_category);
    } else {
        out += "TASK none\n";
    }
    out += fmt::format("ROBOT cell={} room={} carrying={}\n", fmt_cell(scene.robot()),
                       scene.index().region_of(scene.robot()) >= 0
                           ? "r" + std::to_string(scene.index().region_of(scene.robot()))
                           : std::string("none"),
                       scene.carried() ? "o" + std::to_string(*scene.carried()) : std::string("none"));
    for (const auto& r : scene.rooms()) {
        out += fmt::format("ROOM r{} {} {} unknown_cells={}\n", r.id, to_string(r.type), to_string(r.status),
                           r.unknown_cells);
    }
    for (const auto& [id, o] : scene.objects()) {
        const auto& a = o.attributes;
        std::string blockers;
        for (std::size_t i = 0; i < a.blockers.size(); ++i) blockers += (i ? "," : "") + fmt::format("o{}", a.blockers[i]);
        const std::string where = o.carried ? "carried" : fmt_cell(o.cell);
        const std::string state = o.carried ? "carried" : o.stowed ? "stowed" : "placed";
        const std::string bc =
            options.centrality_buckets ? centrality_bucket(a.centrality) : fmt::format("{:.2f}", a.centrality);
        out += fmt::format("OBJECT o{} {} kind={} room={} cell={} state={} path_cost={} blockers=[{}] centrality={} detour_cost={}\n",
                           id, o.category, to_string(o.kind), o.room >= 0 ? "r" + std::to_string(o.room) : "none",
                           where, state, fmt_cost(a.path_cost), blockers, bc, fmt_cost(a.detour_cost));
    }
    for (const auto& [i, j] : scene.blocking_edges()) out += fmt::format("o{} blocks o{}\n", i, j);
    for (const auto& z : scene.zones()) {
        out += fmt::format("DROPZONE z{} room=r{} cell={} reach_cost={} load={}\n", z.id, z.room, fmt_cell(z.cell),
                           fmt_cost(z.reach_cost), z.load);
    }
    for (int r : scene.frontier_rooms()) {
        const auto& room = scene.rooms()[static_cast<std::size_t>(r)];
        out += fmt::format("FRONTIER r{} {} {}\n", r, to_string(room.type), to_string(room.status));
    }
    const std::size_t h = static_cast<std::size_t>(std::max(options.history, 0));
    const std::size_t first = history.size() > h ? history.size() - h : 0;
    for (std::size_t i = first; i < history.size(); ++i) out += "HISTORY " + to_text(history[i]) + "\n";
    return out;
}

}  // namespace clutternav

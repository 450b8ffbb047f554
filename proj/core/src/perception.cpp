#include "clutternav/perception.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

#include "clutternav/errors.hpp"
#include "json_io.hpp"

namespace clutternav {

namespace {

constexpr std::array<std::string_view, 3> kStatusNames = {"Unexplored", "Partial", "Explored"};
constexpr std::array<std::string_view, 5> kKnowledgeNames = {"Unknown", "Free", "Wall", "Obstacle", "StaticFixture"};

}  // namespace

BeliefCell to_belief(CellState state) {
    switch (state.kind) {
        case CellKind::Free: return {Knowledge::Free, -1};
        case CellKind::Wall: return {Knowledge::Wall, -1};
        case CellKind::Obstacle: return {Knowledge::Obstacle, state.object};
        case CellKind::StaticFixture: return {Knowledge::StaticFixture, state.object};
    }
    return {};
}

std::string_view to_string(RoomStatus status) { return kStatusNames[static_cast<std::size_t>(status)]; }

Belief::Belief(std::shared_ptr<const Floorplan> plan)
    : plan_(std::move(plan)),
      index_(std::make_shared<const FloorplanIndex>(*plan_)),
      cells_(static_cast<std::size_t>(plan_->width) * plan_->height),
      room_known_(plan_->rooms.size(), 0),
      room_size_(plan_->rooms.size(), 0),
      status_(plan_->rooms.size(), RoomStatus::Unexplored) {
    for (const auto& r : plan_->rooms) room_size_[static_cast<std::size_t>(r.id)] = static_cast<int>(r.cells.size());
}

Belief Belief::from_ground_truth(const World& world) {
    Belief b(world.graph().floorplan_ptr());
    const auto& g = world.graph();
    for (int y = 0; y < g.height(); ++y) {
        for (int x = 0; x < g.width(); ++x) b.set_cell({x, y}, to_belief(g.state({x, y})));
    }
    for (const auto& o : world.objects()) {
        b.objects_[o.spec.id] = {o.spec.id, o.spec.category, o.spec.kind, o.cell, o.carried, o.stowed};
    }
    b.refresh_rooms();
    b.last_update_ = world.timestep();
    return b;
}

BeliefCell Belief::at(Cell c) const {
    if (!plan_->in_bounds(c)) return {Knowledge::Wall, -1};
    return cells_[static_cast<std::size_t>(c.y) * plan_->width + c.x];
}

const KnownObject& Belief::object(int id) const {
    const auto it = objects_.find(id);
    if (it == objects_.end()) throw LookupError("object " + std::to_string(id) + " is not discovered");
    return it->second;
}

RoomStatus Belief::room_status(int room) const {
    if (room < 0 || room >= static_cast<int>(status_.size())) throw LookupError("unknown room id");
    return status_[static_cast<std::size_t>(room)];
}

int Belief::unknown_in_room(int room) const {
    if (room < 0 || room >= static_cast<int>(status_.size())) throw LookupError("unknown room id");
    return room_size_[static_cast<std::size_t>(room)] - room_known_[static_cast<std::size_t>(room)];
}

void Belief::set_cell(Cell c, BeliefCell value) {
    auto& slot = cells_[static_cast<std::size_t>(c.y) * plan_->width + c.x];
    if (slot.kind == Knowledge::Unknown && value.kind != Knowledge::Unknown) {
        ++known_count_;
        const int room = index_->room_of(c);
        if (room >= 0) ++room_known_[static_cast<std::size_t>(room)];
    }
    slot = value;
}

void Belief::refresh_rooms() {
    for (std::size_t r = 0; r < status_.size(); ++r) {
        RoomStatus s = RoomStatus::Unexplored;
        if (room_known_[r] >= kExploredFraction * room_size_[r]) {
            s = RoomStatus::Explored;
        } else if (room_known_[r] > 0) {
            s = RoomStatus::Partial;
        }
        status_[r] = std::max(status_[r], s);
    }
}

void Belief::integrate(const Observation& obs) {
    if (obs.timestep < last_update_) throw ArgumentError("observation is older than the belief");
    for (const auto& [c, v] : obs.cells) {
        if (plan_->in_bounds(c)) set_cell(c, v);
    }
    for (const auto& s : obs.objects) {
        auto& k = objects_[s.id];
        const bool stowed = k.id == s.id && k.stowed;
        k = {s.id, s.category, s.kind, s.cell, false, stowed};
    }
    refresh_rooms();
    last_update_ = obs.timestep;
}

void Belief::note_pick(int object, CellState cell_after) {
    auto& k = objects_.at(object);
    if (k.kind == ObjectKind::Obstacle) set_cell(k.cell, to_belief(cell_after));
    k.carried = true;
    k.stowed = false;
}

void Belief::note_place(int object, Cell cell, CellState cell_after, bool stowed) {
    auto& k = objects_.at(object);
    k.cell = cell;
    k.carried = false;
    k.stowed = stowed;
    if (k.kind == ObjectKind::Obstacle) set_cell(cell, to_belief(cell_after));
    refresh_rooms();
}

bool operator==(const Belief& a, const Belief& b) {
    return a.cells_ == b.cells_ && a.status_ == b.status_ && a.objects_ == b.objects_ &&
           a.last_update_ == b.last_update_;
}

std::vector<Cell> supercover_line(Cell from, Cell to) {
    const int dx = to.x - from.x, dy = to.y - from.y;
    const int nx = std::abs(dx), ny = std::abs(dy);
    const int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
    std::vector<Cell> out{from};
    Cell p = from;
    for (int ix = 0, iy = 0; ix < nx || iy < ny;) {
        const long decision = static_cast<long>(1 + 2 * ix) * ny - static_cast<long>(1 + 2 * iy) * nx;
        if (decision == 0) {
            out.push_back({p.x + sx, p.y});
            out.push_back({p.x, p.y + sy});
            p.x += sx;
            p.y += sy;
            ++ix;
            ++iy;
        } else if (decision < 0) {
            p.x += sx;
            ++ix;
        } else {
            p.y += sy;
            ++iy;
        }
        out.push_back(p);
    }
    return out;
}

Observation observe(const World& world, Cell robot, const SensorConfig& sensor) {
    const GridGraph& g = world.graph();
    if (!g.is_free(robot)) throw StateError("observe: robot cell is not free");
    if (sensor.range < 0) throw ArgumentError("sensor range must be non-negative");
    Observation obs;
    obs.robot = robot;
    obs.timestep = world.timestep();
    const int r = sensor.range;
    for (int y = robot.y - r; y <= robot.y + r; ++y) {
        for (int x = robot.x - r; x <= robot.x + r; ++x) {
            const Cell c{x, y};
            if (c.x < 0 || c.y < 0 || c.x >= g.width() || c.y >= g.height()) continue;
            const auto line = supercover_line(robot, c);
            bool clear = true;
            for (std::size_t i = 1; i + 1 < line.size() && clear; ++i) clear = g.is_free(line[i]);
            if (clear) obs.cells.emplace_back(c, to_belief(g.state(c)));
        }
    }
    std::vector<std::uint8_t> seen(g.mask().size(), 0);
    for (const auto& [c, v] : obs.cells) seen[g.mask().index(c)] = 1;
    for (const auto& o : world.objects()) {
        if (!o.carried && seen[g.mask().index(o.cell)])
            obs.objects.push_back({o.spec.id, o.spec.category, o.spec.kind, o.cell});
    }
    return obs;
}

Belief integrate(Belief belief, const Observation& obs) {
    belief.integrate(obs);
    return belief;
}

std::string observation_to_json(const Observation& obs) {
    using detail::Json;
    Json j;
    j["t"] = obs.timestep;
    j["robot"] = detail::cell_to_json(obs.robot);
    j["cells"] = Json::array();
    for (const auto& [c, v] : obs.cells) {
        Json e = {detail::cell_to_json(c), std::string(kKnowledgeNames[static_cast<std::size_t>(v.kind)])};
        if (v.object >= 0) e.push_back(v.object);
        j["cells"].push_back(std::move(e));
    }
    j["objects"] = Json::array();
    for (const auto& o : obs.objects) j["objects"].push_back({{"id", o.id}, {"cell", detail::cell_to_json(o.cell)}});
    return j.dump();
}

}  // namespace clutternav

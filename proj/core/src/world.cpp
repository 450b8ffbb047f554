#include "clutternav/world.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "clutternav/errors.hpp"

namespace clutternav {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string to_string(const Action& action) {
    return std::visit(Overloaded{
                          [](const StepAction& a) { return "step " + std::to_string(a.to.x) + " " + std::to_string(a.to.y); },
                          [](const PickAction& a) { return "pick " + std::to_string(a.object); },
                          [](const PlaceAction& a) {
                              return "place " + std::to_string(a.object) + " " + std::to_string(a.cell.x) + " " +
                                     std::to_string(a.cell.y);
                          },
                      },
                      action);
}

Action parse_action(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string verb;
    in >> verb;
    Action out;
    if (verb == "step") {
        StepAction a;
        in >> a.to.x >> a.to.y;
        out = a;
    } else if (verb == "pick") {
        PickAction a;
        in >> a.object;
        out = a;
    } else if (verb == "place") {
        PlaceAction a;
        in >> a.object >> a.cell.x >> a.cell.y;
        out = a;
    } else {
        throw FormatError("unknown action '" + std::string(text) + "'");
    }
    std::string rest;
    if (in.fail() || (in >> rest)) throw FormatError("malformed action '" + std::string(text) + "'");
    return out;
}

World::World(const Episode& episode)
    : graph_(episode_graph(episode)), zones_(episode.drop_zones), robot_(episode.start) {
    for (const auto& spec : episode.objects) objects_.push_back({spec, spec.cell, false, false});
    if (!graph_.is_free(robot_)) throw StateError("start cell is not free");
}

const ObjectState& World::object(int id) const {
    if (id < 0 || id >= static_cast<int>(objects_.size())) throw LookupError("unknown object id " + std::to_string(id));
    return objects_[static_cast<std::size_t>(id)];
}

std::optional<int> World::zone_at(Cell c) const {
    for (const auto& z : zones_) {
        if (z.cell == c) return z.id;
    }
    return std::nullopt;
}

std::vector<int> World::objects_at(Cell c) const {
    std::vector<int> out;
    for (const auto& o : objects_) {
        if (!o.carried && o.cell == c) out.push_back(o.spec.id);
    }
    return out;
}

std::vector<Cell> World::floor_obstacle_cells() const {
    std::vector<Cell> out;
    for (const auto& o : objects_) {
        if (o.spec.kind == ObjectKind::Obstacle && !o.carried && !o.stowed) out.push_back(o.cell);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool World::task_done(const Task& task) const {
    const auto& o = object(task.object);
    return !o.carried && o.cell == object(task.receptacle).cell;
}

int World::effort_steps(int id) const { return static_cast<int>(std::ceil(object(id).spec.effort)); }

std::string World::check(const Action& action) const {
    if (const auto* step = std::get_if<StepAction>(&action)) {
        if (manhattan(step->to, robot_) != 1) return "step target is not adjacent";
        if (!graph_.is_free(step->to)) return "step target is not free";
        return {};
    }
    if (const auto* pick = std::get_if<PickAction>(&action)) {
        if (pick->object < 0 || pick->object >= static_cast<int>(objects_.size())) return "unknown object";
        const auto& o = objects_[static_cast<std::size_t>(pick->object)];
        if (carried_) return "already carrying an object";
        if (o.spec.kind == ObjectKind::Receptacle) return "receptacles are immovable";
        if (o.stowed) return "object is stowed on a drop zone";
        if (manhattan(o.cell, robot_) > 1) return "object is not adjacent";
        return {};
    }
    return check_place(std::get<PlaceAction>(action));
}

std::string World::check_place(const PlaceAction& place) const {
    if (!carried_ || *carried_ != place.object) return "not carrying that object";
    if (place.cell == robot_) return "cannot place on the robot's cell";
    if (manhattan(place.cell, robot_) > 1) return "place target is not adjacent";
    const auto& o = objects_[static_cast<std::size_t>(place.object)];
    const CellState s = graph_.state(place.cell);
    if (o.spec.kind == ObjectKind::Obstacle) {
        if (zone_at(place.cell)) return {};
        if (s.kind != CellKind::Free) return "place target is not free";
        if (!objects_at(place.cell).empty()) return "place target is occupied";
        return {};
    }
    if (s.kind == CellKind::StaticFixture) return {};
    if (s.kind != CellKind::Free) return "place target is not free";
    if (zone_at(place.cell)) return "drop zones hold obstacles only";
    if (!objects_at(place.cell).empty()) return "place target is occupied";
    return {};
}

ActionOutcome World::apply(const Action& action) {
    if (auto err = check(action); !err.empty()) return {false, 0, err};
    ActionOutcome out{true, 0, {}};
    if (const auto* step = std::get_if<StepAction>(&action)) {
        robot_ = step->to;
        out.cost = 1;
    } else if (const auto* pick = std::get_if<PickAction>(&action)) {
        auto& o = objects_[static_cast<std::size_t>(pick->object)];
        if (o.spec.kind == ObjectKind::Obstacle) graph_ = graph_.with_state(o.cell, {CellKind::Free, -1});
        o.carried = true;
        carried_ = pick->object;
        out.cost = effort_steps(pick->object);
    } else {
        const auto& place = std::get<PlaceAction>(action);
        auto& o = objects_[static_cast<std::size_t>(place.object)];
        if (o.spec.kind == ObjectKind::Obstacle) {
            const CellState s = graph_.state(place.cell);
            const int id = s.kind == CellKind::Obstacle ? std::min(s.object, place.object) : place.object;
            graph_ = graph_.with_state(place.cell, {CellKind::Obstacle, id});
            o.stowed = zone_at(place.cell).has_value();
        }
        o.cell = place.cell;
        o.carried = false;
        carried_.reset();
        out.cost = effort_steps(place.object);
    }
    timestep_ += out.cost;
    return out;
}

World apply(World world, const Action& action) {
    const auto outcome = world.apply(action);
    if (!outcome.ok) throw StateError("action rejected: " + outcome.error);
    return world;
}

}  // namespace clutternav

#include "clutternav/episode.hpp"

#include <algorithm>
#include <array>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "clutternav/errors.hpp"
#include "io_util.hpp"
#include "json_io.hpp"

namespace clutternav {

namespace detail {
Json floorplan_json(const Floorplan& plan);
Floorplan floorplan_from_json_value(const Json& j);

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(target.parent_path(), ec);
    }
    const std::filesystem::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FormatError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw FormatError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, target, ec);
    if (ec) throw FormatError("cannot rename " + tmp.string() + ": " + ec.message());
}
}  // namespace detail

namespace {

constexpr std::array<std::string_view, 3> kKindNames = {"TaskObject", "Receptacle", "Obstacle"};

std::vector<Placement> placements(const Episode& ep, bool with_obstacles) {
    std::vector<Placement> out;
    for (const auto& o : ep.objects) {
        if (o.kind == ObjectKind::Receptacle) out.push_back({o.id, o.cell, true});
        if (o.kind == ObjectKind::Obstacle && with_obstacles) out.push_back({o.id, o.cell, false});
    }
    return out;
}

}  // namespace

std::string_view to_string(ObjectKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

std::optional<ObjectKind> parse_object_kind(std::string_view name) {
    for (std::size_t i = 0; i < kKindNames.size(); ++i) {
        if (kKindNames[i] == name) return static_cast<ObjectKind>(i);
    }
    return std::nullopt;
}

void ClutterConfig::validate() const {
    const double f = base_fraction * density;
    if (!(base_fraction > 0.0) || !(density > 0.0) || !(f > 0.0) || !(f < 0.5))
        throw ConfigError("clutter fraction base_fraction * density must lie in (0, 0.5)");
}

const ObjectSpec& Episode::object(int id) const {
    if (id < 0 || id >= static_cast<int>(objects.size())) throw LookupError("unknown object id " + std::to_string(id));
    return objects[static_cast<std::size_t>(id)];
}

const DropZone& Episode::drop_zone(int id) const {
    if (id < 0 || id >= static_cast<int>(drop_zones.size()))
        throw LookupError("unknown drop zone id " + std::to_string(id));
    return drop_zones[static_cast<std::size_t>(id)];
}

bool operator==(const Episode& a, const Episode& b) {
    return episode_to_json(a) == episode_to_json(b);
}

void validate(const Episode& ep) {
    validate(ep.floorplan);
    const TraversalMask walkable = traversable_mask(ep.floorplan);
    if (!walkable.open(ep.start)) throw FormatError("start cell is not traversable");
    std::set<Cell> reserved{ep.start};
    std::vector<Cell> obstacle_cells;
    for (std::size_t i = 0; i < ep.objects.size(); ++i) {
        const auto& o = ep.objects[i];
        if (o.id != static_cast<int>(i)) throw FormatError("object ids must be 0..n-1 in order");
        if (!walkable.open(o.cell)) throw FormatError("object on a non-traversable cell");
        if (o.effort < 0.0) throw FormatError("negative manipulation effort");
        if (o.kind == ObjectKind::Obstacle) {
            obstacle_cells.push_back(o.cell);
        } else if (!reserved.insert(o.cell).second) {
            throw FormatError("objects share a cell");
        }
    }
    for (std::size_t i = 0; i < ep.drop_zones.size(); ++i) {
        const auto& z = ep.drop_zones[i];
        if (z.id != static_cast<int>(i)) throw FormatError("drop zone ids must be 0..n-1 in order");
        if (!walkable.open(z.cell)) throw FormatError("drop zone on a non-traversable cell");
        for (const auto& d : ep.floorplan.doors) {
            if (d.cell == z.cell) throw FormatError("drop zone on a doorway");
        }
        if (!reserved.insert(z.cell).second) throw FormatError("drop zone shares a cell");
    }
    std::sort(obstacle_cells.begin(), obstacle_cells.end());
    if (std::adjacent_find(obstacle_cells.begin(), obstacle_cells.end()) != obstacle_cells.end())
        throw FormatError("two obstacles share a cell");
    if (obstacle_cells != ep.clutter_cells) throw FormatError("clutter_cells disagree with obstacle objects");
    for (Cell c : obstacle_cells) {
        if (reserved.count(c)) throw FormatError("clutter on a reserved cell");
    }
    if (ep.horizon != static_cast<int>(ep.tasks.size())) throw FormatError("task count differs from horizon");
    std::set<int> used;
    for (const auto& t : ep.tasks) {
        if (ep.object(t.object).kind != ObjectKind::TaskObject) throw FormatError("task object has the wrong kind");
        if (ep.object(t.receptacle).kind != ObjectKind::Receptacle) throw FormatError("task receptacle has the wrong kind");
        if (!used.insert(t.object).second) throw FormatError("task object used twice");
    }
}

GridGraph episode_graph(const Episode& ep) {
    auto plan = std::make_shared<const Floorplan>(ep.floorplan);
    const auto p = placements(ep, true);
    return build_grid_graph(std::move(plan), p);
}

GridGraph obstacle_free_graph(const Episode& ep) {
    auto plan = std::make_shared<const Floorplan>(ep.floorplan);
    const auto p = placements(ep, false);
    return build_grid_graph(std::move(plan), p);
}

std::string episode_to_json(const Episode& ep) {
    using detail::Json;
    Json j;
    j["version"] = kEpisodeVersion;
    j["floorplan"] = detail::floorplan_json(ep.floorplan);
    j["objects"] = Json::array();
    for (const auto& o : ep.objects) {
        j["objects"].push_back({{"id", o.id},
                                {"category", o.category},
                                {"kind", std::string(to_string(o.kind))},
                                {"cell", detail::cell_to_json(o.cell)},
                                {"effort", o.effort}});
    }
    j["drop_zones"] = Json::array();
    for (const auto& z : ep.drop_zones) {
        j["drop_zones"].push_back({{"id", z.id}, {"cell", detail::cell_to_json(z.cell)}, {"room", z.room}});
    }
    j["clutter_cells"] = detail::cells_to_json(ep.clutter_cells);
    j["tasks"] = Json::array();
    for (const auto& t : ep.tasks) j["tasks"].push_back({{"object", t.object}, {"receptacle", t.receptacle}});
    j["horizon"] = ep.horizon;
    j["seed"] = ep.seed;
    j["start"] = detail::cell_to_json(ep.start);
    // nlohmann::json objects are key-sorted, which makes the dump canonical.
    return j.dump();
}

Episode episode_from_json(std::string_view text) {
    using detail::require;
    const auto j = detail::parse_json(text);
    if (!j.is_object()) throw FormatError("episode must be a JSON object");
    const int version = require<int>(j, "version");
    if (version != kEpisodeVersion)
        throw FormatError("episode version " + std::to_string(version) + " is not supported (expected " +
                          std::to_string(kEpisodeVersion) + ")");
    Episode ep;
    ep.floorplan = detail::floorplan_from_json_value(detail::require_field(j, "floorplan"));
    for (const auto& o : detail::require_field(j, "objects")) {
        ObjectSpec spec;
        spec.id = require<int>(o, "id");
        spec.category = require<std::string>(o, "category");
        const auto kind = parse_object_kind(require<std::string>(o, "kind"));
        if (!kind) throw FormatError("unknown object kind");
        spec.kind = *kind;
        spec.cell = detail::cell_from_json(detail::require_field(o, "cell"));
        spec.effort = require<double>(o, "effort");
        ep.objects.push_back(std::move(spec));
    }
    for (const auto& z : detail::require_field(j, "drop_zones")) {
        ep.drop_zones.push_back(
            {require<int>(z, "id"), detail::cell_from_json(detail::require_field(z, "cell")), require<int>(z, "room")});
    }
    ep.clutter_cells = detail::cells_from_json(detail::require_field(j, "clutter_cells"));
    for (const auto& t : detail::require_field(j, "tasks")) {
        ep.tasks.push_back({require<int>(t, "object"), require<int>(t, "receptacle")});
    }
    ep.horizon = require<int>(j, "horizon");
    ep.seed = require<std::uint64_t>(j, "seed");
    ep.start = detail::cell_from_json(detail::require_field(j, "start"));
    try {
        validate(ep);
    } catch (const LookupError& e) {
        throw FormatError(e.what());
    }
    return ep;
}

void save_episode(const std::string& path, const Episode& episode) {
    detail::write_file_atomic(path, episode_to_json(episode) + "\n");
}

Episode load_episode(const std::string& path) { return episode_from_json(detail::read_file(path)); }

}  // namespace clutternav

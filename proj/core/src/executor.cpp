#include "clutternav/executor.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "clutternav/errors.hpp"
#include "clutternav/planner.hpp"
#include "clutternav/scene_graph.hpp"
#include "json_io.hpp"

namespace clutternav {

namespace {

using detail::Json;

Json action_record(int t, const Action& action, const ActionOutcome& out, const World& world) {
    Json j{{"type", "action"},  {"t", t},
           {"action", to_string(action)},
           {"ok", out.ok},      {"cost", out.cost},
           {"robot", detail::cell_to_json(world.robot())},
           {"carried", world.carried() ? *world.carried() : -1}};
    if (!out.ok) j["error"] = out.error;
    return j;
}

int tasks_done_prefix(const World& world, const Episode& ep) {
    int done = 0;
    for (const auto& task : ep.tasks) {
        if (!world.task_done(task)) break;
        ++done;
    }
    return done;
}

class Runner {
public:
    Runner(const Episode& ep, Policy& policy, const RunOptions& options)
        : ep_(ep),
          policy_(policy),
          opt_(options),
          mode_(policy.required_mode().value_or(options.mode)),
          world_(ep),
          belief_(std::make_shared<const Floorplan>(ep.floorplan)),
          cache_(options.cache ? options.cache : &own_cache_) {
        if (mode_ == MapMode::KnownMap) belief_ = Belief::from_ground_truth(world_);
        const int horizon = std::min<int>(ep.horizon, static_cast<int>(ep.tasks.size()));
        max_steps_ = opt_.limits.max_steps > 0 ? opt_.limits.max_steps : kStepsPerTask * horizon;
        max_decisions_ = opt_.limits.max_decisions > 0 ? opt_.limits.max_decisions : 100 * horizon + 1000;
        res_.method = std::string(policy.name());
        res_.mode = mode_;
        res_.seed = ep.seed;
        res_.rooms = ep.room_count();
        res_.horizon = horizon;
    }

    EpisodeResult run() {
        log({{"type", "header"},
             {"version", kTranscriptVersion},
             {"method", res_.method},
             {"mode", std::string(to_string(mode_))},
             {"seed", res_.seed},
             {"horizon", res_.horizon},
             {"max_steps", max_steps_},
             {"efforts", efforts()}});
        if (mode_ == MapMode::UnknownMap) sense();
        res_.termination = "completed";
        for (int i = 0; i < res_.horizon && !finished_; ++i) run_task(i);
        finish();
        return std::move(res_);
    }

private:
    void log(const Json& j) { res_.transcript.push_back(j.dump()); }

    std::vector<double> efforts() const {
        std::vector<double> out;
        for (const auto& o : ep_.objects) out.push_back(o.effort);
        return out;
    }

    void violation(std::string what) {
        if (res_.violations.size() < 32)
            res_.violations.push_back("t=" + std::to_string(world_.timestep()) + ": " + std::move(what));
    }

    void end(std::string reason, std::string detail = {}) {
        finished_ = true;
        res_.termination = std::move(reason);
        res_.detail = std::move(detail);
    }

    TaskInfo task_info(int i) const {
        const Task& t = ep_.tasks[static_cast<std::size_t>(i)];
        return {t, ep_.object(t.object).category, ep_.object(t.receptacle).category, i, res_.horizon};
    }

    void run_task(int i) {
        const TaskInfo info = task_info(i);
        int idle = 0;
        while (!finished_) {
            if (world_.task_done(info.task)) {
                ++res_.tasks_completed;
                return;
            }
            if (world_.timestep() >= max_steps_) return end("max_steps");
            if (res_.decisions >= max_decisions_) return end("decision_limit");
            if (opt_.check_invariants) audit_belief();
            const SceneGraph scene = update(belief_, world_.robot(), world_.drop_zones(),
                                            SceneOptions{opt_.step_time, true}, cache_);
            PolicyDecision pd = policy_.decide(scene, info, history_);
            ++res_.decisions;
            if (pd.fallback) ++res_.fallbacks;
            note_encountered(scene, info.task, pd.decision);
            Json rec{{"type", "decision"},
                     {"t", world_.timestep()},
                     {"task", i},
                     {"kind", std::string(decision_kind(pd.decision))},
                     {"decision", to_text(pd.decision)},
                     {"fallback", pd.fallback}};
            if (!pd.note.empty()) rec["note"] = pd.note;
            log(rec);
            history_.push_back(pd.decision);
            if (const auto* g = std::get_if<GiveUp>(&pd.decision)) return end("gave_up", g->reason);
            const int done = execute(pd.decision, info);
            idle = done > 0 ? 0 : idle + 1;
            if (idle >= opt_.limits.idle_limit) return end("stalled", "no progress after repeated decisions");
        }
    }

    void note_encountered(const SceneGraph& scene, const Task& task, const Decision& d) {
        const auto route = task_route(scene, task, true);
        if (!route || route->blockers.empty()) return;
        encountered_.insert(route->blockers.front());
        if (const auto* m = std::get_if<MoveObstacle>(&d)) {
            auto on = [&](const std::vector<int>& blockers) {
                return std::find(blockers.begin(), blockers.end(), m->obstacle) != blockers.end();
            };
            if (on(route->blockers)) {
                encountered_.insert(m->obstacle);
            } else if (const auto fewest = fewest_blocker_route(scene, task); fewest && on(fewest->blockers)) {
                encountered_.insert(m->obstacle);
            }
        }
    }

    // Performs one primitive; false when rejected or out of budget.
    bool act(const Action& action) {
        if (finished_ || world_.timestep() >= max_steps_) return false;
        const int t = world_.timestep();
        std::optional<Cell> picked_from;
        if (const auto* pick = std::get_if<PickAction>(&action)) {
            if (pick->object >= 0 && pick->object < static_cast<int>(world_.objects().size()))
                picked_from = world_.object(pick->object).cell;
        }
        if (opt_.check_invariants) {
            if (const auto* step = std::get_if<StepAction>(&action)) {
                if (belief_.at(step->to).kind != Knowledge::Free) violation("step onto a cell not known to be free");
            }
        }
        const ActionOutcome out = world_.apply(action);
        log(action_record(t, action, out, world_));
        if (!out.ok) return false;
        if (std::holds_alternative<StepAction>(action)) {
            ++res_.steps;
            ++res_.path_length;
            if (mode_ == MapMode::UnknownMap) sense();
        } else if (const auto* pick = std::get_if<PickAction>(&action)) {
            ++res_.picks;
            if (world_.object(pick->object).spec.kind == ObjectKind::Obstacle) ++res_.interactions;
            belief_.note_pick(pick->object, world_.graph().state(*picked_from));
        } else {
            const auto& place = std::get<PlaceAction>(action);
            ++res_.places;
            belief_.note_place(place.object, place.cell, world_.graph().state(place.cell),
                               world_.object(place.object).stowed);
        }
        if (opt_.check_invariants) audit_world();
        return true;
    }

    // Follows the path from the robot; stops when `interrupt` fires after a
    // step. Returns the number of steps taken.
    int walk(const Path& path, const std::function<bool()>& interrupt = {}) {
        int n = 0;
        if (path.empty() || path.front() != world_.robot()) return 0;
        for (std::size_t k = 1; k < path.size(); ++k) {
            if (!act(StepAction{path[k]})) break;
            ++n;
            if (interrupt && interrupt()) break;
        }
        return n;
    }

    std::optional<Cell> free_neighbour(bool for_placing) const {
        for (Cell d : kNeighborOffsets) {
            const Cell c{world_.robot().x + d.x, world_.robot().y + d.y};
            if (belief_.at(c).kind != Knowledge::Free) continue;
            if (for_placing && (world_.zone_at(c) || !world_.objects_at(c).empty())) continue;
            return c;
        }
        return std::nullopt;
    }

    // Sets a carried task object down on an adjacent free cell.
    int put_down() {
        const auto carried = world_.carried();
        if (!carried) return 0;
        for (Cell d : kNeighborOffsets) {
            const Cell c{world_.robot().x + d.x, world_.robot().y + d.y};
            if (belief_.at(c).kind != Knowledge::Free || !world_.check(PlaceAction{*carried, c}).empty()) continue;
            return act(PlaceAction{*carried, c}) ? 1 : 0;
        }
        return 0;
    }

    // Places the carried object on `target`, stepping off it first if needed.
    int place_at(int object, Cell target) {
        int n = 0;
        if (world_.robot() == target) {
            const auto off = free_neighbour(false);
            if (!off || !act(StepAction{*off})) return n;
            ++n;
        }
        if (act(PlaceAction{object, target})) ++n;
        return n;
    }

    int execute_task(int object, int receptacle, const Path& to_object, const Path& to_receptacle) {
        int n = 0;
        const auto carried = world_.carried();
        if (!carried || *carried != object) {
            if (carried) {
                const int put = put_down();
                if (put == 0) return n;
                n += put;
            }
            n += walk(to_object);
            if (to_object.empty() || world_.robot() != to_object.back()) return n;
            if (!act(PickAction{object})) return n;
            ++n;
        }
        n += walk(to_receptacle);
        if (to_receptacle.empty() || world_.robot() != to_receptacle.back()) return n;
        if (act(PlaceAction{object, world_.object(receptacle).cell})) ++n;
        return n;
    }

    int execute_move(const MoveObstacle& m) {
        int n = 0;
        if (world_.carried()) {
            if (*world_.carried() != m.obstacle) {
                const int put = put_down();
                if (put == 0) return n;
                n += put;
            }
        }
        if (!world_.carried()) {
            const Cell cell = belief_.object(m.obstacle).cell;
            const auto leg = approach_path(strict_mask(belief_), world_.robot(), cell);
            if (!leg) return n;
            n += walk(*leg);
            if (world_.robot() != leg->back()) return n;
            if (!act(PickAction{m.obstacle})) return n;
            ++n;
        }
        const Cell zone = world_.drop_zones().at(static_cast<std::size_t>(m.zone)).cell;
        const auto leg = approach_path(strict_mask(belief_), world_.robot(), zone);
        if (!leg) return n;
        n += walk(*leg);
        if (world_.robot() != leg->back()) return n;
        return n + place_at(m.obstacle, zone);
    }

    int execute_explore(const ExploreRoom& e, const TaskInfo& info) {
        auto missing = [&] {
            const bool carrying = world_.carried() && *world_.carried() == info.task.object;
            return static_cast<int>(!carrying && !belief_.discovered(info.task.object)) +
                   static_cast<int>(!belief_.discovered(info.task.receptacle));
        };
        const int before = missing();
        return walk(e.path, [&] {
            return missing() < before || belief_.room_status(e.room) == RoomStatus::Explored;
        });
    }

    int execute(const Decision& d, const TaskInfo& info) {
        if (const auto* a = std::get_if<AttemptTask>(&d))
            return execute_task(a->object, a->receptacle, a->to_object, a->to_receptacle);
        if (const auto* a = std::get_if<Detour>(&d))
            return execute_task(a->object, a->receptacle, a->to_object, a->to_receptacle);
        if (const auto* m = std::get_if<MoveObstacle>(&d)) return execute_move(*m);
        if (const auto* e = std::get_if<ExploreRoom>(&d)) return execute_explore(*e, info);
        return 0;
    }

    void sense() {
        const Observation obs = observe(world_, world_.robot(), opt_.sensor);
        const std::size_t known_before = belief_.known_count();
        const std::size_t objects_before = belief_.objects().size();
        belief_.integrate(obs);
        if (opt_.observation_log) *opt_.observation_log << observation_to_json(obs) << '\n';
        if (!opt_.check_invariants) return;
        for (const auto& [c, bc] : obs.cells) {
            if (belief_.at(c) != to_belief(world_.graph().state(c))) violation("belief contradicts an observed cell");
        }
        if (belief_.known_count() < known_before) violation("known cell count decreased");
        if (belief_.objects().size() < objects_before) violation("discovered object set shrank");
    }

    void audit_belief() {
        const TraversalMask& mask = world_.graph().mask();
        for (std::size_t i = 0; i < mask.size(); ++i) {
            const Cell c = mask.cell(i);
            const BeliefCell b = belief_.at(c);
            if (b.kind != Knowledge::Unknown && b.kind != to_belief(world_.graph().state(c)).kind)
                violation("belief contradicts ground truth");
        }
        for (const auto& [id, k] : belief_.objects()) {
            const auto& o = world_.object(id);
            if (k.carried != o.carried || (!o.carried && k.cell != o.cell)) violation("belief misplaces an object");
        }
        if (belief_.known_count() < audit_known_) violation("known cell count decreased");
        if (belief_.objects().size() < audit_objects_) violation("discovered object set shrank");
        audit_known_ = belief_.known_count();
        audit_objects_ = belief_.objects().size();
    }

    void audit_world() {
        if (world_.objects().size() != ep_.objects.size()) violation("object count changed");
        int carried = 0;
        std::map<Cell, std::vector<const ObjectState*>> at;
        for (const auto& o : world_.objects()) {
            if (o.carried) {
                ++carried;
                continue;
            }
            if (world_.graph().state(o.cell).kind == CellKind::Wall) violation("object on a wall cell");
            at[o.cell].push_back(&o);
        }
        if (carried > 1) violation("more than one object carried");
        if (carried != (world_.carried() ? 1 : 0)) violation("carried bookkeeping mismatch");
        for (const auto& [cell, objs] : at) {
            if (objs.size() < 2) continue;
            const bool stacked = std::all_of(objs.begin(), objs.end(), [](const ObjectState* o) {
                return o->spec.kind == ObjectKind::Obstacle && o->stowed;
            });
            const int fixtures = static_cast<int>(std::count_if(objs.begin(), objs.end(), [](const ObjectState* o) {
                return o->spec.kind == ObjectKind::Receptacle;
            }));
            const bool on_receptacle =
                fixtures == 1 && std::all_of(objs.begin(), objs.end(), [](const ObjectState* o) {
                    return o->spec.kind != ObjectKind::Obstacle;
                });
            if (!stacked && !on_receptacle) violation("objects share a cell");
        }
        if (!world_.graph().is_free(world_.robot())) violation("robot on a closed cell");
    }

    void finish() {
        res_.timesteps = world_.timestep();
        res_.path_length_m = res_.path_length * ep_.floorplan.resolution_m;
        res_.encountered.assign(encountered_.begin(), encountered_.end());
        res_.final_obstacle_cells = world_.floor_obstacle_cells();
        res_.poc_final = price_of_clutter(world_.graph(), obstacle_free_graph(ep_));
        log({{"type", "result"}, {"result", Json::parse(result_to_json(res_))}});
    }

    const Episode& ep_;
    Policy& policy_;
    RunOptions opt_;
    MapMode mode_;
    World world_;
    Belief belief_;
    CentralityCache own_cache_;
    CentralityCache* cache_;
    EpisodeResult res_;
    std::set<int> encountered_;
    std::vector<Decision> history_;
    int max_steps_ = 0;
    int max_decisions_ = 0;
    bool finished_ = false;
    std::size_t audit_known_ = 0;
    std::size_t audit_objects_ = 0;
};

}  // namespace

EpisodeMetrics EpisodeResult::metrics() const {
    EpisodeMetrics m;
    m.sr_fraction = horizon > 0 ? static_cast<double>(tasks_completed) / horizon : 0.0;
    m.timesteps = timesteps;
    m.path_length_m = path_length_m;
    m.poc_final = poc_final;
    m.interactions = interactions;
    m.encountered = static_cast<int>(encountered.size());
    return m;
}

EpisodeResult run_episode(const Episode& episode, Policy& policy, const RunOptions& options) {
    validate(episode);
    return Runner(episode, policy, options).run();
}

std::string result_to_json(const EpisodeResult& r) {
    Json j{{"method", r.method},
           {"mode", std::string(to_string(r.mode))},
           {"seed", r.seed},
           {"rooms", r.rooms},
           {"horizon", r.horizon},
           {"tasks_completed", r.tasks_completed},
           {"timesteps", r.timesteps},
           {"path_length", r.path_length},
           {"path_length_m", r.path_length_m},
           {"interactions", r.interactions},
           {"steps", r.steps},
           {"picks", r.picks},
           {"places", r.places},
           {"encountered", r.encountered},
           {"final_obstacle_cells", detail::cells_to_json(r.final_obstacle_cells)},
           {"poc_final", r.poc_final},
           {"termination", r.termination},
           {"detail", r.detail},
           {"decisions", r.decisions},
           {"fallbacks", r.fallbacks},
           {"violations", r.violations}};
    return j.dump();
}

EpisodeResult result_from_json(const std::string& text) {
    const Json j = detail::parse_json(text);
    EpisodeResult r;
    try {
        r.method = j.at("method").get<std::string>();
        const auto mode = parse_map_mode(j.at("mode").get<std::string>());
        if (!mode) throw FormatError("unknown mode in result");
        r.mode = *mode;
        r.seed = j.at("seed").get<std::uint64_t>();
        r.rooms = j.at("rooms").get<int>();
        r.horizon = j.at("horizon").get<int>();
        r.tasks_completed = j.at("tasks_completed").get<int>();
        r.timesteps = j.at("timesteps").get<int>();
        r.path_length = j.at("path_length").get<int>();
        r.path_length_m = j.at("path_length_m").get<double>();
        r.interactions = j.at("interactions").get<int>();
        r.steps = j.at("steps").get<int>();
        r.picks = j.at("picks").get<int>();
        r.places = j.at("places").get<int>();
        r.encountered = j.at("encountered").get<std::vector<int>>();
        r.final_obstacle_cells = detail::cells_from_json(j.at("final_obstacle_cells"));
        r.poc_final = j.at("poc_final").get<double>();
        r.termination = j.at("termination").get<std::string>();
        r.detail = j.at("detail").get<std::string>();
        r.decisions = j.at("decisions").get<int>();
        r.fallbacks = j.at("fallbacks").get<int>();
        r.violations = j.at("violations").get<std::vector<std::string>>();
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed result: ") + e.what());
    }
    return r;
}

std::string transcript_text(const EpisodeResult& result) {
    std::string out;
    for (const auto& line : result.transcript) {
        out += line;
        out += '\n';
    }
    return out;
}

ReplayReport replay(const Episode& recorded_episode, const std::vector<std::string>& transcript) {
    ReplayReport rep;
    Episode episode = recorded_episode;
    for (const auto& line : transcript) {
        if (line.empty()) continue;
        const Json j = detail::parse_json(line);
        if (j.value("type", "") != "header") continue;
        if (j.contains("efforts")) {
            const auto e = j["efforts"].get<std::vector<double>>();
            if (e.size() != episode.objects.size()) throw FormatError("transcript effort list does not match the episode");
            for (std::size_t i = 0; i < e.size(); ++i) episode.objects[i].effort = e[i];
        }
        break;
    }
    World world(episode);
    std::optional<Json> recorded;
    bool header = false;
    int steps = 0, interactions = 0;
    auto fail = [&](int t, std::string msg) {
        rep.match = false;
        rep.divergent_timestep = t;
        rep.message = std::move(msg);
        return rep;
    };
    for (const auto& line : transcript) {
        if (line.empty()) continue;
        const Json j = detail::parse_json(line);
        const std::string type = j.value("type", "");
        if (type == "header") {
            if (j.value("version", 0) != kTranscriptVersion) throw FormatError("unsupported transcript version");
            if (j.value("seed", std::uint64_t{0}) != episode.seed)
                return fail(0, "transcript was recorded on a different episode");
            header = true;
        } else if (type == "action") {
            if (!header) throw FormatError("transcript has no header");
            const int t = j.at("t").get<int>();
            if (t != world.timestep())
                return fail(t, "recorded timestep " + std::to_string(t) + " but world is at " +
                                   std::to_string(world.timestep()));
            const Action action = parse_action(j.at("action").get<std::string>());
            const ActionOutcome out = world.apply(action);
            ++rep.actions;
            const bool same = out.ok == j.at("ok").get<bool>() && out.cost == j.at("cost").get<int>() &&
                              world.robot() == detail::cell_from_json(j.at("robot")) &&
                              (world.carried() ? *world.carried() : -1) == j.at("carried").get<int>();
            if (!same) return fail(t, "action '" + to_string(action) + "' does not reproduce its recorded outcome");
            if (out.ok && std::holds_alternative<StepAction>(action)) ++steps;
            if (out.ok) {
                if (const auto* p = std::get_if<PickAction>(&action)) {
                    if (world.object(p->object).spec.kind == ObjectKind::Obstacle) ++interactions;
                }
            }
        } else if (type == "result") {
            recorded = j.at("result");
        } else if (type != "decision") {
            throw FormatError("unknown transcript record '" + type + "'");
        }
    }
    if (!header) throw FormatError("transcript has no header");
    if (!recorded) return fail(world.timestep(), "transcript has no result record");
    const Json& r = *recorded;
    const double poc = price_of_clutter(world.graph(), obstacle_free_graph(episode));
    if (r.at("timesteps").get<int>() != world.timestep()) return fail(world.timestep(), "final timestep differs");
    if (r.at("path_length").get<int>() != steps) return fail(world.timestep(), "path length differs");
    if (r.at("interactions").get<int>() != interactions) return fail(world.timestep(), "interaction count differs");
    if (r.at("tasks_completed").get<int>() != tasks_done_prefix(world, episode))
        return fail(world.timestep(), "completed task count differs");
    if (detail::cells_from_json(r.at("final_obstacle_cells")) != world.floor_obstacle_cells())
        return fail(world.timestep(), "final obstacle layout differs");
    if (r.at("poc_final").get<double>() != poc) return fail(world.timestep(), "final price of clutter differs");
    rep.match = true;
    rep.message = "transcript verified";
    return rep;
}

}  // namespace clutternav

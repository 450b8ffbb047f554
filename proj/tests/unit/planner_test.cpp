#include <gtest/gtest.h>

#include <cmath>
#include <tuple>

#include "clutternav/errors.hpp"
#include "clutternav/generator.hpp"
#include "clutternav/planner.hpp"
#include "clutternav/policies.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace clutternav {
namespace {

using testing::ascii_episode;
using testing::known_scene;
using testing::object_at;

TaskInfo first_task(const Episode& ep) {
    return {ep.tasks.at(0), ep.object(ep.tasks[0].object).category, ep.object(ep.tasks[0].receptacle).category, 0,
            ep.horizon};
}

// Removal cost from the strict mask alone: approach with the obstacle's cell
// opened, carry from that cell to the zone (or next to it when it is closed).
double oracle_removal_cost(const SceneGraph& scene, int obstacle, int zone, double effort) {
    TraversalMask mask = scene.strict_mask();
    const Cell o = scene.object(obstacle).cell;
    const Cell z = scene.zone(zone).cell;
    mask.set_open(o);
    const auto d = oracle::floyd_warshall(mask);
    const long long approach = d[mask.index(scene.robot())][mask.index(o)];
    long long carry = oracle::kInf;
    if (z == o) return std::numeric_limits<double>::infinity();
    if (mask.open(z)) {
        carry = d[mask.index(o)][mask.index(z)];
    } else {
        for (Cell off : kNeighborOffsets) {
            const Cell n{z.x + off.x, z.y + off.y};
            if (mask.open(n) && d[mask.index(o)][mask.index(n)] != oracle::kInf)
                carry = std::min(carry, d[mask.index(o)][mask.index(n)] + 1);
        }
    }
    if (approach == oracle::kInf || carry == oracle::kInf) return std::numeric_limits<double>::infinity();
    return (approach + carry) * scene.step_time() + 2.0 * effort;
}

std::optional<std::pair<int, int>> exhaustive_pick(const SceneGraph& scene, const std::vector<int>& obstacles,
                                                   double effort, double beta) {
    std::optional<std::tuple<double, double, int, int>> best;
    for (int o : obstacles) {
        for (const auto& z : scene.zones()) {
            const double cost = oracle_removal_cost(scene, o, z.id, effort);
            if (!std::isfinite(cost)) continue;
            const auto key = std::make_tuple(cost - beta * scene.object(o).attributes.centrality, cost, o, z.id);
            if (!best || key < *best) best = key;
        }
    }
    if (!best) return std::nullopt;
    return std::make_pair(std::get<2>(*best), std::get<3>(*best));
}

TEST(Planner, RemovalCostFormula) {
    const Episode ep = ascii_episode({"@.........O......Z"});
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    EXPECT_DOUBLE_EQ(removal_cost(scene, object_at(ep, {10, 0}), 0, 5.0), 27.0);
}

TEST(Planner, RemovalCostAdjacent) {
    const Episode ep = ascii_episode({"@OZ"});
    const World world(ep);
    EXPECT_DOUBLE_EQ(removal_cost(known_scene(world), 0, 0, 0.0), 2.0);
}

TEST(Planner, RemovalCostUnreachableZone) {
    const Episode ep = ascii_episode({"@O.OZ"});
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    EXPECT_TRUE(std::isinf(removal_cost(scene, 0, 0, 5.0)));
    EXPECT_THROW(removal_cost(scene, 7, 0, 5.0), LookupError);
}

TEST(Planner, RemovalCostRejectsNonObstacles) {
    const Episode ep = ascii_episode({"@TZ..R"});
    const World world(ep);
    EXPECT_THROW(removal_cost(known_scene(world), 0, 0, 5.0), LookupError);
}

TEST(Planner, SelectionMatchesExhaustiveEvaluation) {
    const Episode ep = ascii_episode({
        "@....#",
        ".O.O..",
        "....Z.",
        "Z..O..",
        "......",
    });
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const auto obstacles = movable_obstacles(scene);
    ASSERT_EQ(obstacles.size(), 3u);
    for (double beta : {0.0, 1.0, 10.0, 100.0}) {
        for (double effort : {0.0, 5.0, 20.0}) {
            ReasonerConfig config;
            config.effort = effort;
            config.beta = beta;
            const auto pick = select_intervention(scene, obstacles, config);
            const auto want = exhaustive_pick(scene, obstacles, effort, beta);
            ASSERT_TRUE(pick && want);
            EXPECT_EQ(std::make_pair(pick->obstacle, pick->zone), *want) << "beta " << beta << " e " << effort;
            EXPECT_DOUBLE_EQ(pick->cost, oracle_removal_cost(scene, pick->obstacle, pick->zone, effort));
        }
    }
}

TEST(Planner, CentralityWeightShiftsChoice) {
    // The corridor obstacle is the only way into the dead end; the open one
    // is next to the robot.
    const Episode ep = ascii_episode({
        "#######.......",
        "......O.......",
        "#######.......",
        "Z@O...........",
        "Z.............",
    });
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const int corridor = object_at(ep, {6, 1});
    const int open = object_at(ep, {2, 3});
    const auto& bc_corridor = scene.object(corridor).attributes.centrality;
    const auto& bc_open = scene.object(open).attributes.centrality;
    ASSERT_GT(bc_corridor, bc_open);
    ReasonerConfig config;
    config.beta = 1000.0;
    const std::vector<int> both = {corridor, open};
    EXPECT_EQ(select_intervention(scene, both, config)->obstacle, corridor);
    config.beta = 0.0;
    EXPECT_EQ(select_intervention(scene, both, config)->obstacle, open);
}

TEST(Planner, SelectionSkipsUnreachable) {
    const Episode ep = ascii_episode({"@O.Z.O"});
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const std::vector<int> ids = {0, 1};
    const auto pick = select_intervention(scene, ids, {});
    ASSERT_TRUE(pick);
    EXPECT_EQ(pick->obstacle, 0);
    const std::vector<int> far = {1};
    EXPECT_FALSE(select_intervention(scene, far, {}));
}

TEST(Planner, SelectionIsScaleInvariant) {
    GenerationConfig gen;
    gen.n_rooms = 3;
    gen.seed = 14;
    const Episode ep = generate_episode(gen);
    const World world(ep);
    for (double k : {0.5, 2.0, 7.0}) {
        SceneOptions base;
        SceneOptions scaled;
        scaled.step_time = k;
        const SceneGraph a = known_scene(world, base);
        const SceneGraph b = known_scene(world, scaled);
        ReasonerConfig ca;
        ca.effort = 3.0;
        ca.beta = 40.0;
        ReasonerConfig cb = ca;
        cb.effort = 3.0 * k;
        cb.beta = 40.0 * k;
        const auto ids = movable_obstacles(a);
        const auto pa = select_intervention(a, ids, ca);
        const auto pb = select_intervention(b, ids, cb);
        ASSERT_EQ(pa.has_value(), pb.has_value());
        if (pa) EXPECT_EQ(std::make_pair(pa->obstacle, pa->zone), std::make_pair(pb->obstacle, pb->zone));
    }
}

TEST(Planner, ConfigValidation) {
    ReasonerConfig config;
    config.effort = -1.0;
    EXPECT_THROW(config.validate(), ConfigError);
    config = {};
    config.beta = -0.5;
    EXPECT_THROW(config.validate(), ConfigError);
    config = {};
    config.history = -1;
    EXPECT_THROW(config.validate(), ConfigError);
}

TEST(Planner, FreeRouteAttempts) {
    const Episode ep = ascii_episode({"@.T...R", "..O...."});
    const World world(ep);
    const Decision d = HeuristicReasoner().decide(known_scene(world), first_task(ep));
    ASSERT_TRUE(std::holds_alternative<AttemptTask>(d));
    const auto& a = std::get<AttemptTask>(d);
    EXPECT_EQ(a.to_object.front(), ep.start);
    EXPECT_EQ(manhattan(a.to_object.back(), ep.object(a.object).cell), 1);
    EXPECT_EQ(manhattan(a.to_receptacle.back(), ep.object(a.receptacle).cell), 1);
}

TEST(Planner, SealedCorridorMovesBlocker) {
    const Episode ep = ascii_episode({
        "@.O.TR",
        "Z#####",
    });
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const int blocker = object_at(ep, {2, 0});
    const Decision d = HeuristicReasoner().decide(scene, first_task(ep));
    ASSERT_TRUE(std::holds_alternative<MoveObstacle>(d));
    const auto& m = std::get<MoveObstacle>(d);
    EXPECT_EQ(m.obstacle, blocker);
    ReasonerConfig config;
    const auto want = exhaustive_pick(scene, {blocker}, config.effort, effective_beta(scene, config));
    ASSERT_TRUE(want);
    EXPECT_EQ(m.zone, want->second);
}

TEST(Planner, FewestBlockerRoute) {
    const std::vector<std::string> rows = {
        "T@.OO...R",
        "Z.#####..",
        "....O....",
    };
    const Episode ep = ascii_episode(rows);
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const Task task = ep.tasks[0];
    const auto shortest = task_route(scene, task, true);
    const auto fewest = fewest_blocker_route(scene, task);
    ASSERT_TRUE(shortest && fewest);
    EXPECT_FALSE(task_route(scene, task, false).has_value());
    EXPECT_EQ(shortest->blockers.size(), 2u);
    EXPECT_EQ(fewest->blockers, std::vector<int>{object_at(ep, {4, 2})});
    EXPECT_GT(fewest->steps, shortest->steps);

    // Oracle: the smallest obstacle subset whose removal reconnects the robot
    // to the receptacle's neighbourhood.
    const std::vector<Cell> obstacles = ep.clutter_cells;
    std::size_t best = obstacles.size() + 1;
    for (unsigned mask = 0; mask < (1u << obstacles.size()); ++mask) {
        TraversalMask open = scene.strict_mask();
        for (std::size_t i = 0; i < obstacles.size(); ++i)
            if (mask & (1u << i)) open.set_open(obstacles[i]);
        const auto d = oracle::floyd_warshall(open);
        if (d[open.index(ep.start)][open.index({8, 1})] != oracle::kInf)
            best = std::min<std::size_t>(best, static_cast<std::size_t>(__builtin_popcount(mask)));
    }
    EXPECT_EQ(fewest->blockers.size(), best);

    const Decision d = HeuristicReasoner().decide(scene, first_task(ep));
    ASSERT_TRUE(std::holds_alternative<MoveObstacle>(d));
    EXPECT_EQ(std::get<MoveObstacle>(d).obstacle, object_at(ep, {4, 2}));
}

TEST(Planner, DetourWhenMovingDoesNotPay) {
    const Episode ep = ascii_episode({
        "@.O.T.R",
        ".......",
        "Z......",
    });
    const World world(ep);
    ReasonerConfig config;
    config.effort = 50.0;
    config.beta = 0.0;
    const Decision d = HeuristicReasoner(config).decide(known_scene(world), first_task(ep));
    EXPECT_TRUE(std::holds_alternative<Detour>(d));
}

TEST(Planner, ExploresRoomWithHigherPrior) {
    Episode ep;
    ep.floorplan = generate_floorplan(2, 5);
    ep.floorplan.rooms[0].type = RoomType::Bathroom;
    ep.floorplan.rooms[1].type = RoomType::Kitchen;
    const auto& far = ep.floorplan.rooms[1].cells;
    const auto& near = ep.floorplan.rooms[0].cells;
    ep.objects = {
        {0, "Mug", ObjectKind::TaskObject, far[far.size() / 2], 5.0},
        {1, "CounterTop", ObjectKind::Receptacle, far[far.size() / 2 + 2], 5.0},
    };
    ep.start = near[near.size() / 2];
    ep.drop_zones = {{0, near.front(), 0}};
    ep.tasks = {{0, 1}};
    ep.horizon = 1;
    validate(ep);
    const World world(ep);
    Belief belief(std::make_shared<const Floorplan>(ep.floorplan));
    belief.integrate(observe(world, ep.start, {2}));
    const SceneGraph scene = update(belief, ep.start, ep.drop_zones);
    ASSERT_EQ(scene.frontier_rooms().size(), 2u);
    const Decision d = HeuristicReasoner().decide(scene, first_task(ep));
    ASSERT_TRUE(std::holds_alternative<ExploreRoom>(d));
    EXPECT_EQ(std::get<ExploreRoom>(d).room, 1);
    EXPECT_EQ(check_decision(scene, first_task(ep), d), "");
}

TEST(Planner, MovesAlwaysHaveFiniteCost) {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        GenerationConfig gen;
        gen.n_rooms = 2 + static_cast<int>(seed % 5);
        gen.seed = seed;
        gen.clutter.density = 2.0;
        gen.clutter.seed = seed;
        const Episode ep = generate_episode(gen);
        const World world(ep);
        const SceneGraph scene = known_scene(world);
        for (const auto& t : ep.tasks) {
            const TaskInfo info{t, "", "", 0, ep.horizon};
            const Decision d = HeuristicReasoner().decide(scene, info);
            if (const auto* m = std::get_if<MoveObstacle>(&d))
                EXPECT_TRUE(std::isfinite(removal_cost(scene, m->obstacle, m->zone, 5.0)));
            EXPECT_EQ(check_decision(scene, info, d), "");
        }
    }
}

TEST(Planner, MovingBecomesRarerWithEffort) {
    ReasonerConfig base;
    base.beta = 20.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        GenerationConfig gen;
        gen.n_rooms = 3 + static_cast<int>(seed % 4);
        gen.seed = 500 + seed;
        gen.clutter.seed = 500 + seed;
        const Episode ep = generate_episode(gen);
        const World world(ep);
        const SceneGraph scene = known_scene(world);
        for (const auto& t : ep.tasks) {
            if (!task_route(scene, t, false)) continue;  // detour exists
            const TaskInfo info{t, "", "", 0, ep.horizon};
            bool moved_before = true;
            for (double e : {0.0, 1.0, 5.0, 10.0, 20.0, 100.0}) {
                ReasonerConfig config = base;
                config.effort = e;
                const bool moves = std::holds_alternative<MoveObstacle>(HeuristicReasoner(config).decide(scene, info));
                EXPECT_FALSE(moves && !moved_before) << "seed " << seed << " e " << e;
                moved_before = moves;
            }
        }
    }
}

TEST(Planner, MaterializeCommands) {
    const Episode ep = ascii_episode({"@.O.T.R", ".......", "Z......"});
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const TaskInfo info = first_task(ep);
    Command move{Verb::Move, object_at(ep, {2, 0}), 0, -1, ""};
    EXPECT_EQ(materialize(scene, info, move), (Decision{MoveObstacle{object_at(ep, {2, 0}), 0}}));
    move.zone = 9;
    EXPECT_FALSE(materialize(scene, info, move));
    EXPECT_TRUE(std::holds_alternative<Detour>(*materialize(scene, info, Command{Verb::Detour})));
}

TEST(Baselines, AlwaysDetourGivesUpWhenSealed) {
    const Episode ep = ascii_episode({"@.O.TR"});
    const World world(ep);
    EXPECT_TRUE(std::holds_alternative<GiveUp>(baseline_always_detour(known_scene(world), first_task(ep))));
}

TEST(Baselines, AlwaysInteractMovesFirstBlocker) {
    const Episode ep = ascii_episode({
        "@.O.O.T.R",
        "Z........",
    });
    const World world(ep);
    const Decision d = baseline_always_interact(known_scene(world), first_task(ep));
    ASSERT_TRUE(std::holds_alternative<MoveObstacle>(d));
    EXPECT_EQ(std::get<MoveObstacle>(d).obstacle, object_at(ep, {2, 0}));
}

TEST(Baselines, CleanSpTakesNearestObstacleFirst) {
    const Episode ep = ascii_episode({
        "@.T.....R",
        ".......O.",
        "Z.O......",
    });
    const World world(ep);
    const Decision d = baseline_clean_sp(known_scene(world), first_task(ep));
    ASSERT_TRUE(std::holds_alternative<MoveObstacle>(d));
    EXPECT_EQ(std::get<MoveObstacle>(d).obstacle, object_at(ep, {2, 2}));
}

TEST(Baselines, MakePolicyKnowsEveryMethod) {
    for (const auto& name : method_names()) {
        if (name == "llm") {
            EXPECT_THROW(make_policy(name, {}), ConfigError);
            continue;
        }
        EXPECT_EQ(make_policy(name, {})->name(), name);
    }
    EXPECT_THROW(make_policy("nonsense", {}), ConfigError);
}

}  // namespace
}  // namespace clutternav

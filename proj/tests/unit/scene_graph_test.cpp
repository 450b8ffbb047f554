#include <gtest/gtest.h>

#include <regex>

#include "clutternav/errors.hpp"
#include "clutternav/generator.hpp"
#include "clutternav/scene_graph.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

namespace clutternav {
namespace {

using testing::ascii_episode;
using testing::known_scene;
using testing::object_at;

int count_lines(const std::string& text, const std::string& needle) {
    int n = 0;
    for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
    return n;
}

TEST(SceneGraph, OpenRoomGoalHasNoBlockers) {
    const Episode ep = ascii_episode({
        "@....",
        ".....",
        "...T.",
    });
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const auto& a = scene.object(0).attributes;
    EXPECT_TRUE(a.blockers.empty());
    ASSERT_TRUE(a.path_cost && a.detour_cost);
    EXPECT_DOUBLE_EQ(*a.path_cost, *a.detour_cost);
    EXPECT_DOUBLE_EQ(*a.path_cost, 5.0);
}

TEST(SceneGraph, SealedCorridorHasNoDetour) {
    const Episode ep = ascii_episode({"@.O..T"});
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const int obstacle = object_at(ep, {2, 0});
    const int goal = object_at(ep, {5, 0});
    const auto& a = scene.object(goal).attributes;
    EXPECT_EQ(a.blockers, std::vector<int>{obstacle});
    EXPECT_FALSE(a.detour_cost.has_value());
    EXPECT_DOUBLE_EQ(*a.path_cost, 5.0);
    EXPECT_TRUE(scene.blocking(obstacle, goal));
}

TEST(SceneGraph, TwoRoutesDetourIsLonger) {
    const std::vector<std::string> rows = {
        "@.O..T",
        ".####.",
        "......",
    };
    const Episode ep = ascii_episode(rows);
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const int obstacle = object_at(ep, {2, 0});
    const int goal = object_at(ep, {5, 0});
    const auto& a = scene.object(goal).attributes;
    ASSERT_TRUE(a.path_cost && a.detour_cost);
    EXPECT_GT(*a.detour_cost, *a.path_cost);
    EXPECT_EQ(a.blockers, std::vector<int>{obstacle});

    // Oracle: relaxed and strict distances to the goal's best neighbour.
    auto relaxed = testing::ascii_mask(rows);
    relaxed.set_open({2, 0});
    auto strict = testing::ascii_mask(rows);
    for (auto* m : {&relaxed, &strict}) m->set_open({5, 0}, true);
    const auto dr = oracle::floyd_warshall(relaxed);
    const auto ds = oracle::floyd_warshall(strict);
    EXPECT_DOUBLE_EQ(*a.path_cost, static_cast<double>(dr[relaxed.index({0, 0})][relaxed.index({5, 0})]));
    EXPECT_DOUBLE_EQ(*a.detour_cost, static_cast<double>(ds[strict.index({0, 0})][strict.index({5, 0})]));
}

TEST(SceneGraph, OffPathObstacleDoesNotBlock) {
    const Episode ep = ascii_episode({
        "@...T",
        ".....",
        "O....",
    });
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const int obstacle = object_at(ep, {0, 2});
    const int goal = object_at(ep, {4, 0});
    EXPECT_FALSE(scene.blocking(obstacle, goal));
    EXPECT_THROW(scene.blocking(obstacle, 99), LookupError);
}

TEST(SceneGraph, BlockingMatchesCanonicalPath) {
    // Diamond: two shortest routes around the centre; the canonical path
    // prefers the lower (y, x) predecessor when walking back from the goal.
    const Episode ep = ascii_episode({
        "@.O",
        ".#.",
        "O.T",
    });
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    const int top = object_at(ep, {2, 0});
    const int left = object_at(ep, {0, 2});
    const int goal = object_at(ep, {2, 2});
    const auto path = scene.relaxed_from_robot().path_to({2, 2});
    ASSERT_TRUE(path);
    const bool via_top = std::find(path->begin(), path->end(), Cell{2, 0}) != path->end();
    EXPECT_EQ(scene.blocking(top, goal), via_top);
    EXPECT_EQ(scene.blocking(left, goal), !via_top);
    EXPECT_TRUE(via_top);
}

TEST(SceneGraph, EdgesAgreeWithBlockers) {
    GenerationConfig config;
    config.n_rooms = 4;
    config.seed = 12;
    const Episode ep = generate_episode(config);
    const World world(ep);
    const SceneGraph scene = known_scene(world);
    for (const auto& [j, o] : scene.objects()) {
        for (const auto& [i, other] : scene.objects()) {
            const bool listed = std::find(o.attributes.blockers.begin(), o.attributes.blockers.end(), i) !=
                                o.attributes.blockers.end();
            EXPECT_EQ(scene.blocking(i, j), listed);
        }
        const auto& a = o.attributes;
        if (a.path_cost && a.detour_cost) EXPECT_GE(*a.detour_cost, *a.path_cost);
    }
}

TEST(SceneGraph, FrontierRooms) {
    GenerationConfig config;
    config.n_rooms = 5;
    config.seed = 2;
    const Episode ep = generate_episode(config);
    const World world(ep);
    EXPECT_TRUE(known_scene(world).frontier_rooms().empty());
    const Belief empty(std::make_shared<const Floorplan>(ep.floorplan));
    const SceneGraph fresh = update(empty, ep.start, ep.drop_zones);
    EXPECT_EQ(fresh.frontier_rooms().size(), 5u);
    EXPECT_EQ(fresh.frontier_rooms(), update(empty, ep.start, ep.drop_zones).frontier_rooms());
}

TEST(SceneGraph, UnknownCellsAreNeverTraversable) {
    GenerationConfig config;
    config.n_rooms = 3;
    config.seed = 6;
    const Episode ep = generate_episode(config);
    const World world(ep);
    Belief belief(std::make_shared<const Floorplan>(ep.floorplan));
    belief.integrate(observe(world, world.robot(), {4}));
    const SceneGraph scene = update(belief, world.robot(), ep.drop_zones);
    for (std::size_t i = 0; i < scene.relaxed_mask().size(); ++i) {
        const Cell c = scene.relaxed_mask().cell(i);
        if (!belief.known(c)) {
            EXPECT_FALSE(scene.relaxed_mask().open(c));
            EXPECT_FALSE(scene.strict_mask().open(c));
        }
    }
}

TEST(SceneGraph, SerializationIsDeterministic) {
    const Episode ep = ascii_episode({"@.O..T..R"});
    const World world(ep);
    const TaskInfo task{ep.tasks[0], "Mug", "DiningTable", 0, 1};
    const std::string a = serialize_to_text(known_scene(world), task, {});
    const std::string b = serialize_to_text(known_scene(world), task, {});
    EXPECT_EQ(a, b);
    EXPECT_EQ(count_lines(a, " blocks "), 2);  // the obstacle blocks the goal and the receptacle
}

TEST(SceneGraph, OneBlockingRelationLine) {
    const Episode ep = ascii_episode({"R@.O.T"});
    const World world(ep);
    const std::string text = serialize_to_text(known_scene(world), std::nullopt, {});
    EXPECT_EQ(count_lines(text, " blocks "), 1);
    EXPECT_NE(text.find("o1 blocks o2"), std::string::npos);
}

TEST(SceneGraph, EmptySceneHasHeaderOnly) {
    const Episode ep = ascii_episode({"@.."});
    const World world(ep);
    const std::string text = serialize_to_text(known_scene(world), std::nullopt, {});
    EXPECT_EQ(count_lines(text, "OBJECT "), 0);
    EXPECT_NE(text.find("TASK none"), std::string::npos);
    EXPECT_NE(text.find("ROBOT "), std::string::npos);
}

TEST(SceneGraph, HistoryIsTruncated) {
    const Episode ep = ascii_episode({"@.."});
    const World world(ep);
    const std::vector<Decision> history = {GiveUp{"a"}, GiveUp{"b"}, GiveUp{"c"}, GiveUp{"d"}};
    SerializeOptions options;
    options.history = 2;
    const std::string text = serialize_to_text(known_scene(world), std::nullopt, history, options);
    EXPECT_EQ(count_lines(text, "HISTORY "), 2);
    EXPECT_NE(text.find("HISTORY GIVEUP d"), std::string::npos);
}

TEST(SceneGraph, NumericFieldsRoundTrip) {
    GenerationConfig config;
    config.n_rooms = 3;
    config.seed = 31;
    const Episode ep = generate_episode(config);
    const World world(ep);
    SceneOptions options;
    options.step_time = 0.37;
    const SceneGraph scene = known_scene(world, options);
    const std::string text = serialize_to_text(scene, std::nullopt, {});
    const std::regex line(R"(OBJECT o(\d+) .* path_cost=([0-9.]+|none) .* centrality=([0-9.]+) detour_cost=([0-9.]+|none))");
    int parsed = 0;
    for (auto it = std::sregex_iterator(text.begin(), text.end(), line); it != std::sregex_iterator(); ++it) {
        const auto& m = *it;
        const auto& a = scene.object(std::stoi(m[1])).attributes;
        if (m[2] != "none") EXPECT_NEAR(std::stod(m[2]), *a.path_cost, 0.005 + 1e-9);
        if (m[4] != "none") EXPECT_NEAR(std::stod(m[4]), *a.detour_cost, 0.005 + 1e-9);
        EXPECT_NEAR(std::stod(m[3]), a.centrality, 0.005 + 1e-9);
        ++parsed;
    }
    EXPECT_EQ(parsed, static_cast<int>(scene.objects().size()));
}

TEST(SceneGraph, CentralityBuckets) {
    EXPECT_EQ(centrality_bucket(0.0), "low");
    EXPECT_EQ(centrality_bucket(0.1), "medium");
    EXPECT_EQ(centrality_bucket(0.5), "high");
}

}  // namespace
}  // namespace clutternav

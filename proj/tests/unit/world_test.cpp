#include <gtest/gtest.h>

#include "clutternav/errors.hpp"
#include "clutternav/world.hpp"
#include "fixtures.hpp"

namespace clutternav {
namespace {

using testing::ascii_episode;

TEST(World, StepMovesRobot) {
    World world(ascii_episode({"@.."}));
    const auto out = world.apply(StepAction{{1, 0}});
    EXPECT_TRUE(out.ok);
    EXPECT_EQ(out.cost, 1);
    EXPECT_EQ(world.robot(), (Cell{1, 0}));
    EXPECT_EQ(world.timestep(), 1);
}

TEST(World, RejectedActionsLeaveStateAlone) {
    World world(ascii_episode({"@.O", "..."}));
    for (const Action a : {Action{StepAction{{2, 0}}}, Action{PickAction{0}}, Action{PlaceAction{0, {1, 0}}},
                           Action{PickAction{42}}}) {
        const auto out = world.apply(a);
        EXPECT_FALSE(out.ok) << to_string(a);
        EXPECT_FALSE(out.error.empty());
        EXPECT_EQ(out.cost, 0);
    }
    EXPECT_EQ(world.robot(), (Cell{0, 0}));
    EXPECT_EQ(world.timestep(), 0);
}

TEST(World, StepOntoObstacleIsRejected) {
    World world(ascii_episode({"@O."}));
    EXPECT_FALSE(world.apply(StepAction{{1, 0}}).ok);
    EXPECT_THROW(apply(world, StepAction{{1, 0}}), StateError);
}

TEST(World, PickAndStowChargesTwoEfforts) {
    World world(ascii_episode({"@OZ", "..."}, 5.0));
    ASSERT_TRUE(world.apply(PickAction{0}).ok);
    EXPECT_TRUE(world.graph().is_free({1, 0}));
    ASSERT_TRUE(world.apply(StepAction{{1, 0}}).ok);
    ASSERT_TRUE(world.apply(PlaceAction{0, {2, 0}}).ok);
    EXPECT_EQ(world.timestep(), 10 + 1);
    EXPECT_EQ(world.object(0).cell, (Cell{2, 0}));
    EXPECT_TRUE(world.object(0).stowed);
    EXPECT_TRUE(world.floor_obstacle_cells().empty());
    EXPECT_FALSE(world.apply(PickAction{0}).ok);
}

TEST(World, EffortRoundsUp) {
    World world(ascii_episode({"@O."}, 2.5));
    EXPECT_EQ(world.effort_steps(0), 3);
    EXPECT_EQ(world.apply(PickAction{0}).cost, 3);
}

TEST(World, TaskCompletesOnReceptacle) {
    World world(ascii_episode({"T@R"}));
    const Task task{0, 1};
    EXPECT_FALSE(world.task_done(task));
    ASSERT_TRUE(world.apply(PickAction{0}).ok);
    EXPECT_FALSE(world.apply(PickAction{1}).ok);
    ASSERT_TRUE(world.apply(PlaceAction{0, {2, 0}}).ok);
    EXPECT_TRUE(world.task_done(task));
    EXPECT_EQ(world.objects_at({2, 0}), (std::vector<int>{0, 1}));
}

TEST(World, TaskObjectsStayOffDropZones) {
    World world(ascii_episode({"T@Z"}));
    ASSERT_TRUE(world.apply(PickAction{0}).ok);
    EXPECT_FALSE(world.apply(PlaceAction{0, {2, 0}}).ok);
    EXPECT_FALSE(world.apply(PlaceAction{0, {1, 0}}).ok);
    EXPECT_TRUE(world.apply(PlaceAction{0, {0, 0}}).ok);
}

TEST(World, ActionTextRoundTrips) {
    for (const Action a : {Action{StepAction{{3, 4}}}, Action{PickAction{7}}, Action{PlaceAction{2, {0, 9}}}})
        EXPECT_EQ(parse_action(to_string(a)), a);
    EXPECT_EQ(to_string(PlaceAction{2, {5, 6}}), "place 2 5 6");
    EXPECT_THROW(parse_action("jump 1"), FormatError);
    EXPECT_THROW(parse_action("step 1"), FormatError);
}

}  // namespace
}  // namespace clutternav

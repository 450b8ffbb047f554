#include <gtest/gtest.h>

#include <cmath>
#include <json.hpp>

#include "clutternav/executor.hpp"
#include "clutternav/generator.hpp"
#include "clutternav/suite.hpp"
#include "fixtures.hpp"

namespace clutternav {
namespace {

using testing::ascii_episode;
using Json = nlohmann::json;

Episode generated(int rooms, std::uint64_t seed, double density = 1.0, int horizon = 5) {
    GenerationConfig gen;
    gen.n_rooms = rooms;
    gen.seed = seed;
    gen.clutter.seed = seed;
    gen.clutter.density = density;
    gen.horizon = horizon;
    return generate_episode(gen);
}

EpisodeResult run(const Episode& ep, const std::string& method, RunOptions options = {}) {
    auto policy = make_policy(method, {});
    return run_episode(ep, *policy, options);
}

std::vector<std::string> action_lines(const EpisodeResult& r) {
    std::vector<std::string> out;
    for (const auto& line : r.transcript) {
        if (Json::parse(line).at("type") == "action") out.push_back(line);
    }
    return out;
}

TEST(Executor, AdjacentGoalSucceeds) {
    const Episode ep = ascii_episode({"T@R"});
    const EpisodeResult r = run(ep, "ours");
    EXPECT_EQ(r.termination, "completed");
    EXPECT_EQ(r.tasks_completed, 1);
    EXPECT_EQ(r.interactions, 0);
    EXPECT_EQ(r.timesteps, 10);  // pick and place, no steps
    EXPECT_DOUBLE_EQ(r.poc_final, 1.0);
}

TEST(Executor, SealedCorridorDefeatsAlwaysDetour) {
    const Episode ep = ascii_episode({"@.O.TR", "Z....."});
    const Episode sealed = ascii_episode({"@.O.TR", "Z#####"});
    const EpisodeResult r = run(sealed, "always_detour");
    EXPECT_EQ(r.tasks_completed, 0);
    EXPECT_EQ(r.termination, "gave_up");
    EXPECT_EQ(r.interactions, 0);
    const EpisodeResult ours = run(sealed, "ours");
    EXPECT_EQ(ours.tasks_completed, 1);
    EXPECT_EQ(ours.interactions, 1);
    EXPECT_EQ(run(ep, "always_detour").tasks_completed, 1);
}

TEST(Executor, TimestepsAreStepsPlusEfforts) {
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        for (double e : {1.0, 2.5, 5.0}) {
            const Episode ep = with_effort(generated(2 + static_cast<int>(seed), seed), e);
            for (const auto& method : {"always_interact", "clean_sp", "ours"}) {
                const EpisodeResult r = run(ep, method);
                const int ce = static_cast<int>(std::ceil(e));
                EXPECT_EQ(r.timesteps, r.steps + ce * (r.picks + r.places)) << method;
                int sum = 0;
                int steps = 0;
                for (const auto& line : action_lines(r)) {
                    const Json j = Json::parse(line);
                    sum += j.at("cost").get<int>();
                    if (j.at("action").get<std::string>().rfind("step", 0) == 0 && j.at("ok").get<bool>()) ++steps;
                }
                EXPECT_EQ(sum, r.timesteps);
                EXPECT_EQ(steps, r.steps);
                EXPECT_EQ(r.path_length, r.steps);
                EXPECT_DOUBLE_EQ(r.path_length_m, r.steps * ep.floorplan.resolution_m);
            }
        }
    }
}

TEST(Executor, BaselineInteractionProfiles) {
    int ai_moves = 0;
    int ai_encountered = 0;
    for (std::uint64_t seed = 10; seed < 16; ++seed) {
        const Episode ep = generated(4, seed);
        const EpisodeResult ad = run(ep, "always_detour");
        EXPECT_EQ(ad.interactions, 0);
        const EpisodeResult ai = run(ep, "always_interact");
        ai_moves += ai.interactions;
        ai_encountered += static_cast<int>(ai.encountered.size());
        EXPECT_EQ(ai.interactions, static_cast<int>(ai.encountered.size()));
        const EpisodeResult cs = run(ep, "clean_sp");
        EXPECT_TRUE(cs.final_obstacle_cells.empty());
    }
    EXPECT_DOUBLE_EQ(interaction_efficiency(ai_moves, ai_encountered), 100.0);
}

TEST(Executor, CleanSpMatchesDetourWithoutClutter) {
    const Episode ep = ascii_episode({"@.T...", "......", "R.T..R", "Z....."});
    const EpisodeResult a = run(ep, "always_detour");
    const EpisodeResult b = run(ep, "clean_sp");
    EXPECT_EQ(action_lines(a), action_lines(b));
    EXPECT_EQ(a.timesteps, b.timesteps);
}

TEST(Executor, RunsAreDeterministic) {
    const Episode ep = generated(5, 77);
    for (const auto& method : {"always_interact", "ours"}) {
        const EpisodeResult a = run(ep, method);
        const EpisodeResult b = run(ep, method);
        EXPECT_EQ(a.transcript, b.transcript);
        EXPECT_EQ(result_to_json(a), result_to_json(b));
    }
}

TEST(Executor, ResultJsonRoundTrips) {
    const EpisodeResult r = run(generated(3, 5), "ours");
    const EpisodeResult back = result_from_json(result_to_json(r));
    EXPECT_EQ(result_to_json(back), result_to_json(r));
    EXPECT_TRUE(back.transcript.empty());
    EXPECT_THROW(result_from_json("{"), FormatError);
}

TEST(Executor, ReplayVerifiesRecordedRuns) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const Episode ep = generated(3, 200 + seed);
        for (const auto& method : {"clean_sp", "ours"}) {
            const EpisodeResult r = run(ep, method);
            const ReplayReport rep = replay(ep, r.transcript);
            EXPECT_TRUE(rep.match) << rep.message;
            EXPECT_EQ(rep.divergent_timestep, -1);
        }
    }
}

TEST(Executor, ReplayFindsTamperedStep) {
    const Episode ep = generated(3, 31);
    const EpisodeResult r = run(ep, "ours");
    std::vector<std::string> lines = r.transcript;
    std::size_t target = 0;
    int seen = 0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const Json j = Json::parse(lines[i]);
        if (j.at("type") == "action" && j.at("action").get<std::string>().rfind("step", 0) == 0 && ++seen == 5) {
            target = i;
            break;
        }
    }
    ASSERT_GT(target, 0u);
    Json j = Json::parse(lines[target]);
    const int t = j.at("t").get<int>();
    const Cell robot{j.at("robot")[0].get<int>(), j.at("robot")[1].get<int>()};
    j["action"] = "step " + std::to_string(robot.x + 5) + " " + std::to_string(robot.y);
    lines[target] = j.dump();
    const ReplayReport rep = replay(ep, lines);
    EXPECT_FALSE(rep.match);
    EXPECT_EQ(rep.divergent_timestep, t);

    std::vector<std::string> truncated(r.transcript.begin(), r.transcript.end() - 1);
    EXPECT_FALSE(replay(ep, truncated).match);
    std::vector<std::string> broken = r.transcript;
    broken[1] = "not json";
    EXPECT_THROW(replay(ep, broken), FormatError);
}

TEST(Executor, UnknownMapKeepsInvariants) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Episode ep = generated(1 + static_cast<int>(seed % 4), 300 + seed, 1.0, 3);
        RunOptions options;
        options.mode = MapMode::UnknownMap;
        options.check_invariants = true;
        options.sensor.range = 3;
        const EpisodeResult r = run(ep, "ours", options);
        EXPECT_TRUE(r.violations.empty()) << r.violations.front();
        EXPECT_EQ(r.mode, MapMode::UnknownMap);
        EXPECT_TRUE(replay(ep, r.transcript).match);
    }
}

TEST(Executor, BaselinesForceKnownMap) {
    const Episode ep = generated(2, 8);
    RunOptions options;
    options.mode = MapMode::UnknownMap;
    EXPECT_EQ(run(ep, "always_detour", options).mode, MapMode::KnownMap);
    EXPECT_EQ(run(ep, "ours_unknown").mode, MapMode::UnknownMap);
}

TEST(Executor, StepBudgetEndsEpisode) {
    const Episode ep = generated(6, 41);
    RunOptions options;
    options.limits.max_steps = 30;
    const EpisodeResult r = run(ep, "clean_sp", options);
    EXPECT_EQ(r.termination, "max_steps");
    EXPECT_LE(r.timesteps, 30 + 10);
}

TEST(Executor, ObservationLogHasOneRecordPerSensing) {
    const Episode ep = generated(2, 3, 1.0, 1);
    std::ostringstream log;
    RunOptions options;
    options.mode = MapMode::UnknownMap;
    options.observation_log = &log;
    const EpisodeResult r = run(ep, "ours", options);
    const std::string text = log.str();
    const auto records = std::count(text.begin(), text.end(), '\n');
    EXPECT_GT(records, 0);
    EXPECT_LE(records, r.steps + r.picks + r.places + 1);
}

}  // namespace
}  // namespace clutternav

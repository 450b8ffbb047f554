#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "clutternav/centrality.hpp"
#include "clutternav/episode.hpp"
#include "clutternav/metrics.hpp"
#include "clutternav/perception.hpp"
#include "clutternav/policies.hpp"

namespace clutternav {

inline constexpr int kTranscriptVersion = 1;
inline constexpr int kStepsPerTask = 500;

struct RunLimits {
    int max_steps = 0;      // 0: kStepsPerTask * horizon
    int max_decisions = 0;  // 0: 100 * horizon + 1000
    int idle_limit = 3;     // consecutive decisions that execute nothing
};

struct RunOptions {
    MapMode mode = MapMode::KnownMap;
    SensorConfig sensor;
    RunLimits limits;
    double step_time = 1.0;
    /// Audit belief soundness, monotone discovery, conservation and
    /// exclusivity while running; violations land in the result.
    bool check_invariants = false;
    /// Optional JSON-lines sink for every observation.
    std::ostream* observation_log = nullptr;
    CentralityCache* cache = nullptr;
};

struct EpisodeResult {
    std::string method;
    MapMode mode = MapMode::KnownMap;
    std::uint64_t seed = 0;
    int rooms = 0;
    int horizon = 0;
    int tasks_completed = 0;
    int timesteps = 0;
    int path_length = 0;    // cells stepped
    double path_length_m = 0.0;
    int interactions = 0;   // obstacles relocated
    int steps = 0;
    int picks = 0;
    int places = 0;
    std::vector<int> encountered;            // sorted obstacle ids
    std::vector<Cell> final_obstacle_cells;  // obstacles off drop zones, sorted
    double poc_final = 1.0;
    std::string termination;  // completed | gave_up | max_steps | stalled | decision_limit
    std::string detail;
    int decisions = 0;
    int fallbacks = 0;
    std::vector<std::string> violations;
    std::vector<std::string> transcript;  // JSON lines

    EpisodeMetrics metrics() const;
};

/// Tasks are revealed one at a time. Per task: sense (UnknownMap), rebuild
/// the scene graph, ask the policy, execute the decision; repeat until the
/// task object rests on its receptacle. GiveUp, the step budget or a stall
/// ends the episode. A policy whose required mode differs from `options.mode`
/// runs in its required mode.
EpisodeResult run_episode(const Episode& episode, Policy& policy, const RunOptions& options = {});

/// Result summary without the transcript, as one JSON document.
std::string result_to_json(const EpisodeResult& result);
/// Inverse of result_to_json; the transcript stays empty. Throws FormatError.
EpisodeResult result_from_json(const std::string& text);

std::string transcript_text(const EpisodeResult& result);

struct ReplayReport {
    bool match = false;
    int divergent_timestep = -1;  // first timestep that disagrees
    int actions = 0;
    std::string message;
};

/// Re-executes the recorded actions against the episode and compares every
/// outcome and the final summary. Throws FormatError for unreadable lines.
ReplayReport replay(const Episode& episode, const std::vector<std::string>& transcript);

}  // namespace clutternav

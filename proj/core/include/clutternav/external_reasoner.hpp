#pragma once

#include <span>
#include <string>

#include "clutternav/llm_client.hpp"
#include "clutternav/planner.hpp"

namespace clutternav {

struct ExternalOutcome {
    Decision decision;
    bool fallback = false;  // heuristic decision used instead of the reply
    int attempts = 0;       // client calls made
    std::string reply;      // last raw reply, empty on transport failure
    std::string note;       // why the fallback happened
};

/// Fixed instructions sent ahead of every scene.
const std::string& system_preamble();

/// Scene text plus the last h decisions.
LlmRequest build_request(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history,
                         const ReasonerConfig& config);

/// Asks the client for one decision. A transport error is retried once; an
/// unparsable or infeasible reply, or a second transport error, falls back to
/// the heuristic reasoner with `fallback` set.
ExternalOutcome external_decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history,
                                LlmClient& client, const HeuristicReasoner& heuristic);

}  // namespace clutternav

#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "clutternav/external_reasoner.hpp"
#include "clutternav/planner.hpp"

namespace clutternav {

enum class MapMode { KnownMap, UnknownMap };
std::string_view to_string(MapMode mode);
std::optional<MapMode> parse_map_mode(std::string_view name);

struct PolicyDecision {
    Decision decision;
    bool fallback = false;
    std::string note;
};

/// High-level decision maker driven by the episode loop.
class Policy {
public:
    virtual ~Policy() = default;
    virtual std::string_view name() const = 0;
    /// Mode the method must run in, if it is fixed by its definition.
    virtual std::optional<MapMode> required_mode() const { return std::nullopt; }
    virtual PolicyDecision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history) = 0;
};

/// Nearest drop zone for an obstacle by carry distance, skipping zones whose
/// cell lies on one of `avoid`. Falls back to the nearest zone overall.
std::optional<int> nearest_zone(const SceneGraph& scene, int obstacle, std::span<const Cell> avoid = {});

/// Obstacle-free route if one exists, otherwise give up.
Decision baseline_always_detour(const SceneGraph& scene, const TaskInfo& task);
/// Moves the first blocker on the direct route to its nearest drop zone that
/// is off the current routes; attempts the task once the route is clear.
Decision baseline_always_interact(const SceneGraph& scene, const TaskInfo& task);
/// Clears every reachable obstacle (nearest first) before any task, then
/// behaves like always-detour.
Decision baseline_clean_sp(const SceneGraph& scene, const TaskInfo& task);

class AlwaysDetourPolicy : public Policy {
public:
    std::string_view name() const override { return "always_detour"; }
    std::optional<MapMode> required_mode() const override { return MapMode::KnownMap; }
    PolicyDecision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision>) override;
};

class AlwaysInteractPolicy : public Policy {
public:
    std::string_view name() const override { return "always_interact"; }
    std::optional<MapMode> required_mode() const override { return MapMode::KnownMap; }
    PolicyDecision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision>) override;
};

class CleanSpPolicy : public Policy {
public:
    std::string_view name() const override { return "clean_sp"; }
    std::optional<MapMode> required_mode() const override { return MapMode::KnownMap; }
    PolicyDecision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision>) override;
};

class HeuristicPolicy : public Policy {
public:
    HeuristicPolicy(std::string name, ReasonerConfig config, std::optional<MapMode> mode = std::nullopt,
                    const RoomPriors* priors = nullptr);
    std::string_view name() const override { return name_; }
    std::optional<MapMode> required_mode() const override { return mode_; }
    PolicyDecision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history) override;

private:
    std::string name_;
    HeuristicReasoner reasoner_;
    std::optional<MapMode> mode_;
};

class ExternalPolicy : public Policy {
public:
    ExternalPolicy(std::shared_ptr<LlmClient> client, ReasonerConfig config, const RoomPriors* priors = nullptr);
    std::string_view name() const override { return "llm"; }
    PolicyDecision decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history) override;

private:
    std::shared_ptr<LlmClient> client_;
    HeuristicReasoner fallback_;
};

/// Known method names, in report order.
const std::vector<std::string>& method_names();

/// Builds a policy by method name. "llm" requires a client. Throws
/// ConfigError for unknown names.
std::unique_ptr<Policy> make_policy(std::string_view method, const ReasonerConfig& config,
                                    std::shared_ptr<LlmClient> client = nullptr, const RoomPriors* priors = nullptr);

}  // namespace clutternav

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "clutternav/cell.hpp"

namespace clutternav {

/// Navigate to the task object, pick it, carry it to the receptacle. Paths
/// end on the cell the robot stands on for each manipulation.
struct AttemptTask {
    int object = 0;
    int receptacle = 0;
    Path to_object;      // empty when the object is already carried
    Path to_receptacle;

    friend bool operator==(const AttemptTask&, const AttemptTask&) = default;
};

/// Same as AttemptTask, chosen while blockers exist on the direct route.
struct Detour {
    int object = 0;
    int receptacle = 0;
    Path to_object;
    Path to_receptacle;

    friend bool operator==(const Detour&, const Detour&) = default;
};

struct MoveObstacle {
    int obstacle = 0;
    int zone = 0;

    friend bool operator==(const MoveObstacle&, const MoveObstacle&) = default;
};

struct ExploreRoom {
    int room = 0;
    Path path;  // towards a known free cell bordering unknown space

    friend bool operator==(const ExploreRoom&, const ExploreRoom&) = default;
};

struct GiveUp {
    std::string reason;

    friend bool operator==(const GiveUp&, const GiveUp&) = default;
};

using Decision = std::variant<AttemptTask, MoveObstacle, Detour, ExploreRoom, GiveUp>;

/// "AttemptTask", "MoveObstacle", ...
std::string_view decision_kind(const Decision& decision);

/// One-line rendering in the response grammar: "ATTEMPT", "DETOUR",
/// "MOVE o3 z1", "EXPLORE r2", "GIVEUP <reason>".
std::string to_text(const Decision& decision);

enum class Verb { Attempt, Detour, Move, Explore, GiveUp };

/// A parsed reply line. Ids are only meaningful for the verbs that take them.
struct Command {
    Verb verb = Verb::GiveUp;
    int obstacle = -1;
    int zone = -1;
    int room = -1;
    std::string reason;

    friend bool operator==(const Command&, const Command&) = default;
};

/// Parses the one-line response grammar (an optional leading "ACTION" word
/// is accepted). The first non-empty line is used. Returns nullopt on any
/// deviation from the grammar.
std::optional<Command> parse_command(std::string_view text);

std::string decision_to_json(const Decision& decision);

}  // namespace clutternav

#include "clutternav/decision.hpp"

#include <charconv>
#include <sstream>

#include "json_io.hpp"

namespace clutternav {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::optional<int> parse_id(std::string_view token, char prefix) {
    if (token.size() < 2 || (token[0] != prefix && token[0] != prefix - 'a' + 'A')) return std::nullopt;
    int value = 0;
    const auto* first = token.data() + 1;
    const auto* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || value < 0) return std::nullopt;
    return value;
}

}  // namespace

std::string_view decision_kind(const Decision& decision) {
    return std::visit(Overloaded{
                          [](const AttemptTask&) { return std::string_view("AttemptTask"); },
                          [](const MoveObstacle&) { return std::string_view("MoveObstacle"); },
                          [](const Detour&) { return std::string_view("Detour"); },
                          [](const ExploreRoom&) { return std::string_view("ExploreRoom"); },
                          [](const GiveUp&) { return std::string_view("GiveUp"); },
                      },
                      decision);
}

std::string to_text(const Decision& decision) {
    return std::visit(Overloaded{
                          [](const AttemptTask&) { return std::string("ATTEMPT"); },
                          [](const MoveObstacle& d) {
                              return "MOVE o" + std::to_string(d.obstacle) + " z" + std::to_string(d.zone);
                          },
                          [](const Detour&) { return std::string("DETOUR"); },
                          [](const ExploreRoom& d) { return "EXPLORE r" + std::to_string(d.room); },
                          [](const GiveUp& d) { return d.reason.empty() ? std::string("GIVEUP") : "GIVEUP " + d.reason; },
                      },
                      decision);
}

std::optional<Command> parse_command(std::string_view text) {
    std::istringstream lines{std::string(text)};
    std::string line;
    while (std::getline(lines, line)) {
        if (line.find_first_not_of(" \t\r") != std::string::npos) break;
    }
    std::istringstream in(line);
    std::vector<std::string> tokens;
    for (std::string t; in >> t;) tokens.push_back(t);
    if (!tokens.empty() && tokens[0] == "ACTION") tokens.erase(tokens.begin());
    if (tokens.empty()) return std::nullopt;
    const std::string& verb = tokens[0];
    Command cmd;
    if (verb == "ATTEMPT" && tokens.size() == 1) {
        cmd.verb = Verb::Attempt;
    } else if (verb == "DETOUR" && tokens.size() == 1) {
        cmd.verb = Verb::Detour;
    } else if (verb == "MOVE" && tokens.size() == 3) {
        const auto o = parse_id(tokens[1], 'o');
        const auto z = parse_id(tokens[2], 'z');
        if (!o || !z) return std::nullopt;
        cmd.verb = Verb::Move;
        cmd.obstacle = *o;
        cmd.zone = *z;
    } else if (verb == "EXPLORE" && tokens.size() == 2) {
        const auto r = parse_id(tokens[1], 'r');
        if (!r) return std::nullopt;
        cmd.verb = Verb::Explore;
        cmd.room = *r;
    } else if (verb == "GIVEUP") {
        cmd.verb = Verb::GiveUp;
        for (std::size_t i = 1; i < tokens.size(); ++i) cmd.reason += (i > 1 ? " " : "") + tokens[i];
    } else {
        return std::nullopt;
    }
    return cmd;
}

std::string decision_to_json(const Decision& decision) {
    using detail::Json;
    Json j;
    j["kind"] = std::string(decision_kind(decision));
    std::visit(Overloaded{
                   [&](const AttemptTask& d) {
                       j["object"] = d.object;
                       j["receptacle"] = d.receptacle;
                       j["to_object"] = detail::cells_to_json(d.to_object);
                       j["to_receptacle"] = detail::cells_to_json(d.to_receptacle);
                   },
                   [&](const MoveObstacle& d) {
                       j["obstacle"] = d.obstacle;
                       j["zone"] = d.zone;
                   },
                   [&](const Detour& d) {
                       j["object"] = d.object;
                       j["receptacle"] = d.receptacle;
                       j["to_object"] = detail::cells_to_json(d.to_object);
                       j["to_receptacle"] = detail::cells_to_json(d.to_receptacle);
                   },
                   [&](const ExploreRoom& d) {
                       j["room"] = d.room;
                       j["path"] = detail::cells_to_json(d.path);
                   },
                   [&](const GiveUp& d) { j["reason"] = d.reason; },
               },
               decision);
    return j.dump();
}

}  // namespace clutternav

#include "clutternav/external_reasoner.hpp"

namespace clutternav {

const std::string& system_preamble() {
    static const std::string text =
        "You control a mobile robot that places objects onto receptacles in a cluttered multi-room home.\n"
        "Every blocking obstacle is a decision point: relocate it to a drop zone now, or take an obstacle-free "
        "detour.\n"
        "Relocation costs travel to the obstacle, a pick and a place, and travel to the drop zone. Obstacles with "
        "high centrality restore more connectivity when cleared.\n"
        "If a task object or receptacle is not listed, explore the room most likely to contain it.\n"
        "Reply with exactly one line, one of:\n"
        "ATTEMPT\n"
        "DETOUR\n"
        "MOVE o<obstacle id> z<drop zone id>\n"
        "EXPLORE r<room id>\n"
        "GIVEUP <reason>\n";
    return text;
}

LlmRequest build_request(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history,
                         const ReasonerConfig& config) {
    SerializeOptions opts;
    opts.history = config.history;
    opts.centrality_buckets = config.centrality_buckets;
    LlmRequest req;
    req.system = system_preamble();
    req.user = serialize_to_text(scene, task, history, opts);
    req.max_tokens = 32;
    return req;
}

ExternalOutcome external_decide(const SceneGraph& scene, const TaskInfo& task, std::span<const Decision> history,
                                LlmClient& client, const HeuristicReasoner& heuristic) {
    ExternalOutcome out{GiveUp{}, false, 0, {}, {}};
    const LlmRequest req = build_request(scene, task, history, heuristic.config());
    std::optional<LlmResponse> reply;
    for (int attempt = 0; attempt < 2 && !reply; ++attempt) {
        ++out.attempts;
        try {
            reply = client.complete(req);
        } catch (const TransportError& e) {
            out.note = e.what();
        }
    }
    auto fall_back = [&](std::string why) {
        out.decision = heuristic.decide(scene, task, history);
        out.fallback = true;
        out.note = std::move(why);
        return out;
    };
    if (!reply) return fall_back("transport error: " + out.note);
    out.reply = reply->text;
    const auto command = parse_command(reply->text);
    if (!command) return fall_back("unparsable reply");
    auto decision = materialize(scene, task, *command);
    if (!decision) return fall_back("reply cannot be executed in this scene");
    out.decision = std::move(*decision);
    out.note.clear();
    return out;
}

}  // namespace clutternav

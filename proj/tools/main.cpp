#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "clutternav/errors.hpp"
#include "clutternav/generator.hpp"
#include "clutternav/suite.hpp"

namespace fs = std::filesystem;
using namespace clutternav;

namespace {

struct Overrides {
    std::string config;
    std::vector<int> rooms;
    std::optional<int> episodes;
    std::optional<double> density;
    std::optional<double> base_fraction;
    std::optional<int> horizon;
    std::optional<double> effort;
    std::optional<double> beta;
    std::optional<int> history;
    std::optional<std::string> mode;
    std::vector<std::string> methods;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<int> sensor_range;
    std::optional<int> max_steps;
};

void add_generation_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("--config", o.config, "Suite configuration file (JSON)");
    cmd->add_option("--rooms", o.rooms, "Room counts to generate, e.g. --rooms 7 8 9 10");
    cmd->add_option("--episodes", o.episodes, "Episodes per room count");
    cmd->add_option("-d,--density", o.density, "Clutter density multiplier d (clutter fraction = base * d)");
    cmd->add_option("--base-fraction", o.base_fraction, "Base clutter fraction of free cells");
    cmd->add_option("-g,--horizon", o.horizon, "Task horizon g: tasks per episode");
    cmd->add_option("--seed", o.seed, "Base seed");
}

void add_run_flags(CLI::App* cmd, Overrides& o) {
    cmd->add_option("-e,--effort", o.effort, "Interaction effort e: seconds charged per pick and per place");
    cmd->add_option("--beta", o.beta, "Centrality weight; defaults to the relaxed-graph diameter");
    cmd->add_option("--history", o.history, "History length h: past decisions shown to an external reasoner");
    cmd->add_option("--mode", o.mode, "KnownMap or UnknownMap");
    cmd->add_option("--methods", o.methods,
                    "Methods: always_detour always_interact clean_sp ours ours_known ours_unknown llm");
    cmd->add_option("--workers", o.workers, "Parallel episode workers");
    cmd->add_option("--sensor-range", o.sensor_range, "Sensor range in cells (UnknownMap)");
    cmd->add_option("--max-steps", o.max_steps, "Step budget per episode; 0 means 500 per task");
}

SuiteConfig resolve(const Overrides& o, std::optional<SuiteConfig> base = std::nullopt) {
    SuiteConfig c = base ? *base : (o.config.empty() ? SuiteConfig{} : load_suite_config(o.config));
    if (!o.rooms.empty()) c.rooms = o.rooms;
    if (o.episodes) c.episodes_per_room = *o.episodes;
    if (o.density) c.clutter.density = *o.density;
    if (o.base_fraction) c.clutter.base_fraction = *o.base_fraction;
    if (o.horizon) c.horizon = *o.horizon;
    if (o.effort) c.reasoner.effort = *o.effort;
    if (o.beta) c.reasoner.beta = *o.beta;
    if (o.history) c.reasoner.history = *o.history;
    if (o.mode) {
        const auto m = parse_map_mode(*o.mode);
        if (!m) throw ConfigError("unknown mode '" + *o.mode + "'");
        c.mode = *m;
    }
    if (!o.methods.empty()) c.methods = o.methods;
    if (o.seed) c.seed = *o.seed;
    if (o.workers) c.workers = *o.workers;
    if (o.sensor_range) c.sensor.range = *o.sensor_range;
    if (o.max_steps) c.max_steps = *o.max_steps;
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lifelong interactive navigation benchmark: generate cluttered multi-room episodes, run planners and "
                 "baselines, report SR / TS / PoC / IE / LES."};
    app.require_subcommand(1);

    Overrides gen_o;
    std::string gen_out = "dataset";
    auto* gen = app.add_subcommand("gen-dataset", "Generate episode files and a manifest");
    add_generation_flags(gen, gen_o);
    gen->add_option("--out", gen_out, "Dataset directory");

    Overrides run_o;
    std::string run_dataset = "dataset";
    std::string run_results = "results";
    bool force = false;
    bool no_resume = false;
    auto* run = app.add_subcommand("run", "Run methods on every dataset episode");
    add_generation_flags(run, run_o);
    add_run_flags(run, run_o);
    run->add_option("--dataset", run_dataset, "Dataset directory");
    run->add_option("--results", run_results, "Results directory");
    run->add_flag("--force", force, "Run even if the dataset was generated from a different configuration");
    run->add_flag("--no-resume", no_resume, "Rerun episodes that already have results");

    std::string rep_results = "results";
    std::string rep_out;
    auto* report = app.add_subcommand("report", "Aggregate results into CSV / JSON reports");
    report->add_option("--results", rep_results, "Results directory");
    report->add_option("--out", rep_out, "Report directory (defaults to the results directory)");

    std::string rp_episode, rp_transcript;
    auto* replay = app.add_subcommand("replay", "Verify a transcript against its episode");
    replay->add_option("--episode", rp_episode, "Episode file")->required();
    replay->add_option("--transcript", rp_transcript, "Transcript file (.jsonl)")->required();

    std::string in_episode;
    Overrides in_o;
    auto* inspect = app.add_subcommand("inspect", "Print an episode, from a file or generated from flags");
    inspect->add_option("--episode", in_episode, "Episode file");
    add_generation_flags(inspect, in_o);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*gen) {
            const SuiteConfig c = resolve(gen_o);
            const Manifest m = gen_dataset(c, gen_out);
            fmt::print("wrote {} episodes to {} (config hash {})\n", m.episodes.size(), gen_out, m.config_hash);
            return 0;
        }
        if (*run) {
            std::optional<SuiteConfig> base;
            if (run_o.config.empty() && fs::exists(fs::path(run_dataset) / "manifest.json"))
                base = load_manifest(run_dataset).config;
            const SuiteConfig c = resolve(run_o, base);
            SuiteRunOptions opts;
            opts.force = force;
            opts.resume = !no_resume;
            opts.progress = [](const std::string& line) { fmt::print(stderr, "{}\n", line); };
            const RunSummary s = run_suite(c, run_dataset, run_results, opts);
            fmt::print("completed {}  skipped {}  failed {}\n", s.completed, s.skipped, s.failed);
            for (const auto& e : s.errors) fmt::print(stderr, "error: {}\n", e);
            return s.failed == 0 ? 0 : 1;
        }
        if (*report) {
            const ReportOutput out = make_report(rep_results, rep_out.empty() ? rep_results : rep_out);
            fmt::print("{}", out.table);
            return 0;
        }
        if (*replay) {
            const ReplayReport r = replay_files(rp_episode, rp_transcript);
            if (r.match) {
                fmt::print("match: {} actions verified\n", r.actions);
                return 0;
            }
            fmt::print("mismatch at timestep {}: {}\n", r.divergent_timestep, r.message);
            return 2;
        }
        if (*inspect) {
            if (!in_episode.empty()) {
                fmt::print("{}", inspect_episode(load_episode(in_episode)));
                return 0;
            }
            const SuiteConfig c = resolve(in_o);
            GenerationConfig g;
            g.n_rooms = c.rooms.front();
            g.clutter = c.clutter;
            g.horizon = c.horizon;
            g.seed = plan_dataset(c).front().seed;
            g.clutter.seed = g.seed;
            fmt::print("{}", inspect_episode(generate_episode(g)));
            return 0;
        }
    } catch (const std::exception& e) {
        fmt::print(stderr, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}

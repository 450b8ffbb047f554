#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "clutternav/episode.hpp"
#include "clutternav/executor.hpp"
#include "clutternav/llm_client.hpp"
#include "clutternav/metrics.hpp"
#include "clutternav/planner.hpp"

namespace clutternav {

struct SuiteConfig {
    std::vector<int> rooms = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    int episodes_per_room = 10;
    ClutterConfig clutter;   // density is d
    int horizon = 20;        // g
    ReasonerConfig reasoner; // effort e, beta, history h
    SensorConfig sensor;
    MapMode mode = MapMode::KnownMap;
    std::vector<std::string> methods = {"always_detour", "always_interact", "clean_sp", "ours"};
    std::uint64_t seed = 0;
    int workers = 1;
    int max_steps = 0;  // 0: per-task default
    std::string output_dir = "out";

    /// Throws ConfigError.
    void validate() const;
};

std::string suite_config_to_json(const SuiteConfig& config);
/// Missing fields keep their defaults. Throws FormatError / ConfigError.
SuiteConfig suite_config_from_json(const std::string& text);
SuiteConfig load_suite_config(const std::filesystem::path& path);

/// SHA-256 over the fields that determine the generated episodes.
std::string config_hash(const SuiteConfig& config);

struct DatasetEntry {
    std::string file;  // relative to the dataset directory
    int rooms = 0;
    int index = 0;
    std::uint64_t seed = 0;
};

/// Deterministic, pairwise distinct episode seeds in (rooms, index) order.
std::vector<DatasetEntry> plan_dataset(const SuiteConfig& config);

struct Manifest {
    std::string config_hash;
    std::string created;  // UTC timestamp; the only nondeterministic field
    SuiteConfig config;
    std::vector<DatasetEntry> episodes;
};

std::string manifest_to_json(const Manifest& manifest);
Manifest manifest_from_json(const std::string& text);
Manifest load_manifest(const std::filesystem::path& dataset_dir);

/// Writes every episode plus manifest.json. Throws ConfigError / Error on an
/// unwritable directory.
Manifest gen_dataset(const SuiteConfig& config, const std::filesystem::path& dataset_dir);

/// Copy of the episode with every movable object's effort set to `effort`.
Episode with_effort(Episode episode, double effort);

struct SuiteRunOptions {
    bool force = false;    // ignore a config-hash mismatch
    bool resume = true;    // skip episodes that already have a result
    std::function<std::shared_ptr<LlmClient>()> llm_factory;  // default: HTTP client from the environment
    std::function<void(const std::string&)> progress;
};

struct RunSummary {
    int completed = 0;
    int skipped = 0;
    int failed = 0;
    std::vector<std::string> errors;
};

/// Runs every method on every dataset episode with a worker pool. Writes
/// <results>/<method>/<episode>.json and .jsonl; failures go to .error.
RunSummary run_suite(const SuiteConfig& config, const std::filesystem::path& dataset_dir,
                     const std::filesystem::path& results_dir, const SuiteRunOptions& options = {});

/// Every result file below the directory, in path order.
std::vector<EpisodeResult> load_results(const std::filesystem::path& results_dir);

struct ReportOutput {
    GroupReport report;
    std::string csv;
    std::string json;
    std::string plot;
    std::string table;
};

/// Aggregates results and writes report.csv, report.json and plot.csv into
/// `out_dir`. Throws Error when the directory holds no results.
ReportOutput make_report(const std::filesystem::path& results_dir, const std::filesystem::path& out_dir);

/// Verifies a transcript file against its episode file.
ReplayReport replay_files(const std::filesystem::path& episode_file, const std::filesystem::path& transcript_file);

/// Map, objects and tasks as text.
std::string inspect_episode(const Episode& episode);

}  // namespace clutternav

#include "clutternav/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>
#include <openssl/evp.h>

#include "clutternav/errors.hpp"
#include "clutternav/generator.hpp"
#include "clutternav/policies.hpp"
#include "clutternav/report.hpp"
#include "io_util.hpp"
#include "json_io.hpp"

namespace clutternav {

namespace fs = std::filesystem;
using detail::Json;

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
        throw Error("sha256 digest failed");
    std::string out;
    for (unsigned int i = 0; i < len; ++i) out += fmt::format("{:02x}", digest[i]);
    return out;
}

std::string utc_now() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json config_json(const SuiteConfig& c) {
    Json j{{"rooms", c.rooms},
           {"episodes_per_room", c.episodes_per_room},
           {"base_fraction", c.clutter.base_fraction},
           {"density", c.clutter.density},
           {"horizon", c.horizon},
           {"effort", c.reasoner.effort},
           {"history", c.reasoner.history},
           {"centrality_buckets", c.reasoner.centrality_buckets},
           {"sensor_range", c.sensor.range},
           {"mode", std::string(to_string(c.mode))},
           {"methods", c.methods},
           {"seed", c.seed},
           {"workers", c.workers},
           {"max_steps", c.max_steps},
           {"output_dir", c.output_dir}};
    j["beta"] = c.reasoner.beta ? Json(*c.reasoner.beta) : Json(nullptr);
    return j;
}

SuiteConfig config_from(const Json& j) {
    if (!j.is_object()) throw FormatError("suite config must be a JSON object");
    SuiteConfig c;
    static const std::set<std::string> known = {"rooms",        "episodes_per_room", "base_fraction", "density",
                                                "horizon",      "effort",            "beta",          "history",
                                                "centrality_buckets", "sensor_range", "mode",         "methods",
                                                "seed",         "workers",           "max_steps",     "output_dir"};
    for (const auto& [key, _] : j.items()) {
        if (!known.count(key)) throw ConfigError("unknown suite config field '" + key + "'");
    }
    try {
        if (j.contains("rooms")) c.rooms = j["rooms"].get<std::vector<int>>();
        if (j.contains("episodes_per_room")) c.episodes_per_room = j["episodes_per_room"].get<int>();
        if (j.contains("base_fraction")) c.clutter.base_fraction = j["base_fraction"].get<double>();
        if (j.contains("density")) c.clutter.density = j["density"].get<double>();
        if (j.contains("horizon")) c.horizon = j["horizon"].get<int>();
        if (j.contains("effort")) c.reasoner.effort = j["effort"].get<double>();
        if (j.contains("beta") && !j["beta"].is_null()) c.reasoner.beta = j["beta"].get<double>();
        if (j.contains("history")) c.reasoner.history = j["history"].get<int>();
        if (j.contains("centrality_buckets")) c.reasoner.centrality_buckets = j["centrality_buckets"].get<bool>();
        if (j.contains("sensor_range")) c.sensor.range = j["sensor_range"].get<int>();
        if (j.contains("mode")) {
            const auto m = parse_map_mode(j["mode"].get<std::string>());
            if (!m) throw ConfigError("unknown mode '" + j["mode"].get<std::string>() + "'");
            c.mode = *m;
        }
        if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
        if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
        if (j.contains("workers")) c.workers = j["workers"].get<int>();
        if (j.contains("max_steps")) c.max_steps = j["max_steps"].get<int>();
        if (j.contains("output_dir")) c.output_dir = j["output_dir"].get<std::string>();
    } catch (const Json::exception& e) {
        throw FormatError(std::string("malformed suite config: ") + e.what());
    }
    c.validate();
    return c;
}

std::string episode_stem(const DatasetEntry& e) { return fs::path(e.file).stem().string(); }

}  // namespace

void SuiteConfig::validate() const {
    if (rooms.empty()) throw ConfigError("room counts must not be empty");
    for (int n : rooms) {
        if (n < kMinRooms || n > kMaxRooms)
            throw ConfigError(fmt::format("room count {} outside [{}, {}]", n, kMinRooms, kMaxRooms));
    }
    if (std::set<int>(rooms.begin(), rooms.end()).size() != rooms.size()) throw ConfigError("duplicate room counts");
    if (episodes_per_room < 1) throw ConfigError("episodes_per_room must be positive");
    clutter.validate();
    if (horizon < 1) throw ConfigError("horizon must be positive");
    reasoner.validate();
    if (sensor.range < 1) throw ConfigError("sensor range must be positive");
    if (methods.empty()) throw ConfigError("method list must not be empty");
    for (const auto& m : methods) {
        const auto& names = method_names();
        if (std::find(names.begin(), names.end(), m) == names.end()) throw ConfigError("unknown method '" + m + "'");
    }
    if (std::set<std::string>(methods.begin(), methods.end()).size() != methods.size())
        throw ConfigError("duplicate methods");
    if (workers < 1) throw ConfigError("workers must be positive");
    if (max_steps < 0) throw ConfigError("max_steps must be non-negative");
}

std::string suite_config_to_json(const SuiteConfig& config) { return config_json(config).dump(2) + "\n"; }

SuiteConfig suite_config_from_json(const std::string& text) { return config_from(detail::parse_json(text)); }

SuiteConfig load_suite_config(const fs::path& path) { return suite_config_from_json(detail::read_file(path.string())); }

std::string config_hash(const SuiteConfig& c) {
    const Json j{{"rooms", c.rooms},
                 {"episodes_per_room", c.episodes_per_room},
                 {"base_fraction", c.clutter.base_fraction},
                 {"density", c.clutter.density},
                 {"horizon", c.horizon},
                 {"seed", c.seed},
                 {"episode_version", kEpisodeVersion}};
    return sha256_hex(j.dump());
}

std::vector<DatasetEntry> plan_dataset(const SuiteConfig& config) {
    config.validate();
    std::vector<DatasetEntry> out;
    std::set<std::uint64_t> used;
    for (int rooms : config.rooms) {
        for (int k = 0; k < config.episodes_per_room; ++k) {
            std::uint64_t s = splitmix64(splitmix64(config.seed) ^ (static_cast<std::uint64_t>(rooms) << 32) ^
                                         static_cast<std::uint64_t>(k));
            while (!used.insert(s).second) s = splitmix64(s);
            out.push_back({fmt::format("episodes/r{:02}_e{:03}.json", rooms, k), rooms, k, s});
        }
    }
    return out;
}

std::string manifest_to_json(const Manifest& m) {
    Json j{{"config_hash", m.config_hash}, {"created", m.created}, {"config", config_json(m.config)}};
    j["episodes"] = Json::array();
    for (const auto& e : m.episodes)
        j["episodes"].push_back({{"file", e.file}, {"rooms", e.rooms}, {"index", e.index}, {"seed", e.seed}});
    return j.dump(2) + "\n";
}

Manifest manifest_from_json(const std::string& text) {
    const Json j = detail::parse_json(text);
    Manifest m;
    m.config_hash = detail::require<std::string>(j, "config_hash");
    m.created = detail::require<std::string>(j, "created");
    m.config = config_from(detail::require_field(j, "config"));
    for (const auto& e : detail::require_field(j, "episodes")) {
        m.episodes.push_back({detail::require<std::string>(e, "file"), detail::require<int>(e, "rooms"),
                              detail::require<int>(e, "index"), detail::require<std::uint64_t>(e, "seed")});
    }
    return m;
}

Manifest load_manifest(const fs::path& dataset_dir) {
    return manifest_from_json(detail::read_file((dataset_dir / "manifest.json").string()));
}

Manifest gen_dataset(const SuiteConfig& config, const fs::path& dataset_dir) {
    config.validate();
    Manifest m;
    m.config = config;
    m.config_hash = config_hash(config);
    m.episodes = plan_dataset(config);
    for (const auto& e : m.episodes) {
        GenerationConfig g;
        g.n_rooms = e.rooms;
        g.clutter = config.clutter;
        g.clutter.seed = e.seed;
        g.horizon = config.horizon;
        g.effort = config.reasoner.effort;
        g.seed = e.seed;
        save_episode((dataset_dir / e.file).string(), generate_episode(g));
    }
    m.created = utc_now();
    detail::write_file_atomic((dataset_dir / "manifest.json").string(), manifest_to_json(m));
    return m;
}

Episode with_effort(Episode episode, double effort) {
    for (auto& o : episode.objects) {
        if (o.kind != ObjectKind::Receptacle) o.effort = effort;
    }
    return episode;
}

RunSummary run_suite(const SuiteConfig& config, const fs::path& dataset_dir, const fs::path& results_dir,
                     const SuiteRunOptions& options) {
    config.validate();
    const Manifest manifest = load_manifest(dataset_dir);
    if (manifest.config_hash != config_hash(config) && !options.force)
        throw ConfigError("dataset was generated with a different configuration (hash " + manifest.config_hash +
                          "); pass --force to run anyway");

    struct Job {
        std::string method;
        const DatasetEntry* entry;
    };
    std::vector<Job> jobs;
    for (const auto& method : config.methods) {
        for (const auto& e : manifest.episodes) jobs.push_back({method, &e});
    }

    RunSummary summary;
    std::mutex mu;
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) {
            const Job& job = jobs[i];
            const fs::path dir = results_dir / job.method;
            const std::string stem = episode_stem(*job.entry);
            const fs::path result_file = dir / (stem + ".json");
            if (options.resume && fs::exists(result_file)) {
                std::lock_guard lock(mu);
                ++summary.skipped;
                continue;
            }
            try {
                const Episode ep =
                    with_effort(load_episode((dataset_dir / job.entry->file).string()), config.reasoner.effort);
                std::shared_ptr<LlmClient> client;
                if (job.method == "llm") {
                    client = options.llm_factory ? options.llm_factory()
                                                 : std::make_shared<HttpLlmClient>(HttpLlmConfig::from_env());
                }
                auto policy = make_policy(job.method, config.reasoner, client);
                RunOptions ro;
                ro.mode = config.mode;
                ro.sensor = config.sensor;
                ro.limits.max_steps = config.max_steps;
                const EpisodeResult r = run_episode(ep, *policy, ro);
                detail::write_file_atomic((dir / (stem + ".jsonl")).string(), transcript_text(r));
                detail::write_file_atomic(result_file.string(), result_to_json(r) + "\n");
                std::lock_guard lock(mu);
                ++summary.completed;
                if (options.progress) options.progress(job.method + " " + stem + " " + r.termination);
            } catch (const std::exception& ex) {
                std::string msg = job.method + " " + stem + ": " + ex.what();
                try {
                    detail::write_file_atomic((dir / (stem + ".error")).string(), msg + "\n");
                } catch (const std::exception&) {
                }
                std::lock_guard lock(mu);
                ++summary.failed;
                summary.errors.push_back(std::move(msg));
            }
        }
    };
    const int n = std::max(1, std::min<int>(config.workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(summary.errors.begin(), summary.errors.end());
    return summary;
}

std::vector<EpisodeResult> load_results(const fs::path& results_dir) {
    std::vector<fs::path> files;
    if (fs::is_directory(results_dir)) {
        for (const auto& entry : fs::recursive_directory_iterator(results_dir)) {
            if (entry.is_regular_file() && entry.path().extension() == ".json" &&
                entry.path().parent_path() != results_dir)
                files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<EpisodeResult> out;
    for (const auto& f : files) out.push_back(result_from_json(detail::read_file(f.string())));
    return out;
}

ReportOutput make_report(const fs::path& results_dir, const fs::path& out_dir) {
    const auto results = load_results(results_dir);
    if (results.empty()) throw Error("no results found in " + results_dir.string());
    std::vector<EpisodeRecord> records;
    for (const auto& r : results) records.push_back(to_record(r));
    ReportOutput out;
    out.report = aggregate(records);
    out.csv = report_csv(out.report);
    out.json = report_json(out.report);
    out.plot = plot_csv(records);
    out.table = console_table(out.report);
    detail::write_file_atomic((out_dir / "report.csv").string(), out.csv);
    detail::write_file_atomic((out_dir / "report.json").string(), out.json);
    detail::write_file_atomic((out_dir / "plot.csv").string(), out.plot);
    return out;
}

ReplayReport replay_files(const fs::path& episode_file, const fs::path& transcript_file) {
    if (!fs::exists(episode_file)) throw Error("episode file not found: " + episode_file.string());
    if (!fs::exists(transcript_file)) throw Error("transcript file not found: " + transcript_file.string());
    const std::string text = detail::read_file(transcript_file.string());
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        const std::size_t end = text.find('\n', start);
        lines.push_back(text.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    const Episode ep = load_episode(episode_file.string());
    return replay(ep, lines);
}

std::string inspect_episode(const Episode& ep) {
    const Floorplan& plan = ep.floorplan;
    std::vector<std::string> rows(static_cast<std::size_t>(plan.height), std::string(static_cast<std::size_t>(plan.width), '#'));
    auto at = [&](Cell c) -> char& { return rows[static_cast<std::size_t>(c.y)][static_cast<std::size_t>(c.x)]; };
    for (const auto& r : plan.rooms) {
        for (Cell c : r.cells) at(c) = '.';
    }
    for (const auto& d : plan.doors) at(d.cell) = '+';
    for (const auto& z : ep.drop_zones) at(z.cell) = 'Z';
    for (const auto& o : ep.objects) {
        at(o.cell) = o.kind == ObjectKind::Receptacle ? 'R' : o.kind == ObjectKind::Obstacle ? 'X' : 't';
    }
    at(ep.start) = '@';
    std::string out = fmt::format("episode seed {}  rooms {}  size {}x{}  horizon {}\n", ep.seed, ep.room_count(),
                                  plan.width, plan.height, ep.horizon);
    for (const auto& row : rows) out += row + "\n";
    out += "legend: # wall  . floor  + door  Z drop zone  R receptacle  t task object  X obstacle  @ start\n";
    for (const auto& r : plan.rooms) out += fmt::format("room {} {} ({} cells)\n", r.id, to_string(r.type), r.cells.size());
    for (const auto& o : ep.objects) {
        out += fmt::format("object {} {} {} at ({}, {}) effort {}\n", o.id, to_string(o.kind), o.category, o.cell.x,
                           o.cell.y, o.effort);
    }
    for (std::size_t i = 0; i < ep.tasks.size(); ++i) {
        const auto& t = ep.tasks[i];
        out += fmt::format("task {}: {} (o{}) -> {} (o{})\n", i, ep.object(t.object).category, t.object,
                           ep.object(t.receptacle).category, t.receptacle);
    }
    const GridGraph g = episode_graph(ep);
    out += fmt::format("initial price of clutter {:.4f}\n", price_of_clutter(g, obstacle_free_graph(ep)));
    return out;
}

}  // namespace clutternav

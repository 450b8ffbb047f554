#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "clutternav/errors.hpp"
#include "clutternav/suite.hpp"

namespace clutternav {
namespace {

namespace fs = std::filesystem;

class TempDir {
public:
    TempDir() {
        std::random_device rd;
        path_ = fs::temp_directory_path() / ("clutternav_test_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SuiteConfig small_config() {
    SuiteConfig c;
    c.rooms = {1, 2, 3};
    c.episodes_per_room = 2;
    c.horizon = 3;
    c.methods = {"always_detour", "clean_sp", "ours"};
    c.seed = 5;
    return c;
}

std::size_t count_files(const fs::path& dir, const std::string& ext) {
    std::size_t n = 0;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ext) ++n;
    return n;
}

TEST(SuiteConfig, ValidationRejectsBadFields) {
    EXPECT_NO_THROW(small_config().validate());
    auto bad = [](auto&& mutate) {
        SuiteConfig c = small_config();
        mutate(c);
        return c;
    };
    EXPECT_THROW(bad([](SuiteConfig& c) { c.clutter.density = 0.0; }).validate(), ConfigError);
    EXPECT_THROW(bad([](SuiteConfig& c) { c.rooms = {0}; }).validate(), ConfigError);
    EXPECT_THROW(bad([](SuiteConfig& c) { c.rooms = {2, 2}; }).validate(), ConfigError);
    EXPECT_THROW(bad([](SuiteConfig& c) { c.methods = {"nope"}; }).validate(), ConfigError);
    EXPECT_THROW(bad([](SuiteConfig& c) { c.workers = 0; }).validate(), ConfigError);
    EXPECT_THROW(bad([](SuiteConfig& c) { c.horizon = 0; }).validate(), ConfigError);
    EXPECT_THROW(suite_config_from_json("{\"bogus\": 1}"), ConfigError);
    EXPECT_THROW(suite_config_from_json("[1"), FormatError);
}

TEST(SuiteConfig, JsonRoundTripAndHash) {
    const SuiteConfig c = small_config();
    const SuiteConfig back = suite_config_from_json(suite_config_to_json(c));
    EXPECT_EQ(suite_config_to_json(back), suite_config_to_json(c));
    EXPECT_EQ(config_hash(back), config_hash(c));
    EXPECT_EQ(config_hash(c).size(), 64u);
    SuiteConfig other = c;
    other.clutter.density = 2.0;
    EXPECT_NE(config_hash(other), config_hash(c));
    other = c;
    other.workers = 4;
    other.reasoner.effort = 20.0;
    EXPECT_EQ(config_hash(other), config_hash(c));
}

TEST(Dataset, SeedsAreDistinctAndStable) {
    SuiteConfig c;
    c.episodes_per_room = 10;
    const auto plan = plan_dataset(c);
    ASSERT_EQ(plan.size(), 100u);
    std::set<std::uint64_t> seeds;
    for (const auto& e : plan) seeds.insert(e.seed);
    EXPECT_EQ(seeds.size(), plan.size());
    const auto again = plan_dataset(c);
    for (std::size_t i = 0; i < plan.size(); ++i) EXPECT_EQ(plan[i].seed, again[i].seed);
    EXPECT_EQ(plan.front().file, "episodes/r01_e000.json");
}

TEST(Dataset, FullGridWritesEveryEpisode) {
    TempDir tmp;
    SuiteConfig c;
    c.episodes_per_room = 10;
    const Manifest m = gen_dataset(c, tmp.path());
    EXPECT_EQ(m.episodes.size(), 100u);
    EXPECT_EQ(count_files(tmp.path() / "episodes", ".json"), 100u);
    const Manifest loaded = load_manifest(tmp.path());
    EXPECT_EQ(loaded.config_hash, config_hash(c));
    EXPECT_EQ(loaded.episodes.size(), 100u);
    const Episode ep = load_episode((tmp.path() / m.episodes[57].file).string());
    EXPECT_EQ(ep.seed, m.episodes[57].seed);
    EXPECT_EQ(ep.room_count(), m.episodes[57].rooms);
}

TEST(Suite, RunsEveryMethodOnEveryEpisode) {
    TempDir tmp;
    const SuiteConfig c = small_config();
    gen_dataset(c, tmp.path() / "ds");
    const RunSummary s = run_suite(c, tmp.path() / "ds", tmp.path() / "res");
    EXPECT_EQ(s.completed, 18);
    EXPECT_EQ(s.failed, 0) << (s.errors.empty() ? "" : s.errors.front());
    EXPECT_EQ(load_results(tmp.path() / "res").size(), 18u);
    EXPECT_EQ(count_files(tmp.path() / "res", ".jsonl"), 18u);

    fs::remove(tmp.path() / "res" / "ours" / "r02_e001.json");
    fs::remove(tmp.path() / "res" / "clean_sp" / "r01_e000.json");
    const RunSummary resumed = run_suite(c, tmp.path() / "ds", tmp.path() / "res");
    EXPECT_EQ(resumed.completed, 2);
    EXPECT_EQ(resumed.skipped, 16);
}

TEST(Suite, WorkerCountDoesNotChangeResults) {
    TempDir tmp;
    SuiteConfig c = small_config();
    gen_dataset(c, tmp.path() / "ds");
    run_suite(c, tmp.path() / "ds", tmp.path() / "one");
    c.workers = 4;
    run_suite(c, tmp.path() / "ds", tmp.path() / "four");
    for (const auto& e : fs::recursive_directory_iterator(tmp.path() / "one")) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), tmp.path() / "one");
        EXPECT_EQ(slurp(e.path()), slurp(tmp.path() / "four" / rel)) << rel;
    }
    const ReportOutput a = make_report(tmp.path() / "one", tmp.path() / "rep_a");
    const ReportOutput b = make_report(tmp.path() / "four", tmp.path() / "rep_b");
    EXPECT_EQ(a.csv, b.csv);
    EXPECT_EQ(slurp(tmp.path() / "rep_a" / "report.csv"), slurp(tmp.path() / "rep_b" / "report.csv"));
    EXPECT_EQ(slurp(tmp.path() / "rep_a" / "report.json"), slurp(tmp.path() / "rep_b" / "report.json"));
}

TEST(Suite, RefusesForeignDataset) {
    TempDir tmp;
    SuiteConfig c = small_config();
    gen_dataset(c, tmp.path() / "ds");
    c.clutter.density = 2.0;
    EXPECT_THROW(run_suite(c, tmp.path() / "ds", tmp.path() / "res"), ConfigError);
    SuiteRunOptions force;
    force.force = true;
    EXPECT_EQ(run_suite(c, tmp.path() / "ds", tmp.path() / "res", force).completed, 18);
}

TEST(Suite, ReportNeedsResults) {
    TempDir tmp;
    fs::create_directories(tmp.path() / "empty");
    EXPECT_THROW(make_report(tmp.path() / "empty", tmp.path() / "out"), Error);
}

TEST(Suite, ReplayFilesMatchAndReportMissingInputs) {
    TempDir tmp;
    SuiteConfig c = small_config();
    c.methods = {"ours"};
    gen_dataset(c, tmp.path() / "ds");
    run_suite(c, tmp.path() / "ds", tmp.path() / "res");
    const fs::path ep = tmp.path() / "ds" / "episodes" / "r03_e001.json";
    const fs::path tr = tmp.path() / "res" / "ours" / "r03_e001.jsonl";
    EXPECT_TRUE(replay_files(ep, tr).match);
    EXPECT_THROW(replay_files(tmp.path() / "missing.json", tr), Error);
    EXPECT_THROW(replay_files(ep, tmp.path() / "missing.jsonl"), Error);
}

TEST(Suite, InspectListsEpisodeContents) {
    TempDir tmp;
    const SuiteConfig c = small_config();
    const Manifest m = gen_dataset(c, tmp.path());
    const Episode ep = load_episode((tmp.path() / m.episodes.back().file).string());
    const std::string text = inspect_episode(ep);
    EXPECT_NE(text.find("room 0"), std::string::npos);
    EXPECT_NE(text.find("task 0"), std::string::npos);
    EXPECT_NE(text.find("price of clutter"), std::string::npos);
}

}  // namespace
}  // namespace clutternav

#include "clutternav/report.hpp"

#include <algorithm>
#include <set>

#include <fmt/format.h>

#include "json_io.hpp"

namespace clutternav {

namespace {

std::string num(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

EpisodeRecord to_record(const EpisodeResult& result) {
    return {result.method, result.seed, result.rooms, result.horizon, result.metrics()};
}

std::string report_csv(const GroupReport& report) {
    std::string out = "bin,method,episodes,sr_pct,ts,poc,path_length_m,ie,les,les_main_text\n";
    for (const auto& bin : report.bins) {
        for (const auto& r : bin.rows) {
            out += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", bin.bin.label(), r.method, r.episodes, num(r.sr_pct),
                               num(r.ts), num(r.poc), num(r.path_length_m), num(r.ie), num(r.les),
                               num(r.les_main_text));
        }
    }
    return out;
}

std::string report_json(const GroupReport& report) {
    using detail::Json;
    Json j;
    j["les_variant"] = "Appendix";
    j["bins"] = Json::array();
    for (const auto& bin : report.bins) {
        Json b{{"bin", bin.bin.label()}, {"rooms_min", bin.bin.lo}, {"rooms_max", bin.bin.hi}};
        b["normalizers"] = {{"sr_max", bin.normalizers.sr_max},   {"ts_min", bin.normalizers.ts_min},
                            {"ts_max", bin.normalizers.ts_max},   {"poc_min", bin.normalizers.poc_min},
                            {"poc_max", bin.normalizers.poc_max}};
        b["warnings"] = bin.warnings;
        b["rows"] = Json::array();
        for (const auto& r : bin.rows) {
            b["rows"].push_back({{"method", r.method},
                                 {"episodes", r.episodes},
                                 {"sr_pct", r.sr_pct},
                                 {"ts", r.ts},
                                 {"poc", r.poc},
                                 {"path_length_m", r.path_length_m},
                                 {"ie", r.ie},
                                 {"les", r.les},
                                 {"les_main_text", r.les_main_text}});
        }
        j["bins"].push_back(std::move(b));
    }
    return j.dump(2) + "\n";
}

std::string plot_csv(std::span<const EpisodeRecord> records) {
    std::set<int> rooms;
    for (const auto& r : records) rooms.insert(r.rooms);
    std::vector<RoomBin> bins;
    for (int n : rooms) bins.push_back({n, n});
    const GroupReport rep = aggregate(records, bins);
    std::string out = "rooms,method,episodes,les,les_main_text\n";
    for (const auto& bin : rep.bins) {
        for (const auto& r : bin.rows)
            out += fmt::format("{},{},{},{},{}\n", bin.bin.lo, r.method, r.episodes, num(r.les), num(r.les_main_text));
    }
    return out;
}

std::string console_table(const GroupReport& report) {
    std::string out = fmt::format("{:<6} {:<16} {:>4} {:>8} {:>10} {:>7} {:>9} {:>8} {:>7}\n", "rooms", "method", "n",
                                  "SR%", "TS", "PoC", "PL(m)", "IE%", "LES");
    for (const auto& bin : report.bins) {
        for (const auto& r : bin.rows) {
            out += fmt::format("{:<6} {:<16} {:>4} {:>8.2f} {:>10.1f} {:>7.3f} {:>9.1f} {:>8.2f} {:>7.3f}\n",
                               bin.bin.label(), r.method, r.episodes, r.sr_pct, r.ts, r.poc, r.path_length_m, r.ie,
                               r.les);
        }
        for (const auto& w : bin.warnings) out += "warning: " + w + "\n";
    }
    return out;
}

}  // namespace clutternav

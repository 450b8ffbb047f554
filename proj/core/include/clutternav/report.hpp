#pragma once

#include <span>
#include <string>

#include "clutternav/executor.hpp"
#include "clutternav/metrics.hpp"

namespace clutternav {

EpisodeRecord to_record(const EpisodeResult& result);

/// One row per bin x method: bin,method,episodes,sr_pct,ts,poc,path_length_m,ie,les,les_main_text.
std::string report_csv(const GroupReport& report);
/// Rows plus the normalizers and warnings of each bin.
std::string report_json(const GroupReport& report);
/// LES per room count and method for plotting.
std::string plot_csv(std::span<const EpisodeRecord> records);
/// Fixed-width table for the console.
std::string console_table(const GroupReport& report);

}  // namespace clutternav

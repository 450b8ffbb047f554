#pragma once

#include <span>
#include <string>
#include <vector>

#include "clutternav/grid.hpp"

namespace clutternav {

inline constexpr double kPocCapFactor = 10.0;

/// Ratio of summed shortest-path lengths in `current` to those in `free`,
/// over ordered pairs of free-graph cells that are both still Free. Surviving
/// pairs that became disconnected count as kPocCapFactor times the largest
/// finite cluttered distance (or the largest free distance when no pair is
/// connected). Returns 1.0 for an empty pair universe. Throws ArgumentError
/// when `free` is disconnected or `current` frees a cell `free` does not.
double price_of_clutter(const TraversalMask& current, const TraversalMask& free);
double price_of_clutter(const GridGraph& current, const GridGraph& free);

/// 100 * interactions / max(encountered, 1).
double interaction_efficiency(int interactions, int encountered);

enum class LesVariant { MainText, Appendix };

struct LesInput {
    std::string method;
    double sr = 0.0;
    double ts = 0.0;
    double poc = 0.0;
};

struct LesNormalizers {
    double sr_max = 0.0;
    double ts_min = 0.0;
    double ts_max = 0.0;
    double poc_min = 0.0;
    double poc_max = 0.0;
};

LesNormalizers les_normalizers(std::span<const LesInput> group);

/// Per-method score in input order. MainText divides by the group minimum of
/// TS and PoC, Appendix by the maximum. SR-hat is 0 when no method succeeds.
/// Throws ArgumentError for an empty group or nonpositive TS / PoC.
std::vector<double> les(std::span<const LesInput> group, LesVariant variant);

struct EpisodeMetrics {
    double sr_fraction = 0.0;
    int timesteps = 0;
    double path_length_m = 0.0;
    double poc_final = 1.0;
    int interactions = 0;
    int encountered = 0;
};

/// One evaluated episode tagged for grouping.
struct EpisodeRecord {
    std::string method;
    std::uint64_t seed = 0;
    int rooms = 0;
    int horizon = 0;
    EpisodeMetrics metrics;
};

struct RoomBin {
    int lo = 1;
    int hi = 3;
    std::string label() const;
};

/// {1-3, 4-6, 7-10}.
const std::vector<RoomBin>& default_bins();

struct MethodRow {
    std::string method;
    int episodes = 0;
    double sr_pct = 0.0;
    double ts = 0.0;
    double poc = 0.0;
    double path_length_m = 0.0;
    double ie = 0.0;  // pooled: 100 * sum interactions / max(sum encountered, 1)
    double les = 0.0;           // Appendix variant
    double les_main_text = 0.0;
};

struct BinReport {
    RoomBin bin;
    std::vector<MethodRow> rows;
    LesNormalizers normalizers;
    std::vector<std::string> warnings;
};

struct GroupReport {
    std::vector<BinReport> bins;  // only bins with records
};

/// Bin-level means per method and LES from those means. Rows follow
/// method_names() order, unknown methods after, alphabetically. Independent
/// of input order.
GroupReport aggregate(std::span<const EpisodeRecord> records, std::span<const RoomBin> bins = default_bins());

}  // namespace clutternav

#include "clutternav/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "clutternav/errors.hpp"
#include "clutternav/policies.hpp"

namespace clutternav {

namespace {

void bfs(const TraversalMask& mask, Cell src, std::vector<int>& dist, std::vector<std::size_t>& queue) {
    std::fill(dist.begin(), dist.end(), -1);
    queue.clear();
    dist[mask.index(src)] = 0;
    queue.push_back(mask.index(src));
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Cell c = mask.cell(queue[head]);
        const int d = dist[queue[head]];
        for (Cell off : kNeighborOffsets) {
            const Cell n{c.x + off.x, c.y + off.y};
            if (!mask.open(n)) continue;
            const std::size_t i = mask.index(n);
            if (dist[i] < 0) {
                dist[i] = d + 1;
                queue.push_back(i);
            }
        }
    }
}

std::size_t method_rank(const std::string& m) {
    const auto& names = method_names();
    const auto it = std::find(names.begin(), names.end(), m);
    return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

double price_of_clutter(const TraversalMask& current, const TraversalMask& free) {
    if (current.width() != free.width() || current.height() != free.height())
        throw ArgumentError("price_of_clutter: graphs differ in size");
    const auto free_cells = free.open_cells();
    for (std::size_t i = 0; i < current.size(); ++i) {
        if (current.bits()[i] && !free.bits()[i])
            throw ArgumentError("price_of_clutter: current graph frees a cell absent from the free graph");
    }
    std::vector<int> dist(free.size());
    std::vector<std::size_t> queue;
    if (!free_cells.empty()) {
        bfs(free, free_cells.front(), dist, queue);
        if (queue.size() != free_cells.size()) throw ArgumentError("price_of_clutter: free graph is disconnected");
    }
    if (current == free) return 1.0;

    std::vector<Cell> survivors;
    for (Cell c : free_cells) {
        if (current.open(c)) survivors.push_back(c);
    }
    if (survivors.size() < 2) return 1.0;

    long double free_sum = 0.0L;
    long double obs_sum = 0.0L;
    long long unreachable = 0;
    int max_obs = 0;
    int max_free = 0;
    for (Cell s : survivors) {
        bfs(free, s, dist, queue);
        for (Cell t : survivors) {
            if (t == s) continue;
            const int d = dist[free.index(t)];
            free_sum += d;
            max_free = std::max(max_free, d);
        }
        bfs(current, s, dist, queue);
        for (Cell t : survivors) {
            if (t == s) continue;
            const int d = dist[current.index(t)];
            if (d < 0) {
                ++unreachable;
            } else {
                obs_sum += d;
                max_obs = std::max(max_obs, d);
            }
        }
    }
    const int cap_base = max_obs > 0 ? max_obs : max_free;
    obs_sum += static_cast<long double>(unreachable) * kPocCapFactor * cap_base;
    return static_cast<double>(obs_sum / free_sum);
}

double price_of_clutter(const GridGraph& current, const GridGraph& free) {
    return price_of_clutter(current.mask(), free.mask());
}

double interaction_efficiency(int interactions, int encountered) {
    return 100.0 * interactions / std::max(encountered, 1);
}

LesNormalizers les_normalizers(std::span<const LesInput> group) {
    if (group.empty()) throw ArgumentError("les: empty group");
    LesNormalizers n{group[0].sr, group[0].ts, group[0].ts, group[0].poc, group[0].poc};
    for (const auto& g : group) {
        if (!(g.ts > 0.0) || !(g.poc > 0.0)) throw ArgumentError("les: TS and PoC must be positive");
        n.sr_max = std::max(n.sr_max, g.sr);
        n.ts_min = std::min(n.ts_min, g.ts);
        n.ts_max = std::max(n.ts_max, g.ts);
        n.poc_min = std::min(n.poc_min, g.poc);
        n.poc_max = std::max(n.poc_max, g.poc);
    }
    return n;
}

std::vector<double> les(std::span<const LesInput> group, LesVariant variant) {
    const LesNormalizers n = les_normalizers(group);
    const double ts_norm = variant == LesVariant::MainText ? n.ts_min : n.ts_max;
    const double poc_norm = variant == LesVariant::MainText ? n.poc_min : n.poc_max;
    std::vector<double> out;
    out.reserve(group.size());
    for (const auto& g : group) {
        const double sr_hat = n.sr_max > 0.0 ? g.sr / n.sr_max : 0.0;
        out.push_back(sr_hat / ((g.ts / ts_norm) * (g.poc / poc_norm)));
    }
    return out;
}

std::string RoomBin::label() const { return lo == hi ? std::to_string(lo) : fmt::format("{}-{}", lo, hi); }

const std::vector<RoomBin>& default_bins() {
    static const std::vector<RoomBin> bins = {{1, 3}, {4, 6}, {7, 10}};
    return bins;
}

GroupReport aggregate(std::span<const EpisodeRecord> records, std::span<const RoomBin> bins) {
    std::vector<const EpisodeRecord*> sorted;
    for (const auto& r : records) sorted.push_back(&r);
    std::sort(sorted.begin(), sorted.end(), [](const EpisodeRecord* a, const EpisodeRecord* b) {
        return std::tie(a->method, a->seed, a->rooms) < std::tie(b->method, b->seed, b->rooms);
    });

    GroupReport report;
    for (const RoomBin& bin : bins) {
        std::map<std::string, std::vector<const EpisodeRecord*>> by_method;
        std::set<int> horizons;
        for (const auto* r : sorted) {
            if (r->rooms < bin.lo || r->rooms > bin.hi) continue;
            by_method[r->method].push_back(r);
            horizons.insert(r->horizon);
        }
        if (by_method.empty()) continue;
        BinReport br;
        br.bin = bin;
        if (horizons.size() > 1)
            br.warnings.push_back(fmt::format("bin {} mixes {} task horizons", bin.label(), horizons.size()));
        for (const auto& [method, rs] : by_method) {
            MethodRow row;
            row.method = method;
            row.episodes = static_cast<int>(rs.size());
            double sr = 0.0, ts = 0.0, poc = 0.0, pl = 0.0;
            long long inter = 0, enc = 0;
            for (const auto* r : rs) {
                sr += r->metrics.sr_fraction;
                ts += r->metrics.timesteps;
                poc += r->metrics.poc_final;
                pl += r->metrics.path_length_m;
                inter += r->metrics.interactions;
                enc += r->metrics.encountered;
            }
            const double n = static_cast<double>(rs.size());
            row.sr_pct = 100.0 * sr / n;
            row.ts = ts / n;
            row.poc = poc / n;
            row.path_length_m = pl / n;
            row.ie = 100.0 * static_cast<double>(inter) / static_cast<double>(std::max<long long>(enc, 1));
            br.rows.push_back(row);
        }
        std::sort(br.rows.begin(), br.rows.end(), [](const MethodRow& a, const MethodRow& b) {
            return std::make_pair(method_rank(a.method), a.method) < std::make_pair(method_rank(b.method), b.method);
        });
        std::vector<LesInput> inputs;
        bool positive = true;
        for (const auto& row : br.rows) {
            inputs.push_back({row.method, row.sr_pct / 100.0, row.ts, row.poc});
            positive = positive && row.ts > 0.0 && row.poc > 0.0;
        }
        if (positive) {
            br.normalizers = les_normalizers(inputs);
            const auto app = les(inputs, LesVariant::Appendix);
            const auto main = les(inputs, LesVariant::MainText);
            for (std::size_t i = 0; i < br.rows.size(); ++i) {
                br.rows[i].les = app[i];
                br.rows[i].les_main_text = main[i];
            }
        } else {
            br.warnings.push_back(fmt::format("bin {} has a method with zero TS or PoC; LES not computed", bin.label()));
        }
        report.bins.push_back(std::move(br));
    }
    return report;
}

}  // namespace clutternav

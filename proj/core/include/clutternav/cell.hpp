#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <vector>

namespace clutternav {

/// Grid cell addressed by column `x` and row `y`.
struct Cell {
    int x = 0;
    int y = 0;

    friend constexpr bool operator==(const Cell&, const Cell&) = default;

    /// Row-major order: (y, x). This is the tie-breaking order used by every
    /// path query, so it must not change.
    friend constexpr std::strong_ordering operator<=>(const Cell& a, const Cell& b) {
        if (auto c = a.y <=> b.y; c != 0) return c;
        return a.x <=> b.x;
    }
};

using Path = std::vector<Cell>;

inline constexpr int manhattan(Cell a, Cell b) {
    const int dx = a.x > b.x ? a.x - b.x : b.x - a.x;
    const int dy = a.y > b.y ? a.y - b.y : b.y - a.y;
    return dx + dy;
}

/// 4-neighbourhood offsets in (y, x) order: up, left, right, down.
inline constexpr Cell kNeighborOffsets[4] = {{0, -1}, {-1, 0}, {1, 0}, {0, 1}};

}  // namespace clutternav

template <>
struct std::hash<clutternav::Cell> {
    std::size_t operator()(const clutternav::Cell& c) const noexcept {
        return std::hash<long long>{}((static_cast<long long>(c.y) << 32) ^ static_cast<unsigned>(c.x));
    }
};

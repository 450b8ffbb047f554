#include <gtest/gtest.h>

#include <random>

#include "clutternav/centrality.hpp"
#include "oracles.hpp"

namespace clutternav {
namespace {

TEST(Centrality, PathGraphMiddleCarriesEverything) {
    const TraversalMask mask(3, 1, true);
    const CentralityMap bc = betweenness(mask);
    EXPECT_DOUBLE_EQ(bc.at({1, 0}), 1.0);
    EXPECT_DOUBLE_EQ(bc.at({0, 0}), 0.0);
    EXPECT_DOUBLE_EQ(bc.at({2, 0}), 0.0);
    EXPECT_EQ(bc.diameter(), 2);
}

TEST(Centrality, FourCycleMatchesEnumeration) {
    // A 2x2 block is a 4-cycle. Each node lies on one of the two shortest
    // paths between its two neighbours, in both directions: 2 * 0.5 / 6.
    const TraversalMask mask(2, 2, true);
    const CentralityMap bc = betweenness(mask);
    const auto want = oracle::betweenness(mask);
    for (Cell c : mask.open_cells()) {
        EXPECT_NEAR(bc.at(c), 1.0 / 6.0, 1e-12);
        EXPECT_NEAR(bc.at(c), want[mask.index(c)], 1e-12);
    }
}

TEST(Centrality, FewerThanThreeCellsIsZero) {
    const TraversalMask mask(2, 1, true);
    const CentralityMap bc = betweenness(mask);
    EXPECT_EQ(bc.at({0, 0}), 0.0);
    EXPECT_EQ(bc.at({1, 0}), 0.0);
}

TEST(Centrality, RandomGridsMatchEnumeration) {
    std::mt19937_64 rng(17);
    std::bernoulli_distribution block(0.25);
    for (int trial = 0; trial < 40; ++trial) {
        TraversalMask mask(5, 5);
        for (int y = 0; y < 5; ++y)
            for (int x = 0; x < 5; ++x)
                if (!block(rng)) mask.set_open({x, y});
        const CentralityMap bc = betweenness(mask);
        const auto want = oracle::betweenness(mask);
        for (std::size_t i = 0; i < mask.size(); ++i) EXPECT_NEAR(bc.values()[i], want[i], 1e-9);
    }
}

TEST(Centrality, ClosedCellsHoldZero) {
    TraversalMask mask(3, 3, true);
    mask.set_open({1, 1}, false);
    EXPECT_EQ(betweenness(mask).at({1, 1}), 0.0);
}

TEST(Centrality, CacheReusesMaps) {
    CentralityCache cache(2);
    const TraversalMask a(4, 1, true);
    const TraversalMask b(5, 1, true);
    const auto first = cache.get(a);
    const auto again = cache.get(a);
    EXPECT_EQ(first.get(), again.get());
    EXPECT_EQ(cache.misses(), 1u);
    cache.get(b);
    EXPECT_EQ(cache.misses(), 2u);
    EXPECT_EQ(cache.size(), 2u);
    EXPECT_EQ(first->snapshot_id(), a.fingerprint());
}

}  // namespace
}  // namespace clutternav

#include <gtest/gtest.h>

#include "sprcal/experiments.hpp"
#include "sprcal/spr/game.hpp"
#include "sprcal/spr/pointers.hpp"

using namespace sprcal;

TEST(Factories, RejectUnknownIds) {
    EXPECT_THROW(make_forecaster("bogus"), UsageError);
    EXPECT_THROW(make_adversary("bogus", 64), UsageError);
    EXPECT_THROW(make_pointer("bogus", 8), UsageError);
    EXPECT_THROW(make_labeler("bogus", 8), UsageError);
    EXPECT_EQ(make_forecaster("constant:0.25")->id(), "constant:1/4");
    EXPECT_EQ(make_adversary("bernoulli:37/100", 64)->id(), "bernoulli:37/100");
}

TEST(SprScaling, NeedsThreeGridPoints) {
    EXPECT_THROW(spr_scaling({128}, {"random"}, {1}), UsageError);
    EXPECT_THROW(spr_scaling({16, 32}, {"random"}, {1}), UsageError);
}

TEST(SprScaling, AlwaysPlusAgainstMonotonePointerKeepsEverySign) {
    // Greedy never points left of a plus, so nothing is removed.
    for (int n : {24, 80}) {
        auto ptr = make_pointer("greedy", n);
        auto lab = make_labeler("always-plus", n);
        auto tr = spr::play_game(n, n / 2, *ptr, *lab, 3);
        EXPECT_EQ(spr::preserved_counts(spr::replay(tr)).total(), n / 2);
    }
}

TEST(SprScaling, AlwaysPlusAgainstTreeLosesExactlyOvertakenSigns) {
    // Tree cells are not visited left to right: a plus survives iff no later
    // pointer lands left of it.
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        spr::TreeParams tp{4, 2};
        spr::TreePointer ptr(tp);
        auto lab = make_labeler("always-plus", 24);
        auto tr = spr::play_game(24, tp.rounds(), ptr, *lab, seed);
        int expected = 0;
        for (std::size_t a = 0; a < tr.rounds.size(); ++a) {
            bool overtaken = false;
            for (std::size_t b = a + 1; b < tr.rounds.size(); ++b) overtaken |= tr.rounds[b].pointed < tr.rounds[a].pointed;
            expected += !overtaken;
        }
        EXPECT_EQ(spr::preserved_counts(spr::replay(tr)).total(), expected) << seed;
    }
}

TEST(SprScaling, RowsCarrySeedAndParameters) {
    auto r = spr_scaling({16, 32, 64}, {"random", "tree"}, {1, 2}, "ab", 1);
    EXPECT_EQ(r.rows.size(), 12u);
    EXPECT_EQ(r.fits.size(), 2u);
    auto csv = r.csv();
    EXPECT_EQ(csv.substr(0, csv.find('\n')).find("seed") != std::string::npos, true);
    EXPECT_EQ(r.csv(), spr_scaling({16, 32, 64}, {"random", "tree"}, {1, 2}, "ab", 3).csv());
}

TEST(CalibScaling, ForecasterSlopeNearTwoThirds) {
    std::vector<int> grid;
    for (int e = 10; e <= 16; ++e) grid.push_back(1 << e);
    auto r = calib_scaling(grid, "spr", "bernoulli:37/100", {1, 2, 3, 4, 5});
    EXPECT_LE(r.fit.slope, 0.70) << r.fit.slope;
    EXPECT_EQ(r.points.size(), grid.size());
}

TEST(CalibScaling, ConstantHalfAgainstFairCoinIsSqrtT) {
    std::vector<int> grid;
    for (int e = 8; e <= 16; e += 2) grid.push_back(1 << e);
    std::vector<std::uint64_t> seeds;
    for (std::uint64_t s = 1; s <= 40; ++s) seeds.push_back(s);
    auto r = calib_scaling(grid, "constant:1/2", "bernoulli-hidden:1/2", seeds);
    EXPECT_NEAR(r.fit.slope, 0.5, 0.08) << r.fit.slope;
}

TEST(CalibScaling, RoundsTDownToPowerOfTwo) {
    EXPECT_EQ(floor_pow2(1000), 512);
    EXPECT_EQ(floor_pow2(1024), 1024);
    auto r = calib_scaling({1000, 2000, 5000}, "constant:1/2", "alternating", {1});
    EXPECT_EQ(r.points[0].T, 512);
    EXPECT_THROW(calib_scaling({1024}, "nope", "alternating", {1}), UsageError);
}

TEST(OptTable, SmallTable) {
    auto csv = opt_table_csv(3, 4);
    EXPECT_EQ(csv.substr(0, 8), "n,s,opt\n");
    EXPECT_NE(csv.find("1,1,1\n"), std::string::npos);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 5);
}

TEST(MeanSe, Values) {
    auto m = mean_se({1, 2, 3, 4});
    EXPECT_DOUBLE_EQ(m.mean, 2.5);
    EXPECT_NEAR(m.se, std::sqrt(5.0 / 3.0 / 4.0), 1e-12);
}

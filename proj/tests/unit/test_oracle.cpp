#include <gtest/gtest.h>

#include "sprcal/spr/labelers.hpp"
#include "sprcal/spr/oracle.hpp"
#include "sprcal/spr/pointers.hpp"

using namespace sprcal::spr;

TEST(Opt, SmallValues) {
    EXPECT_EQ(opt_value(1, 1), 1);
    for (int n = 1; n <= 3; ++n) EXPECT_EQ(opt_value(n, 1), 1);
    for (int s = 1; s <= 8; ++s) EXPECT_EQ(opt_value(1, s), 1);
    EXPECT_EQ(opt_value(2, 2), 1);
    EXPECT_EQ(opt_value(3, 2), 2);
    EXPECT_EQ(opt_value(4, 0), 0);
}

TEST(Opt, AgreesWithBruteForce) {
    for (int n = 1; n <= 3; ++n)
        for (int s = 0; s <= 4; ++s) EXPECT_EQ(opt_value(n, s), opt_value_bruteforce(n, s)) << n << "," << s;
}

TEST(Opt, BudgetIsEnforced) {
    EXPECT_NO_THROW(opt_value(5, 8));
    EXPECT_THROW(opt_value(6, 8), BudgetExceeded);
    EXPECT_NO_THROW(opt_value(6, 8, OracleBudget{100000}));
    EXPECT_THROW(opt_value(0, 1), std::invalid_argument);
}

TEST(Opt, MonotoneCappedAndSubadditive) {
    OracleBudget big{200000};
    for (int n = 1; n <= 6; ++n) {
        int prev = 0;
        for (int s = 0; s <= 8; ++s) {
            int v = opt_value(n, s, big);
            EXPECT_GE(v, prev);
            EXPECT_LE(v, std::min(n, s));
            if (2 * s <= 8) EXPECT_LE(opt_value(n, 2 * s, big), 2 * v);
            prev = v;
        }
    }
}

TEST(BestResponse, AlwaysPlusTwoCells) {
    // pointing 1 then 2 keeps both pluses: a plus left of j is never removable
    ConstantLabeler plus(Sign::Plus);
    EXPECT_EQ(best_response_value(plus, 2, 2), 2);
    EXPECT_EQ(best_response_value(plus, 1, 1), 1);
    RootLabeler root(1);
    EXPECT_EQ(best_response_value(root, 1, 1), 1);
}

TEST(BestResponse, NeverBelowOpt) {
    for (int n = 1; n <= 4; ++n) {
        for (int t = 0; t <= 5; ++t) {
            int opt = opt_value(n, t, OracleBudget{10000});
            RootLabeler root(n);
            ConstantLabeler plus(Sign::Plus), minus(Sign::Minus);
            EXPECT_GE(best_response_value(root, n, t), opt);
            EXPECT_GE(best_response_value(plus, n, t), opt);
            EXPECT_GE(best_response_value(minus, n, t), opt);
        }
    }
}

TEST(BestResponse, VisitsEveryPrefix) {
    ConstantLabeler plus(Sign::Plus);
    int visits = 0;
    best_response_value(plus, 2, 2, 1000, [&](const Board&, const LabelerStrategy&) { ++visits; });
    // root, two first moves, one follow-up each
    EXPECT_EQ(visits, 5);
    EXPECT_THROW(best_response_value(plus, 6, 6, 10), BudgetExceeded);
}

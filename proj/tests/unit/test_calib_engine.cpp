#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "sprcal/calib/adversaries.hpp"
#include "sprcal/calib/forecaster.hpp"
#include "sprcal/calib/game.hpp"
#include "sprcal/calib/ledger.hpp"

using namespace sprcal;
using namespace sprcal::calib;

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

// Direct sum over steps, no ledger: sum_p |sum_{t: p_t = p} (p - y_t)|.
double direct_calerr(const std::vector<std::pair<Rational, int>>& steps) {
    std::vector<Rational> ps;
    for (const auto& [p, y] : steps)
        if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
    double total = 0.0;
    for (const auto& p : ps) {
        double s = 0.0;
        for (const auto& [q, y] : steps)
            if (q == p) s += q.to_double() - y;
        total += std::abs(s);
    }
    return total;
}

std::vector<std::pair<Rational, int>> random_steps(Rng& rng, int len, int den) {
    std::vector<std::pair<Rational, int>> steps;
    for (int k = 0; k < len; ++k)
        steps.emplace_back(R(static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(den) + 1)), den),
                           static_cast<int>(rng.below(2)));
    return steps;
}

}  // namespace

TEST(RationalValue, NormalizesAndCompares) {
    EXPECT_EQ(R(2, 4), R(1, 2));
    EXPECT_EQ(R(-3, -6), R(1, 2));
    EXPECT_EQ(R(3, -6).num(), -1);
    EXPECT_EQ(R(3, -6).den(), 2);
    EXPECT_LT(R(1, 3), R(1, 2));
    EXPECT_EQ(R(1, 3) + R(1, 6), R(1, 2));
    EXPECT_EQ(R(1, 3) * R(3, 4), R(1, 4));
    EXPECT_EQ(R(1, 2).str(), "1/2");
    EXPECT_EQ(R(4, 2).str(), "2");
    EXPECT_EQ(Rational::parse("37/100"), R(37, 100));
    EXPECT_EQ(Rational::round_to_grid(0.3, 4), R(1, 4));
    EXPECT_EQ(Rational::round_to_grid(0.375, 4), R(1, 2));  // ties round up
    EXPECT_THROW(R(1, 0), std::domain_error);
}

TEST(LedgerRecord, SingleStep) {
    CalibLedger l;
    l.record(R(1, 2), 1);
    EXPECT_DOUBLE_EQ(l.error(R(1, 2)), -0.5);
    EXPECT_DOUBLE_EQ(l.calerr(), 0.5);
}

TEST(LedgerRecord, PerfectPredictionOfOne) {
    CalibLedger l;
    for (int k = 0; k < 10; ++k) l.record(R(1), 1);
    EXPECT_DOUBLE_EQ(l.calerr(), 0.0);
}

TEST(LedgerRecord, BalancedPair) {
    CalibLedger l;
    l.record(R(1, 2), 1);
    l.record(R(1, 2), 0);
    EXPECT_DOUBLE_EQ(l.error(R(1, 2)), 0.0);
    EXPECT_DOUBLE_EQ(l.calerr(), 0.0);
}

TEST(LedgerRecord, RejectsBadInput) {
    CalibLedger l;
    EXPECT_THROW(l.record(R(3, 2), 1), std::invalid_argument);
    EXPECT_THROW(l.record(R(-1, 2), 1), std::invalid_argument);
    EXPECT_THROW(l.record(R(1, 2), 2), std::invalid_argument);
}

TEST(LedgerCalerr, TallyExamples) {
    auto build = [](std::vector<std::tuple<Rational, int, int>> cells) {
        CalibLedger l;
        for (auto [p, n, m] : cells)
            for (int k = 0; k < n; ++k) l.record(p, k < m ? 1 : 0);
        return l;
    };
    EXPECT_NEAR(build({{R(3, 10), 10, 3}}).calerr(), 0.0, 1e-12);
    EXPECT_NEAR(build({{R(3, 10), 10, 5}}).calerr(), 2.0, 1e-12);
    auto two = build({{R(1, 5), 5, 0}, {R(4, 5), 5, 5}});
    EXPECT_NEAR(two.calerr(), 2.0, 1e-12);
    auto split = two.signed_split();
    EXPECT_NEAR(split.plus, 1.0, 1e-12);
    EXPECT_NEAR(split.minus, 1.0, 1e-12);
    EXPECT_EQ(two.error_exact(R(1, 5)), R(1));
    EXPECT_EQ(two.error_exact(R(4, 5)), R(-1));
}

TEST(LedgerCalerr, MatchesDirectSum) {
    Rng rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        auto steps = random_steps(rng, 1 + static_cast<int>(rng.below(60)), 8);
        CalibLedger l;
        for (auto [p, y] : steps) l.record(p, y);
        EXPECT_NEAR(l.calerr(), direct_calerr(steps), 1e-9);
        auto s = l.signed_split();
        EXPECT_NEAR(s.total(), l.calerr(), 1e-9);
        EXPECT_EQ(l.steps(), static_cast<std::int64_t>(steps.size()));
    }
}

TEST(LedgerProperty, PermutationInvariant) {
    Rng rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        auto steps = random_steps(rng, 40, 6);
        CalibLedger a;
        for (auto [p, y] : steps) a.record(p, y);
        for (std::size_t k = steps.size(); k > 1; --k) std::swap(steps[k - 1], steps[rng.below(k)]);
        CalibLedger b;
        for (auto [p, y] : steps) b.record(p, y);
        EXPECT_EQ(a, b);
        EXPECT_DOUBLE_EQ(a.calerr(), b.calerr());
    }
}

TEST(LedgerProperty, OneStepMovesErrorByAtMostOne) {
    Rng rng(13);
    CalibLedger l;
    double prev = 0.0;
    for (int t = 0; t < 2000; ++t) {
        l.record(R(static_cast<std::int64_t>(rng.below(11)), 10), static_cast<int>(rng.below(2)));
        EXPECT_LE(std::abs(l.calerr() - prev), 1.0 + 1e-12);
        prev = l.calerr();
    }
}

TEST(LedgerRange, SplitsAtBoundaries) {
    CalibLedger l;
    l.record(R(1, 4), 0);  // E = 1/4
    l.record(R(1, 2), 1);  // E = -1/2
    l.record(R(3, 4), 0);  // E = 3/4
    EXPECT_NEAR(l.abs_range(R(1, 4), R(3, 4)), 0.75, 1e-12);
    EXPECT_NEAR(l.abs_range(R(1, 4), R(3, 4), true), 1.5, 1e-12);
    auto s = l.range(R(0), R(1), true);
    EXPECT_NEAR(s.plus, 1.0, 1e-12);
    EXPECT_NEAR(s.minus, 0.5, 1e-12);
}

TEST(RunCalibration, ConstantHalfVersusAlternating) {
    ConstantForecaster f(R(1, 2));
    AlternatingAdversary a;
    auto tr = run_calibration(f, a, 4, 1);
    EXPECT_DOUBLE_EQ(tr.ledger.calerr(), 0.0);
    EXPECT_EQ(tr.steps.size(), 4u);
}

TEST(RunCalibration, CountsSumToT) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        EmpiricalMeanForecaster f;
        BernoulliAdversary a(R(37, 100), false);
        auto tr = run_calibration(f, a, 500, seed);
        std::int64_t total = 0;
        for (const auto& [p, tally] : tr.ledger.tallies()) total += tally.count;
        EXPECT_EQ(total, 500);
        EXPECT_EQ(rebuild_ledger(tr.steps), tr.ledger);
    }
}

TEST(RunCalibration, SeededRunIsReproducible) {
    auto once = [](std::uint64_t seed) {
        SignPreservationForecaster f;
        BernoulliAdversary a(R(37, 100), true);
        return to_jsonl(run_calibration(f, a, 1 << 10, seed));
    };
    EXPECT_EQ(once(5), once(5));
    EXPECT_NE(once(5), once(6));
}

TEST(RunCalibration, JsonRoundTrip) {
    SignPreservationForecaster f;
    BernoulliAdversary a(R(83, 100), true);
    auto tr = run_calibration(f, a, 256, 3);
    auto back = calib_from_jsonl(to_jsonl(tr));
    EXPECT_EQ(back, tr);
    EXPECT_EQ(to_jsonl(back), to_jsonl(tr));
}

TEST(RunCalibration, RejectsMeanlessPairing) {
    CheatingRoundedForecaster f;
    BernoulliAdversary hidden(R(1, 2), false);
    EXPECT_THROW(run_calibration(f, hidden, 10, 1), IncompatiblePairing);
    SignPreservationForecaster spr;
    EXPECT_THROW(run_calibration(spr, hidden, 16, 1), IncompatiblePairing);
}

TEST(RunCalibration, CsvRowHasHeaderArity) {
    ConstantForecaster f(R(1, 2));
    AlternatingAdversary a;
    auto tr = run_calibration(f, a, 4, 9);
    auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
    EXPECT_EQ(count(csv_row(tr, 1.5)), count(csv_header()));
}

TEST(Baselines, EmpiricalMeanUsesCubeRootGrid) {
    EXPECT_EQ(cube_root_grid(1000), 10);
    EXPECT_EQ(cube_root_grid(1001), 11);
    EmpiricalMeanForecaster f;
    f.begin(1000, Rng(0));
    EXPECT_EQ(f.predict(std::nullopt), R(1, 2));
    f.observe(1);
    f.observe(0);
    f.observe(0);
    EXPECT_EQ(f.predict(std::nullopt), R(3, 10));
}

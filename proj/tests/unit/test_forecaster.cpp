#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "sprcal/calib/forecaster.hpp"
#include "sprcal/calib/game.hpp"

using namespace sprcal;
using namespace sprcal::calib;
using spr::Sign;

namespace {

Rational R(std::int64_t a, std::int64_t b = 1) { return Rational(a, b); }

// Adversary whose mean is redrawn uniformly from a grid every `hold` steps.
class DriftingAdversary : public Adversary {
public:
    DriftingAdversary(int hold, int den) : hold_(hold), den_(den) {}
    AdversaryCaps caps() const override { return {false, true}; }
    std::string id() const override { return "drifting"; }
    void begin(int, Rng rng) override { rng_ = rng; }
    std::optional<Commit> commit(int t) override {
        if ((t - 1) % hold_ == 0)
            mean_ = Rational(static_cast<std::int64_t>(rng_.below(static_cast<std::uint64_t>(den_) + 1)), den_);
        return Commit{rng_.bernoulli(mean_.to_double()) ? 1 : 0, mean_};
    }
    void observe(const std::optional<Rational>&, int) override {}

private:
    int hold_, den_;
    Rng rng_;
    Rational mean_{0, 1};
};

}  // namespace

TEST(ForecasterGeometry, CellExamples) {
    auto a = cell_of(1, 2, R(3, 10));
    EXPECT_EQ(grid_index(1, R(3, 10)), 1);
    EXPECT_EQ(a.key.l, 1);
    EXPECT_EQ(a.c, 1);
    auto b = cell_of(1, 2, R(1, 10));
    EXPECT_EQ(grid_index(1, R(1, 10)), 0);
    EXPECT_EQ(b.key.l, 0);
    EXPECT_EQ(b.c, 1);
    EXPECT_EQ(grid_index(1, R(1)), 3);  // e = 1 falls in the last interval
}

TEST(ForecasterGeometry, OwningCellContainsMean) {
    Rng rng(21);
    for (int trial = 0; trial < 5000; ++trial) {
        const int i = 1 + static_cast<int>(rng.below(8));
        const std::int64_t den = 1000;
        Rational e(static_cast<std::int64_t>(rng.below(den + 1)), den);
        auto ref = cell_of(i, i + 1, e);
        ASSERT_GE(ref.c, 1);
        ASSERT_LE(ref.c, 1 << i);
        auto [lo, hi] = interval_of(ref.c, ref.key);
        EXPECT_LE(lo, e);
        EXPECT_LE(e, hi);
        EXPECT_EQ(hi - lo, Rational(1, std::int64_t{2} << i));
        // Plus predicts below the interval, Minus above (clamped).
        EXPECT_LE(prob_of(ref.c, Sign::Plus, ref.key), lo);
        EXPECT_GE(prob_of(ref.c, Sign::Minus, ref.key), hi);
    }
}

TEST(ForecasterGeometry, PredictionValues) {
    // Cell 2 of the even family at i=1 owns [1/2, 3/4].
    InstanceKey even{1, 2, 0};
    EXPECT_EQ(interval_of(2, even), std::make_pair(R(1, 2), R(3, 4)));
    EXPECT_EQ(prob_of(2, Sign::Plus, even), R(1, 4));
    EXPECT_EQ(prob_of(2, Sign::Minus, even), R(1));
    EXPECT_EQ(prob_of(1, Sign::Plus, even), R(0));      // clamped at 0
    EXPECT_EQ(prob_of(2, Sign::Minus, {1, 2, 1}), R(1));  // clamped at 1
}

TEST(ForecasterRound, FirstRoundPlacesAtCoarsestInstance) {
    SignPreservationForecaster f;
    f.begin(1 << 10, Rng(1));
    Rational p = f.predict(R(3, 10));
    const auto& d = f.diagnostics();
    EXPECT_EQ(d.placement_rounds, 1);
    EXPECT_EQ(d.removal_rounds, 0);
    const auto& g = f.instance({1, 2, 1});
    ASSERT_EQ(g.calls.size(), 1u);
    EXPECT_EQ(g.calls[0].c, 1);
    EXPECT_EQ(p, prob_of(1, g.calls[0].sign, g.key));
    EXPECT_EQ(g.calls[0].sign, Sign::Plus);  // trivial labeler places plus
    EXPECT_NEAR(f.bias(1, g.key), 0.3 - p.to_double(), 1e-12);
    for (const auto& other : f.instances())
        if (!(other.key == g.key)) EXPECT_TRUE(other.calls.empty());
}

TEST(ForecasterRound, RequiresMeanAndBegin) {
    SignPreservationForecaster f;
    EXPECT_THROW(f.predict(R(1, 2)), std::logic_error);
    f.begin(16, Rng(0));
    EXPECT_THROW(f.predict(std::nullopt), IncompatiblePairing);
    EXPECT_THROW(exact_log2(24), std::invalid_argument);
}

TEST(ForecasterRound, RemovalShrinksSignedError) {
    // Push a positive bias into a high cell, then reveal low means: the
    // removal branch must fire and the signed error drops by |e - p|.
    SignPreservationForecaster f;
    f.begin(1 << 12, Rng(2));
    for (int k = 0; k < 40; ++k) f.predict(R(19, 20));
    long removals_seen = 0;
    for (int k = 0; k < 40; ++k) {
        const double before = f.signed_prediction_error();
        const long r0 = f.diagnostics().removal_rounds;
        const Rational e = R(3, 10);  // same odd-parity family as 19/20
        const Rational p = f.predict(e);
        if (f.diagnostics().removal_rounds > r0) {
            ++removals_seen;
            EXPECT_NEAR(f.signed_prediction_error(), before - std::abs(e.to_double() - p.to_double()), 1e-9);
        }
    }
    EXPECT_GT(removals_seen, 0);
    EXPECT_EQ(f.diagnostics().sign_bias_violations, 0);
}

TEST(ReduceCalls, DropsErasedCalls) {
    std::vector<SimulateCall> calls{{1, 3, Sign::Minus}, {2, 5, Sign::Plus}, {3, 4, Sign::Plus}, {4, 6, Sign::Minus}};
    auto r = reduce_calls(calls);
    // minus at 3 erased by 5; plus at 5 erased by 4; plus at 4 survives 6.
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].c, 4);
    EXPECT_EQ(r[1].c, 6);
    EXPECT_TRUE(reduce_calls({}).empty());
}

TEST(ReduceCalls, KeptCallsNeverEraseEachOther) {
    Rng rng(22);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<SimulateCall> calls;
        const int len = static_cast<int>(rng.below(20));
        for (int t = 0; t < len; ++t)
            calls.push_back({t, 1 + static_cast<int>(rng.below(8)), rng.below(2) ? Sign::Plus : Sign::Minus});
        auto r = reduce_calls(calls);
        EXPECT_LE(r.size(), calls.size());
        if (!calls.empty()) EXPECT_EQ(r.back().t, calls.back().t);
        for (std::size_t k = 1; k < r.size(); ++k) {
            const auto& a = r[k - 1];
            const auto& b = r[k];
            EXPECT_FALSE((b.c > a.c && a.sign == Sign::Minus) || (b.c < a.c && a.sign == Sign::Plus));
        }
    }
}

TEST(ForecasterInvariants, HoldUnderDriftingMeans) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        for (auto lab : {EmbeddedLabeler::Trivial, EmbeddedLabeler::AB}) {
            ForecasterOptions opts;
            opts.labeler = lab;
            SignPreservationForecaster f(opts);
            DriftingAdversary a(1 + static_cast<int>(seed % 3) * 7, 50);
            auto tr = run_calibration(f, a, 1 << 12, seed);
            const auto& d = f.diagnostics();
            EXPECT_EQ(d.sign_bias_violations, 0) << seed;
            EXPECT_EQ(d.cell_bias_violations, 0) << seed;
            EXPECT_EQ(d.anomalies, 0) << seed;
            EXPECT_GT(d.removal_rounds, 0) << seed;
            EXPECT_TRUE(f.check_reduced_transcripts().ok()) << seed;
            EXPECT_LE(f.signed_prediction_error(), f.total_abs_bias() * (1 + 1e-9) + 1e-9);
            for (const auto& g : f.instances())
                for (int c = 1; c <= (1 << g.key.i); ++c) {
                    const double b = f.bias(c, g.key);
                    const double M = std::ldexp(1.0, g.key.j - g.key.i) + 1;
                    switch (g.board.at(c)) {
                        case spr::Cell::Plus: EXPECT_TRUE(b >= -1 - 1e-9 && b <= M + 1e-9); break;
                        case spr::Cell::Minus: EXPECT_TRUE(b >= -M - 1e-9 && b <= 1 + 1e-9); break;
                        default: EXPECT_LE(std::abs(b), 1 + 1e-9);
                    }
                }
            (void)tr;
        }
    }
}

TEST(ForecasterParams, DepthChoices) {
    EXPECT_EQ(default_h(12), 4);
    EXPECT_EQ(default_h(2), 1);
    EXPECT_EQ(gamma_h(12, 0.0), 7);  // floor(3/5 * 12)
    EXPECT_THROW(gamma_h(12, 0.75), std::invalid_argument);
    EXPECT_EQ(exact_log2(1 << 14), 14);
}

TEST(ForecasterGolden, BernoulliSeedSeven) {
    SignPreservationForecaster f;
    BernoulliAdversary a(R(37, 100), true);
    auto tr = run_calibration(f, a, 1 << 10, 7);
    std::ifstream in(std::string(SPRCAL_GOLDEN_DIR) + "/forecaster_T1024_ber37_seed7.jsonl");
    ASSERT_TRUE(in) << "golden transcript missing";
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(to_jsonl(tr), ss.str());
}

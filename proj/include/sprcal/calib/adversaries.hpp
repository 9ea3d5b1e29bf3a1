#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sprcal/calib/game.hpp"
#include "sprcal/spr/pointers.hpp"

namespace sprcal::calib {

// Interval geometry of the adaptive adversary for cell i of n:
// Int_i = [l_i, r_i) = [1/3 + (i-1)/(3n), 1/3 + i/(3n)), mean mu_i its midpoint.
Rational interval_left(int n, int i);
Rational interval_right(int n, int i);
Rational adaptive_mean(int n, int i);

// Error mass of a ledger split around Int_i.
struct Potentials {
    double phi_minus = 0.0;     // sum E- over p < l_i
    double phi_plus = 0.0;      // sum E+ over p >= r_i
    double psi_plus = 0.0;      // sum E+ over p < l_i
    double psi_minus = 0.0;     // sum E- over p >= r_i
    double inside_plus = 0.0;   // sum E+ over Int_i
    double inside_minus = 0.0;  // sum E- over Int_i
    double phi() const { return phi_minus + phi_plus; }
    double psi() const { return psi_plus + psi_minus; }
    double inside() const { return inside_plus + inside_minus; }
};
Potentials potentials(const CalibLedger& ledger, int n, int i);

struct AdaptiveParams {
    int T = 0;
    double alpha = 1.0;
    double beta = 1.0;
    int n = 1;
    int epochs = 1;  // floor(n^alpha)
    double theta = 0.0;
    int n_formula = 0;              // formula value before clamping to >= 1
    bool theta_over_n_ok = false;   // theta / n >= ln^2 T / 1440
    bool theta_times_n_ok = false;  // theta n < T / (n^alpha ln^3 T)

    // n from the formula unless n_override > 0.
    static AdaptiveParams make(int T, double alpha, double beta, int n_override = 0);
};

struct EpochRecord {
    int round = 0;
    int cell = 0;
    int t0 = 0;         // first step of the epoch
    int t_end = 0;      // last step (t0 - 1 for an empty epoch)
    int condition = 0;  // 1 or 2
    spr::Sign sign = spr::Sign::Plus;
};

struct EpochCheckReport {
    long checks = 0;
    long epoch_invariant_violations = 0;
    long error_preserve_violations = 0;
    std::vector<std::string> witnesses;
    bool clean() const { return epoch_invariant_violations == 0 && error_preserve_violations == 0; }
};

// Plays the labeling side of SPR(n, n^alpha) against `pointer`, one epoch per round,
// drawing outcomes from Ber(mu_i) until a sign-placement condition holds.
class AdaptiveAdversary : public Adversary {
public:
    AdaptiveAdversary(AdaptiveParams params, std::unique_ptr<spr::PointerStrategy> pointer);

    AdversaryCaps caps() const override { return {true, true}; }
    std::string id() const override;
    void begin(int T, Rng rng) override;
    std::optional<Commit> commit(int t) override;
    void observe(const std::optional<Rational>& p, int y) override;

    // Call after the game: closes any epoch whose condition already holds and
    // decides whether the adversary finished all epochs or was cut off at T.
    void settle();

    const AdaptiveParams& params() const { return params_; }
    const spr::Board& board() const { return board_; }
    const std::vector<EpochRecord>& epochs() const { return epochs_; }
    const CalibLedger& ledger() const { return ledger_; }
    bool finished() const { return finished_; }
    bool truncated() const { return settled_ && !finished_; }
    const EpochCheckReport& checks() const { return checks_; }

private:
    struct PlacedSign {
        int cell;
        spr::Sign sign;
        double snapshot;  // Phi+(cell-1) for a minus, Phi-(cell+1) for a plus, at placement
    };
    // Returns true when the adversary has no more outcomes to issue.
    bool advance(int t);
    void start_epoch(int cell, int t);
    void end_epoch(int t, int condition);
    void run_epoch_checks(int t, int cell);
    double side_potential(int cell, spr::Sign sign) const;

    AdaptiveParams params_;
    std::unique_ptr<spr::PointerStrategy> pointer_;
    spr::Board board_{1, 0};
    spr::Transcript spr_log_;
    Rng rng_;
    CalibLedger ledger_;
    std::vector<EpochRecord> epochs_;
    std::vector<PlacedSign> placed_;
    EpochCheckReport checks_;
    bool in_epoch_ = false;
    bool finished_ = false;
    bool settled_ = false;
    int cell_ = 0;
    int t0_ = 0;
    int last_t_ = 0;
    Potentials start_;
    Rational lo_, hi_, mean_;
};

// Batch i of length ceil(T/s) plays i.i.d. Ber(q) with q = 1/4 + k_i/(2n).
class ObliviousAdversary : public Adversary {
public:
    // Draws (k_1..k_s) from the tree strategy at begin().
    ObliviousAdversary(spr::TreeParams tree, bool reveal_mean = true);
    // Uses a fixed sample over n cells.
    ObliviousAdversary(int n, std::vector<int> sample, bool reveal_mean = true);

    AdversaryCaps caps() const override { return {false, reveal_}; }
    std::string id() const override;
    void begin(int T, Rng rng) override;
    std::optional<Commit> commit(int t) override;
    void observe(const std::optional<Rational>&, int) override {}

    int n() const { return n_; }
    int s() const { return static_cast<int>(sample_.size()); }
    const std::vector<int>& sample() const { return sample_; }
    Rational mean_at(int t) const;

private:
    std::optional<spr::TreeParams> tree_;
    int n_ = 0;
    std::vector<int> sample_;
    bool reveal_;
    int T_ = 0;
    int batch_ = 1;
    Rng rng_;
};

Rational oblivious_mean(int n, int k);

// eps * Delta * v * T / 10 with v = 3/16 and Delta = min(1/(4n), sqrt(s/T)).
double oblivious_floor(double eps, int n, int s, int T);

}  // namespace sprcal::calib

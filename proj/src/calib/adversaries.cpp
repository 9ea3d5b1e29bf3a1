#include "sprcal/calib/adversaries.hpp"

#include <algorithm>
#include <cmath>

namespace sprcal::calib {

using spr::Sign;

Rational interval_left(int n, int i) { return Rational(n + i - 1, 3 * static_cast<std::int64_t>(n)); }
Rational interval_right(int n, int i) { return Rational(n + i, 3 * static_cast<std::int64_t>(n)); }
Rational adaptive_mean(int n, int i) { return Rational(2 * n + 2 * i - 1, 6 * static_cast<std::int64_t>(n)); }

namespace {

enum class Region { Left, Inside, Right };

Region region_of(const Rational& p, const Rational& lo, const Rational& hi) {
    if (p < lo) return Region::Left;
    if (p < hi) return Region::Inside;
    return Region::Right;
}

double pos(double e) { return e > 0 ? e : 0.0; }
double neg(double e) { return e < 0 ? -e : 0.0; }

void accumulate(Potentials& acc, Region r, double e_old, double e_new) {
    const double dp = pos(e_new) - pos(e_old);
    const double dm = neg(e_new) - neg(e_old);
    switch (r) {
        case Region::Left:
            acc.phi_minus += dm;
            acc.psi_plus += dp;
            break;
        case Region::Inside:
            acc.inside_minus += dm;
            acc.inside_plus += dp;
            break;
        case Region::Right:
            acc.phi_plus += dp;
            acc.psi_minus += dm;
            break;
    }
}

}  // namespace

Potentials potentials(const CalibLedger& ledger, int n, int i) {
    const Rational lo = interval_left(n, i), hi = interval_right(n, i);
    Potentials acc;
    for (const auto& [p, t] : ledger.tallies()) accumulate(acc, region_of(p, lo, hi), 0.0, error_of(p, t).to_double());
    return acc;
}

AdaptiveParams AdaptiveParams::make(int T, double alpha, double beta, int n_override) {
    if (T < 3) throw std::invalid_argument("adaptive adversary needs T >= 3");
    if (!(alpha > 0) || !(beta > 0)) throw std::invalid_argument("alpha and beta must be positive");
    AdaptiveParams p;
    p.T = T;
    p.alpha = alpha;
    p.beta = beta;
    const double lnT = std::log(static_cast<double>(T));
    p.n_formula = static_cast<int>(std::floor(std::pow(T / std::pow(lnT, 5.0), 1.0 / (alpha + 2.0))));
    p.n = n_override > 0 ? n_override : std::max(1, p.n_formula);
    const double na = std::pow(static_cast<double>(p.n), alpha);
    p.epochs = std::max(1, static_cast<int>(std::floor(na + 1e-9)));
    p.theta = std::sqrt(T / (na * lnT)) / 1440.0;
    p.theta_over_n_ok = p.theta / p.n >= lnT * lnT / 1440.0;
    p.theta_times_n_ok = p.theta * p.n < T / (na * lnT * lnT * lnT);
    return p;
}

AdaptiveAdversary::AdaptiveAdversary(AdaptiveParams params, std::unique_ptr<spr::PointerStrategy> pointer)
    : params_(params), pointer_(std::move(pointer)) {
    if (!pointer_) throw std::invalid_argument("adaptive adversary needs a pointer strategy");
}

std::string AdaptiveAdversary::id() const {
    return "adaptive[n=" + std::to_string(params_.n) + ",pointer=" + pointer_->id() + "]";
}

void AdaptiveAdversary::begin(int T, Rng rng) {
    if (T != params_.T) params_ = AdaptiveParams::make(T, params_.alpha, params_.beta);
    rng_ = rng;
    board_ = spr::Board(params_.n, params_.epochs);
    spr_log_ = {};
    spr_log_.n = params_.n;
    spr_log_.s = params_.epochs;
    spr_log_.pointer_id = pointer_->id();
    spr_log_.labeler_id = "adaptive-adversary";
    pointer_->begin_game(params_.n, params_.epochs);
    ledger_ = {};
    epochs_.clear();
    placed_.clear();
    checks_ = {};
    in_epoch_ = finished_ = settled_ = false;
    last_t_ = 0;
}

void AdaptiveAdversary::start_epoch(int cell, int t) {
    in_epoch_ = true;
    cell_ = cell;
    t0_ = t;
    lo_ = interval_left(params_.n, cell);
    hi_ = interval_right(params_.n, cell);
    mean_ = adaptive_mean(params_.n, cell);
    start_ = potentials(ledger_, params_.n, cell);
}

double AdaptiveAdversary::side_potential(int cell, Sign sign) const {
    // A minus at `cell` guards Phi+(cell-1); a plus guards Phi-(cell+1).
    if (sign == Sign::Minus) return potentials(ledger_, params_.n, cell - 1).phi_plus;
    return potentials(ledger_, params_.n, cell + 1).phi_minus;
}

void AdaptiveAdversary::end_epoch(int t, int condition) {
    const Potentials now = potentials(ledger_, params_.n, cell_);
    Sign sign;
    if (condition == 1) sign = now.inside_minus >= now.inside_plus ? Sign::Plus : Sign::Minus;
    else sign = now.phi_minus - start_.phi_minus >= now.phi_plus - start_.phi_plus ? Sign::Plus : Sign::Minus;

    std::vector<int> removal = spr::removable_cells(board_, cell_);
    board_.apply(cell_, removal, sign);
    spr_log_.rounds.push_back({cell_, removal, sign});
    std::erase_if(placed_, [&](const PlacedSign& s) {
        return std::find(removal.begin(), removal.end(), s.cell) != removal.end();
    });
    epochs_.push_back({static_cast<int>(epochs_.size()) + 1, cell_, t0_, t - 1, condition, sign});
    run_epoch_checks(t - 1, cell_);
    placed_.push_back({cell_, sign, side_potential(cell_, sign)});
    in_epoch_ = false;
}

void AdaptiveAdversary::run_epoch_checks(int t, int cell) {
    const double quarter = params_.theta / 4.0;
    int n_left = 0, n_right = 0;
    for (int k = 1; k <= params_.n; ++k) {
        if (k <= cell && board_.at(k) == spr::Cell::Plus) ++n_left;
        if (k >= cell && board_.at(k) == spr::Cell::Minus) ++n_right;
    }
    const double left_mass = potentials(ledger_, params_.n, cell + 1).phi_minus;
    const double right_mass = potentials(ledger_, params_.n, cell - 1).phi_plus;
    checks_.checks += 2;
    auto note = [&](const std::string& what) {
        if (checks_.witnesses.size() < 8) checks_.witnesses.push_back("t=" + std::to_string(t) + " " + what);
    };
    if (left_mass < n_left * quarter - 1e-12) {
        ++checks_.epoch_invariant_violations;
        note("left mass " + std::to_string(left_mass) + " < " + std::to_string(n_left) + " theta/4");
    }
    if (right_mass < n_right * quarter - 1e-12) {
        ++checks_.epoch_invariant_violations;
        note("right mass " + std::to_string(right_mass) + " < " + std::to_string(n_right) + " theta/4");
    }
    for (const auto& s : placed_) {
        ++checks_.checks;
        const double drop = side_potential(s.cell, s.sign) - s.snapshot;
        if (drop < -quarter - 1e-12) {
            ++checks_.error_preserve_violations;
            note("sign at cell " + std::to_string(s.cell) + " lost " + std::to_string(-drop) + " of its guarded error");
        }
    }
}

bool AdaptiveAdversary::advance(int t) {
    for (;;) {
        if (!in_epoch_) {
            if (static_cast<int>(epochs_.size()) >= params_.epochs || board_.full()) return true;
            std::optional<int> j = pointer_->choose(board_, spr_log_, rng_);
            if (!j) {
                spr_log_.terminated_early = true;
                return true;
            }
            if (*j < 1 || *j > params_.n || !board_.is_empty(*j))
                throw spr::ContractViolation(pointer_->id() + " pointed at an unavailable cell " + std::to_string(*j));
            start_epoch(*j, t);
        }
        const Potentials now = potentials(ledger_, params_.n, cell_);
        if (now.inside() >= params_.theta) end_epoch(t, 1);
        else if (now.phi() - start_.phi() >= params_.theta) end_epoch(t, 2);
        else return false;
    }
}

std::optional<Commit> AdaptiveAdversary::commit(int t) {
    if (finished_) return std::nullopt;
    if (advance(t)) {
        finished_ = true;
        return std::nullopt;
    }
    return Commit{rng_.bernoulli(mean_.to_double()) ? 1 : 0, mean_};
}

void AdaptiveAdversary::observe(const std::optional<Rational>& p, int y) {
    if (!p) throw std::logic_error("adaptive adversary must see predictions");
    ledger_.record(*p, y);
    last_t_ = static_cast<int>(ledger_.steps());
}

void AdaptiveAdversary::settle() {
    if (settled_) return;
    if (!finished_ && advance(last_t_ + 1)) finished_ = true;
    settled_ = true;
}

Rational oblivious_mean(int n, int k) {
    if (k < 1 || k > n) throw std::invalid_argument("oblivious cell outside [1,n]");
    return Rational(n + 2 * static_cast<std::int64_t>(k), 4 * static_cast<std::int64_t>(n));
}

double oblivious_floor(double eps, int n, int s, int T) {
    const double delta = std::min(1.0 / (4.0 * n), std::sqrt(static_cast<double>(s) / T));
    return eps * delta * (3.0 / 16.0) * T / 10.0;
}

ObliviousAdversary::ObliviousAdversary(spr::TreeParams tree, bool reveal_mean) : tree_(tree), reveal_(reveal_mean) {
    tree.validate();
    n_ = static_cast<int>(tree.cells());
}

ObliviousAdversary::ObliviousAdversary(int n, std::vector<int> sample, bool reveal_mean)
    : n_(n), sample_(std::move(sample)), reveal_(reveal_mean) {
    if (sample_.empty()) throw std::invalid_argument("oblivious adversary needs a nonempty sample");
    for (int k : sample_) oblivious_mean(n_, k);
}

std::string ObliviousAdversary::id() const {
    if (tree_) return "oblivious[tree:" + std::to_string(tree_->d) + "," + std::to_string(tree_->k) + "]";
    return "oblivious[fixed,n=" + std::to_string(n_) + "]";
}

void ObliviousAdversary::begin(int T, Rng rng) {
    rng_ = rng;
    T_ = T;
    if (tree_) sample_ = spr::tree_sample(*tree_, rng_);
    const int s = static_cast<int>(sample_.size());
    batch_ = std::max(1, (T + s - 1) / s);
}

Rational ObliviousAdversary::mean_at(int t) const {
    const std::size_t b = std::min(sample_.size() - 1, static_cast<std::size_t>((t - 1) / batch_));
    return oblivious_mean(n_, sample_[b]);
}

std::optional<Commit> ObliviousAdversary::commit(int t) {
    const Rational q = mean_at(t);
    Commit c{rng_.bernoulli(q.to_double()) ? 1 : 0, std::nullopt};
    if (reveal_) c.mean = q;
    return c;
}

}  // namespace sprcal::calib

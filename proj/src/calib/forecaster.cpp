#include "sprcal/calib/forecaster.hpp"

#include <cmath>
#include <sstream>

#include <json.hpp>

#include "sprcal/spr/labelers.hpp"

namespace sprcal::calib {

using spr::Sign;

namespace {

constexpr double kTol = 1e-9;
constexpr std::size_t kMaxWitnesses = 8;

std::int64_t pow2(int k) { return std::int64_t{1} << k; }

}  // namespace

int exact_log2(int T) {
    if (T < 2 || (T & (T - 1)) != 0) throw std::invalid_argument("T must be a power of two >= 2");
    int k = 0;
    while ((1 << k) < T) ++k;
    return k;
}

int default_h(int tau) { return std::max(1, tau / 3); }

int gamma_h(int tau, double gamma) {
    if (gamma < 0.0 || gamma >= 0.75) throw std::invalid_argument("gamma must lie in [0, 3/4)");
    return std::max(1, static_cast<int>(std::floor((3.0 - 4.0 * gamma) / (5.0 - 4.0 * gamma) * tau)));
}

std::int64_t grid_index(int i, const Rational& e) {
    if (e < Rational(0) || e > Rational(1)) throw std::invalid_argument("mean outside [0,1]: " + e.str());
    const std::int64_t cells = pow2(i + 1);
    const __int128 scaled = static_cast<__int128>(e.num()) * cells;
    std::int64_t m = static_cast<std::int64_t>(scaled / e.den());
    return std::min(m, cells - 1);
}

CellRef cell_of(int i, int j, const Rational& e) {
    const std::int64_t m = grid_index(i, e);
    const int l = static_cast<int>(m % 2);
    return {static_cast<int>((m - l) / 2 + 1), {i, j, l}};
}

std::pair<Rational, Rational> interval_of(int c, const InstanceKey& key) {
    const std::int64_t m = 2 * (c - 1) + key.l;
    const std::int64_t den = pow2(key.i + 1);
    return {Rational(m, den), Rational(m + 1, den)};
}

Rational prob_of(int c, Sign s, const InstanceKey& key) {
    const std::int64_t m = 2 * (c - 1) + key.l;
    const std::int64_t den = pow2(key.i + 1);
    if (s == Sign::Plus) return Rational(std::max<std::int64_t>(0, m - 1), den);
    return Rational(std::min<std::int64_t>(m + 2, den), den);
}

std::vector<SimulateCall> reduce_calls(const std::vector<SimulateCall>& calls) {
    std::vector<SimulateCall> kept;
    for (const auto& next : calls) {
        while (!kept.empty()) {
            const auto& prev = kept.back();
            bool erased = (next.c > prev.c && prev.sign == Sign::Minus) || (next.c < prev.c && prev.sign == Sign::Plus);
            if (!erased) break;
            kept.pop_back();
        }
        kept.push_back(next);
    }
    return kept;
}

SignPreservationForecaster::SignPreservationForecaster(ForecasterOptions opts) : opts_(opts) {}

std::string SignPreservationForecaster::id() const {
    std::string lab = opts_.labeler == EmbeddedLabeler::AB ? "ab" : "trivial";
    std::string hs = opts_.gamma >= 0 ? "gamma=" + std::to_string(opts_.gamma)
                   : opts_.h > 0     ? "h=" + std::to_string(opts_.h)
                                     : "h=tau/3";
    return "spr-forecaster[" + lab + "," + hs + "]";
}

std::size_t SignPreservationForecaster::index(const InstanceKey& key) const {
    return static_cast<std::size_t>(((key.i - 1) * h_ + (key.j - key.i - 1)) * 2 + key.l);
}

void SignPreservationForecaster::begin(int T, Rng) {
    T_ = T;
    tau_ = exact_log2(T);
    h_ = opts_.gamma >= 0 ? gamma_h(tau_, opts_.gamma) : opts_.h > 0 ? opts_.h : default_h(tau_);
    t_ = 0;
    instances_.clear();
    instances_.reserve(static_cast<std::size_t>(tau_ * h_ * 2));
    for (int i = 1; i <= tau_; ++i) {
        for (int j = i + 1; j <= i + h_; ++j) {
            for (int l = 0; l <= 1; ++l) {
                const int n = 1 << i;
                const int budget = j <= tau_ ? 1 << (tau_ - j) : 0;
                Instance g{{i, j, l}, spr::Board(n, budget), nullptr, std::vector<double>(static_cast<std::size_t>(n), 0.0),
                           {}, {}, {}, 0.0, budget};
                if (opts_.labeler == EmbeddedLabeler::AB) g.labeler = std::make_unique<spr::RootLabeler>(n);
                else g.labeler = std::make_unique<spr::ConstantLabeler>(Sign::Plus);
                instances_.push_back(std::move(g));
            }
        }
    }
    signed_error_.clear();
    lhs_ = rhs_ = 0.0;
    diag_ = {};
    diag_.tau = tau_;
    diag_.h = h_;
    diag_.worst_sign_bias_slack = 0.0;
    diag_.intervals_by_level.assign(static_cast<std::size_t>(tau_ + 1), {});
}

void SignPreservationForecaster::add_bias(Instance& g, int c, double delta) {
    double& b = g.bias[static_cast<std::size_t>(c - 1)];
    rhs_ += std::abs(b + delta) - std::abs(b);
    b += delta;
    if (b < -1.0) g.negative.insert(c);
    else g.negative.erase(c);
    if (b > 1.0) g.positive.insert(c);
    else g.positive.erase(c);
    g.max_abs_bias = std::max(g.max_abs_bias, std::abs(b));
}

void SignPreservationForecaster::check_cell(const Instance& g, int c) {
    const double b = g.bias[static_cast<std::size_t>(c - 1)];
    const double M = std::ldexp(1.0, g.key.j - g.key.i) + 1.0;
    double lo = -1.0, hi = 1.0;
    const spr::Cell cell = g.board.at(c);
    if (cell == spr::Cell::Plus) hi = M;
    if (cell == spr::Cell::Minus) lo = -M;
    if (b < lo - kTol || b > hi + kTol) {
        ++diag_.cell_bias_violations;
        if (diag_.witnesses.size() < kMaxWitnesses) {
            std::ostringstream os;
            os << "t=" << t_ << " cell bias " << b << " outside [" << lo << "," << hi << "] at c=" << c << " G("
               << g.key.i << "," << g.key.j << "," << g.key.l << ") holding " << spr::symbol(cell);
            diag_.witnesses.push_back(os.str());
        }
    }
}

void SignPreservationForecaster::simulate(Instance& g, int c) {
    spr::LabelDecision d = g.labeler->label(g.board, c);
    g.board.apply(c, d.removal, d.sign);
    g.calls.push_back({t_, c, d.sign});
    if (opts_.check_invariants)
        for (int r : d.removal) check_cell(g, r);
}

Rational SignPreservationForecaster::commit(const Rational& p, double e) {
    const double delta = e - p.to_double();
    double& s = signed_error_[p];
    lhs_ += std::abs(s + delta) - std::abs(s);
    s += delta;
    return p;
}

Rational SignPreservationForecaster::predict(const std::optional<Rational>& mean) {
    if (!mean) throw IncompatiblePairing("the sign-preservation forecaster needs the revealed mean");
    if (tau_ == 0) throw std::logic_error("begin() was not called");
    ++t_;
    const Rational& e = *mean;
    const double ev = e.to_double();
    std::optional<Rational> out;

    // Bias removal: some instance has a cell on the far side of e whose bias
    // a prediction at e can shrink. Prefer the nearest such cell.
    for (int i = 1; i <= tau_ && !out; ++i) {
        for (int j = i + 1; j <= i + h_ && !out; ++j) {
            CellRef ref = cell_of(i, j, e);
            Instance& g = at(ref.key);
            int cbar = 0;
            if (auto it = g.negative.lower_bound(ref.c); it != g.negative.begin()) cbar = *std::prev(it);
            else if (auto it2 = g.positive.upper_bound(ref.c); it2 != g.positive.end()) cbar = *it2;
            if (cbar == 0) continue;
            const Sign s = g.bias[static_cast<std::size_t>(cbar - 1)] < 0 ? Sign::Minus : Sign::Plus;
            Rational p = prob_of(cbar, s, g.key);
            add_bias(g, cbar, ev - p.to_double());
            if (opts_.check_invariants) check_cell(g, cbar);
            diag_.intervals_by_level[static_cast<std::size_t>(i)].insert(2 * (cbar - 1) + g.key.l);
            ++diag_.removal_rounds;
            out = commit(p, ev);
        }
    }

    // Bias placement: first instance whose cell at e still has room.
    for (int i = 1; i <= tau_ && !out; ++i) {
        for (int j = i + 1; j <= i + h_ && !out; ++j) {
            CellRef ref = cell_of(i, j, e);
            Instance& g = at(ref.key);
            const double b = g.bias[static_cast<std::size_t>(ref.c - 1)];
            if (!(std::abs(b) < std::ldexp(1.0, j - i))) continue;
            if (g.board.is_empty(ref.c)) {
                if (g.board.rounds_remaining() == 0) continue;  // frozen instance
                simulate(g, ref.c);
            }
            const Sign s = g.board.at(ref.c) == spr::Cell::Plus ? Sign::Plus : Sign::Minus;
            Rational p = prob_of(ref.c, s, g.key);
            add_bias(g, ref.c, ev - p.to_double());
            if (opts_.check_invariants) check_cell(g, ref.c);
            diag_.intervals_by_level[static_cast<std::size_t>(i)].insert(2 * (ref.c - 1) + g.key.l);
            ++diag_.placement_rounds;
            out = commit(p, ev);
        }
    }

    if (!out) {
        ++diag_.anomalies;
        out = commit(Rational::round_to_grid(e, pow2(tau_ + 1)), ev);
    }

    if (opts_.check_invariants) {
        const double slack = rhs_ - lhs_;
        diag_.worst_sign_bias_slack = t_ == 1 ? slack : std::min(diag_.worst_sign_bias_slack, slack);
        if (slack < -kTol * (1.0 + rhs_)) {
            ++diag_.sign_bias_violations;
            if (diag_.witnesses.size() < kMaxWitnesses)
                diag_.witnesses.push_back("t=" + std::to_string(t_) + " signed error " + std::to_string(lhs_) +
                                          " exceeds total bias " + std::to_string(rhs_));
        }
    }
    return *out;
}

ReducedTranscriptReport SignPreservationForecaster::check_reduced_transcripts() const {
    ReducedTranscriptReport rep;
    for (const auto& g : instances_) {
        const long cap = tau_ - g.key.j + 1 >= 0 ? 1L << (tau_ - g.key.j + 1) : 0;
        const long calls = static_cast<long>(g.calls.size());
        rep.total_calls += calls;
        if (calls > cap) {
            ++rep.call_cap_violations;
            if (rep.witnesses.size() < kMaxWitnesses)
                rep.witnesses.push_back("G(" + std::to_string(g.key.i) + "," + std::to_string(g.key.j) + "," +
                                        std::to_string(g.key.l) + ") made " + std::to_string(calls) + " calls, cap " +
                                        std::to_string(cap));
        }
        const auto reduced = reduce_calls(g.calls);
        rep.reduced_calls += static_cast<long>(reduced.size());
        const long gap = 1L << (g.key.j - 1);
        std::map<int, int> last_at_cell;
        for (std::size_t k = 0; k < reduced.size(); ++k) {
            const auto& call = reduced[k];
            if (k > 0 && call.t - reduced[k - 1].t < gap) ++rep.instance_gap_violations;
            auto it = last_at_cell.find(call.c);
            if (it != last_at_cell.end() && call.t - it->second < gap) {
                ++rep.cell_gap_violations;
                if (rep.witnesses.size() < kMaxWitnesses)
                    rep.witnesses.push_back("cell " + std::to_string(call.c) + " of G(" + std::to_string(g.key.i) + "," +
                                            std::to_string(g.key.j) + "," + std::to_string(g.key.l) + ") recalled after " +
                                            std::to_string(call.t - it->second) + " steps");
            }
            last_at_cell[call.c] = call.t;
        }
    }
    return rep;
}

std::string SignPreservationForecaster::diagnostics_json() const {
    using nlohmann::json;
    json inst = json::array();
    for (const auto& g : instances_) {
        if (g.calls.empty() && g.max_abs_bias == 0.0) continue;
        spr::PreservedCounts pc = spr::preserved_counts(g.board);
        inst.push_back({{"i", g.key.i},
                        {"j", g.key.j},
                        {"l", g.key.l},
                        {"budget", g.budget},
                        {"simulate_calls", g.calls.size()},
                        {"max_abs_bias", g.max_abs_bias},
                        {"preserved_plus", pc.plus},
                        {"preserved_minus", pc.minus}});
    }
    json levels = json::object();
    for (int i = 1; i <= tau_; ++i)
        levels[std::to_string(i)] = diag_.intervals_by_level[static_cast<std::size_t>(i)].size();
    auto red = check_reduced_transcripts();
    json out = {{"tau", tau_},
                {"h", h_},
                {"rounds", t_},
                {"removal_rounds", diag_.removal_rounds},
                {"placement_rounds", diag_.placement_rounds},
                {"anomalies", diag_.anomalies},
                {"sign_bias_violations", diag_.sign_bias_violations},
                {"cell_bias_violations", diag_.cell_bias_violations},
                {"worst_sign_bias_slack", diag_.worst_sign_bias_slack},
                {"call_cap_violations", red.call_cap_violations},
                {"cell_gap_violations", red.cell_gap_violations},
                {"instance_gap_violations", red.instance_gap_violations},
                {"distinct_intervals_by_level", levels},
                {"witnesses", diag_.witnesses},
                {"instances", inst}};
    return out.dump(2);
}

}  // namespace sprcal::calib

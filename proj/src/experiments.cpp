#include "sprcal/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "sprcal/spr/labelers.hpp"
#include "sprcal/spr/oracle.hpp"
#include "sprcal/spr/pointers.hpp"

namespace sprcal {

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t k = 0; k < count; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (std::size_t k; (k = next.fetch_add(1)) < count;) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

namespace {

spr::TreeParams parse_tree(const std::string& text) {
    // "d,k"
    auto comma = text.find(',');
    if (comma == std::string::npos) throw UsageError("tree parameters must look like d,k: " + text);
    spr::TreeParams p{std::stoi(text.substr(0, comma)), std::stoi(text.substr(comma + 1))};
    try {
        p.validate();
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return p;
}

bool starts_with(const std::string& s, const std::string& prefix) { return s.rfind(prefix, 0) == 0; }

calib::Rational parse_probability(const std::string& s) {
    calib::Rational r;
    try {
        if (s.find('.') != std::string::npos) {
            // decimal: exact as digits / 10^k
            auto dot = s.find('.');
            std::string digits = s.substr(0, dot) + s.substr(dot + 1);
            std::int64_t den = 1;
            for (std::size_t k = dot + 1; k < s.size(); ++k) den *= 10;
            r = calib::Rational(std::stoll(digits), den);
        } else {
            r = calib::Rational::parse(s);
        }
    } catch (const std::exception&) {
        throw UsageError("not a probability: " + s);
    }
    if (r < calib::Rational(0) || r > calib::Rational(1)) throw UsageError("probability outside [0,1]: " + s);
    return r;
}

}  // namespace

std::unique_ptr<spr::PointerStrategy> make_pointer(const std::string& id, int n) {
    if (id == "random" || id == "uniform-random") return std::make_unique<spr::UniformRandomPointer>();
    if (id == "greedy") return std::make_unique<spr::GreedyPointer>();
    if (id == "tree") return std::make_unique<spr::TreePointer>(spr::TreeParams::fit(n), true);
    if (starts_with(id, "tree:")) return std::make_unique<spr::TreePointer>(parse_tree(id.substr(5)), true);
    throw UsageError("unknown pointer: " + id);
}

std::unique_ptr<spr::LabelerStrategy> make_labeler(const std::string& id, int n) {
    if (id == "ab") return std::make_unique<spr::RootLabeler>(n);
    if (id == "always-plus" || id == "trivial") return std::make_unique<spr::ConstantLabeler>(spr::Sign::Plus);
    if (id == "always-minus") return std::make_unique<spr::ConstantLabeler>(spr::Sign::Minus);
    throw UsageError("unknown labeler: " + id);
}

std::unique_ptr<calib::Forecaster> make_forecaster(const std::string& id, int h, double gamma) {
    if (id == "spr" || id == "spr-ab") {
        calib::ForecasterOptions o;
        o.h = h;
        o.gamma = gamma;
        o.labeler = id == "spr-ab" ? calib::EmbeddedLabeler::AB : calib::EmbeddedLabeler::Trivial;
        return std::make_unique<calib::SignPreservationForecaster>(o);
    }
    if (starts_with(id, "constant:")) return std::make_unique<calib::ConstantForecaster>(parse_probability(id.substr(9)));
    if (id == "empirical-mean") return std::make_unique<calib::EmpiricalMeanForecaster>();
    if (id == "cheating-rounded") return std::make_unique<calib::CheatingRoundedForecaster>();
    throw UsageError("unknown forecaster: " + id);
}

std::unique_ptr<calib::Adversary> make_adversary(const std::string& id, int T, double alpha, double beta,
                                                 const std::string& pointer) {
    if (starts_with(id, "bernoulli:")) return std::make_unique<calib::BernoulliAdversary>(parse_probability(id.substr(10)), true);
    if (starts_with(id, "bernoulli-hidden:"))
        return std::make_unique<calib::BernoulliAdversary>(parse_probability(id.substr(17)), false);
    if (id == "alternating") return std::make_unique<calib::AlternatingAdversary>();
    if (starts_with(id, "oblivious:tree:")) return std::make_unique<calib::ObliviousAdversary>(parse_tree(id.substr(15)));
    if (id == "adaptive" || starts_with(id, "adaptive:")) {
        int n_override = id == "adaptive" ? 0 : std::stoi(id.substr(9));
        auto params = calib::AdaptiveParams::make(T, alpha, beta, n_override);
        return std::make_unique<calib::AdaptiveAdversary>(params, make_pointer(pointer, params.n));
    }
    throw UsageError("unknown adversary: " + id);
}

MeanSe mean_se(const std::vector<double>& xs) {
    MeanSe r;
    if (xs.empty()) return r;
    for (double x : xs) r.mean += x;
    r.mean /= static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0;
        for (double x : xs) ss += (x - r.mean) * (x - r.mean);
        r.se = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
    }
    return r;
}

int floor_pow2(int T) {
    if (T < 2) throw UsageError("T must be at least 2");
    int p = 1;
    while (p <= T / 2) p *= 2;
    return p;
}

std::string SprScalingResult::csv() const {
    std::ostringstream os;
    os << "n,rounds,pointer,labeler,seed,preserved\n";
    for (const auto& r : rows) os << r.n << ',' << r.rounds << ',' << r.pointer << ",ab," << r.seed << ',' << r.preserved << '\n';
    return os.str();
}

SprScalingResult spr_scaling(const std::vector<int>& n_grid, const std::vector<std::string>& pointers,
                             const std::vector<std::uint64_t>& seeds, const std::string& labeler, unsigned threads) {
    if (n_grid.size() < 3) throw UsageError("spr-scaling needs at least 3 grid points to fit an exponent");
    if (seeds.empty() || pointers.empty()) throw UsageError("spr-scaling needs seeds and pointers");
    SprScalingResult out;
    for (const auto& p : pointers)
        for (int n : n_grid)
            for (auto s : seeds) out.rows.push_back({n, p, s, 0, 0});
    parallel_for(out.rows.size(), [&](std::size_t k) {
        auto& row = out.rows[k];
        auto pointer = make_pointer(row.pointer, row.n);
        auto lab = make_labeler(labeler, row.n);
        auto tr = spr::play_game(row.n, row.n, *pointer, *lab, row.seed);
        row.rounds = static_cast<int>(tr.rounds.size());
        row.preserved = spr::preserved_counts(spr::replay(tr)).total();
    }, threads);
    for (const auto& p : pointers) {
        std::vector<std::pair<double, double>> pts;
        for (int n : n_grid) {
            std::vector<double> v;
            for (const auto& r : out.rows)
                if (r.pointer == p && r.n == n) v.push_back(r.preserved);
            pts.push_back({static_cast<double>(n), std::max(mean_se(v).mean, 1e-9)});
        }
        out.fits.push_back({p, analysis::fit_exponent(pts)});
    }
    return out;
}

std::string CalibScalingResult::csv() const {
    std::ostringstream os;
    os << calib::csv_header() << '\n';
    for (const auto& r : rows) os << calib::csv_row(r.transcript, r.runtime_ms) << '\n';
    return os.str();
}

CalibScalingResult calib_scaling(const std::vector<int>& T_grid, const std::string& forecaster,
                                 const std::string& adversary, const std::vector<std::uint64_t>& seeds,
                                 unsigned threads) {
    if (T_grid.empty() || seeds.empty()) throw UsageError("calib-scaling needs T values and seeds");
    // Fail fast on bad ids before fanning out.
    make_forecaster(forecaster);
    make_adversary(adversary, floor_pow2(T_grid.front()));
    CalibScalingResult out;
    std::vector<std::pair<int, std::uint64_t>> jobs;
    for (int T : T_grid)
        for (auto s : seeds) jobs.push_back({floor_pow2(T), s});
    out.rows.resize(jobs.size());
    parallel_for(jobs.size(), [&](std::size_t k) {
        auto [T, seed] = jobs[k];
        auto f = make_forecaster(forecaster);
        auto a = make_adversary(adversary, T);
        auto t0 = std::chrono::steady_clock::now();
        out.rows[k].transcript = calib::run_calibration(*f, *a, T, seed);
        out.rows[k].runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    }, threads);
    std::map<int, std::vector<double>> by_T;
    for (const auto& r : out.rows) by_T[r.transcript.T].push_back(r.transcript.ledger.calerr());
    std::vector<std::pair<double, double>> pts;
    for (const auto& [T, v] : by_T) {
        MeanSe m = mean_se(v);
        out.points.push_back({T, m.mean, m.se, static_cast<int>(v.size())});
        pts.push_back({static_cast<double>(T), std::max(m.mean, 1e-9)});
    }
    if (pts.size() >= 3) out.fit = analysis::fit_exponent(pts);
    return out;
}

std::string opt_table_csv(int n_max, int s_max, long max_states) {
    if (n_max < 1 || s_max < 0) throw UsageError("opt-table needs n_max >= 1 and s_max >= 0");
    std::ostringstream os;
    os << "n,s,opt\n";
    spr::OracleBudget budget{static_cast<std::uint64_t>(max_states)};
    for (int n = 1; n <= n_max; ++n)
        for (int s = 0; s <= s_max; ++s) os << n << ',' << s << ',' << spr::opt_value(n, s, budget) << '\n';
    return os.str();
}

}  // namespace sprcal

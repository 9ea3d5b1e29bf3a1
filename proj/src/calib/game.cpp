#include "sprcal/calib/game.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include <json.hpp>

namespace sprcal::calib {

CalibTranscript run_calibration(Forecaster& forecaster, Adversary& adversary, int T, std::uint64_t seed) {
    if (T < 0) throw std::invalid_argument("T must be nonnegative");
    const AdversaryCaps caps = adversary.caps();
    if (forecaster.requires_mean() && !caps.mean_revealing)
        throw IncompatiblePairing(forecaster.id() + " needs a mean-revealing adversary, got " + adversary.id());

    CalibTranscript out;
    out.T = T;
    out.seed = seed;
    out.forecaster_id = forecaster.id();
    out.adversary_id = adversary.id();
    out.steps.reserve(static_cast<std::size_t>(T));

    adversary.begin(T, Rng::substream(seed, 1));
    forecaster.begin(T, Rng::substream(seed, 2));
    for (int t = 1; t <= T; ++t) {
        std::optional<Commit> c = adversary.commit(t);
        if (!c) {
            out.ended_early = true;
            break;
        }
        if (c->y != 0 && c->y != 1) throw std::logic_error(adversary.id() + " produced a non-binary outcome");
        if (caps.mean_revealing != c->mean.has_value())
            throw std::logic_error(adversary.id() + " broke its mean-revealing contract");
        Rational p = forecaster.predict(c->mean);
        if (p < Rational(0) || p > Rational(1))
            throw std::domain_error(forecaster.id() + " predicted outside [0,1]: " + p.str());
        out.ledger.record(p, c->y);
        out.steps.push_back({p, c->y, c->mean});
        adversary.observe(caps.adaptive ? std::optional<Rational>(p) : std::nullopt, c->y);
        forecaster.observe(c->y);
    }
    return out;
}

CalibLedger rebuild_ledger(const std::vector<CalibStep>& steps) {
    CalibLedger l;
    for (const auto& s : steps) l.record(s.p, s.y);
    return l;
}

std::string to_jsonl(const CalibTranscript& t) {
    using nlohmann::json;
    std::ostringstream os;
    json head = {{"T", t.T},
                 {"seed", t.seed},
                 {"forecaster_id", t.forecaster_id},
                 {"adversary_id", t.adversary_id},
                 {"ended_early", t.ended_early},
                 {"calerr", t.ledger.calerr()}};
    os << head.dump() << '\n';
    for (const auto& s : t.steps) {
        json row = {{"p", s.p.str()}, {"y", s.y}};
        if (s.e) row["e"] = s.e->str();
        os << row.dump() << '\n';
    }
    return os.str();
}

CalibTranscript calib_from_jsonl(const std::string& text) {
    using nlohmann::json;
    std::istringstream is(text);
    std::string line;
    CalibTranscript t;
    if (!std::getline(is, line)) throw std::invalid_argument("empty transcript");
    json head = json::parse(line);
    t.T = head.at("T").get<int>();
    t.seed = head.at("seed").get<std::uint64_t>();
    t.forecaster_id = head.at("forecaster_id").get<std::string>();
    t.adversary_id = head.at("adversary_id").get<std::string>();
    t.ended_early = head.at("ended_early").get<bool>();
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        json row = json::parse(line);
        CalibStep s{Rational::parse(row.at("p").get<std::string>()), row.at("y").get<int>(), std::nullopt};
        if (row.contains("e")) s.e = Rational::parse(row["e"].get<std::string>());
        t.steps.push_back(s);
    }
    t.ledger = rebuild_ledger(t.steps);
    return t;
}

std::string csv_header() { return "seed,T,forecaster,adversary,calerr,distinct_p,runtime_ms"; }

std::string csv_row(const CalibTranscript& t, double runtime_ms) {
    std::ostringstream os;
    os << t.seed << ',' << t.T << ',' << t.forecaster_id << ',' << t.adversary_id << ','
       << std::setprecision(10) << t.ledger.calerr() << ',' << t.ledger.distinct() << ','
       << std::setprecision(6) << runtime_ms;
    return os.str();
}

ConstantForecaster::ConstantForecaster(Rational p) : p_(p) {
    if (p < Rational(0) || p > Rational(1)) throw std::invalid_argument("constant prediction outside [0,1]");
}

std::int64_t cube_root_grid(int T) {
    std::int64_t k = 1;
    while (k * k * k < T) ++k;
    return k;
}

void EmpiricalMeanForecaster::begin(int T, Rng) {
    grid_ = cube_root_grid(T);
    seen_ = ones_ = 0;
}

Rational EmpiricalMeanForecaster::predict(const std::optional<Rational>&) {
    if (seen_ == 0) return Rational::round_to_grid(Rational(1, 2), grid_);
    return Rational::round_to_grid(Rational(ones_, seen_), grid_);
}

void EmpiricalMeanForecaster::observe(int y) {
    ++seen_;
    ones_ += y;
}

void CheatingRoundedForecaster::begin(int T, Rng) { grid_ = cube_root_grid(T); }

Rational CheatingRoundedForecaster::predict(const std::optional<Rational>& mean) {
    if (!mean) throw IncompatiblePairing("cheating-rounded needs the revealed mean");
    return Rational::round_to_grid(*mean, grid_);
}

BernoulliAdversary::BernoulliAdversary(Rational mean, bool reveal_mean) : mean_(mean), reveal_(reveal_mean) {
    if (mean < Rational(0) || mean > Rational(1)) throw std::invalid_argument("Bernoulli mean outside [0,1]");
}

std::optional<Commit> BernoulliAdversary::commit(int) {
    Commit c{rng_.bernoulli(mean_.to_double()) ? 1 : 0, std::nullopt};
    if (reveal_) c.mean = mean_;
    return c;
}

std::optional<Commit> AlternatingAdversary::commit(int t) {
    int y = t % 2 == 1 ? 1 : 0;
    return Commit{y, Rational(y)};
}

}  // namespace sprcal::calib

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sprcal/calib/ledger.hpp"
#include "sprcal/rng.hpp"

namespace sprcal::calib {

class IncompatiblePairing : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct AdversaryCaps {
    bool adaptive = false;        // sees past predictions
    bool mean_revealing = false;  // exposes e_t before the forecaster commits
};

struct Commit {
    int y = 0;
    std::optional<Rational> mean;  // e_t, present iff the adversary is mean-revealing
};

class Adversary {
public:
    virtual ~Adversary() = default;
    virtual AdversaryCaps caps() const = 0;
    virtual std::string id() const = 0;
    virtual void begin(int T, Rng rng) = 0;
    // Commits y_t (and e_t) before seeing p_t. nullopt ends the game early.
    virtual std::optional<Commit> commit(int t) = 0;
    // p is withheld from oblivious adversaries.
    virtual void observe(const std::optional<Rational>& p, int y) = 0;
};

class Forecaster {
public:
    virtual ~Forecaster() = default;
    virtual bool requires_mean() const { return false; }
    virtual std::string id() const = 0;
    virtual void begin(int /*T*/, Rng /*rng*/) {}
    virtual Rational predict(const std::optional<Rational>& mean) = 0;
    virtual void observe(int /*y*/) {}
};

struct CalibStep {
    Rational p;
    int y = 0;
    std::optional<Rational> e;
    bool operator==(const CalibStep&) const = default;
};

struct CalibTranscript {
    int T = 0;
    std::uint64_t seed = 0;
    std::string forecaster_id;
    std::string adversary_id;
    std::vector<CalibStep> steps;
    CalibLedger ledger;
    bool ended_early = false;  // adversary stopped before T
    bool operator==(const CalibTranscript&) const = default;
};

// Adversary randomness comes from substream 1 of the seed, forecaster
// randomness from substream 2.
CalibTranscript run_calibration(Forecaster& forecaster, Adversary& adversary, int T, std::uint64_t seed);

CalibLedger rebuild_ledger(const std::vector<CalibStep>& steps);

std::string to_jsonl(const CalibTranscript& t);
CalibTranscript calib_from_jsonl(const std::string& text);
std::string csv_header();
std::string csv_row(const CalibTranscript& t, double runtime_ms);

// Baseline forecasters.
class ConstantForecaster : public Forecaster {
public:
    explicit ConstantForecaster(Rational p);
    std::string id() const override { return "constant:" + p_.str(); }
    Rational predict(const std::optional<Rational>&) override { return p_; }

private:
    Rational p_;
};

// Mean of past outcomes rounded to the grid 1/ceil(T^(1/3)); 1/2 before any outcome.
class EmpiricalMeanForecaster : public Forecaster {
public:
    std::string id() const override { return "empirical-mean"; }
    void begin(int T, Rng) override;
    Rational predict(const std::optional<Rational>&) override;
    void observe(int y) override;
    std::int64_t grid() const { return grid_; }

private:
    std::int64_t grid_ = 1;
    std::int64_t seen_ = 0;
    std::int64_t ones_ = 0;
};

// Predicts the revealed mean rounded to the grid 1/ceil(T^(1/3)).
class CheatingRoundedForecaster : public Forecaster {
public:
    bool requires_mean() const override { return true; }
    std::string id() const override { return "cheating-rounded"; }
    void begin(int T, Rng) override;
    Rational predict(const std::optional<Rational>& mean) override;

private:
    std::int64_t grid_ = 1;
};

std::int64_t cube_root_grid(int T);

// Baseline adversaries.
class BernoulliAdversary : public Adversary {
public:
    BernoulliAdversary(Rational mean, bool reveal_mean);
    AdversaryCaps caps() const override { return {false, reveal_}; }
    std::string id() const override { return "bernoulli:" + mean_.str(); }
    void begin(int, Rng rng) override { rng_ = rng; }
    std::optional<Commit> commit(int t) override;
    void observe(const std::optional<Rational>&, int) override {}

private:
    Rational mean_;
    bool reveal_;
    Rng rng_;
};

// y_t = 1 on odd t, 0 on even t; reveals e_t = y_t.
class AlternatingAdversary : public Adversary {
public:
    AdversaryCaps caps() const override { return {false, true}; }
    std::string id() const override { return "alternating"; }
    void begin(int, Rng) override {}
    std::optional<Commit> commit(int t) override;
    void observe(const std::optional<Rational>&, int) override {}
};

}  // namespace sprcal::calib

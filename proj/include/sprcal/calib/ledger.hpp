#pragma once

#include <cstdint>
#include <map>

#include "sprcal/calib/rational.hpp"

namespace sprcal::calib {

struct Tally {
    std::int64_t count = 0;  // n(p)
    std::int64_t ones = 0;   // m(p)
    bool operator==(const Tally&) const = default;
};

struct SignedError {
    double plus = 0.0;   // sum of E+(p)
    double minus = 0.0;  // sum of E-(p)
    double total() const { return plus + minus; }
};

// Prediction/outcome counts keyed by the exact predicted value.
// E(p) = n(p) p - m(p); E+ and E- are its positive and negative parts.
class CalibLedger {
public:
    void record(const Rational& p, int y);

    std::int64_t steps() const { return steps_; }
    std::size_t distinct() const { return tallies_.size(); }
    const std::map<Rational, Tally>& tallies() const { return tallies_; }

    Rational error_exact(const Rational& p) const;  // E(p), zero if p never predicted
    double error(const Rational& p) const { return error_exact(p).to_double(); }

    double calerr() const;
    SignedError signed_split() const;

    // Sums over predictions p with lo <= p < hi (hi inclusive when hi_closed).
    SignedError range(const Rational& lo, const Rational& hi, bool hi_closed = false) const;
    double abs_range(const Rational& lo, const Rational& hi, bool hi_closed = false) const;

    bool operator==(const CalibLedger&) const = default;

private:
    std::map<Rational, Tally> tallies_;
    std::int64_t steps_ = 0;
};

Rational error_of(const Rational& p, const Tally& t);

}  // namespace sprcal::calib

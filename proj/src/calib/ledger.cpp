#include "sprcal/calib/ledger.hpp"

#include <cmath>
#include <stdexcept>

namespace sprcal::calib {

Rational error_of(const Rational& p, const Tally& t) {
    return Rational(t.count) * p - Rational(t.ones);
}

void CalibLedger::record(const Rational& p, int y) {
    if (p < Rational(0) || p > Rational(1)) throw std::invalid_argument("prediction outside [0,1]: " + p.str());
    if (y != 0 && y != 1) throw std::invalid_argument("outcome must be 0 or 1");
    Tally& t = tallies_[p];
    ++t.count;
    t.ones += y;
    ++steps_;
}

Rational CalibLedger::error_exact(const Rational& p) const {
    auto it = tallies_.find(p);
    return it == tallies_.end() ? Rational(0) : error_of(p, it->second);
}

double CalibLedger::calerr() const { return signed_split().total(); }

SignedError CalibLedger::signed_split() const {
    SignedError s;
    for (const auto& [p, t] : tallies_) {
        double e = error_of(p, t).to_double();
        if (e > 0) s.plus += e;
        else s.minus -= e;
    }
    return s;
}

SignedError CalibLedger::range(const Rational& lo, const Rational& hi, bool hi_closed) const {
    SignedError s;
    for (auto it = tallies_.lower_bound(lo); it != tallies_.end(); ++it) {
        if (hi_closed ? it->first > hi : it->first >= hi) break;
        double e = error_of(it->first, it->second).to_double();
        if (e > 0) s.plus += e;
        else s.minus -= e;
    }
    return s;
}

double CalibLedger::abs_range(const Rational& lo, const Rational& hi, bool hi_closed) const {
    return range(lo, hi, hi_closed).total();
}

}  // namespace sprcal::calib

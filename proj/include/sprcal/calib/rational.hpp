#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace sprcal::calib {

// Exact rational with a positive denominator, kept in lowest terms so that
// equal values compare and hash equal. Used as the key of calibration ledgers.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT: implicit from integers
    Rational(std::int64_t num, std::int64_t den) : num_(num), den_(den) {
        if (den_ == 0) throw std::domain_error("rational with zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const { return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_); }

    // Parses "a/b" or "a".
    static Rational parse(const std::string& s) {
        auto slash = s.find('/');
        if (slash == std::string::npos) return Rational(std::stoll(s));
        return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
    }

    // Nearest k/den to x, ties rounded up.
    static Rational round_to_grid(double x, std::int64_t den) {
        return Rational(static_cast<std::int64_t>(x * static_cast<double>(den) + 0.5), den);
    }
    static Rational round_to_grid(const Rational& x, std::int64_t den) {
        __int128 scaled = static_cast<__int128>(x.num_) * den * 2 + x.den_;
        __int128 twice_den = static_cast<__int128>(x.den_) * 2;
        __int128 k = scaled / twice_den;
        if (scaled % twice_den != 0 && scaled < 0) --k;
        return Rational(static_cast<std::int64_t>(k), den);
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return from128(wide(a.num_) * b.den_ + wide(b.num_) * a.den_, wide(a.den_) * b.den_); }
    friend Rational operator-(const Rational& a, const Rational& b) { return from128(wide(a.num_) * b.den_ - wide(b.num_) * a.den_, wide(a.den_) * b.den_); }
    friend Rational operator*(const Rational& a, const Rational& b) { return from128(wide(a.num_) * b.num_, wide(a.den_) * b.den_); }
    Rational operator-() const { return Rational(-num_, den_); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        return wide(a.num_) * b.den_ <=> wide(b.num_) * a.den_;
    }

private:
    static __int128 wide(std::int64_t x) { return static_cast<__int128>(x); }
    static __int128 gcd128(__int128 a, __int128 b) {
        if (a < 0) a = -a;
        while (b != 0) {
            __int128 r = a % b;
            a = b;
            b = r < 0 ? -r : r;
        }
        return a;
    }
    static Rational from128(__int128 num, __int128 den) {
        if (den < 0) {
            num = -num;
            den = -den;
        }
        __int128 g = gcd128(num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        constexpr __int128 lim = static_cast<__int128>(INT64_MAX);
        if (num > lim || num < -lim || den > lim) throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = static_cast<std::int64_t>(num);
        r.den_ = static_cast<std::int64_t>(den);
        return r;
    }
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace sprcal::calib

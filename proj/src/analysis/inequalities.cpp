#include "sprcal/analysis/inequalities.hpp"

#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "sprcal/analysis/constants.hpp"
#include "sprcal/rng.hpp"

namespace sprcal::analysis {

namespace {

constexpr double kTol = 1e-12;

struct Checker {
    explicit Checker(std::string name) { r.name = std::move(name); }
    InequalityResult r;
    bool first = true;
    void check(double lhs, double rhs, const std::function<std::string()>& describe) {
        ++r.samples;
        const double slack = (rhs - lhs) / std::max(1.0, std::abs(rhs));
        if (first || slack < r.worst_slack) r.worst_slack = slack;
        first = false;
        if (slack < -kTol) {
            if (r.violations == 0) r.witness = describe();
            ++r.violations;
        }
    }
};

double pw(double x, double b) { return std::pow(x, b); }

}  // namespace

bool InequalityReport::ok() const {
    for (const auto& r : results)
        if (r.violations != 0) return false;
    return true;
}

std::string InequalityReport::summary() const {
    std::ostringstream os;
    for (const auto& r : results) {
        os << r.name << ": " << r.violations << "/" << r.samples << " violations, worst slack " << r.worst_slack;
        if (!r.witness.empty()) os << " [" << r.witness << "]";
        os << '\n';
    }
    return os.str();
}

InequalityReport inequality_suite(std::uint64_t seed, long samples, double lambda, double delta) {
    Rng rng(seed);
    InequalityReport rep;
    auto beta_open = [&] { return 0.01 + 0.98 * rng.uniform(); };

    {
        // Split bound: the larger part holds at least a (1-p) share, p <= 1/2.
        Checker c("p-alpha-beta");
        for (long k = 0; k < samples; ++k) {
            const double beta = rng.uniform(), p = 0.5 * rng.uniform(), t = 1.0 + 1000.0 * rng.uniform();
            const double big = ((1.0 - p) + p * rng.uniform()) * t, small = t - big;
            c.check(pw(big, beta) + pw(small, beta), (pw(p, beta) + pw(1.0 - p, beta)) * pw(t, beta),
                    [&] { return "beta=" + std::to_string(beta) + " p=" + std::to_string(p); });
        }
        rep.results.push_back(c.r);
    }
    {
        Checker c("2-alpha-beta");
        for (long k = 0; k < samples; ++k) {
            const double beta = rng.uniform(), t0 = 1000.0 * rng.uniform(), t1 = 1000.0 * rng.uniform();
            c.check(pw(t0, beta) + pw(t1, beta), pw(2.0, 1.0 - beta) * pw(t0 + t1, beta),
                    [&] { return "t0=" + std::to_string(t0) + " t1=" + std::to_string(t1); });
        }
        rep.results.push_back(c.r);
    }
    {
        // (A + C p^beta)/(B + p)^beta rises before p* and falls after it.
        Checker c("ABCf");
        for (long k = 0; k < samples; ++k) {
            const double A = 0.01 + 10 * rng.uniform(), B = 0.01 + 10 * rng.uniform(), C = 0.01 + 10 * rng.uniform();
            const double beta = beta_open();
            auto f = [&](double p) { return (A + C * pw(p, beta)) / pw(B + p, beta); };
            const double ps = pw(C * B / A, 1.0 / (1.0 - beta));
            if (!std::isfinite(ps) || ps > 1e12) {
                --k;
                continue;
            }
            double p1, p2;
            if (rng.bernoulli(0.5)) {
                p1 = ps * rng.uniform();
                p2 = p1 + (ps - p1) * rng.uniform();
                c.check(f(p1), f(p2), [&] { return "rising side p1=" + std::to_string(p1) + " p2=" + std::to_string(p2); });
            } else {
                p1 = ps * (1.0 + 10.0 * rng.uniform());
                p2 = p1 * (1.0 + 10.0 * rng.uniform());
                c.check(f(p2), f(p1), [&] { return "falling side p1=" + std::to_string(p1) + " p2=" + std::to_string(p2); });
            }
        }
        rep.results.push_back(c.r);
    }
    {
        // Closed form of max_p A(1-p)^beta + B p^beta dominates every sample point.
        Checker c("fpab");
        for (long k = 0; k < samples; ++k) {
            const double A = 10 * rng.uniform(), B = 0.01 + 10 * rng.uniform(), beta = beta_open(), p = rng.uniform();
            c.check(A * pw(1 - p, beta) + B * pw(p, beta), inner_max(A, B, beta),
                    [&] { return "A=" + std::to_string(A) + " B=" + std::to_string(B); });
        }
        rep.results.push_back(c.r);
    }
    {
        Checker c("geometric-ti");
        for (long k = 0; k < samples; ++k) {
            const double beta = rng.uniform();
            const int len = 1 + static_cast<int>(rng.below(12));
            double t = 0.01 + rng.uniform(), lhs = 0.0, sum = 0.0;
            for (int i = 0; i < len; ++i) {
                lhs += pw(t, beta);
                sum += t;
                t *= 2.0 + 3.0 * rng.uniform();
            }
            c.check(lhs, pw(sum, beta) / (pw(2.0, beta) - 1.0),
                    [&] { return "beta=" + std::to_string(beta) + " len=" + std::to_string(len); });
        }
        rep.results.push_back(c.r);
    }
    {
        Checker c("plus-bound");
        for (long k = 0; k < samples; ++k) {
            const int t0 = 2 + static_cast<int>(rng.below(2000));
            const int t1 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(t0 / 2)));
            const int t2 = static_cast<int>(rng.below(static_cast<std::uint64_t>((t0 + 1) / 2 + 1)));
            const double beta = beta_open(), t = t0 + t1 + t2;
            c.check(pw(t1, beta) + lambda * pw(t2, beta), pw(t, beta) * (1.0 + 4.0 * lambda / 3.0) / pw(4.0, beta),
                    [&] { return "t0=" + std::to_string(t0) + " t1=" + std::to_string(t1) + " t2=" + std::to_string(t2); });
        }
        rep.results.push_back(c.r);
    }
    {
        Checker c("minus-bound");
        for (long k = 0; k < samples; ++k) {
            const int t0 = 2 + static_cast<int>(rng.below(2000));
            const int t1 = t0 / 2;
            const int t2 = static_cast<int>(rng.below(static_cast<std::uint64_t>((t0 + 1) / 2 + 1)));
            const double beta = beta_open(), t = t0 + t1 + t2;
            c.check(pw(t0, beta) + pw(t1, beta) + pw(t2, beta) / lambda, pw(t, beta) * F_closed(beta, lambda, delta),
                    [&] { return "t0=" + std::to_string(t0) + " t2=" + std::to_string(t2) + " beta=" + std::to_string(beta); });
        }
        rep.results.push_back(c.r);
    }
    return rep;
}

SlopeFit fit_exponent(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 3) throw std::invalid_argument("fit_exponent needs at least 3 points");
    const double n = static_cast<double>(points.size());
    double sx = 0, sy = 0;
    for (auto [x, y] : points) {
        if (!(x > 0) || !(y > 0)) throw std::invalid_argument("fit_exponent needs positive values");
        sx += std::log(x);
        sy += std::log(y);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (auto [x, y] : points) {
        const double dx = std::log(x) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y) - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_exponent needs at least two distinct x values");
    SlopeFit f;
    f.points = static_cast<int>(points.size());
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0;
    for (auto [x, y] : points) {
        const double r = std::log(y) - (f.intercept + f.slope * std::log(x));
        ssr += r * r;
    }
    f.stderr_slope = std::sqrt(ssr / (n - 2.0) / sxx);
    return f;
}

}  // namespace sprcal::analysis

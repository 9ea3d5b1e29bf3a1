#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sprcal::analysis {

struct InequalityResult {
    std::string name;
    long samples = 0;
    long violations = 0;
    double worst_slack = 0.0;  // min of rhs - lhs (relative for the scale-free checks)
    std::string witness;       // first violation
};

struct InequalityReport {
    std::vector<InequalityResult> results;
    bool ok() const;
    std::string summary() const;
};

// Randomized spot-checks, `samples` per inequality, deterministic in `seed`.
InequalityReport inequality_suite(std::uint64_t seed = 2024, long samples = 10000, double lambda = 1.5,
                                  double delta = 0.01);

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double stderr_slope = 0.0;
    int points = 0;
};

// OLS of log y on log x. Needs >= 3 points, all positive.
SlopeFit fit_exponent(const std::vector<std::pair<double, double>>& points);

}  // namespace sprcal::analysis

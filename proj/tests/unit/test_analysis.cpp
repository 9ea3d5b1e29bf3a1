#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sprcal/analysis/constants.hpp"
#include "sprcal/analysis/inequalities.hpp"
#include "sprcal/rng.hpp"

using namespace sprcal;
using namespace sprcal::analysis;

TEST(DTermsClosedForms, Examples) {
    EXPECT_DOUBLE_EQ(D1(1.0), 1.0);
    EXPECT_DOUBLE_EQ(D4(1.0), 1.0);
    EXPECT_NEAR(D4(0.5), std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(D1(0.5), std::sqrt(1.0 / 3.0) + std::sqrt(2.0 / 3.0), 1e-15);
    // second path: the same sum through exp/log
    EXPECT_NEAR(D1(0.5), std::exp(0.5 * std::log(1.0 / 3.0)) + std::exp(0.5 * std::log(2.0 / 3.0)), 1e-12);
    EXPECT_NEAR(D1(0.5), 1.393847, 1e-6);
    EXPECT_THROW(D1(0.0), DomainError);
    EXPECT_THROW(D4(1.5), DomainError);
}

TEST(InnerMax, Examples) {
    EXPECT_NEAR(inner_max(1, 1, 0.5), std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(inner_argmax(1, 1, 0.5), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(inner_max(0, 3, 0.7), 3.0);
    EXPECT_NEAR(inner_max(2, 1, 0.5), std::sqrt(5.0), 1e-12);
    EXPECT_THROW(inner_max(1, 0, 0.5), DomainError);
}

TEST(InnerMax, AgreesWithGrid) {
    Rng rng(41);
    for (int trial = 0; trial < 300; ++trial) {
        const double A = 3 * rng.uniform(), B = 0.05 + 3 * rng.uniform(), beta = 0.05 + 0.94 * rng.uniform();
        auto f = [&](double p) { return A * std::pow(1 - p, beta) + B * std::pow(p, beta); };
        EXPECT_NEAR(inner_max(A, B, beta), grid_max(f, 0, 1, 2000), 1e-9 * (1 + A + B));
        EXPECT_NEAR(f(inner_argmax(A, B, beta)), inner_max(A, B, beta), 1e-9 * (1 + A + B));
    }
}

TEST(FValue, LimitAndDualPath) {
    EXPECT_NEAR(F(1.0, 1.5, 1e-12), 1.0, 1e-9);
    EXPECT_NEAR(F(0.99, 1.5, 0.01), F_grid(0.99, 1.5, 0.01, 50000), 1e-9);
    EXPECT_NEAR(F(0.99, 1.5, 0.01), 1.006898335371, 1e-9);
    for (double beta : {0.91, 0.95, 0.97, 0.995})
        for (double delta : {0.001, 0.01, 0.1}) EXPECT_NEAR(F_closed(beta, 1.5, delta), F_grid(beta, 1.5, delta), 1e-9);
    EXPECT_THROW(F(0.99, 2.5, 0.01), DomainError);
    EXPECT_THROW(F(0.99, 1.5, 0.0), DomainError);
}

TEST(Certificate, PositiveEpsilonAndVerified) {
    auto c = find_beta_epsilon();
    EXPECT_GT(c.epsilon, 0.0);
    EXPECT_LT(c.alpha + c.beta, 1.0);
    EXPECT_TRUE(c.verified);
    EXPECT_GE(c.max_residual, 0.0);
    EXPECT_EQ(c.grid_points, 100000);
    auto t = d_terms_grid(c.beta, c.lambda, c.delta, 100000);
    EXPECT_LE(t.lhs(), std::pow(2.0, 1.0 - c.beta - c.epsilon));
    EXPECT_NEAR(epsilon_at(c.beta, c.lambda, c.delta), c.epsilon, 1e-6 * c.epsilon + 1e-12);
    EXPECT_THROW(find_beta_epsilon(2.5), DomainError);
    EXPECT_THROW(find_beta_epsilon(1.0), DomainError);
}

TEST(Certificate, JsonIsDeterministic) {
    auto c = find_beta_epsilon();
    auto e = entropy_exponent();
    const std::string a = constants_json(c, e);
    EXPECT_EQ(a, constants_json(find_beta_epsilon(), entropy_exponent()));
    auto j = nlohmann::json::parse(a);
    EXPECT_NEAR(j["upper_exponent"].get<double>(), 2.0 / 3.0 - c.epsilon / 18.0, 1e-15);
}

TEST(Entropy, Values) {
    EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
    EXPECT_DOUBLE_EQ(binary_entropy(0.0), 0.0);
    EXPECT_NEAR(binary_entropy(0.25), binary_entropy(0.75), 1e-15);
    auto r = entropy_exponent();
    EXPECT_NEAR(r.lambda_star, 0.15229, 1e-3);
    EXPECT_GT(r.g_star, 0.543895);
    EXPECT_TRUE(r.unimodal);
    // nothing on a fine grid beats the reported maximum
    for (int k = 1; k < 5000; ++k) EXPECT_LE(entropy_objective(k / 10000.0), r.g_star + 1e-12);
}

TEST(ExponentMaps, Consistency) {
    EXPECT_NEAR(adaptive_lower_exponent(1, 1), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(gamma_from_epsilon(0), 0.5, 1e-15);
    EXPECT_NEAR(upper_exponent_from_gamma(gamma_from_epsilon(0)), 2.0 / 3.0, 1e-15);
    auto c = find_beta_epsilon();
    EXPECT_NEAR(main_eq_exponent(c.epsilon), 2.0 / 3.0 - c.epsilon / 18.0, 1e-15);
    EXPECT_LT(main_eq_exponent(c.epsilon), 2.0 / 3.0);
}

TEST(Inequalities, SuitePasses) {
    auto r = inequality_suite(7, 5000);
    EXPECT_TRUE(r.ok()) << r.summary();
    EXPECT_EQ(r.results.size(), 7u);
    for (const auto& x : r.results) EXPECT_EQ(x.samples, 5000) << x.name;
}

TEST(FitExponent, ExactPowers) {
    EXPECT_NEAR(fit_exponent({{1, 1}, {2, 2}, {4, 4}}).slope, 1.0, 1e-12);
    EXPECT_NEAR(fit_exponent({{1, 1}, {4, 2}, {16, 4}}).slope, 0.5, 1e-12);
    EXPECT_NEAR(fit_exponent({{1, 1}, {4, 2}, {16, 4}}).stderr_slope, 0.0, 1e-12);
}

TEST(FitExponent, NoisyPowerLaw) {
    Rng rng(43);
    std::vector<std::pair<double, double>> pts;
    for (int e = 4; e <= 16; ++e) {
        const double x = std::ldexp(1.0, e);
        pts.emplace_back(x, std::pow(x, 0.8) * (1 + 0.02 * (rng.uniform() - 0.5)));
    }
    auto f = fit_exponent(pts);
    EXPECT_NEAR(f.slope, 0.8, 0.02);
    EXPECT_EQ(f.points, 13);
}

TEST(FitExponent, RejectsDegenerateInput) {
    EXPECT_THROW(fit_exponent({{1, 1}}), std::invalid_argument);
    EXPECT_THROW(fit_exponent({{1, 1}, {2, 0}, {4, 4}}), std::invalid_argument);
    EXPECT_THROW(fit_exponent({{2, 1}, {2, 2}, {2, 4}}), std::invalid_argument);
}

TEST(Certificate, MatchesPinnedFile) {
    std::ifstream in(std::string(SPRCAL_GOLDEN_DIR) + "/constants.json");
    ASSERT_TRUE(in);
    std::stringstream ss;
    ss << in.rdbuf();
    EXPECT_EQ(ss.str(), constants_json(find_beta_epsilon(), entropy_exponent()) + "\n");
}

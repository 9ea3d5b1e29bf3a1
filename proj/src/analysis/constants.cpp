#include "sprcal/analysis/constants.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace sprcal::analysis {

namespace {

void check_beta(double beta, bool closed_at_one) {
    if (!(beta > 0.0) || beta > 1.0 || (!closed_at_one && beta == 1.0))
        throw DomainError("beta outside its domain: " + std::to_string(beta));
}
void check_lambda(double lambda) {
    if (!(lambda > 1.0 && lambda < 2.0)) throw DomainError("lambda must lie in (1,2)");
}
void check_delta(double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0,1)");
}

// log(1 + e^x) without overflow.
double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double f_pab(double A, double B, double beta, double p) {
    return A * std::pow(1.0 - p, beta) + B * std::pow(p, beta);
}

double minus_branch(double beta, double lambda, double p) {
    return std::pow(1.0 - p, beta) * std::pow(2.0, 1.0 - beta) + std::pow(p, beta) / lambda;
}

double split_term(double beta, double delta) {
    return std::pow((1.0 - delta) / 3.0, beta) + std::pow(2.0 * (1.0 - delta) / 3.0, beta) + std::pow(delta, beta);
}

constexpr double kGolden = 0.6180339887498949;

double golden_max(const std::function<double(double)>& f, double a, double b, int iters = 200) {
    double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
    double fc = f(c), fd = f(d);
    for (int k = 0; k < iters && b - a > 1e-15; ++k) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kGolden * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kGolden * (b - a);
            fd = f(d);
        }
    }
    return std::max({f(a), f(b), fc, fd});
}

}  // namespace

double D1(double beta) {
    check_beta(beta, true);
    return std::pow(1.0 / 3.0, beta) + std::pow(2.0 / 3.0, beta);
}

double D2(double beta, double delta, double lambda) {
    check_beta(beta, true);
    return std::max((1.0 + 4.0 * lambda / 3.0) / std::pow(4.0, beta), F(beta, lambda, delta));
}

double D3(double beta, double lambda) {
    check_beta(beta, true);
    check_lambda(lambda);
    const double q = std::pow(0.25, beta);
    return std::max({std::pow(0.75, beta), std::pow(0.5, beta) + q + q / lambda,
                     (1.0 + 4.0 * lambda / 3.0) / std::pow(4.0, beta)});
}

double D4(double beta) {
    check_beta(beta, true);
    return std::pow(2.0, 1.0 - beta);
}

double inner_max(double A, double B, double beta) {
    if (!(B > 0.0)) throw DomainError("inner_max needs B > 0");
    if (A < 0.0) throw DomainError("inner_max needs A >= 0");
    check_beta(beta, true);
    if (A == 0.0) return B;
    if (beta == 1.0) return std::max(A, B);  // linear in p: best endpoint
    const double x = std::log(A / B) / (1.0 - beta);
    return B * std::exp((1.0 - beta) * softplus(x));
}

double inner_argmax(double A, double B, double beta) {
    if (!(B > 0.0)) throw DomainError("inner_argmax needs B > 0");
    check_beta(beta, true);
    if (A == 0.0) return 1.0;
    if (beta == 1.0) return A > B ? 0.0 : 1.0;
    const double x = std::log(A / B) / (1.0 - beta);
    return 1.0 / (1.0 + std::exp(x));
}

double inner_max_on(double A, double B, double beta, double lo, double hi) {
    const double p = std::clamp(inner_argmax(A, B, beta), lo, hi);
    if (p == inner_argmax(A, B, beta)) return inner_max(A, B, beta);
    return f_pab(A, B, beta, p);
}

double grid_max(const std::function<double(double)>& f, double lo, double hi, int points) {
    if (points < 2) throw std::invalid_argument("grid needs at least two points");
    const double step = (hi - lo) / (points - 1);
    int best = 0;
    double best_v = f(lo);
    for (int k = 1; k < points; ++k) {
        double v = f(k == points - 1 ? hi : lo + k * step);
        if (v > best_v) {
            best_v = v;
            best = k;
        }
    }
    const double a = std::max(lo, lo + (best - 1) * step);
    const double b = std::min(hi, lo + (best + 1) * step);
    return std::max(best_v, golden_max(f, a, b));
}

double F_closed(double beta, double lambda, double delta) {
    check_beta(beta, true);
    check_lambda(lambda);
    check_delta(delta);
    const double branch = inner_max_on(std::pow(2.0, 1.0 - beta), 1.0 / lambda, beta, delta / 9.0, 1.0);
    return std::max(split_term(beta, delta), branch);
}

double F_grid(double beta, double lambda, double delta, int points) {
    check_beta(beta, true);
    check_lambda(lambda);
    check_delta(delta);
    const double branch = grid_max([&](double p) { return minus_branch(beta, lambda, p); }, delta / 9.0, 1.0, points);
    return std::max(split_term(beta, delta), branch);
}

double F(double beta, double lambda, double delta) {
    const double closed = F_closed(beta, lambda, delta);
    const double grid = F_grid(beta, lambda, delta);
    if (std::abs(closed - grid) > 1e-9)
        throw std::runtime_error("closed form and grid disagree for F: " + std::to_string(closed) + " vs " +
                                 std::to_string(grid));
    return closed;
}

DTerms d_terms(double beta, double lambda, double delta) {
    const double A = D3(beta, lambda) / (std::pow(2.0, beta) - 1.0);
    // D2 with the closed-form F; the checked F is evaluated once on the final beta.
    const double d2 = std::max((1.0 + 4.0 * lambda / 3.0) / std::pow(4.0, beta), F_closed(beta, lambda, delta));
    const double B1 = std::max(D1(beta), d2);
    return {inner_max(A, B1, beta), inner_max_on(A, D4(beta), beta, 0.0, 6.0 / 7.0)};
}

DTerms d_terms_grid(double beta, double lambda, double delta, int points) {
    // Independent path: constants from the grid form of F, maxima over p by grid.
    const double A = D3(beta, lambda) / (std::pow(2.0, beta) - 1.0);
    const double d2 = std::max((1.0 + 4.0 * lambda / 3.0) / std::pow(4.0, beta), F_grid(beta, lambda, delta, points));
    const double B1 = std::max(D1(beta), d2);
    const double B2 = D4(beta);
    return {grid_max([&](double p) { return f_pab(A, B1, beta, p); }, 0.0, 1.0, points),
            grid_max([&](double p) { return f_pab(A, B2, beta, p); }, 0.0, 6.0 / 7.0, points)};
}

double epsilon_at(double beta, double lambda, double delta) {
    return 1.0 - beta - std::log2(d_terms(beta, lambda, delta).lhs());
}

ConstantsCertificate find_beta_epsilon(double lambda, double delta, int search_points, int verify_points) {
    check_lambda(lambda);
    check_delta(delta);
    if (search_points < 10) throw std::invalid_argument("search grid too coarse");
    ConstantsCertificate cert;
    cert.lambda = lambda;
    cert.C = 6.0 * lambda * lambda * lambda;
    cert.delta = delta;
    cert.search_points = search_points;
    cert.grid_points = verify_points;

    // Refining grid over the open interval (0.9, 1).
    double lo = 0.9, hi = 1.0, best_beta = 0.0, best_eps = -INFINITY;
    for (int round = 0; round < 4; ++round) {
        const double step = (hi - lo) / (search_points + 1);
        for (int k = 1; k <= search_points; ++k) {
            const double b = lo + k * step;
            const double e = epsilon_at(b, lambda, delta);
            if (e > best_eps) {
                best_eps = e;
                best_beta = b;
            }
        }
        lo = std::max(0.9, best_beta - 2 * step);
        hi = std::min(1.0, best_beta + 2 * step);
    }
    if (!(best_eps > 0.0)) throw NoFeasibleBeta("no beta in (0.9,1) admits a positive epsilon");

    // Certify a hair below the optimum so the inequality is strict.
    cert.beta = best_beta;
    cert.epsilon = best_eps * (1.0 - 1e-6);
    cert.alpha = 1.0 - cert.beta - cert.epsilon;

    F(cert.beta, lambda, delta);  // throws if the two evaluation paths disagree
    const double bound = std::pow(2.0, 1.0 - cert.beta - cert.epsilon);
    const DTerms g = d_terms_grid(cert.beta, lambda, delta, verify_points);
    cert.max_residual = bound - g.lhs();
    cert.verified = cert.max_residual >= 0.0 && cert.alpha + cert.beta < 1.0 && cert.epsilon > 0.0;
    return cert;
}

double binary_entropy(double p) {
    if (p < 0.0 || p > 1.0) throw DomainError("entropy argument outside [0,1]");
    if (p == 0.0 || p == 1.0) return 0.0;
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double entropy_objective(double lambda) {
    const double h = binary_entropy(lambda);
    return 1.0 - (h + 1.0) / (3.0 * h + 2.0 - 2.0 * lambda);
}

ExponentReport entropy_exponent() {
    ExponentReport r;
    const int n = 10000;
    const double lo = 1e-6, hi = 1.0 - 1e-6, step = (hi - lo) / (n - 1);
    int changes = 0, best = 0;
    double prev = entropy_objective(lo), best_v = prev;
    int last_sign = 0;
    for (int k = 1; k < n; ++k) {
        const double v = entropy_objective(lo + k * step);
        const int s = v > prev ? 1 : v < prev ? -1 : 0;
        if (s != 0 && last_sign != 0 && s != last_sign) ++changes;
        if (s != 0) last_sign = s;
        if (v > best_v) {
            best_v = v;
            best = k;
        }
        prev = v;
    }
    r.unimodal = changes == 1;
    double a = lo + std::max(0, best - 1) * step, b = lo + std::min(n - 1, best + 1) * step;
    for (int k = 0; k < 200 && b - a > 1e-15; ++k) {
        const double c = b - kGolden * (b - a), d = a + kGolden * (b - a);
        if (entropy_objective(c) >= entropy_objective(d)) b = d;
        else a = c;
    }
    r.lambda_star = 0.5 * (a + b);
    r.g_star = entropy_objective(r.lambda_star);
    return r;
}

double adaptive_lower_exponent(double alpha, double beta) {
    if (alpha + 2.0 == 0.0) throw DomainError("alpha = -2");
    return (beta + 1.0) / (alpha + 2.0);
}

double upper_exponent_from_gamma(double gamma) {
    if (5.0 - 4.0 * gamma == 0.0) throw DomainError("gamma = 5/4");
    return (3.0 - 2.0 * gamma) / (5.0 - 4.0 * gamma);
}

double gamma_from_epsilon(double eps) {
    if (eps == 2.0) throw DomainError("epsilon = 2");
    return (1.0 - eps) / (2.0 - eps);
}

double main_eq_exponent(double eps) { return 2.0 / 3.0 - eps / 18.0; }

std::string constants_json(const ConstantsCertificate& cert, const ExponentReport& ent) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["lambda"] = cert.lambda;
    j["C"] = cert.C;
    j["delta"] = cert.delta;
    j["beta"] = cert.beta;
    j["epsilon"] = cert.epsilon;
    j["alpha"] = cert.alpha;
    j["grid_points"] = cert.grid_points;
    j["max_residual"] = cert.max_residual;
    j["upper_exponent"] = main_eq_exponent(cert.epsilon);
    // An oblivious adversary is also adaptive, so the oblivious exponent is the
    // best adaptive lower exponent available.
    j["lower_exponent_adaptive"] = ent.g_star;
    j["lower_exponent_oblivious"] = ent.g_star;
    j["lambda_star"] = ent.lambda_star;
    return j.dump(2) + "\n";
}

}  // namespace sprcal::analysis

#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace sprcal::analysis {

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Constants of the labeler's potential argument.
double D1(double beta);
double D2(double beta, double delta, double lambda);
double D3(double beta, double lambda);
double D4(double beta);

// max over p in [0,1] of A (1-p)^beta + B p^beta, in closed form.
double inner_max(double A, double B, double beta);
double inner_argmax(double A, double B, double beta);
// Same maximum restricted to [lo, hi]; the objective is concave, so the
// unconstrained maximizer is clamped.
double inner_max_on(double A, double B, double beta, double lo, double hi);

// Dense grid plus golden-section polish of the best grid cell.
double grid_max(const std::function<double(double)>& f, double lo, double hi, int points);

double F_closed(double beta, double lambda, double delta);
double F_grid(double beta, double lambda, double delta, int points = 10000);
// Closed form, checked against the grid; throws if they differ by more than 1e-9.
double F(double beta, double lambda, double delta);

// Left-hand side of the certificate inequality: the larger of the two
// outer maxima, compared against 2^(1-beta-eps).
struct DTerms {
    double first = 0.0;   // p over [0,1], weight max(D1, D2)
    double second = 0.0;  // p over [0,6/7], weight D4
    double lhs() const { return first > second ? first : second; }
};
DTerms d_terms(double beta, double lambda, double delta);
DTerms d_terms_grid(double beta, double lambda, double delta, int points);
// Largest eps with lhs(beta) <= 2^(1-beta-eps).
double epsilon_at(double beta, double lambda, double delta);

struct ConstantsCertificate {
    double lambda = 1.5;
    double C = 20.25;
    double delta = 0.01;
    double beta = 0.0;
    double epsilon = 0.0;
    double alpha = 0.0;
    int search_points = 0;
    int grid_points = 0;         // verification grid over p
    double max_residual = 0.0;   // min over checks of bound - grid value (>= 0 when verified)
    bool verified = false;
};

class NoFeasibleBeta : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Searches beta in (0.9, 1) on a refining grid for the largest eps, then
// re-verifies the inequality on an independent grid over p.
ConstantsCertificate find_beta_epsilon(double lambda = 1.5, double delta = 0.01, int search_points = 2000,
                                       int verify_points = 100000);

struct ExponentReport {
    double lambda_star = 0.0;
    double g_star = 0.0;
    bool unimodal = false;
};

double binary_entropy(double p);
double entropy_objective(double lambda);  // 1 - (h+1)/(3h+2-2 lambda)
ExponentReport entropy_exponent();

double adaptive_lower_exponent(double alpha, double beta);  // (beta+1)/(alpha+2)
double upper_exponent_from_gamma(double gamma);             // (3-2g)/(5-4g)
double gamma_from_epsilon(double eps);                      // (1-eps)/(2-eps)
double main_eq_exponent(double eps);                        // 2/3 - eps/18

std::string constants_json(const ConstantsCertificate& cert, const ExponentReport& ent);

}  // namespace sprcal::analysis

#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sprcal/calib/game.hpp"
#include "sprcal/spr/game.hpp"

namespace sprcal::calib {

struct InstanceKey {
    int i = 1;  // discretization level: grid 1/2^(i+1), 2^i cells
    int j = 2;  // time level: budget 2^(tau-j) rounds
    int l = 0;  // parity of the grid intervals this instance owns
    bool operator==(const InstanceKey&) const = default;
};

struct CellRef {
    int c = 1;  // 1-based cell of the instance
    InstanceKey key;
};

// Grid index m with e in [m, m+1]/2^(i+1); e = 1 maps to the last interval.
std::int64_t grid_index(int i, const Rational& e);

// Cells are 1-based: cell c of the parity-l instance owns grid interval
// m = 2(c-1) + l, so the owning cell always contains e.
CellRef cell_of(int i, int j, const Rational& e);
std::pair<Rational, Rational> interval_of(int c, const InstanceKey& key);
// Plus predicts the grid point just below the interval, Minus the one just
// above, clamped to [0,1].
Rational prob_of(int c, spr::Sign s, const InstanceKey& key);

enum class EmbeddedLabeler { Trivial, AB };

struct ForecasterOptions {
    int h = -1;             // -1: floor(tau/3)
    double gamma = -1.0;    // >= 0: h = floor((3-4g)/(5-4g) tau) instead
    EmbeddedLabeler labeler = EmbeddedLabeler::Trivial;
    bool check_invariants = true;
};

struct SimulateCall {
    int t = 0;
    int c = 0;
    spr::Sign sign = spr::Sign::Plus;
};

struct ForecasterDiagnostics {
    int tau = 0;
    int h = 0;
    long removal_rounds = 0;
    long placement_rounds = 0;
    long anomalies = 0;          // rounds where neither branch fired
    long sign_bias_violations = 0;
    long cell_bias_violations = 0;
    double worst_sign_bias_slack = 0.0;  // min over steps of rhs - lhs
    std::vector<std::string> witnesses;  // first few violations, human readable
    std::vector<std::set<std::int64_t>> intervals_by_level;  // level i -> grid indices played
};

struct ReducedTranscriptReport {
    long call_cap_violations = 0;
    long cell_gap_violations = 0;      // same cell, gap < 2^(j-1)
    long instance_gap_violations = 0;  // any two consecutive reduced calls, gap < 2^(j-1)
    long total_calls = 0;
    long reduced_calls = 0;
    std::vector<std::string> witnesses;
    bool ok() const { return call_cap_violations == 0 && cell_gap_violations == 0; }
};

// Stack reduction: drop a call whose sign the next call erases, i.e. a minus
// followed by a call further right or a plus followed by one further left.
std::vector<SimulateCall> reduce_calls(const std::vector<SimulateCall>& calls);

class SignPreservationForecaster : public Forecaster {
public:
    explicit SignPreservationForecaster(ForecasterOptions opts = {});

    bool requires_mean() const override { return true; }
    std::string id() const override;
    void begin(int T, Rng rng) override;
    Rational predict(const std::optional<Rational>& mean) override;

    struct Instance {
        InstanceKey key;
        spr::Board board;
        std::unique_ptr<spr::LabelerStrategy> labeler;
        std::vector<double> bias;  // by cell - 1
        std::set<int> negative;    // cells with bias < -1
        std::set<int> positive;    // cells with bias > 1
        std::vector<SimulateCall> calls;
        double max_abs_bias = 0.0;
        int budget = 0;
    };

    int tau() const { return tau_; }
    int h() const { return h_; }
    const ForecasterDiagnostics& diagnostics() const { return diag_; }
    const std::vector<Instance>& instances() const { return instances_; }
    const Instance& instance(const InstanceKey& key) const { return instances_[index(key)]; }
    double bias(int c, const InstanceKey& key) const { return instance(key).bias[static_cast<std::size_t>(c - 1)]; }
    double total_abs_bias() const { return rhs_; }
    double signed_prediction_error() const { return lhs_; }  // sum_p |sum_s [p_s = p](e_s - p)|

    ReducedTranscriptReport check_reduced_transcripts() const;
    std::string diagnostics_json() const;

private:
    std::size_t index(const InstanceKey& key) const;
    Instance& at(const InstanceKey& key) { return instances_[index(key)]; }
    void add_bias(Instance& g, int c, double delta);
    void check_cell(const Instance& g, int c);
    void simulate(Instance& g, int c);
    Rational commit(const Rational& p, double e);

    ForecasterOptions opts_;
    int T_ = 0;
    int tau_ = 0;
    int h_ = 0;
    int t_ = 0;
    std::vector<Instance> instances_;
    std::map<Rational, double> signed_error_;
    double lhs_ = 0.0;
    double rhs_ = 0.0;
    ForecasterDiagnostics diag_;
};

int default_h(int tau);
int gamma_h(int tau, double gamma);
int exact_log2(int T);  // throws unless T is a power of two >= 2

}  // namespace sprcal::calib

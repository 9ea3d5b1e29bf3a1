#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "sprcal/analysis/inequalities.hpp"
#include "sprcal/calib/adversaries.hpp"
#include "sprcal/calib/forecaster.hpp"
#include "sprcal/spr/game.hpp"

namespace sprcal {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Runs fn(0..count-1) on up to `threads` workers (0: hardware concurrency).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, unsigned threads = 0);

// "random" | "greedy" | "tree" (largest tree fitting n, repeated) | "tree:d,k".
std::unique_ptr<spr::PointerStrategy> make_pointer(const std::string& id, int n);
// "ab" | "always-plus" | "always-minus".
std::unique_ptr<spr::LabelerStrategy> make_labeler(const std::string& id, int n);

// "spr" | "spr-ab" | "constant:P" | "empirical-mean" | "cheating-rounded".
// h <= 0 selects the default h; gamma >= 0 selects the gamma-derived h.
std::unique_ptr<calib::Forecaster> make_forecaster(const std::string& id, int h = 0, double gamma = -1.0);
// "bernoulli:P" (reveals its mean) | "bernoulli-hidden:P" | "alternating" |
// "oblivious:tree:d,k" | "adaptive" | "adaptive:N" (explicit n), with `pointer` for adaptive.
std::unique_ptr<calib::Adversary> make_adversary(const std::string& id, int T, double alpha = 1.0, double beta = 1.0,
                                                 const std::string& pointer = "tree");

struct SprScalingRow {
    int n = 0;
    std::string pointer;
    std::uint64_t seed = 0;
    int rounds = 0;
    int preserved = 0;
};

struct SprScalingFit {
    std::string pointer;
    analysis::SlopeFit fit;
};

struct SprScalingResult {
    std::vector<SprScalingRow> rows;
    std::vector<SprScalingFit> fits;  // mean preserved vs n, one per pointer
    std::string csv() const;
};

SprScalingResult spr_scaling(const std::vector<int>& n_grid, const std::vector<std::string>& pointers,
                             const std::vector<std::uint64_t>& seeds, const std::string& labeler = "ab",
                             unsigned threads = 0);

struct CalibRunRow {
    calib::CalibTranscript transcript;
    double runtime_ms = 0.0;
};

struct CalibScalingPoint {
    int T = 0;
    double mean_calerr = 0.0;
    double stderr_calerr = 0.0;
    int runs = 0;
};

struct CalibScalingResult {
    std::vector<CalibRunRow> rows;
    std::vector<CalibScalingPoint> points;
    analysis::SlopeFit fit;
    std::string csv() const;
};

CalibScalingResult calib_scaling(const std::vector<int>& T_grid, const std::string& forecaster,
                                 const std::string& adversary, const std::vector<std::uint64_t>& seeds,
                                 unsigned threads = 0);

std::string opt_table_csv(int n_max, int s_max, long max_states = 2187);

// Rounds T down to a power of two (>= 2).
int floor_pow2(int T);

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};
MeanSe mean_se(const std::vector<double>& xs);

}  // namespace sprcal

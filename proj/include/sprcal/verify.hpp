#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace sprcal::verify {

// Thresholds frozen from reference seed batches disjoint from the
// acceptance seeds; see measure_reference().
// Reference max calerr/T^(2/3) was 0.586; frozen with 1.25x headroom.
inline constexpr double kForecasterCalerrConstant = 0.75;  // calerr <= c T^(2/3)
// Reference truncation rate was 0.
inline constexpr double kTruncationThreshold = 0.05;  // fraction of runs cut off at T

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
    std::string line() const;  // "[PASS] 3 scaling ... (12.3 s)"
};

CriterionResult criterion1_oracle();
CriterionResult criterion2_labeler_safety();
CriterionResult criterion3_scaling(unsigned threads = 0);
CriterionResult criterion4_constants();
CriterionResult criterion5_entropy();
CriterionResult criterion6_tree(unsigned threads = 0);
CriterionResult criterion7_forecaster(unsigned threads = 0);
CriterionResult criterion8_adaptive(unsigned threads = 0);
CriterionResult criterion9_oblivious(unsigned threads = 0);

// Runs the criteria whose ids are listed (all when empty).
std::vector<CriterionResult> verify_all(const std::vector<int>& only = {}, unsigned threads = 0,
                                        void (*on_result)(const CriterionResult&) = nullptr);

struct ReferenceMeasurement {
    double max_calerr_ratio = 0.0;  // max over runs of calerr / T^(2/3)
    double truncated_fraction = 0.0;
    int forecaster_runs = 0;
    int adaptive_runs = 0;
};

// Reference batches: seeds 1001..1050 for the forecaster bound, 1001..1100
// for the adaptive truncation rate.
ReferenceMeasurement measure_reference(unsigned threads = 0);

}  // namespace sprcal::verify

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sprcal/spr/game.hpp"

namespace sprcal::spr {

// Instrumentation for the recursive labeler. Every interval or halving instance that is
// ever materialized gets a record; every placed sign is attributed to all
// instances that executed on that step.
class Recorder {
public:
    enum class Kind { Interval, Halving };

    struct PhaseChange {
        int round;
        int from;
        int to;
        int count_same;   // countHalf[half] at the transition
        int count_other;  // countHalf[1-half] at the transition
    };

    struct Instance {
        Kind kind = Kind::Interval;
        int l = 0, r = 0, b = 0;
        int M = 0;  // halving only
        int parent = -1;
        int half = -1;        // interval only: which half of the parent halving instance it covers
        bool reinit = false;  // interval only: created by a phase-4 re-initialization
        int created_round = 0;
        int completed_round = -1;  // -1 while alive
        int execution_steps = 0;
        std::vector<int> placements;
        std::vector<int> children;
        // halving only: state after the last step that returned a sign
        int last_phase = 1;
        std::array<int, 2> last_count{0, 0};
        bool returned_bottom = false;
        int steps_at_bottom = 0;
        std::vector<PhaseChange> phase_changes;
    };

    struct Placement {
        int round;
        int cell;
        Sign sign;
        int removed_round = -1;
    };

    int add(Instance inst);
    void begin_round(int round) { round_ = round; }
    int round() const { return round_; }
    void record_removals(const std::vector<int>& cells);
    void executed(int id);
    void complete(int id);  // also completes all live descendants
    void finish_placement(int cell, Sign sign);

    Instance& at(int id) { return instances_.at(static_cast<std::size_t>(id)); }
    const Instance& at(int id) const { return instances_.at(static_cast<std::size_t>(id)); }
    const std::vector<Instance>& instances() const { return instances_; }
    const std::vector<Placement>& placements() const { return placements_; }

private:
    std::vector<Instance> instances_;
    std::vector<Placement> placements_;
    std::vector<int> occupant_;  // cell -> placement index, -1 if empty
    std::vector<int> path_;
    int round_ = 0;
};

class HalvingLabeler;

// Interval labeler over cells [l, r] with integer bias b. Child halving instances are
// materialized on first use; a fresh instance behaves exactly as an eagerly
// built one because initialization is deterministic.
class IntervalLabeler {
public:
    IntervalLabeler(int l, int r, int b, Recorder* rec = nullptr, int parent = -1, int half = -1,
         bool reinit = false);
    IntervalLabeler(const IntervalLabeler& other);
    IntervalLabeler& operator=(const IntervalLabeler& other);
    IntervalLabeler(IntervalLabeler&&) noexcept;
    IntervalLabeler& operator=(IntervalLabeler&&) noexcept;
    ~IntervalLabeler();

    Sign label(int s, Recorder* rec = nullptr);

    int l() const { return l_; }
    int r() const { return r_; }
    int bias() const { return b_; }
    int count() const { return count_; }
    bool is_leaf() const { return l_ == r_; }
    int child_guess() const { return pending_M_; }  // M of the current (or pending) child halving instance
    const HalvingLabeler* recent_b() const { return recent_.get(); }
    int id() const { return id_; }

private:
    void make_child(int M, Recorder* rec);

    int l_, r_, b_;
    int count_ = 0;
    int pending_M_ = 1;
    std::unique_ptr<HalvingLabeler> recent_;
    int id_ = -1;
};

// Halving labeler: splits its interval into halves and hands out signs by phase.
// label() returns nullopt for the bottom value.
class HalvingLabeler {
public:
    HalvingLabeler(int l, int r, int b, int M, Recorder* rec = nullptr, int parent = -1);
    HalvingLabeler(const HalvingLabeler& other);
    HalvingLabeler& operator=(const HalvingLabeler&) = delete;

    std::optional<Sign> label(int s, Recorder* rec = nullptr);

    int l() const { return l_; }
    int r() const { return r_; }
    int bias() const { return b_; }
    int guess() const { return M_; }
    int mid() const { return m_; }
    int phase() const { return phase_; }
    int prev_half() const { return prev_half_; }
    int count_half(int h) const { return count_[static_cast<std::size_t>(h)]; }
    int child_bias(int h) const { return child_b_[static_cast<std::size_t>(h)]; }
    const IntervalLabeler* child(int h) const { return child_[static_cast<std::size_t>(h)].get(); }
    int id() const { return id_; }

private:
    friend class IntervalLabeler;

    int l_, r_, b_, M_, m_;
    std::array<std::unique_ptr<IntervalLabeler>, 2> child_;
    std::array<int, 2> child_b_;
    std::array<bool, 2> child_reinit_{false, false};
    int prev_half_ = -1;
    std::array<int, 2> count_{0, 0};
    int phase_ = 1;
    int id_ = -1;
};

// sign(b) with sign(0) = Plus.
inline Sign sign_of(int b) { return b < 0 ? Sign::Minus : Sign::Plus; }

// The interval labeler on [1, n] with bias 0, as a labeler strategy that removes every
// removable sign each round.
class RootLabeler : public LabelerStrategy {
public:
    explicit RootLabeler(int n, bool instrument = false);

    LabelDecision label(const Board& board, int j) override;
    std::string id() const override { return "ab"; }
    std::unique_ptr<LabelerStrategy> clone() const override {
        return std::make_unique<RootLabeler>(*this);
    }

    const IntervalLabeler& root() const { return root_; }
    bool instrumented() const { return rec_.has_value(); }
    const Recorder& recorder() const;
    int rounds() const { return round_; }

private:
    int n_;
    std::optional<Recorder> rec_;
    IntervalLabeler root_;
    int round_ = 0;
};

// Signs of type `sign` placed while the instance executed that were still
// on the board when it completed (or at the end, if it never did).
int remaining_signs(const Recorder& rec, int instance_id, Sign sign);

// Genealogy as a JSON array (one object per instance).
std::string genealogy_json(const Recorder& rec);

struct StructureReport {
    int instances_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Doubling, bottom-after-2M, the 6M bound, phase order and the bias rule.
StructureReport check_structure(const Recorder& rec);

struct SafetyBound {
    double lambda = 1.5;
    double C = 20.25;
    double alpha = 0.0;
    double beta = 1.0;
    double operator()(int n, int t, int b, Sign sign) const;
};

// Checks remaining_signs(I, sigma) <= C lambda^(-b sigma) n^alpha t^beta for
// every interval instance in the recording. Returns violation messages.
std::vector<std::string> check_safety(const Recorder& rec, const SafetyBound& bound);

}  // namespace sprcal::spr

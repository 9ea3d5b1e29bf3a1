#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sprcal/rng.hpp"
#include "sprcal/spr/board.hpp"

namespace sprcal::spr {

// The pointing player. Returning nullopt terminates the game.
class PointerStrategy {
public:
    virtual ~PointerStrategy() = default;
    virtual void begin_game(int /*n*/, int /*s*/) {}
    virtual std::optional<int> choose(const Board& board, const Transcript& so_far, Rng& rng) = 0;
    virtual std::string id() const = 0;
};

struct LabelDecision {
    std::vector<int> removal;
    Sign sign = Sign::Plus;
};

// The labeling player.
class LabelerStrategy {
public:
    virtual ~LabelerStrategy() = default;
    virtual LabelDecision label(const Board& board, int j) = 0;
    virtual std::string id() const = 0;
    virtual std::unique_ptr<LabelerStrategy> clone() const = 0;
};

// Removes everything removable and always places the same sign.
class ConstantLabeler : public LabelerStrategy {
public:
    explicit ConstantLabeler(Sign sign) : sign_(sign) {}
    LabelDecision label(const Board& board, int j) override;
    std::string id() const override { return sign_ == Sign::Plus ? "always-plus" : "always-minus"; }
    std::unique_ptr<LabelerStrategy> clone() const override {
        return std::make_unique<ConstantLabeler>(*this);
    }

private:
    Sign sign_;
};

// Points at a fixed list of cells, then terminates.
class SequencePointer : public PointerStrategy {
public:
    explicit SequencePointer(std::vector<int> cells) : cells_(std::move(cells)) {}
    void begin_game(int, int) override { pos_ = 0; }
    std::optional<int> choose(const Board&, const Transcript&, Rng&) override {
        if (pos_ >= cells_.size()) return std::nullopt;
        return cells_[pos_++];
    }
    std::string id() const override { return "sequence"; }

private:
    std::vector<int> cells_;
    std::size_t pos_ = 0;
};

// Runs at most s rounds. A full board ends the game whatever the pointer wants.
Transcript play_game(int n, int s, PointerStrategy& pointer, LabelerStrategy& labeler,
                     std::uint64_t rng_seed);

}  // namespace sprcal::spr

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sprcal::spr {

enum class Sign : std::int8_t { Minus = -1, Plus = 1 };
enum class Cell : std::uint8_t { Empty = 0, Plus = 1, Minus = 2 };

inline int value(Sign s) { return static_cast<int>(s); }
inline Cell to_cell(Sign s) { return s == Sign::Plus ? Cell::Plus : Cell::Minus; }
inline Sign flip(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline char symbol(Sign s) { return s == Sign::Plus ? '+' : '-'; }
char symbol(Cell c);

// Rule violation: occupied target, illegal removal, no rounds left, bad index.
class RuleError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A strategy broke its interface contract (e.g. pointed at an occupied cell).
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

struct PreservedCounts {
    int plus = 0;
    int minus = 0;
    int total() const { return plus + minus; }
    bool operator==(const PreservedCounts&) const = default;
};

// Cells are addressed 1..n.
class Board {
public:
    Board(int n, int rounds);

    int size() const { return static_cast<int>(cells_.size()); }
    int rounds_remaining() const { return rounds_; }
    Cell at(int i) const;
    bool is_empty(int i) const { return at(i) == Cell::Empty; }
    bool full() const { return plus_ + minus_ == size(); }
    int plus_count() const { return plus_; }
    int minus_count() const { return minus_; }
    std::vector<int> empty_cells() const;
    const std::vector<Cell>& raw() const { return cells_; }
    std::string to_string() const;

    // In-place round: clear `removal`, put `sign` at j, consume a round.
    void apply(int j, std::span<const int> removal, Sign sign);

    bool operator==(const Board&) const = default;

private:
    void check_index(int i) const;

    std::vector<Cell> cells_;
    int rounds_;
    int plus_ = 0;
    int minus_ = 0;
};

Board new_board(int n, int s);

// { i < j : Minus at i } ∪ { i > j : Plus at i }, ascending.
std::vector<int> removable_cells(const Board& board, int j);

Board apply_round(Board board, int j, std::span<const int> removal, Sign sign);

PreservedCounts preserved_counts(const Board& board);

struct RoundRecord {
    int pointed = 0;
    std::vector<int> removed;
    Sign placed = Sign::Plus;
    bool operator==(const RoundRecord&) const = default;
};

struct Transcript {
    int n = 0;
    int s = 0;
    std::uint64_t seed = 0;
    std::string pointer_id;
    std::string labeler_id;
    std::vector<RoundRecord> rounds;
    bool terminated_early = false;
    bool operator==(const Transcript&) const = default;
};

// Rebuilds the final board from an empty one, validating every round.
Board replay(const Transcript& transcript);

}  // namespace sprcal::spr

#include "sprcal/spr/board.hpp"

#include <algorithm>

namespace sprcal::spr {

char symbol(Cell c) {
    switch (c) {
        case Cell::Plus: return '+';
        case Cell::Minus: return '-';
        default: return '.';
    }
}

Board::Board(int n, int rounds) {
    if (n < 1) throw RuleError("board needs at least one cell");
    if (rounds < 0) throw RuleError("negative round count");
    cells_.assign(static_cast<std::size_t>(n), Cell::Empty);
    rounds_ = rounds;
}

void Board::check_index(int i) const {
    if (i < 1 || i > size())
        throw RuleError("cell " + std::to_string(i) + " outside 1.." + std::to_string(size()));
}

Cell Board::at(int i) const {
    check_index(i);
    return cells_[static_cast<std::size_t>(i - 1)];
}

std::vector<int> Board::empty_cells() const {
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(size() - plus_ - minus_));
    for (int i = 0; i < size(); ++i)
        if (cells_[static_cast<std::size_t>(i)] == Cell::Empty) out.push_back(i + 1);
    return out;
}

std::string Board::to_string() const {
    std::string s;
    s.reserve(cells_.size());
    for (Cell c : cells_) s.push_back(symbol(c));
    return s;
}

void Board::apply(int j, std::span<const int> removal, Sign sign) {
    check_index(j);
    if (rounds_ <= 0) throw RuleError("no rounds remaining");
    if (!is_empty(j)) throw RuleError("cell " + std::to_string(j) + " is occupied");
    // validate everything before mutating
    for (int i : removal) {
        check_index(i);
        Cell c = cells_[static_cast<std::size_t>(i - 1)];
        bool ok = (i < j && c == Cell::Minus) || (i > j && c == Cell::Plus);
        if (!ok) throw RuleError("cell " + std::to_string(i) + " is not removable for j=" + std::to_string(j));
    }
    if (!std::is_sorted(removal.begin(), removal.end())) {
        std::vector<int> sorted(removal.begin(), removal.end());
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw RuleError("duplicate cell in removal set");
    } else if (std::adjacent_find(removal.begin(), removal.end()) != removal.end()) {
        throw RuleError("duplicate cell in removal set");
    }
    for (int i : removal) {
        Cell& c = cells_[static_cast<std::size_t>(i - 1)];
        if (c == Cell::Plus) --plus_;
        else --minus_;
        c = Cell::Empty;
    }
    cells_[static_cast<std::size_t>(j - 1)] = to_cell(sign);
    if (sign == Sign::Plus) ++plus_;
    else ++minus_;
    --rounds_;
}

Board new_board(int n, int s) { return Board(n, s); }

std::vector<int> removable_cells(const Board& board, int j) {
    if (!board.is_empty(j)) throw RuleError("cell " + std::to_string(j) + " is occupied");
    std::vector<int> out;
    const auto& cells = board.raw();
    for (int i = 1; i < j; ++i)
        if (cells[static_cast<std::size_t>(i - 1)] == Cell::Minus) out.push_back(i);
    for (int i = j + 1; i <= board.size(); ++i)
        if (cells[static_cast<std::size_t>(i - 1)] == Cell::Plus) out.push_back(i);
    return out;
}

Board apply_round(Board board, int j, std::span<const int> removal, Sign sign) {
    board.apply(j, removal, sign);
    return board;
}

PreservedCounts preserved_counts(const Board& board) {
    return {board.plus_count(), board.minus_count()};
}

Board replay(const Transcript& transcript) {
    if (static_cast<int>(transcript.rounds.size()) > transcript.s)
        throw RuleError("transcript has more rounds than s");
    Board board(transcript.n, transcript.s);
    for (const auto& r : transcript.rounds) board.apply(r.pointed, r.removed, r.placed);
    return board;
}

}  // namespace sprcal::spr

#include "sprcal/spr/oracle.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>
#include <vector>

namespace sprcal::spr {

namespace {

std::uint64_t pow3(int n) {
    std::uint64_t x = 1;
    for (int i = 0; i < n; ++i) x *= 3;
    return x;
}

class Minimax {
public:
    Minimax(int n) : n_(n) {}

    int p_value(std::vector<Cell>& cells, int rounds) {
        int preserved = 0;
        for (Cell c : cells) preserved += c != Cell::Empty;
        if (rounds == 0 || preserved == n_) return preserved;
        const std::uint64_t key = encode(cells) * 64 + static_cast<std::uint64_t>(rounds);
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;
        int best = preserved;  // terminate now
        for (int j = 0; j < n_; ++j)
            if (cells[static_cast<std::size_t>(j)] == Cell::Empty)
                best = std::max(best, l_value(cells, j, rounds));
        memo_.emplace(key, best);
        return best;
    }

private:
    int l_value(std::vector<Cell>& cells, int j, int rounds) {
        std::vector<int> rem;
        for (int i = 0; i < n_; ++i) {
            Cell c = cells[static_cast<std::size_t>(i)];
            if ((i < j && c == Cell::Minus) || (i > j && c == Cell::Plus)) rem.push_back(i);
        }
        int worst = n_ + 1;
        const std::uint32_t subsets = 1U << rem.size();
        for (std::uint32_t mask = 0; mask < subsets; ++mask) {
            std::vector<Cell> next = cells;
            for (std::size_t a = 0; a < rem.size(); ++a)
                if (mask & (1U << a)) next[static_cast<std::size_t>(rem[a])] = Cell::Empty;
            for (Cell sign : {Cell::Plus, Cell::Minus}) {
                next[static_cast<std::size_t>(j)] = sign;
                worst = std::min(worst, p_value(next, rounds - 1));
            }
        }
        return worst;
    }

    std::uint64_t encode(const std::vector<Cell>& cells) const {
        std::uint64_t k = 0;
        for (Cell c : cells) k = k * 3 + static_cast<std::uint64_t>(c);
        return k;
    }

    int n_;
    std::unordered_map<std::uint64_t, int> memo_;
};

// Independent rules on a string board: '.', '+', '-'.
int brute_p(const std::string& b, int rounds);

int brute_l_removals(const std::string& b, std::size_t j, std::size_t from, int rounds) {
    // choose, cell by cell, whether to erase each removable sign
    for (std::size_t i = from; i < b.size(); ++i) {
        bool removable = (i < j && b[i] == '-') || (i > j && b[i] == '+');
        if (!removable) continue;
        std::string without = b;
        without[i] = '.';
        int keep = brute_l_removals(b, j, i + 1, rounds);
        int drop = brute_l_removals(without, j, i + 1, rounds);
        return std::min(keep, drop);
    }
    std::string plus = b, minus = b;
    plus[j] = '+';
    minus[j] = '-';
    return std::min(brute_p(plus, rounds - 1), brute_p(minus, rounds - 1));
}

int brute_p(const std::string& b, int rounds) {
    const int kept = static_cast<int>(std::count_if(b.begin(), b.end(), [](char c) { return c != '.'; }));
    if (rounds == 0) return kept;
    int best = kept;
    for (std::size_t j = 0; j < b.size(); ++j)
        if (b[j] == '.') best = std::max(best, brute_l_removals(b, j, 0, rounds));
    return best;
}

struct BestResponse {
    int t;
    std::uint64_t max_nodes;
    const BestResponseVisitor& visit;
    std::uint64_t nodes = 0;

    int search(const Board& board, const LabelerStrategy& lab, int depth) {
        if (++nodes > max_nodes) throw BudgetExceeded("best-response search exceeded its node budget");
        if (visit) visit(board, lab);
        int best = board.plus_count() + board.minus_count();
        if (depth == t || board.full()) return best;
        for (int j : board.empty_cells()) {
            auto child = lab.clone();
            if (!child) throw std::logic_error("labeler cannot be cloned");
            LabelDecision d = child->label(board, j);
            best = std::max(best, search(apply_round(board, j, d.removal, d.sign), *child, depth + 1));
        }
        return best;
    }
};

}  // namespace

int opt_value(int n, int s, const OracleBudget& budget) {
    if (n < 1 || s < 0) throw std::invalid_argument("opt_value needs n >= 1 and s >= 0");
    if (n > 30 || pow3(n) * static_cast<std::uint64_t>(s + 1) > budget.max_states || s >= 64)
        throw BudgetExceeded("3^n (s+1) exceeds the oracle budget");
    Minimax mm(n);
    std::vector<Cell> cells(static_cast<std::size_t>(n), Cell::Empty);
    return mm.p_value(cells, s);
}

int opt_value_bruteforce(int n, int s) {
    if (n < 1 || s < 0) throw std::invalid_argument("opt_value_bruteforce needs n >= 1 and s >= 0");
    if (n > 4 || s > 5) throw BudgetExceeded("brute force is limited to n <= 4, s <= 5");
    return brute_p(std::string(static_cast<std::size_t>(n), '.'), s);
}

int best_response_value(const LabelerStrategy& labeler, int n, int t, std::uint64_t max_nodes,
                        const BestResponseVisitor& visit) {
    if (n < 1 || t < 0) throw std::invalid_argument("best_response_value needs n >= 1 and t >= 0");
    BestResponse br{t, max_nodes, visit};
    auto start = labeler.clone();
    return br.search(Board(n, t), *start, 0);
}

}  // namespace sprcal::spr

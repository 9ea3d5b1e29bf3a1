#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>

#include "sprcal/spr/game.hpp"

namespace sprcal::spr {

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct OracleBudget {
    // 3^n (s+1) must not exceed this; the default admits n <= 5, s <= 8.
    std::uint64_t max_states = 2187;
};

// Value of SPR(n, s) under optimal play. The game has perfect information,
// so pure minimax over (board, rounds left) gives the value: P maximizes over
// terminating or any empty cell, L minimizes over every removal subset and
// both signs.
int opt_value(int n, int s, const OracleBudget& budget = {});

// Same value by a plain recursive walk over complete strategy trees with its
// own rule code and no memo. Only for tiny n, s.
int opt_value_bruteforce(int n, int s);

// Called on every position the search reaches (the pointer may stop there).
using BestResponseVisitor = std::function<void(const Board&, const LabelerStrategy&)>;

// Max final preserved signs over all pointer decision trees of depth <= t
// against a deterministic labeler, branching on labeler clones.
int best_response_value(const LabelerStrategy& labeler, int n, int t,
                        std::uint64_t max_nodes = 50'000'000,
                        const BestResponseVisitor& visit = {});

}  // namespace sprcal::spr

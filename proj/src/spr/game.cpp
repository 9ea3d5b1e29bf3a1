#include "sprcal/spr/game.hpp"

namespace sprcal::spr {

LabelDecision ConstantLabeler::label(const Board& board, int j) {
    return {removable_cells(board, j), sign_};
}

Transcript play_game(int n, int s, PointerStrategy& pointer, LabelerStrategy& labeler,
                     std::uint64_t rng_seed) {
    Board board(n, s);
    Transcript tr;
    tr.n = n;
    tr.s = s;
    tr.seed = rng_seed;
    tr.pointer_id = pointer.id();
    tr.labeler_id = labeler.id();
    Rng rng(rng_seed);
    pointer.begin_game(n, s);

    while (board.rounds_remaining() > 0 && !board.full()) {
        auto choice = pointer.choose(board, tr, rng);
        if (!choice) break;
        int j = *choice;
        if (j < 1 || j > n || !board.is_empty(j))
            throw ContractViolation("pointer '" + pointer.id() + "' chose unavailable cell " +
                                    std::to_string(j));
        LabelDecision d = labeler.label(board, j);
        try {
            board.apply(j, d.removal, d.sign);
        } catch (const RuleError& e) {
            throw ContractViolation("labeler '" + labeler.id() + "': " + e.what());
        }
        tr.rounds.push_back({j, std::move(d.removal), d.sign});
    }
    tr.terminated_early = static_cast<int>(tr.rounds.size()) < s;
    return tr;
}

}  // namespace sprcal::spr

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sprcal/spr/game.hpp"

namespace sprcal::spr {

// Rademacher tree construction over strings in {-1,0,1}^d with exactly k zeros.
struct TreeParams {
    int d = 1;
    int k = 1;
    std::uint64_t cells() const;  // C(d,k) 2^(d-k)
    int rounds() const;           // C(d,k)
    void validate() const;
    // Largest guaranteed preservation s*2^-k with cells() <= n (ties: larger s).
    static TreeParams fit(int n);
};

std::uint64_t binomial(int n, int k);

// Lexicographic rank (1-based, order -1 < 0 < 1) among strings with k zeros.
std::uint64_t encode_tree_cell(const std::vector<int>& q, int k);
std::vector<int> decode_tree_cell(int d, int k, std::uint64_t rank);

// The binary strings of length d with k zeros, lexicographic.
std::vector<std::string> tree_w_strings(int d, int k);

// Lazily drawn xi_u for prefixes u, memoized for one sample.
class RademacherOracle {
public:
    explicit RademacherOracle(Rng& rng) : rng_(rng) {}
    int operator()(const std::string& prefix);

private:
    Rng& rng_;
    std::unordered_map<std::string, int> memo_;
};

std::vector<int> tree_sample(const TreeParams& p, Rng& rng);
std::vector<int> tree_sample(const TreeParams& p, std::uint64_t seed);
std::string tree_sample_json(const TreeParams& p, const std::vector<int>& cells);

class EnumerationTooLarge : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Exact law of tree_sample, by enumerating every xi assignment.
std::map<std::vector<int>, double> tree_distribution(const TreeParams& p, int max_xi = 20);

struct PreservationReport {
    double min_probability = 1.0;
    int prefixes_checked = 0;
    std::vector<int> worst_prefix;
};

// Minimum over reachable prefixes of both one-sided continuation probabilities.
PreservationReport preservation_probability_exact(const TreeParams& p, int max_xi = 20);

// Plays one tree sample, mapped order-preservingly onto a larger board if
// needed, then terminates. With `repeat`, keeps drawing fresh samples and
// skips occupied targets; a full pass with no empty target falls back to a
// uniformly random empty cell for that round.
class TreePointer : public PointerStrategy {
public:
    explicit TreePointer(TreeParams p, bool repeat = false) : p_(p), repeat_(repeat) { p_.validate(); }
    void begin_game(int n, int s) override;
    std::optional<int> choose(const Board& board, const Transcript& so_far, Rng& rng) override;
    std::string id() const override;
    const std::vector<int>& current_sample() const { return sample_; }

private:
    int map_cell(int c) const;

    TreeParams p_;
    bool repeat_;
    int n_ = 0;
    std::uint64_t tree_n_ = 0;
    std::vector<int> sample_;
    std::size_t pos_ = 0;
    bool drawn_ = false;
};

class UniformRandomPointer : public PointerStrategy {
public:
    std::optional<int> choose(const Board& board, const Transcript& so_far, Rng& rng) override;
    std::string id() const override { return "random"; }
};

// Points where the fewest signs would be removable this round; lowest index on ties.
class GreedyPointer : public PointerStrategy {
public:
    std::optional<int> choose(const Board& board, const Transcript& so_far, Rng& rng) override;
    std::string id() const override { return "greedy"; }
};

// Remove-all labeler that knows the pointer's distribution and picks, each
// round, the sign minimizing the expected number of preserved signs.
class ExhaustiveAdversaryLabeler : public LabelerStrategy {
public:
    ExhaustiveAdversaryLabeler(int n, const std::map<std::vector<int>, double>& law);

    LabelDecision label(const Board& board, int j) override;
    std::string id() const override { return "exhaustive-adversary"; }
    std::unique_ptr<LabelerStrategy> clone() const override {
        return std::make_unique<ExhaustiveAdversaryLabeler>(*this);
    }
    // Exact expected preserved signs under optimal play by this labeler.
    double game_value() const { return value_; }

private:
    struct Node {
        double prob = 0.0;
        std::map<int, int> next;  // cell -> node
    };
    double solve(int node, const Board& board);

    int n_;
    std::vector<Node> nodes_;
    std::map<std::pair<int, std::string>, double> memo_;
    double value_ = 0.0;
    int cursor_ = 0;
};

}  // namespace sprcal::spr

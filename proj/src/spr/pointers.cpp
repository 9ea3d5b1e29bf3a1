#include "sprcal/spr/pointers.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cmath>
#include <set>

#include <json.hpp>

namespace sprcal::spr {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t c = 1;
    for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
    return c;
}

void TreeParams::validate() const {
    if (d < 1 || d > 40) throw std::invalid_argument("tree depth d must be in 1..40");
    if (k < 1 || k > d) throw std::invalid_argument("tree needs 1 <= k <= d");
    if (cells() > static_cast<std::uint64_t>(INT_MAX)) throw std::invalid_argument("tree too large for int cells");
}

std::uint64_t TreeParams::cells() const { return binomial(d, k) << (d - k); }

int TreeParams::rounds() const { return static_cast<int>(binomial(d, k)); }

TreeParams TreeParams::fit(int n) {
    TreeParams best{1, 1};
    double best_val = 0.5;
    for (int d = 1; d <= 30; ++d) {
        for (int k = 1; k <= d; ++k) {
            TreeParams p{d, k};
            if (p.cells() > static_cast<std::uint64_t>(n)) continue;
            double val = p.rounds() * std::ldexp(1.0, -k);
            if (val > best_val || (val == best_val && p.rounds() > best.rounds())) {
                best = p;
                best_val = val;
            }
        }
    }
    return best;
}

namespace {

// strings of a given length with z zeros over {-1,0,1}
std::uint64_t completions(int len, int z) {
    if (z < 0 || z > len) return 0;
    return binomial(len, z) << (len - z);
}

}  // namespace

std::uint64_t encode_tree_cell(const std::vector<int>& q, int k) {
    const int d = static_cast<int>(q.size());
    std::uint64_t rank = 0;
    int zeros_left = k;
    for (int pos = 0; pos < d; ++pos) {
        const int rest = d - pos - 1;
        for (int v = -1; v < q[static_cast<std::size_t>(pos)]; ++v)
            rank += completions(rest, v == 0 ? zeros_left - 1 : zeros_left);
        if (q[static_cast<std::size_t>(pos)] == 0) --zeros_left;
    }
    if (zeros_left != 0) throw std::invalid_argument("string does not have exactly k zeros");
    return rank + 1;
}

std::vector<int> decode_tree_cell(int d, int k, std::uint64_t rank) {
    if (rank < 1 || rank > completions(d, k)) throw std::out_of_range("tree cell out of range");
    std::uint64_t left = rank - 1;
    std::vector<int> q;
    int zeros_left = k;
    for (int pos = 0; pos < d; ++pos) {
        const int rest = d - pos - 1;
        for (int v = -1; v <= 1; ++v) {
            std::uint64_t c = completions(rest, v == 0 ? zeros_left - 1 : zeros_left);
            if (left < c) {
                q.push_back(v);
                if (v == 0) --zeros_left;
                break;
            }
            left -= c;
        }
    }
    return q;
}

std::vector<std::string> tree_w_strings(int d, int k) {
    std::vector<std::string> out;
    std::string w(static_cast<std::size_t>(d), '1');
    std::fill(w.begin(), w.begin() + k, '0');  // smallest: zeros first
    do {
        out.push_back(w);
    } while (std::next_permutation(w.begin(), w.end()));
    return out;
}

int RademacherOracle::operator()(const std::string& prefix) {
    auto it = memo_.find(prefix);
    if (it != memo_.end()) return it->second;
    int x = rng_.rademacher();
    memo_.emplace(prefix, x);
    return x;
}

namespace {

template <class Xi>
std::vector<int> build_sample(const TreeParams& p, const std::vector<std::string>& ws, Xi&& xi) {
    std::vector<int> cells;
    cells.reserve(ws.size());
    std::vector<int> q(static_cast<std::size_t>(p.d));
    for (const auto& w : ws) {
        for (int l = 0; l < p.d; ++l)
            q[static_cast<std::size_t>(l)] = w[static_cast<std::size_t>(l)] == '1' ? xi(w.substr(0, static_cast<std::size_t>(l))) : 0;
        cells.push_back(static_cast<int>(encode_tree_cell(q, p.k)));
    }
    return cells;
}

}  // namespace

std::vector<int> tree_sample(const TreeParams& p, Rng& rng) {
    p.validate();
    RademacherOracle oracle(rng);
    return build_sample(p, tree_w_strings(p.d, p.k), oracle);
}

std::vector<int> tree_sample(const TreeParams& p, std::uint64_t seed) {
    Rng rng(seed);
    return tree_sample(p, rng);
}

std::string tree_sample_json(const TreeParams& p, const std::vector<int>& cells) {
    nlohmann::json o = {{"d", p.d}, {"k", p.k}, {"n", p.cells()}, {"s", p.rounds()}, {"cells", cells}};
    return o.dump();
}

std::map<std::vector<int>, double> tree_distribution(const TreeParams& p, int max_xi) {
    p.validate();
    const auto ws = tree_w_strings(p.d, p.k);
    std::set<std::string> used;
    for (const auto& w : ws)
        for (int l = 0; l < p.d; ++l)
            if (w[static_cast<std::size_t>(l)] == '1') used.insert(w.substr(0, static_cast<std::size_t>(l)));
    const int vars = static_cast<int>(used.size());
    if (vars > max_xi)
        throw EnumerationTooLarge(std::to_string(vars) + " Rademacher variables exceed the enumeration limit");
    std::unordered_map<std::string, int> index;
    for (const auto& u : used) index.emplace(u, static_cast<int>(index.size()));

    std::map<std::vector<int>, double> law;
    const std::uint64_t total = std::uint64_t{1} << vars;
    const double weight = 1.0 / static_cast<double>(total);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        auto xi = [&](const std::string& u) { return ((mask >> index.at(u)) & 1U) ? 1 : -1; };
        law[build_sample(p, ws, xi)] += weight;
    }
    return law;
}

PreservationReport preservation_probability_exact(const TreeParams& p, int max_xi) {
    const auto law = tree_distribution(p, max_xi);
    const std::size_t s = static_cast<std::size_t>(p.rounds());
    PreservationReport rep;
    for (std::size_t i = 1; i <= s; ++i) {
        // prefix -> (mass, mass with all later cells above, mass with all later below)
        std::map<std::vector<int>, std::array<double, 3>> groups;
        for (const auto& [seq, pr] : law) {
            std::vector<int> prefix(seq.begin(), seq.begin() + static_cast<std::ptrdiff_t>(i));
            const int ki = seq[i - 1];
            bool above = true, below = true;
            for (std::size_t j = i; j < s; ++j) {
                above = above && seq[j] > ki;
                below = below && seq[j] < ki;
            }
            auto& g = groups[prefix];
            g[0] += pr;
            if (above) g[1] += pr;
            if (below) g[2] += pr;
        }
        for (const auto& [prefix, g] : groups) {
            ++rep.prefixes_checked;
            double worst = std::min(g[1], g[2]) / g[0];
            if (worst < rep.min_probability) {
                rep.min_probability = worst;
                rep.worst_prefix = prefix;
            }
        }
    }
    return rep;
}

// ------------------------------------------------------------- TreePointer

void TreePointer::begin_game(int n, int) {
    tree_n_ = p_.cells();
    if (static_cast<std::uint64_t>(n) < tree_n_)
        throw ContractViolation("tree pointer needs at least " + std::to_string(tree_n_) + " cells");
    n_ = n;
    sample_.clear();
    pos_ = 0;
    drawn_ = false;
}

int TreePointer::map_cell(int c) const {
    if (static_cast<std::uint64_t>(n_) == tree_n_) return c;
    return static_cast<int>((static_cast<std::uint64_t>(c - 1) * static_cast<std::uint64_t>(n_)) / tree_n_) + 1;
}

std::string TreePointer::id() const {
    return "tree:" + std::to_string(p_.d) + "," + std::to_string(p_.k) + (repeat_ ? "+repeat" : "");
}

std::optional<int> TreePointer::choose(const Board& board, const Transcript&, Rng& rng) {
    if (n_ == 0) begin_game(board.size(), board.rounds_remaining());
    if (board.full()) return std::nullopt;
    if (!drawn_) {
        sample_ = tree_sample(p_, rng);
        drawn_ = true;
    }
    const int passes = repeat_ ? 2 : 1;
    for (int pass = 0; pass < passes; ++pass) {
        while (pos_ < sample_.size()) {
            int c = map_cell(sample_[pos_++]);
            if (board.is_empty(c)) return c;
        }
        if (!repeat_) return std::nullopt;
        sample_ = tree_sample(p_, rng);
        pos_ = 0;
    }
    auto empty = board.empty_cells();
    return empty[rng.below(empty.size())];
}

std::optional<int> UniformRandomPointer::choose(const Board& board, const Transcript&, Rng& rng) {
    if (board.full()) return std::nullopt;
    auto empty = board.empty_cells();
    return empty[rng.below(empty.size())];
}

std::optional<int> GreedyPointer::choose(const Board& board, const Transcript&, Rng&) {
    if (board.full()) return std::nullopt;
    const auto& cells = board.raw();
    const int n = board.size();
    int plus_right = board.plus_count();
    int minus_left = 0;
    int best = -1, best_cost = INT_MAX;
    for (int i = 1; i <= n; ++i) {
        Cell c = cells[static_cast<std::size_t>(i - 1)];
        if (c == Cell::Plus) --plus_right;
        if (c == Cell::Empty && minus_left + plus_right < best_cost) {
            best_cost = minus_left + plus_right;
            best = i;
        }
        if (c == Cell::Minus) ++minus_left;
    }
    return best;
}

// ----------------------------------------------- ExhaustiveAdversaryLabeler

ExhaustiveAdversaryLabeler::ExhaustiveAdversaryLabeler(int n, const std::map<std::vector<int>, double>& law)
    : n_(n) {
    nodes_.push_back({1.0, {}});
    for (const auto& [seq, pr] : law) {
        int cur = 0;
        for (int c : seq) {
            auto it = nodes_[static_cast<std::size_t>(cur)].next.find(c);
            int nxt;
            if (it == nodes_[static_cast<std::size_t>(cur)].next.end()) {
                nxt = static_cast<int>(nodes_.size());
                nodes_[static_cast<std::size_t>(cur)].next.emplace(c, nxt);
                nodes_.push_back({0.0, {}});
            } else {
                nxt = it->second;
            }
            nodes_[static_cast<std::size_t>(nxt)].prob += pr;
            cur = nxt;
        }
    }
    int depth = law.empty() ? 0 : static_cast<int>(law.begin()->first.size());
    value_ = solve(0, Board(n, depth));
}

double ExhaustiveAdversaryLabeler::solve(int node, const Board& board) {
    const Node& nd = nodes_[static_cast<std::size_t>(node)];
    if (nd.next.empty()) return board.plus_count() + board.minus_count();
    auto key = std::make_pair(node, board.to_string() + "#" + std::to_string(board.rounds_remaining()));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    double total = 0.0;
    for (const auto& [cell, child] : nd.next) {
        auto removal = removable_cells(board, cell);
        double best = 1e300;
        for (Sign s : {Sign::Plus, Sign::Minus})
            best = std::min(best, solve(child, apply_round(board, cell, removal, s)));
        total += nodes_[static_cast<std::size_t>(child)].prob / nd.prob * best;
    }
    memo_.emplace(key, total);
    return total;
}

LabelDecision ExhaustiveAdversaryLabeler::label(const Board& board, int j) {
    LabelDecision d;
    d.removal = removable_cells(board, j);
    d.sign = Sign::Plus;
    if (board.size() != n_ || cursor_ < 0) {
        cursor_ = -1;
        return d;
    }
    const auto& next = nodes_[static_cast<std::size_t>(cursor_)].next;
    auto it = next.find(j);
    if (it == next.end()) {
        cursor_ = -1;
        return d;
    }
    double vp = solve(it->second, apply_round(board, j, d.removal, Sign::Plus));
    double vm = solve(it->second, apply_round(board, j, d.removal, Sign::Minus));
    if (vm < vp) d.sign = Sign::Minus;
    cursor_ = it->second;
    return d;
}

}  // namespace sprcal::spr

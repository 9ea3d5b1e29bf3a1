#include "sprcal/spr/labelers.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace sprcal::spr {

// ---------------------------------------------------------------- Recorder

int Recorder::add(Instance inst) {
    int id = static_cast<int>(instances_.size());
    inst.created_round = round_;
    if (inst.parent >= 0) at(inst.parent).children.push_back(id);
    instances_.push_back(std::move(inst));
    return id;
}

void Recorder::record_removals(const std::vector<int>& cells) {
    for (int c : cells) {
        if (c < 0 || static_cast<std::size_t>(c) >= occupant_.size()) continue;
        int pid = occupant_[static_cast<std::size_t>(c)];
        if (pid < 0) continue;
        placements_[static_cast<std::size_t>(pid)].removed_round = round_;
        occupant_[static_cast<std::size_t>(c)] = -1;
    }
}

void Recorder::executed(int id) {
    ++at(id).execution_steps;
    path_.push_back(id);
}

void Recorder::complete(int id) {
    Instance& inst = at(id);
    if (inst.completed_round >= 0) return;
    inst.completed_round = round_;
    for (int c : inst.children) complete(c);
}

void Recorder::finish_placement(int cell, Sign sign) {
    int pid = static_cast<int>(placements_.size());
    placements_.push_back({round_, cell, sign, -1});
    if (static_cast<std::size_t>(cell) >= occupant_.size())
        occupant_.resize(static_cast<std::size_t>(cell) + 1, -1);
    occupant_[static_cast<std::size_t>(cell)] = pid;
    for (int id : path_) at(id).placements.push_back(pid);
    path_.clear();
}

// -------------------------------------------------------------------- IntervalLabeler

IntervalLabeler::IntervalLabeler(int l, int r, int b, Recorder* rec, int parent, int half, bool reinit)
    : l_(l), r_(r), b_(b) {
    if (l > r) throw std::invalid_argument("A needs l <= r");
    if (rec) {
        Recorder::Instance inst;
        inst.kind = Recorder::Kind::Interval;
        inst.l = l;
        inst.r = r;
        inst.b = b;
        inst.parent = parent;
        inst.half = half;
        inst.reinit = reinit;
        id_ = rec->add(std::move(inst));
    }
}

IntervalLabeler::IntervalLabeler(const IntervalLabeler& o)
    : l_(o.l_), r_(o.r_), b_(o.b_), count_(o.count_), pending_M_(o.pending_M_),
      recent_(o.recent_ ? std::make_unique<HalvingLabeler>(*o.recent_) : nullptr), id_(o.id_) {}

IntervalLabeler& IntervalLabeler::operator=(const IntervalLabeler& o) {
    if (this != &o) {
        IntervalLabeler tmp(o);
        *this = std::move(tmp);
    }
    return *this;
}

IntervalLabeler::IntervalLabeler(IntervalLabeler&&) noexcept = default;
IntervalLabeler& IntervalLabeler::operator=(IntervalLabeler&&) noexcept = default;
IntervalLabeler::~IntervalLabeler() = default;

void IntervalLabeler::make_child(int M, Recorder* rec) {
    recent_ = std::make_unique<HalvingLabeler>(l_, r_, b_, M, id_ >= 0 ? rec : nullptr, id_);
}

Sign IntervalLabeler::label(int s, Recorder* rec) {
    if (s < l_ || s > r_) throw std::out_of_range("A.label: cell outside [l, r]");
    if (id_ < 0) rec = nullptr;
    if (is_leaf()) {
        if (rec) rec->executed(id_);
        return sign_of(b_);
    }
    ++count_;
    if (!recent_) make_child(pending_M_, rec);
    std::optional<Sign> sigma = recent_->label(s, rec);
    if (!sigma) {
        if (rec) rec->complete(recent_->id());
        pending_M_ = count_;
        make_child(count_, rec);
        count_ = 1;
        sigma = recent_->label(s, rec);
        if (!sigma) throw std::logic_error("fresh halving instance returned bottom");
    }
    if (rec) rec->executed(id_);
    return *sigma;
}

// -------------------------------------------------------------------- HalvingLabeler

HalvingLabeler::HalvingLabeler(int l, int r, int b, int M, Recorder* rec, int parent)
    : l_(l), r_(r), b_(b), M_(M), m_((l + r) / 2), child_b_{b, b} {
    if (l >= r) throw std::invalid_argument("B needs l < r");
    if (M < 1) throw std::invalid_argument("B needs M >= 1");
    if (rec) {
        Recorder::Instance inst;
        inst.kind = Recorder::Kind::Halving;
        inst.l = l;
        inst.r = r;
        inst.b = b;
        inst.M = M;
        inst.parent = parent;
        id_ = rec->add(std::move(inst));
    }
}

HalvingLabeler::HalvingLabeler(const HalvingLabeler& o)
    : l_(o.l_), r_(o.r_), b_(o.b_), M_(o.M_), m_(o.m_), child_b_(o.child_b_),
      child_reinit_(o.child_reinit_), prev_half_(o.prev_half_), count_(o.count_),
      phase_(o.phase_), id_(o.id_) {
    for (std::size_t h = 0; h < 2; ++h)
        if (o.child_[h]) child_[h] = std::make_unique<IntervalLabeler>(*o.child_[h]);
}

std::optional<Sign> HalvingLabeler::label(int s, Recorder* rec) {
    if (s < l_ || s > r_) throw std::out_of_range("B.label: cell outside [l, r]");
    if (id_ < 0) rec = nullptr;
    const int h = s <= m_ ? 0 : 1;
    const int o = 1 - h;
    auto& same = count_[static_cast<std::size_t>(h)];
    const int other = count_[static_cast<std::size_t>(o)];
    ++same;

    auto move_to = [&](int to) {
        if (rec) rec->at(id_).phase_changes.push_back({rec->round(), phase_, to, same, other});
        phase_ = to;
    };
    auto bottom = [&]() -> std::optional<Sign> {
        if (rec) {
            auto& inst = rec->at(id_);
            inst.returned_bottom = true;
            inst.steps_at_bottom = inst.execution_steps;
        }
        return std::nullopt;
    };

    if (phase_ == 1) {
        if (same == M_ && M_ <= other && other <= 2 * M_) move_to(2);
        else if (same == M_ && other > 2 * M_) move_to(3);
    } else if (phase_ == 2) {
        if (h != prev_half_) return bottom();
        if (same == 2 * other + 1) move_to(3);
    } else if (phase_ == 3) {
        if (same == other / 2 + 1) {
            move_to(4);
            auto& slot = child_[static_cast<std::size_t>(h)];
            if (slot && rec) rec->complete(slot->id());
            slot.reset();
            child_b_[static_cast<std::size_t>(h)] = h == 0 ? b_ + 1 : b_ - 1;
            child_reinit_[static_cast<std::size_t>(h)] = true;
        }
    } else {
        if (same > other) return bottom();
    }

    auto& child = child_[static_cast<std::size_t>(h)];
    if (!child) {
        child = std::make_unique<IntervalLabeler>(h == 0 ? l_ : m_ + 1, h == 0 ? m_ : r_,
                                       child_b_[static_cast<std::size_t>(h)], rec, id_, h,
                                       child_reinit_[static_cast<std::size_t>(h)]);
    }
    Sign sigma = child->label(s, rec);
    prev_half_ = h;
    if (rec) {
        rec->executed(id_);
        auto& inst = rec->at(id_);
        inst.last_phase = phase_;
        inst.last_count = count_;
    }
    return sigma;
}

// ------------------------------------------------------------- RootLabeler

RootLabeler::RootLabeler(int n, bool instrument)
    : n_(n),
      rec_(instrument ? std::optional<Recorder>(std::in_place) : std::nullopt),
      root_(1, n, 0, rec_ ? &*rec_ : nullptr) {}

LabelDecision RootLabeler::label(const Board& board, int j) {
    if (board.size() != n_) throw ContractViolation("root labeler built for a different board size");
    LabelDecision d;
    d.removal = removable_cells(board, j);
    Recorder* rec = rec_ ? &*rec_ : nullptr;
    if (rec) {
        rec->begin_round(round_);
        rec->record_removals(d.removal);
    }
    d.sign = root_.label(j, rec);
    if (rec) rec->finish_placement(j, d.sign);
    ++round_;
    return d;
}

const Recorder& RootLabeler::recorder() const {
    if (!rec_) throw std::logic_error("labeler was built without instrumentation");
    return *rec_;
}

// ---------------------------------------------------------------- queries

int remaining_signs(const Recorder& rec, int instance_id, Sign sign) {
    if (instance_id < 0 || static_cast<std::size_t>(instance_id) >= rec.instances().size())
        throw std::out_of_range("no such labeler instance");
    const auto& inst = rec.at(instance_id);
    int count = 0;
    for (int pid : inst.placements) {
        const auto& p = rec.placements()[static_cast<std::size_t>(pid)];
        if (p.sign != sign) continue;
        bool survives = p.removed_round < 0 ||
                        (inst.completed_round >= 0 && p.removed_round > inst.completed_round);
        if (survives) ++count;
    }
    return count;
}

std::string genealogy_json(const Recorder& rec) {
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t id = 0; id < rec.instances().size(); ++id) {
        const auto& inst = rec.instances()[id];
        nlohmann::json o;
        o["id"] = id;
        o["kind"] = inst.kind == Recorder::Kind::Interval ? "interval" : "halving";
        o["l"] = inst.l;
        o["r"] = inst.r;
        o["b"] = inst.b;
        if (inst.kind == Recorder::Kind::Halving) o["M"] = inst.M;
        o["parent"] = inst.parent;
        o["executionSteps"] = inst.execution_steps;
        o["remainingSigns"] = {{"plus", remaining_signs(rec, static_cast<int>(id), Sign::Plus)},
                               {"minus", remaining_signs(rec, static_cast<int>(id), Sign::Minus)}};
        o["created_round"] = inst.created_round;
        o["completed_round"] = inst.completed_round;
        arr.push_back(std::move(o));
    }
    return arr.dump();
}

StructureReport check_structure(const Recorder& rec) {
    StructureReport rep;
    auto fail = [&](std::size_t id, const std::string& what) {
        rep.violations.push_back("instance " + std::to_string(id) + ": " + what);
    };
    const auto& all = rec.instances();
    for (std::size_t id = 0; id < all.size(); ++id) {
        const auto& x = all[id];
        ++rep.instances_checked;
        if (x.kind == Recorder::Kind::Halving) {
            const auto& p = all.at(static_cast<std::size_t>(x.parent));
            if (p.b != x.b || p.l != x.l || p.r != x.r) fail(id, "B does not inherit its parent's interval and bias");
            if (x.returned_bottom && x.steps_at_bottom < 2 * x.M)
                fail(id, "bottom after " + std::to_string(x.steps_at_bottom) + " steps with M=" + std::to_string(x.M));
            const int c0 = x.last_count[0], c1 = x.last_count[1];
            const bool balanced = c0 > 0 && c1 > 0 && 2 * c0 > c1 && 2 * c1 > c0;
            if (balanced && x.last_phase != 4 && x.execution_steps > 6 * x.M)
                fail(id, "balanced halves but " + std::to_string(x.execution_steps) + " > 6M steps");
            int phase = 1;
            for (const auto& pc : x.phase_changes) {
                if (pc.from != phase || pc.to <= pc.from) fail(id, "phase order broken");
                if (pc.from == 1) {
                    if (pc.count_same != x.M) fail(id, "phase 1 left away from countHalf == M");
                    if (pc.to == 2 && !(x.M <= pc.count_other && pc.count_other <= 2 * x.M))
                        fail(id, "phase 2 entered with unbalanced halves");
                    if (pc.to == 3 && pc.count_other <= 2 * x.M) fail(id, "phase 2 skipped without cause");
                }
                phase = pc.to;
            }
        } else {
            if (x.parent >= 0) {
                const auto& p = all.at(static_cast<std::size_t>(x.parent));
                int expect = p.b;
                if (x.reinit) expect += x.half == 0 ? 1 : -1;
                if (x.b != expect) fail(id, "child bias does not follow the re-initialization rule");
                if (std::abs(x.b - p.b) > 1) fail(id, "child bias jumps by more than one");
                int m = (p.l + p.r) / 2;
                bool span_ok = x.half == 0 ? (x.l == p.l && x.r == m) : (x.l == m + 1 && x.r == p.r);
                if (!span_ok) fail(id, "child interval is not a half of its parent");
            }
            // consecutive B children of one A
            for (std::size_t k = 1; k < x.children.size(); ++k) {
                const auto& prev = all[static_cast<std::size_t>(x.children[k - 1])];
                const auto& next = all[static_cast<std::size_t>(x.children[k])];
                if (next.M != prev.execution_steps + 1) fail(id, "restart guess is not steps + 1");
                if (next.returned_bottom && next.execution_steps < 2 * prev.execution_steps)
                    fail(id, "doubling broken: " + std::to_string(next.execution_steps) + " < 2*" +
                                 std::to_string(prev.execution_steps));
            }
        }
    }
    return rep;
}

double SafetyBound::operator()(int n, int t, int b, Sign sign) const {
    if (t <= 0) return 0.0;
    return C * std::pow(lambda, -static_cast<double>(b * value(sign))) * std::pow(n, alpha) *
           std::pow(t, beta);
}

std::vector<std::string> check_safety(const Recorder& rec, const SafetyBound& bound) {
    std::vector<std::string> out;
    const auto& all = rec.instances();
    for (std::size_t id = 0; id < all.size(); ++id) {
        const auto& x = all[id];
        if (x.kind != Recorder::Kind::Interval) continue;
        for (Sign s : {Sign::Plus, Sign::Minus}) {
            int have = remaining_signs(rec, static_cast<int>(id), s);
            double cap = bound(x.r - x.l + 1, x.execution_steps, x.b, s);
            if (have > cap + 1e-9)
                out.push_back("instance " + std::to_string(id) + " keeps " + std::to_string(have) + " " +
                              symbol(s) + " signs, bound " + std::to_string(cap));
        }
    }
    return out;
}

}  // namespace sprcal::spr

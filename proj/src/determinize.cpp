#include "tdfa/determinize.hpp"

#include <algorithm>
#include <unordered_map>

namespace tdfa {

namespace det {

std::string history(const TagSeq& h, Tag t) {
    std::string out;
    for (Tag u : h) {
        if (u == t) {
            out += 'p';
        } else if (u == -t) {
            out += 'n';
        }
    }
    return out;
}

RegOp regop_rhs(const std::vector<Reg>& r, const std::string& h_t, Tag t, bool multi) {
    if (multi) return RegOp::append(0, r[static_cast<std::size_t>(t - 1)], h_t);
    return RegOp::set(0, h_t.back() == 'p');
}

Closure epsilon_closure(const Tnfa& nfa, const Closure& seeds) {
    Closure stack(seeds.rbegin(), seeds.rend());
    Closure out;
    std::vector<std::uint8_t> done(nfa.size(), 0);
    while (!stack.empty()) {
        Config c = std::move(stack.back());
        stack.pop_back();
        if (done[c.q]) continue;
        done[c.q] = 1;
        const auto& eps = nfa.states[c.q].epsilon;
        for (auto it = eps.rbegin(); it != eps.rend(); ++it) {
            if (done[it->target]) continue;
            Config next{it->target, c.origin, c.r, c.h, c.l};
            if (it->tag != 0) next.l.push_back(it->tag);
            stack.push_back(std::move(next));
        }
        out.push_back(std::move(c));
    }
    std::erase_if(out, [&](const Config& c) { return c.q != nfa.final && !nfa.has_symbol(c.q); });
    return out;
}

Closure step_on_symbol(const Tnfa& nfa, const Closure& state, std::uint8_t a) {
    Closure out;
    for (const Config& c : state) {
        const auto& sym = nfa.states[c.q].symbol;
        if (sym && sym->symbol == a) out.push_back({sym->target, c.q, c.r, c.l, {}});
    }
    return out;
}

std::vector<StateId> precedence(const Closure& c) {
    std::vector<StateId> p;
    p.reserve(c.size());
    for (const Config& x : c) p.push_back(x.q);
    return p;
}

} // namespace det

Determinizer::Determinizer(const Tnfa& nfa, std::vector<bool> multi, std::size_t max_states)
    : nfa_(nfa), max_states_(max_states), ntags_(nfa.ntags), multi_(std::move(multi)) {
    multi_.resize(static_cast<std::size_t>(ntags_), false);
    max_reg_ = 2 * ntags_;
    dfa_.classes = byte_classes(nfa_);
    dfa_.ntags = ntags_;
    dfa_.multi = multi_;
    dfa_.reg_multi.assign(static_cast<std::size_t>(max_reg_) + 1, false);
    for (Tag t = 1; t <= ntags_; ++t) {
        dfa_.final_regs.push_back(ntags_ + t);
        dfa_.reg_multi[static_cast<std::size_t>(t)] = multi_[t - 1];
        dfa_.reg_multi[static_cast<std::size_t>(ntags_ + t)] = multi_[t - 1];
    }
}

det::Closure Determinizer::initial_closure() const {
    std::vector<Reg> r0(static_cast<std::size_t>(ntags_));
    for (Tag t = 1; t <= ntags_; ++t) r0[t - 1] = t;
    return det::epsilon_closure(nfa_, {{nfa_.initial, nfa_.initial, r0, {}, {}}});
}

OpList Determinizer::transition_regops(det::Closure& c, det::RhsCache& v) {
    OpList ops;
    std::vector<Reg> emitted;
    for (det::Config& x : c) {
        for (Tag t = 1; t <= ntags_; ++t) {
            const std::string h_t = det::history(x.h, t);
            if (h_t.empty()) continue;
            const bool multi = multi_[t - 1];
            RegOp rhs = det::regop_rhs(x.r, h_t, t, multi);
            const det::RhsKey key = multi ? det::RhsKey{t, 1, rhs.rhs, h_t} : det::RhsKey{t, 0, rhs.pos ? 1 : 0, {}};
            auto it = v.find(key);
            if (it == v.end()) {
                it = v.emplace(key, ++max_reg_).first;
                dfa_.reg_multi.push_back(multi);
            }
            const Reg i = it->second;
            // A register shared by several outgoing transitions still needs
            // its operation on each of them.
            if (std::find(emitted.begin(), emitted.end(), i) == emitted.end()) {
                emitted.push_back(i);
                rhs.lhs = i;
                ops.push_back(std::move(rhs));
            }
            x.r[t - 1] = i;
        }
    }
    return ops;
}

OpList Determinizer::final_regops(const std::vector<Reg>& r, const TagSeq& l) const {
    OpList ops;
    for (Tag t = 1; t <= ntags_; ++t) {
        const Reg rf = ntags_ + t;
        const std::string l_t = det::history(l, t);
        if (l_t.empty()) {
            ops.push_back(RegOp::copy(rf, r[t - 1]));
        } else {
            RegOp op = det::regop_rhs(r, l_t, t, multi_[t - 1]);
            op.lhs = rf;
            ops.push_back(std::move(op));
        }
    }
    return ops;
}

bool Determinizer::map_states(const det::Closure& s, const det::Closure& old, OpList& ops) const {
    if (s.size() != old.size()) return false;
    for (std::size_t k = 0; k < s.size(); ++k) {
        if (s[k].q != old[k].q || s[k].l != old[k].l) return false;
    }
    std::unordered_map<Reg, Reg> m;
    std::unordered_map<Reg, Reg> m_inv;
    for (std::size_t k = 0; k < s.size(); ++k) {
        for (Tag t = 1; t <= ntags_; ++t) {
            if (!multi_[t - 1] && !det::history(s[k].l, t).empty()) continue;
            const Reg i = s[k].r[t - 1];
            const Reg j = old[k].r[t - 1];
            auto mi = m.find(i);
            auto mj = m_inv.find(j);
            if (mi == m.end() && mj == m_inv.end()) {
                m.emplace(i, j);
                m_inv.emplace(j, i);
            } else if (mi == m.end() || mj == m_inv.end() || mi->second != j || mj->second != i) {
                return false;
            }
        }
    }
    OpList out;
    for (RegOp op : ops) {
        auto it = m.find(op.lhs);
        if (it == m.end()) continue; // value never observed in the target state
        op.lhs = it->second;
        m.erase(it);
        out.push_back(std::move(op));
    }
    std::vector<std::pair<Reg, Reg>> rest(m.begin(), m.end());
    std::sort(rest.begin(), rest.end());
    OpList copies;
    for (const auto& [j, i] : rest) {
        if (j != i) copies.push_back(RegOp::copy(i, j));
    }
    out.insert(out.begin(), copies.begin(), copies.end());
    if (!topological_sort(out)) return false;
    ops = std::move(out);
    return true;
}

std::vector<int> Determinizer::shape_key(const det::Closure& c) const {
    std::vector<int> key;
    for (const det::Config& x : c) {
        key.push_back(static_cast<int>(x.q));
        key.push_back(static_cast<int>(x.l.size()));
        key.insert(key.end(), x.l.begin(), x.l.end());
    }
    return key;
}

std::vector<int> Determinizer::identity_key(const det::Closure& c) const {
    std::vector<int> key = shape_key(c);
    for (const det::Config& x : c) key.insert(key.end(), x.r.begin(), x.r.end());
    return key;
}

int Determinizer::add_state(const det::Closure& c, OpList& ops) {
    det::Closure kernel;
    kernel.reserve(c.size());
    for (const det::Config& x : c) kernel.push_back({x.q, 0, x.r, {}, x.l});

    std::vector<int> id_key = identity_key(kernel);
    if (auto it = by_identity_.find(id_key); it != by_identity_.end()) return it->second;

    std::vector<int> sh_key = shape_key(kernel);
    auto& candidates = by_shape_[sh_key];
    for (int cand : candidates) {
        OpList mapped = ops;
        if (map_states(kernel, kernels_[static_cast<std::size_t>(cand)], mapped)) {
            ops = std::move(mapped);
            return cand;
        }
    }

    if (kernels_.size() >= max_states_) {
        throw ResourceError("determinization exceeded " + std::to_string(max_states_) + " states");
    }
    const int id = static_cast<int>(kernels_.size());
    TdfaState st;
    st.next.resize(dfa_.classes.count());
    for (const det::Config& x : kernel) {
        if (x.q == nfa_.final) {
            st.final = true;
            st.final_ops = final_regops(x.r, x.l);
        }
    }
    dfa_.states.push_back(std::move(st));
    kernels_.push_back(std::move(kernel));
    by_identity_.emplace(std::move(id_key), id);
    candidates.push_back(id);
    return id;
}

Tdfa Determinizer::run() {
    OpList none;
    dfa_.initial = add_state(initial_closure(), none);
    for (std::size_t s = 0; s < kernels_.size(); ++s) {
        det::RhsCache v;
        for (std::size_t cls = 0; cls < dfa_.classes.count(); ++cls) {
            const det::Closure kernel = kernels_[s];
            const det::Closure b = det::step_on_symbol(nfa_, kernel, dfa_.classes.representative[cls]);
            if (b.empty()) continue;
            det::Closure c = det::epsilon_closure(nfa_, b);
            if (c.empty()) continue;
            OpList ops = transition_regops(c, v);
            const int target = add_state(c, ops);
            dfa_.states[s].next[cls] = {target, std::move(ops)};
        }
    }
    dfa_.nregs = max_reg_;
    dfa_.reg_multi.resize(static_cast<std::size_t>(max_reg_) + 1, false);
    return dfa_;
}

Tdfa determinize(const Tnfa& nfa, const std::vector<bool>& multi, std::size_t max_states) {
    return Determinizer(nfa, multi, max_states).run();
}

} // namespace tdfa

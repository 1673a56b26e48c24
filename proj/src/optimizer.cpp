#include "tdfa/optimizer.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <sstream>

namespace tdfa {

// ---- Fallback ----------------------------------------------------------------

FallbackInfo find_fallback_states(const Tdfa& dfa) {
    const std::size_t n = dfa.states.size();
    FallbackInfo info;
    info.fallback.assign(n, false);
    info.clobbered.resize(n);
    info.region.resize(n);
    for (std::size_t s = 0; s < n; ++s) {
        if (!dfa.states[s].final) continue;
        std::vector<bool> region(n, false);
        std::vector<int> stack{static_cast<int>(s)};
        std::set<Reg> clobbered;
        bool risky = false;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (const TdfaTransition& t : dfa.states[static_cast<std::size_t>(u)].next) {
                if (t.target == kNoState || dfa.states[static_cast<std::size_t>(t.target)].final) continue;
                risky = true;
                for (const RegOp& op : t.ops) clobbered.insert(op.lhs);
                if (!region[static_cast<std::size_t>(t.target)]) {
                    region[static_cast<std::size_t>(t.target)] = true;
                    stack.push_back(t.target);
                }
            }
        }
        if (risky) {
            info.fallback[s] = true;
            info.clobbered[s] = std::move(clobbered);
            info.region[s] = std::move(region);
        }
    }
    return info;
}

void add_fallback_regops(Tdfa& dfa) {
    const FallbackInfo info = find_fallback_states(dfa);
    for (std::size_t s = 0; s < dfa.states.size(); ++s) {
        if (!info.fallback[s]) continue;
        TdfaState& st = dfa.states[s];
        OpList backups;
        OpList psi;
        for (const RegOp& op : st.final_ops) {
            const bool clobbered = op.reads() && info.clobbered[s].count(op.rhs) != 0;
            if (clobbered && op.kind == RegOp::Kind::Append) {
                backups.push_back(RegOp::copy(op.lhs, op.rhs));
                psi.push_back(RegOp::append(op.lhs, op.lhs, op.history));
            } else if (clobbered) {
                backups.push_back(RegOp::copy(op.lhs, op.rhs));
            } else {
                psi.push_back(op);
            }
        }
        // Backups read the values that the transition is about to overwrite.
        for (TdfaTransition& t : st.next) {
            if (t.target == kNoState || dfa.states[static_cast<std::size_t>(t.target)].final) continue;
            t.ops.insert(t.ops.begin(), backups.begin(), backups.end());
        }
        st.fallback = true;
        st.fallback_ops = std::move(psi);
    }
}

// ---- CFG ---------------------------------------------------------------------

namespace {

using Row = std::vector<bool>;

void live_through(const OpList& ops, Row& live) {
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->kind == RegOp::Kind::Set) {
            live[it->lhs] = false;
        } else if (live[it->lhs]) {
            live[it->lhs] = false;
            live[it->rhs] = true;
        }
    }
}

bool is_self_copy(const RegOp& op) { return op.kind == RegOp::Kind::Copy && op.lhs == op.rhs; }

} // namespace

RegCfg build_cfg(const Tdfa& dfa) {
    RegCfg g;
    g.nregs = dfa.nregs;
    g.final_regs = dfa.final_regs;
    g.reg_multi = dfa.reg_multi;
    g.reg_multi.resize(static_cast<std::size_t>(g.nregs) + 1, false);

    const std::size_t n = dfa.states.size();
    const std::size_t ncls = dfa.classes.count();
    std::vector<std::vector<int>> trans_block(n, std::vector<int>(ncls, -1));
    std::vector<int> final_block(n, -1);
    std::vector<int> fallback_block(n, -1);

    g.blocks.push_back({CfgBlock::Kind::Basic, kNoState, -1, {}, {}});
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t c = 0; c < ncls; ++c) {
            const TdfaTransition& t = dfa.states[s].next[c];
            if (t.target == kNoState || t.ops.empty()) continue;
            trans_block[s][c] = static_cast<int>(g.blocks.size());
            g.blocks.push_back({CfgBlock::Kind::Basic, static_cast<int>(s), static_cast<int>(c), t.ops, {}});
        }
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!dfa.states[s].final) continue;
        final_block[s] = static_cast<int>(g.blocks.size());
        g.blocks.push_back({CfgBlock::Kind::Final, static_cast<int>(s), -1, dfa.states[s].final_ops, {}});
    }
    for (std::size_t s = 0; s < n; ++s) {
        if (!dfa.states[s].fallback) continue;
        fallback_block[s] = static_cast<int>(g.blocks.size());
        g.blocks.push_back({CfgBlock::Kind::Fallback, static_cast<int>(s), -1, dfa.states[s].fallback_ops, {}});
    }

    // Blocks reachable from a state along operation-free transitions.
    auto reach = [&](int v) {
        std::vector<int> out;
        std::vector<bool> seen(n, false);
        std::vector<int> stack{v};
        seen[static_cast<std::size_t>(v)] = true;
        while (!stack.empty()) {
            const auto u = static_cast<std::size_t>(stack.back());
            stack.pop_back();
            if (final_block[u] >= 0) out.push_back(final_block[u]);
            for (std::size_t c = 0; c < ncls; ++c) {
                const TdfaTransition& t = dfa.states[u].next[c];
                if (t.target == kNoState) continue;
                if (!t.ops.empty()) {
                    out.push_back(trans_block[u][c]);
                } else if (!seen[static_cast<std::size_t>(t.target)]) {
                    seen[static_cast<std::size_t>(t.target)] = true;
                    stack.push_back(t.target);
                }
            }
        }
        return out;
    };

    const FallbackInfo fb = find_fallback_states(dfa);
    for (CfgBlock& b : g.blocks) {
        if (b.kind != CfgBlock::Kind::Basic) continue;
        const int end = b.state == kNoState
                            ? dfa.initial
                            : dfa.states[static_cast<std::size_t>(b.state)].next[static_cast<std::size_t>(b.cls)].target;
        b.succ = reach(end);
        if (b.state != kNoState && !dfa.states[static_cast<std::size_t>(end)].final) {
            for (std::size_t f = 0; f < n; ++f) {
                if (fallback_block[f] < 0 || !fb.fallback[f]) continue;
                const auto u = static_cast<std::size_t>(b.state);
                if (u == f || fb.region[f][u]) b.succ.push_back(fallback_block[f]);
            }
        }
        std::sort(b.succ.begin(), b.succ.end());
        b.succ.erase(std::unique(b.succ.begin(), b.succ.end()), b.succ.end());
    }
    return g;
}

void apply_cfg(const RegCfg& g, Tdfa& dfa) {
    for (const CfgBlock& b : g.blocks) {
        if (b.state == kNoState) continue;
        TdfaState& st = dfa.states[static_cast<std::size_t>(b.state)];
        switch (b.kind) {
        case CfgBlock::Kind::Basic: st.next[static_cast<std::size_t>(b.cls)].ops = b.ops; break;
        case CfgBlock::Kind::Final: st.final_ops = b.ops; break;
        case CfgBlock::Kind::Fallback: st.fallback_ops = b.ops; break;
        }
    }
    dfa.nregs = g.nregs;
    dfa.final_regs = g.final_regs;
    dfa.reg_multi = g.reg_multi;
}

// ---- Passes ------------------------------------------------------------------

Renaming compaction(const RegCfg& g) {
    const auto size = static_cast<std::size_t>(g.nregs) + 1;
    std::vector<bool> used(size, false);
    for (Reg r : g.final_regs) used[r] = true;
    for (const CfgBlock& b : g.blocks) {
        for (const RegOp& op : b.ops) {
            used[op.lhs] = true;
            if (op.reads()) used[op.rhs] = true;
        }
    }
    Renaming v(size, 0);
    Reg next = 0;
    for (std::size_t i = 1; i < size; ++i) {
        if (used[i]) v[i] = ++next;
    }
    return v;
}

void renaming(RegCfg& g, const Renaming& v) {
    Reg max = 0;
    for (Reg r : v) max = std::max(max, r);
    std::vector<bool> multi(static_cast<std::size_t>(max) + 1, false);
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (v[i] != 0 && i < g.reg_multi.size() && g.reg_multi[i]) multi[static_cast<std::size_t>(v[i])] = true;
    }
    for (CfgBlock& b : g.blocks) {
        for (RegOp& op : b.ops) {
            op.lhs = v[op.lhs];
            if (op.reads()) op.rhs = v[op.rhs];
        }
        std::erase_if(b.ops, is_self_copy);
    }
    for (Reg& r : g.final_regs) r = v[r];
    g.nregs = max;
    g.reg_multi = std::move(multi);
}

namespace {

std::vector<int> post_order(const RegCfg& g) {
    std::vector<int> order;
    std::vector<bool> seen(g.blocks.size(), false);
    struct Frame {
        int b;
        std::size_t next;
    };
    auto visit = [&](int root) {
        std::vector<Frame> stack{{root, 0}};
        seen[static_cast<std::size_t>(root)] = true;
        while (!stack.empty()) {
            Frame& f = stack.back();
            const auto& succ = g.blocks[static_cast<std::size_t>(f.b)].succ;
            if (f.next < succ.size()) {
                const int s = succ[f.next++];
                if (!seen[static_cast<std::size_t>(s)]) {
                    seen[static_cast<std::size_t>(s)] = true;
                    stack.push_back({s, 0});
                }
            } else {
                order.push_back(f.b);
                stack.pop_back();
            }
        }
    };
    visit(0);
    for (std::size_t b = 0; b < g.blocks.size(); ++b) {
        if (!seen[b]) visit(static_cast<int>(b));
    }
    return order;
}

} // namespace

Liveness liveness_analysis(const RegCfg& g) {
    const auto size = static_cast<std::size_t>(g.nregs) + 1;
    Liveness live(g.blocks.size(), Row(size, false));
    for (std::size_t b = 0; b < g.blocks.size(); ++b) {
        if (g.blocks[b].kind == CfgBlock::Kind::Basic) continue;
        for (Reg r : g.final_regs) live[b][r] = true;
    }
    const std::vector<int> order = post_order(g);
    for (bool fix = false; !fix;) {
        fix = true;
        for (int bi : order) {
            const CfgBlock& b = g.blocks[static_cast<std::size_t>(bi)];
            if (b.kind != CfgBlock::Kind::Basic) continue;
            Row lb = live[static_cast<std::size_t>(bi)];
            for (int s : b.succ) {
                Row ls = live[static_cast<std::size_t>(s)];
                live_through(g.blocks[static_cast<std::size_t>(s)].ops, ls);
                for (std::size_t i = 0; i < size; ++i) lb[i] = lb[i] || ls[i];
            }
            if (lb != live[static_cast<std::size_t>(bi)]) {
                live[static_cast<std::size_t>(bi)] = std::move(lb);
                fix = false;
            }
        }
    }
    // Registers needed by a fallback block stay live on every block that
    // may fall through to it.
    for (std::size_t fb = 0; fb < g.blocks.size(); ++fb) {
        if (g.blocks[fb].kind != CfgBlock::Kind::Fallback) continue;
        Row lb = live[fb];
        for (const RegOp& op : g.blocks[fb].ops) lb[op.lhs] = false;
        for (const RegOp& op : g.blocks[fb].ops) {
            if (op.reads()) lb[op.rhs] = true;
        }
        for (std::size_t s = 0; s < g.blocks.size(); ++s) {
            const auto& succ = g.blocks[s].succ;
            if (std::find(succ.begin(), succ.end(), static_cast<int>(fb)) == succ.end()) continue;
            for (std::size_t i = 0; i < size; ++i) live[s][i] = live[s][i] || lb[i];
        }
    }
    return live;
}

void dead_code_elimination(RegCfg& g, const Liveness& live) {
    for (std::size_t bi = 0; bi < g.blocks.size(); ++bi) {
        CfgBlock& b = g.blocks[bi];
        if (b.kind != CfgBlock::Kind::Basic) continue;
        Row lb = live[bi];
        OpList kept;
        for (auto it = b.ops.rbegin(); it != b.ops.rend(); ++it) {
            if (!lb[it->lhs]) continue;
            lb[it->lhs] = false;
            if (it->reads()) lb[it->rhs] = true;
            kept.push_back(*it);
        }
        std::reverse(kept.begin(), kept.end());
        b.ops = std::move(kept);
    }
}

Interference interference_analysis(const RegCfg& g, const Liveness& live) {
    const auto size = static_cast<std::size_t>(g.nregs) + 1;
    Interference inter(size, Row(size, false));
    for (std::size_t bi = 0; bi < g.blocks.size(); ++bi) {
        const OpList& ops = g.blocks[bi].ops;
        // liveness right after each operation
        std::vector<Row> after(ops.size());
        Row cur = live[bi];
        for (std::size_t k = ops.size(); k-- > 0;) {
            after[k] = cur;
            live_through({ops[k]}, cur);
        }
        // symbolic values: register ids for entry values, -1/-2 for p/n,
        // fresh ids for appended histories
        std::vector<long> value(size);
        for (std::size_t r = 0; r < size; ++r) value[r] = static_cast<long>(r);
        std::map<std::pair<long, std::string>, long> appended;
        long fresh = static_cast<long>(size);
        for (std::size_t k = 0; k < ops.size(); ++k) {
            const RegOp& op = ops[k];
            long v = 0;
            switch (op.kind) {
            case RegOp::Kind::Set: v = op.pos ? -1 : -2; break;
            case RegOp::Kind::Copy: v = value[op.rhs]; break;
            case RegOp::Kind::Append: {
                auto [it, added] = appended.emplace(std::make_pair(value[op.rhs], op.history), fresh);
                if (added) ++fresh;
                v = it->second;
                break;
            }
            }
            value[op.lhs] = v;
            for (std::size_t x = 1; x < size; ++x) {
                if (after[k][x] && x != static_cast<std::size_t>(op.lhs) && value[x] != v) {
                    inter[op.lhs][x] = inter[x][op.lhs] = true;
                }
            }
        }
    }
    for (std::size_t i = 1; i < size; ++i) {
        for (std::size_t j = 1; j < size; ++j) {
            if (g.reg_multi[i] != g.reg_multi[j]) inter[i][j] = true;
        }
    }
    return inter;
}

Renaming register_allocation(const RegCfg& g, const Interference& inter) {
    const auto size = static_cast<std::size_t>(g.nregs) + 1;
    std::vector<Reg> rep(size, -1);
    std::vector<std::vector<Reg>> cls(size);
    auto fits = [&](const std::vector<Reg>& members, Reg r) {
        return std::none_of(members.begin(), members.end(), [&](Reg k) { return inter[k][r]; });
    };
    for (const CfgBlock& b : g.blocks) {
        for (const RegOp& op : b.ops) {
            if (!op.reads() || op.lhs == op.rhs) continue;
            const Reg i = op.lhs;
            const Reg j = op.rhs;
            const Reg x = rep[i];
            const Reg y = rep[j];
            if (x == -1 && y == -1) {
                if (!inter[i][j]) {
                    rep[i] = rep[j] = i;
                    cls[i] = {i, j};
                }
            } else if (x != -1 && y == -1) {
                if (fits(cls[x], j)) {
                    rep[j] = x;
                    cls[x].push_back(j);
                }
            } else if (x == -1 && y != -1) {
                if (fits(cls[y], i)) {
                    rep[i] = y;
                    cls[y].push_back(i);
                }
            }
        }
    }
    for (std::size_t i = 1; i < size; ++i) {
        if (rep[i] != static_cast<Reg>(i)) continue;
        for (std::size_t j = i + 1; j < size; ++j) {
            if (rep[j] != static_cast<Reg>(j)) continue;
            const bool disjoint = std::all_of(cls[j].begin(), cls[j].end(), [&](Reg k) { return fits(cls[i], k); });
            if (!disjoint) continue;
            for (Reg k : cls[j]) rep[k] = static_cast<Reg>(i);
            cls[i].insert(cls[i].end(), cls[j].begin(), cls[j].end());
            cls[j].clear();
        }
    }
    for (std::size_t i = 1; i < size; ++i) {
        if (rep[i] != -1) continue;
        bool placed = false;
        for (std::size_t j = 1; j < size && !placed; ++j) {
            if (rep[j] == static_cast<Reg>(j) && fits(cls[j], static_cast<Reg>(i))) {
                rep[i] = static_cast<Reg>(j);
                cls[j].push_back(static_cast<Reg>(i));
                placed = true;
            }
        }
        if (!placed) {
            rep[i] = static_cast<Reg>(i);
            cls[i] = {static_cast<Reg>(i)};
        }
    }
    Renaming v(size, 0);
    Reg n = 0;
    for (std::size_t i = 1; i < size; ++i) {
        if (rep[i] != static_cast<Reg>(i)) continue;
        ++n;
        for (Reg k : cls[i]) v[k] = n;
    }
    return v;
}

void normalization(RegCfg& g) {
    for (CfgBlock& b : g.blocks) {
        OpList out;
        std::size_t k = 0;
        while (k < b.ops.size()) {
            std::size_t e = k;
            while (e < b.ops.size() && b.ops[e].kind == b.ops[k].kind) ++e;
            OpList range(b.ops.begin() + static_cast<long>(k), b.ops.begin() + static_cast<long>(e));
            remove_duplicates(range);
            switch (b.ops[k].kind) {
            case RegOp::Kind::Set:
                std::stable_sort(range.begin(), range.end(), [](const RegOp& a, const RegOp& c) {
                    return std::make_pair(a.lhs, a.pos) < std::make_pair(c.lhs, c.pos);
                });
                break;
            case RegOp::Kind::Copy: {
                OpList sorted = range;
                if (topological_sort(sorted)) range = std::move(sorted);
                break;
            }
            case RegOp::Kind::Append: break;
            }
            out.insert(out.end(), range.begin(), range.end());
            k = e;
        }
        b.ops = std::move(out);
    }
}

OptimizeReport optimize(Tdfa& dfa, const OptimizeOptions& opts) {
    OptimizeReport rep;
    RegCfg g = build_cfg(dfa);
    rep.blocks = g.blocks.size();
    rep.registers_initial = g.nregs;
    auto hook = [&](const char* name, const Liveness* l, const Interference* i) {
        if (opts.hook) opts.hook(name, g, l, i);
    };
    hook("cfg", nullptr, nullptr);
    renaming(g, compaction(g));
    rep.registers_compacted = g.nregs;
    hook("compaction", nullptr, nullptr);
    for (int round = 0; round < opts.rounds; ++round) {
        const Liveness live = liveness_analysis(g);
        hook("liveness", &live, nullptr);
        dead_code_elimination(g, live);
        hook("dce", &live, nullptr);
        const Interference inter = interference_analysis(g, live);
        hook("interference", &live, &inter);
        renaming(g, register_allocation(g, inter));
        hook("allocation", nullptr, nullptr);
        if (!opts.skip_normalization) normalization(g);
        hook("normalization", nullptr, nullptr);
    }
    rep.registers_final = g.nregs;
    apply_cfg(g, dfa);
    return rep;
}

// ---- Minimization -------------------------------------------------------------

Tdfa minimize(const Tdfa& dfa) {
    const std::size_t n = dfa.states.size();
    const std::size_t ncls = dfa.classes.count();
    std::map<std::string, int> interned;
    auto ops_id = [&](const OpList& ops) {
        return interned.emplace(to_string(ops), static_cast<int>(interned.size())).first->second;
    };

    std::vector<int> part(n);
    std::size_t count = 0;
    {
        std::map<std::vector<int>, int> ids;
        for (std::size_t s = 0; s < n; ++s) {
            const TdfaState& st = dfa.states[s];
            std::vector<int> key{st.final, st.final ? ops_id(st.final_ops) : -1, st.fallback,
                                 st.fallback ? ops_id(st.fallback_ops) : -1};
            part[s] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
        }
        count = ids.size();
    }
    for (;;) {
        std::map<std::vector<int>, int> ids;
        std::vector<int> next(n);
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<int> key{part[s]};
            for (const TdfaTransition& t : dfa.states[s].next) {
                key.push_back(t.target == kNoState ? -1 : part[static_cast<std::size_t>(t.target)]);
                key.push_back(ops_id(t.ops));
            }
            next[s] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
        }
        part = std::move(next);
        if (ids.size() == count) break;
        count = ids.size();
    }

    // Number blocks by their smallest member.
    std::vector<int> block_id(count, -1);
    std::vector<std::size_t> members;
    int next_id = 0;
    for (std::size_t s = 0; s < n; ++s) {
        if (block_id[static_cast<std::size_t>(part[s])] == -1) {
            block_id[static_cast<std::size_t>(part[s])] = next_id++;
            members.push_back(s);
        }
    }
    Tdfa out = dfa;
    out.states.clear();
    for (std::size_t s : members) {
        TdfaState st = dfa.states[s];
        for (TdfaTransition& t : st.next) {
            if (t.target != kNoState) t.target = block_id[static_cast<std::size_t>(part[static_cast<std::size_t>(t.target)])];
        }
        out.states.push_back(std::move(st));
    }
    out.initial = block_id[static_cast<std::size_t>(part[static_cast<std::size_t>(dfa.initial)])];
    (void)ncls;
    return out;
}

// ---- Dumps --------------------------------------------------------------------

namespace {

std::string live_set(const Row& row) {
    std::string s;
    for (std::size_t r = 1; r < row.size(); ++r) {
        if (!row[r]) continue;
        if (!s.empty()) s += ' ';
        s += 'r' + std::to_string(r);
    }
    return s;
}

const char* kind_name(CfgBlock::Kind k) {
    switch (k) {
    case CfgBlock::Kind::Basic: return "basic";
    case CfgBlock::Kind::Final: return "final";
    case CfgBlock::Kind::Fallback: return "fallback";
    }
    return "";
}

} // namespace

std::string to_dot(const RegCfg& g, const Liveness* live) {
    std::ostringstream os;
    os << "digraph cfg {\n  node [shape=box, fontname=monospace];\n";
    for (std::size_t b = 0; b < g.blocks.size(); ++b) {
        const CfgBlock& blk = g.blocks[b];
        os << "  " << b << " [label=\"" << b << ": " << kind_name(blk.kind);
        if (blk.state == kNoState) {
            os << " (start)";
        } else {
            os << " s" << blk.state;
        }
        if (live) os << "\\nlive: {" << live_set((*live)[b]) << "}";
        for (const RegOp& op : blk.ops) os << "\\n" << to_string(op);
        os << "\"];\n";
        for (int s : blk.succ) os << "  " << b << " -> " << s << ";\n";
    }
    os << "}\n";
    return os.str();
}

std::string liveness_grid(const RegCfg& g, const Liveness& live) {
    std::ostringstream os;
    os << "block";
    for (int r = 1; r <= g.nregs; ++r) os << ' ' << r;
    os << '\n';
    for (std::size_t b = 0; b < live.size(); ++b) {
        os << b;
        for (int r = 1; r <= g.nregs; ++r) {
            os << ' ' << std::string(std::to_string(r).size() - 1, ' ') << (live[b][r] ? '*' : '.');
        }
        os << '\n';
    }
    return os.str();
}

std::string interference_grid(const Interference& inter) {
    std::ostringstream os;
    const std::size_t n = inter.empty() ? 0 : inter.size() - 1;
    const std::size_t w = std::to_string(n).size();
    os << std::string(w, ' ');
    for (std::size_t j = 1; j <= n; ++j) os << ' ' << std::string(w - std::to_string(j).size(), ' ') << j;
    os << '\n';
    for (std::size_t i = 1; i <= n; ++i) {
        os << std::string(w - std::to_string(i).size(), ' ') << i;
        for (std::size_t j = 1; j <= n; ++j) os << ' ' << std::string(w - 1, ' ') << (inter[i][j] ? '*' : '.');
        os << '\n';
    }
    return os.str();
}

} // namespace tdfa

#include "tdfa/regops.hpp"

#include <algorithm>
#include <unordered_map>

namespace tdfa {

std::string to_string(const RegOp& op) {
    std::string s = "r" + std::to_string(op.lhs) + " ← ";
    switch (op.kind) {
    case RegOp::Kind::Set: s += op.pos ? "p" : "n"; break;
    case RegOp::Kind::Copy: s += "r" + std::to_string(op.rhs); break;
    case RegOp::Kind::Append: s += "r" + std::to_string(op.rhs) + "·" + op.history; break;
    }
    return s;
}

std::string to_string(const OpList& ops) {
    std::string s;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        if (i) s += ", ";
        s += to_string(ops[i]);
    }
    return s;
}

bool topological_sort(OpList& ops) {
    // in-degree: number of pending operations that read a register
    std::unordered_map<Reg, int> indeg;
    for (const RegOp& op : ops) {
        if (op.reads()) ++indeg[op.rhs];
    }
    OpList sorted;
    sorted.reserve(ops.size());
    std::vector<bool> done(ops.size(), false);
    std::size_t left = ops.size();
    bool nontrivial_cycle = false;
    while (left > 0) {
        bool progress = false;
        for (std::size_t k = 0; k < ops.size(); ++k) {
            if (done[k]) continue;
            const RegOp& op = ops[k];
            auto it = indeg.find(op.lhs);
            if (it != indeg.end() && it->second > 0) continue;
            done[k] = true;
            --left;
            progress = true;
            sorted.push_back(op);
            if (op.reads()) --indeg[op.rhs];
        }
        if (!progress) {
            for (std::size_t k = 0; k < ops.size(); ++k) {
                if (done[k]) continue;
                if (!(ops[k].reads() && ops[k].rhs == ops[k].lhs)) nontrivial_cycle = true;
                sorted.push_back(ops[k]);
            }
            break;
        }
    }
    ops = std::move(sorted);
    return !nontrivial_cycle;
}

void remove_duplicates(OpList& ops) {
    OpList out;
    out.reserve(ops.size());
    for (const RegOp& op : ops) {
        if (std::find(out.begin(), out.end(), op) == out.end()) out.push_back(op);
    }
    ops = std::move(out);
}

void run_naive(const OpList& ops, std::vector<NaiveRegister>& regs, Offset pos) {
    for (const RegOp& op : ops) {
        if (static_cast<std::size_t>(std::max(op.lhs, op.rhs)) >= regs.size()) {
            regs.resize(static_cast<std::size_t>(std::max(op.lhs, op.rhs)) + 1);
        }
        switch (op.kind) {
        case RegOp::Kind::Set:
            regs[op.lhs].values = {op.pos ? pos : kNil};
            break;
        case RegOp::Kind::Copy:
            regs[op.lhs] = regs[op.rhs];
            break;
        case RegOp::Kind::Append: {
            NaiveRegister r = regs[op.rhs];
            for (char c : op.history) r.values.push_back(c == 'p' ? pos : kNil);
            regs[op.lhs] = std::move(r);
            break;
        }
        }
    }
}

} // namespace tdfa

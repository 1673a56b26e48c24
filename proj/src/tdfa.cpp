#include "tdfa/tdfa.hpp"

#include <set>
#include <sstream>

#include "json.hpp"

namespace tdfa {

using nlohmann::json;

ByteClasses byte_classes(const Tnfa& nfa) {
    std::array<bool, 256> used{};
    for (const auto& s : nfa.states) {
        if (s.symbol) used[s.symbol->symbol] = true;
    }
    ByteClasses bc;
    int dead = -1;
    for (int b = 0; b < 256; ++b) {
        if (used[b]) {
            bc.of[b] = static_cast<std::uint16_t>(bc.representative.size());
            bc.representative.push_back(static_cast<std::uint8_t>(b));
        } else {
            if (dead < 0) {
                dead = static_cast<int>(bc.representative.size());
                bc.representative.push_back(static_cast<std::uint8_t>(b));
            }
            bc.of[b] = static_cast<std::uint16_t>(dead);
        }
    }
    return bc;
}

TdfaStats stats(const Tdfa& dfa) {
    TdfaStats st;
    st.states = dfa.states.size();
    std::set<Reg> regs;
    auto count = [&](const OpList& ops) {
        st.operations += ops.size();
        for (const RegOp& op : ops) {
            regs.insert(op.lhs);
            if (op.reads()) regs.insert(op.rhs);
        }
    };
    for (const TdfaState& s : dfa.states) {
        if (s.final) ++st.finals;
        for (const TdfaTransition& t : s.next) {
            if (t.target == kNoState) continue;
            ++st.transitions;
            count(t.ops);
        }
        if (s.final) count(s.final_ops);
        if (s.fallback) count(s.fallback_ops);
    }
    st.registers = regs.size();
    st.max_register = regs.empty() ? 0 : static_cast<std::size_t>(*regs.rbegin());
    return st;
}

std::string stats_json(const TdfaStats& s) {
    json j = {{"states", s.states},         {"finals", s.finals},
              {"transitions", s.transitions}, {"registers", s.registers},
              {"max_register", s.max_register}, {"operations", s.operations}};
    return j.dump();
}

namespace {

std::string byte_label(std::uint8_t c) {
    if (c >= 0x21 && c < 0x7f && c != '"' && c != '\\') return std::string(1, static_cast<char>(c));
    char buf[8];
    std::snprintf(buf, sizeof buf, "\\\\x%02X", c);
    return buf;
}

std::string class_label(const ByteClasses& bc, std::size_t cls) {
    std::string label;
    int first = -1;
    int last = -1;
    auto flush = [&] {
        if (first < 0) return;
        if (!label.empty()) label += ",";
        label += byte_label(static_cast<std::uint8_t>(first));
        if (last > first) label += "-" + byte_label(static_cast<std::uint8_t>(last));
    };
    for (int b = 0; b < 256; ++b) {
        if (bc.of[b] != cls) continue;
        if (first >= 0 && b == last + 1) {
            last = b;
        } else {
            flush();
            first = last = b;
        }
    }
    flush();
    return label;
}

std::string ops_label(const OpList& ops) {
    std::string s;
    for (const RegOp& op : ops) s += "\\n" + to_string(op);
    return s;
}

json ops_to_json(const OpList& ops) {
    json arr = json::array();
    for (const RegOp& op : ops) {
        switch (op.kind) {
        case RegOp::Kind::Set: arr.push_back({"set", op.lhs, op.pos ? "p" : "n"}); break;
        case RegOp::Kind::Copy: arr.push_back({"copy", op.lhs, op.rhs}); break;
        case RegOp::Kind::Append: arr.push_back({"append", op.lhs, op.rhs, op.history}); break;
        }
    }
    return arr;
}

OpList ops_from_json(const json& arr) {
    OpList ops;
    for (const json& o : arr) {
        const std::string kind = o.at(0).get<std::string>();
        const Reg lhs = o.at(1).get<Reg>();
        if (kind == "set") {
            ops.push_back(RegOp::set(lhs, o.at(2).get<std::string>() == "p"));
        } else if (kind == "copy") {
            ops.push_back(RegOp::copy(lhs, o.at(2).get<Reg>()));
        } else if (kind == "append") {
            ops.push_back(RegOp::append(lhs, o.at(2).get<Reg>(), o.at(3).get<std::string>()));
        } else {
            throw std::runtime_error("unknown operation kind: " + kind);
        }
    }
    return ops;
}

} // namespace

std::string to_dot(const Tdfa& dfa) {
    std::ostringstream os;
    os << "digraph tdfa {\n  rankdir=LR;\n  node [shape=circle];\n";
    for (std::size_t s = 0; s < dfa.states.size(); ++s) {
        const TdfaState& st = dfa.states[s];
        os << "  " << s << (st.final ? " [shape=doublecircle];\n" : ";\n");
        if (st.final) {
            os << "  f" << s << " [shape=point];\n";
            os << "  " << s << " -> f" << s << " [style=dashed, label=\"" << ops_label(st.final_ops) << "\"];\n";
        }
        if (st.fallback) {
            os << "  b" << s << " [shape=point];\n";
            os << "  " << s << " -> b" << s << " [style=dotted, label=\"fallback" << ops_label(st.fallback_ops)
               << "\"];\n";
        }
        for (std::size_t c = 0; c < st.next.size(); ++c) {
            const TdfaTransition& t = st.next[c];
            if (t.target == kNoState) continue;
            os << "  " << s << " -> " << t.target << " [label=\"" << class_label(dfa.classes, c)
               << ops_label(t.ops) << "\"];\n";
        }
    }
    os << "}\n";
    return os.str();
}

std::string to_json(const Tdfa& dfa) {
    json j;
    j["ntags"] = dfa.ntags;
    j["nregs"] = dfa.nregs;
    j["initial"] = dfa.initial;
    j["classes"] = json(std::vector<int>(dfa.classes.of.begin(), dfa.classes.of.end()));
    j["representative"] = json(std::vector<int>(dfa.classes.representative.begin(), dfa.classes.representative.end()));
    j["multi"] = json(std::vector<bool>(dfa.multi));
    j["final_regs"] = json(dfa.final_regs);
    j["reg_multi"] = json(std::vector<bool>(dfa.reg_multi));
    json states = json::array();
    for (const TdfaState& st : dfa.states) {
        json s;
        s["final"] = st.final;
        s["final_ops"] = ops_to_json(st.final_ops);
        s["fallback"] = st.fallback;
        s["fallback_ops"] = ops_to_json(st.fallback_ops);
        json next = json::array();
        for (const TdfaTransition& t : st.next) next.push_back({{"target", t.target}, {"ops", ops_to_json(t.ops)}});
        s["next"] = std::move(next);
        states.push_back(std::move(s));
    }
    j["states"] = std::move(states);
    return j.dump(1);
}

Tdfa tdfa_from_json(const std::string& text) {
    const json j = json::parse(text);
    Tdfa dfa;
    dfa.ntags = j.at("ntags").get<int>();
    dfa.nregs = j.at("nregs").get<int>();
    dfa.initial = j.at("initial").get<int>();
    const auto of = j.at("classes").get<std::vector<int>>();
    if (of.size() != 256) throw std::runtime_error("byte class table must have 256 entries");
    for (std::size_t b = 0; b < 256; ++b) dfa.classes.of[b] = static_cast<std::uint16_t>(of[b]);
    for (int r : j.at("representative").get<std::vector<int>>()) {
        dfa.classes.representative.push_back(static_cast<std::uint8_t>(r));
    }
    dfa.multi = j.at("multi").get<std::vector<bool>>();
    dfa.final_regs = j.at("final_regs").get<std::vector<Reg>>();
    dfa.reg_multi = j.at("reg_multi").get<std::vector<bool>>();
    for (const json& s : j.at("states")) {
        TdfaState st;
        st.final = s.at("final").get<bool>();
        st.final_ops = ops_from_json(s.at("final_ops"));
        st.fallback = s.at("fallback").get<bool>();
        st.fallback_ops = ops_from_json(s.at("fallback_ops"));
        for (const json& t : s.at("next")) {
            st.next.push_back({t.at("target").get<int>(), ops_from_json(t.at("ops"))});
        }
        dfa.states.push_back(std::move(st));
    }
    return dfa;
}

} // namespace tdfa

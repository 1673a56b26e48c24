#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "tdfa/regops.hpp"
#include "tdfa/tdfa.hpp"

namespace tdfa {

// ---- Fallback ----------------------------------------------------------

struct FallbackInfo {
    std::vector<bool> fallback;             // per state
    std::vector<std::set<Reg>> clobbered;   // per state, empty unless fallback
    std::vector<std::vector<bool>> region;  // per fallback state: non-final states on non-accepting paths
};

// A final state is a fallback state if some transition leaves it for a
// non-final state. Clobbered registers are written on transitions that
// start in the fallback state or its non-final region and stay in it.
FallbackInfo find_fallback_states(const Tdfa& dfa);

// Inserts backup copies into final registers on risky transitions and
// fills fallback_ops of every fallback state.
void add_fallback_regops(Tdfa& dfa);

// ---- Control-flow graph --------------------------------------------------

struct CfgBlock {
    enum class Kind { Basic, Final, Fallback };

    Kind kind = Kind::Basic;
    int state = kNoState; // source state; kNoState for the start block
    int cls = -1;         // byte class for basic blocks other than start
    OpList ops;
    std::vector<int> succ;
};

struct RegCfg {
    std::vector<CfgBlock> blocks; // start block first
    int nregs = 0;                // registers 1..nregs
    std::vector<Reg> final_regs;  // per tag
    std::vector<bool> reg_multi;  // per register
};

RegCfg build_cfg(const Tdfa& dfa);
// Writes block operations and register metadata back into the automaton.
void apply_cfg(const RegCfg& g, Tdfa& dfa);

// Renaming vector indexed by register; 0 marks unused registers.
using Renaming = std::vector<Reg>;
// Matrices indexed [block][reg] and [reg][reg].
using Liveness = std::vector<std::vector<bool>>;
using Interference = std::vector<std::vector<bool>>;

Renaming compaction(const RegCfg& g);
Liveness liveness_analysis(const RegCfg& g);
void dead_code_elimination(RegCfg& g, const Liveness& live);
Interference interference_analysis(const RegCfg& g, const Liveness& live);
Renaming register_allocation(const RegCfg& g, const Interference& inter);
void renaming(RegCfg& g, const Renaming& v);
void normalization(RegCfg& g);

// Observer called after every pass with the pass name and current graph.
using PassHook = std::function<void(const std::string& pass, const RegCfg& g, const Liveness* live,
                                    const Interference* inter)>;

struct OptimizeOptions {
    int rounds = 2;
    bool skip_normalization = false; // fault injection for harness testing
    PassHook hook;
};

struct OptimizeReport {
    int registers_initial = 0;   // highest register number before compaction
    int registers_compacted = 0;
    int registers_final = 0;
    std::size_t blocks = 0;
};

OptimizeReport optimize(Tdfa& dfa, const OptimizeOptions& opts = {});

// Moore minimization; transitions are labeled with (class, operation list).
Tdfa minimize(const Tdfa& dfa);

// ---- Dumps -----------------------------------------------------------------

std::string to_dot(const RegCfg& g, const Liveness* live = nullptr);
std::string liveness_grid(const RegCfg& g, const Liveness& live);
std::string interference_grid(const Interference& inter);

} // namespace tdfa

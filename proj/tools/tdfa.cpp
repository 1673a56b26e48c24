#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <map>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tdfa/engine.hpp"
#include "tdfa/fuzz.hpp"

using namespace tdfa;

namespace {

enum Exit { kOk = 0, kNoMatch = 1, kUsage = 2, kDivergence = 3, kResource = 4 };

struct Config {
    std::string engine = "tdfa";
    std::string opt = "full";
    std::string repr = "offsets";
    std::string mode = "full";
    std::string multi = "auto";
    bool fixed_tags = false;
    bool full_parsing = false;
    std::size_t max_states = kDefaultMaxStates;
    int max_bound = 1000;
};

void add_engine_flags(CLI::App* cmd, Config& cfg) {
    cmd->add_option("--engine", cfg.engine, "simulation, tdfa or multipass")
        ->check(CLI::IsMember({"simulation", "tdfa", "multipass"}));
    cmd->add_option("-O,--opt", cfg.opt, "register optimizations")->check(CLI::IsMember({"none", "full"}));
    cmd->add_option("--multi", cfg.multi, "multi-valued tags: auto, none, repetition, all")
        ->check(CLI::IsMember({"auto", "none", "repetition", "all"}));
    cmd->add_flag("--fixed-tags", cfg.fixed_tags, "eliminate tags at fixed distance from others");
    cmd->add_flag("--full-parsing", cfg.full_parsing, "tag every subexpression");
    cmd->add_option("--max-states", cfg.max_states, "determinization state cap");
    cmd->add_option("--max-bound", cfg.max_bound, "largest repetition bound");
}

Options to_options(const Config& cfg) {
    Options o;
    o.engine = cfg.engine == "simulation" ? Engine::Simulation
             : cfg.engine == "multipass"  ? Engine::Multipass
                                          : Engine::Tdfa;
    o.opt = cfg.opt == "none" ? OptLevel::None : OptLevel::Full;
    o.fixed_tags = cfg.fixed_tags;
    o.full_parsing = cfg.full_parsing;
    o.max_states = cfg.max_states;
    o.max_bound = cfg.max_bound;
    if (cfg.multi == "repetition" || (cfg.multi == "auto" && cfg.repr == "lists")) {
        o.multi = MultiValuedPolicy::UnderRepetition;
    } else if (cfg.multi == "all") {
        o.multi = MultiValuedPolicy::All;
    }
    return o;
}

Repr to_repr(const std::string& s) {
    return s == "lists" ? Repr::Lists : s == "tstring" ? Repr::Tstring : Repr::Offsets;
}

std::string describe(const MatchResult& r, Repr repr) {
    if (!r.matched()) return "no match";
    std::string s;
    if (r.kind == MatchResult::Kind::PrefixMatch) s = "prefix=" + std::to_string(r.end);
    std::string v;
    switch (repr) {
    case Repr::Offsets: v = format_offsets(r.offsets); break;
    case Repr::Lists: v = format_lists(r.lists); break;
    case Repr::Tstring: v = format_tstring(r.tstring); break;
    }
    if (!v.empty()) s += (s.empty() ? "" : " ") + v;
    return s.empty() ? "match" : s;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Writes named artifacts into a directory, or to stdout under headers.
class Sink {
public:
    explicit Sink(std::string dir) : dir_(std::move(dir)) {
        if (!dir_.empty()) std::filesystem::create_directories(dir_);
    }

    void put(const std::string& name, const std::string& text) {
        if (dir_.empty()) {
            std::cout << "== " << name << " ==\n" << text;
            if (!text.empty() && text.back() != '\n') std::cout << '\n';
            return;
        }
        std::ofstream out(std::filesystem::path(dir_) / name, std::ios::binary);
        out << text;
    }

private:
    std::string dir_;
};

std::string stat_line(const TdfaStats& s) {
    std::ostringstream os;
    os << "states=" << s.states << " finals=" << s.finals << " transitions=" << s.transitions
       << " registers=" << s.registers << " max_register=" << s.max_register << " operations=" << s.operations;
    return os.str();
}

nlohmann::json stat_json(const TdfaStats& s) { return nlohmann::json::parse(stats_json(s)); }

std::string fixed_line(const Compiled& c) {
    std::string s;
    for (const TagInfo& t : c.tags) {
        if (!t.is_fixed()) continue;
        if (!s.empty()) s += ", ";
        s += 't' + std::to_string(t.tag) + " = ";
        s += t.fixed_base == kRightmostTag ? std::string("end") : 't' + std::to_string(t.fixed_base);
        if (t.fixed_distance > 0) s += " - " + std::to_string(t.fixed_distance);
        if (t.fixed_distance < 0) s += " + " + std::to_string(-t.fixed_distance);
    }
    return s.empty() ? "none" : s;
}

std::size_t backlink_count(const MultipassTdfa& f) {
    std::size_t n = 0;
    for (const auto& a : f.arrays) n += a.size();
    return n;
}

// ---- compile -------------------------------------------------------------

int cmd_compile(const std::string& pattern, Config cfg, const std::vector<std::string>& dumps,
                const std::string& out_dir, bool json) {
    Options opts = to_options(cfg);
    opts.all_engines = true;
    const Compiled c = compile(pattern, opts);
    Sink sink(out_dir);
    auto wants = [&](const std::string& d) { return std::find(dumps.begin(), dumps.end(), d) != dumps.end(); };

    std::size_t cfg_blocks = 0;
    if (c.raw) cfg_blocks = build_cfg(*c.raw).blocks.size();

    if (wants("ast")) sink.put("ast.json", to_json(*c.regex) + "\n");
    if (wants("tnfa")) sink.put("tnfa.dot", to_dot(c.nfa));
    if (wants("tdfa")) sink.put("tdfa.dot", to_dot(*c.raw));
    if (wants("cfg")) {
        Tdfa copy = *c.raw;
        OptimizeOptions oo;
        int step = 0;
        oo.hook = [&](const std::string& pass, const RegCfg& g, const Liveness* live, const Interference* inter) {
            char prefix[16];
            std::snprintf(prefix, sizeof prefix, "cfg-%02d-", step++);
            sink.put(prefix + pass + ".dot", to_dot(g, live));
            std::string grid;
            if (live) grid += "liveness\n" + liveness_grid(g, *live);
            if (inter) grid += "interference\n" + interference_grid(*inter);
            if (!grid.empty()) sink.put(prefix + pass + ".txt", grid);
        };
        optimize(copy, oo);
    }
    if (wants("opt")) sink.put("opt.dot", to_dot(*c.optimized));
    if (wants("min")) sink.put("min.dot", to_dot(*c.minimized));
    if (wants("multipass")) sink.put("multipass.dot", to_dot(*c.multipass));
    if (wants("json")) sink.put("tdfa.json", to_json(c.tdfa()) + "\n");

    const TdfaStats raw = stats(*c.raw);
    const TdfaStats opt = stats(*c.optimized);
    const TdfaStats min = stats(*c.minimized);
    std::string finals;
    for (Reg r : c.minimized->final_regs) finals += (finals.empty() ? "r" : " r") + std::to_string(r);

    if (json) {
        nlohmann::json j;
        j["pattern"] = pattern;
        j["tags"] = c.ntags();
        j["fixed"] = fixed_line(c);
        j["tnfa_states"] = c.nfa.size();
        j["tdfa"] = stat_json(raw);
        j["optimized"] = stat_json(opt);
        j["minimized"] = stat_json(min);
        j["registers"] = {{"initial", c.report.registers_initial},
                          {"compacted", c.report.registers_compacted},
                          {"final", c.report.registers_final}};
        j["cfg_blocks"] = cfg_blocks;
        j["final_registers"] = c.minimized->final_regs;
        j["multipass"] = {{"states", c.multipass->states.size()}, {"backlinks", backlink_count(*c.multipass)}};
        std::cout << j.dump(2) << "\n";
        return kOk;
    }
    std::cout << "tags: " << c.ntags() << "\n"
              << "fixed tags: " << fixed_line(c) << "\n"
              << "tnfa: states=" << c.nfa.size() << "\n"
              << "tdfa: " << stat_line(raw) << "\n"
              << "registers: initial=" << c.report.registers_initial
              << " compacted=" << c.report.registers_compacted << " final=" << c.report.registers_final << "\n"
              << "cfg blocks: " << cfg_blocks << "\n"
              << "optimized: " << stat_line(opt) << "\n"
              << "minimized: " << stat_line(min) << "\n"
              << "final registers: " << finals << "\n"
              << "multipass: states=" << c.multipass->states.size()
              << " backlinks=" << backlink_count(*c.multipass) << "\n";
    return kOk;
}

// ---- match ---------------------------------------------------------------

int cmd_match(const std::vector<std::string>& args, const Config& cfg, const std::string& load,
              const std::string& input_file, bool show_stats) {
    std::vector<std::string> inputs;
    std::size_t first = load.empty() ? 1 : 0;
    if (load.empty() && args.empty()) throw std::invalid_argument("missing pattern");
    for (std::size_t i = first; i < args.size(); ++i) inputs.push_back(args[i]);
    if (!input_file.empty()) inputs.push_back(read_file(input_file));
    if (inputs.empty()) inputs.push_back({std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()});

    const Repr repr = to_repr(cfg.repr);
    const MatchMode mode = cfg.mode == "longest-prefix" ? MatchMode::LongestPrefix : MatchMode::Full;
    ExecStats st;
    bool all = true;

    if (!load.empty()) {
        if (repr == Repr::Tstring) throw std::invalid_argument("a loaded register automaton cannot produce tagged strings");
        const Tdfa dfa = tdfa_from_json(read_file(load));
        for (const auto& w : inputs) {
            const MatchResult r = exec(dfa, w, mode, &st);
            all = all && r.matched();
            std::cout << describe(r, repr) << "\n";
        }
    } else {
        if (cfg.fixed_tags && repr == Repr::Tstring) {
            throw std::invalid_argument("tagged strings are not available with fixed tags");
        }
        const Compiled c = compile(args[0], to_options(cfg));
        for (const auto& w : inputs) {
            const MatchResult r = match(c, w, mode, repr, &st);
            all = all && r.matched();
            std::cout << describe(r, repr) << "\n";
        }
    }
    if (show_stats) std::cout << "stats: transitions=" << st.transitions << " operations=" << st.operations << "\n";
    return all ? kOk : kNoMatch;
}

// ---- fuzz ----------------------------------------------------------------

int cmd_fuzz(const FuzzOptions& opts, const std::string& mutation) {
    const FuzzReport r = fuzz(opts);
    std::cout << "patterns=" << r.patterns << " checks=" << r.checks << " divergences=" << r.divergences << "\n";
    if (!r.first) return kOk;
    const Divergence& d = *r.first;
    std::cout << "first divergence in pattern " << r.first_index << ": " << d.pattern << "\n"
              << "  check: " << d.check << "\n"
              << "  input: \"" << d.input << "\"\n"
              << "  expected: " << d.expected << "\n"
              << "  actual: " << d.actual << "\n"
              << "reproduce: tdfa fuzz --seed=" << opts.seed << " --start=" << r.first_index << " --count=1";
    if (mutation != "none") std::cout << " --mutate=" << mutation;
    std::cout << "\n";
    return kDivergence;
}

// ---- bench ---------------------------------------------------------------

struct BenchCase {
    std::string pattern;
    std::function<std::string(std::size_t, std::mt19937_64&)> input;
};

std::string random_over(const std::string& alphabet, std::size_t n, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> d(0, alphabet.size() - 1);
    std::string s(n, '\0');
    for (char& ch : s) ch = alphabet[d(rng)];
    return s;
}

template <class F>
double best_of(int repeat, F&& f) {
    double best = 1e300;
    for (int i = 0; i < repeat; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

int cmd_bench(std::vector<std::string> patterns, std::string alphabet, double size_mb, int repeat,
              std::uint64_t seed) {
    std::vector<BenchCase> cases;
    if (patterns.empty()) {
        cases.push_back({"(a)*#(?:a|#b)#b*", [](std::size_t n, std::mt19937_64&) {
                             return std::string(n - 1, 'a') + 'b';
                         }});
        cases.push_back({"(#a)*a{10}", [](std::size_t n, std::mt19937_64&) { return std::string(n, 'a'); }});
        cases.push_back({"(#a)*a{100}", [](std::size_t n, std::mt19937_64&) { return std::string(n, 'a'); }});
        cases.push_back({"(?:a|b)*", [](std::size_t n, std::mt19937_64& rng) { return random_over("ab", n, rng); }});
        cases.push_back({"(?:(a)|(b))*", [](std::size_t n, std::mt19937_64& rng) { return random_over("ab", n, rng); }});
    }
    for (const auto& p : patterns) {
        cases.push_back({p, [alphabet](std::size_t n, std::mt19937_64& rng) { return random_over(alphabet, n, rng); }});
    }

    const auto n = static_cast<std::size_t>(size_mb * 1024 * 1024);
    std::printf("%-22s %-10s %-8s %7s %5s %10s %10s\n", "pattern", "engine", "repr", "states", "regs", "ops/byte",
                "MB/s");
    for (const BenchCase& bc : cases) {
        std::mt19937_64 rng(seed);
        const std::string input = bc.input(n, rng);
        const double mb = static_cast<double>(input.size()) / (1024.0 * 1024.0);
        auto row = [&](const char* engine, const char* repr, std::size_t states, std::size_t regs, double ops,
                       double secs) {
            std::printf("%-22s %-10s %-8s %7zu %5zu %10.3f %10.1f\n", bc.pattern.c_str(), engine, repr, states, regs,
                        ops, mb / secs);
        };

        for (Repr repr : {Repr::Offsets, Repr::Lists}) {
            Options o;
            o.multi = repr == Repr::Lists ? MultiValuedPolicy::UnderRepetition : MultiValuedPolicy::None;
            const Compiled c = compile(bc.pattern, o);
            const Tdfa& dfa = c.tdfa();
            ExecStats st;
            exec(dfa, input, MatchMode::Full, &st);
            const double secs = best_of(repeat, [&] { exec(dfa, input, MatchMode::Full); });
            const TdfaStats s = stats(dfa);
            row("tdfa", repr == Repr::Lists ? "lists" : "offsets", s.states, s.registers,
                static_cast<double>(st.transitions + st.operations) / static_cast<double>(input.size()), secs);
            if (repr == Repr::Offsets) {
                // transitions only, as a baseline without register operations
                volatile int sink = 0;
                const double base = best_of(repeat, [&] {
                    int q = dfa.initial;
                    for (const char ch : input) {
                        q = dfa.step(q, static_cast<std::uint8_t>(ch)).target;
                        if (q == kNoState) break;
                    }
                    sink = q;
                });
                (void)sink;
                row("baseline", "-", s.states, 0, 1.0, base);
            }
        }

        Options o;
        o.engine = Engine::Multipass;
        const Compiled c = compile(bc.pattern, o);
        const MultipassTdfa& f = *c.multipass;
        double cost = 0;
        if (auto tr = match_forward(f, input)) {
            cost = static_cast<double>(backward_steps(f, *tr)) / static_cast<double>(input.size());
        }
        std::size_t sink = 0;
        for (Repr repr : {Repr::Offsets, Repr::Lists, Repr::Tstring}) {
            const double secs = best_of(repeat, [&] {
                auto tr = match_forward(f, input);
                if (!tr) return;
                if (repr == Repr::Offsets) sink += extract_offsets(f, *tr).size();
                if (repr == Repr::Lists) sink += extract_offset_lists(f, *tr).size();
                if (repr == Repr::Tstring) sink += extract_tstring(f, input, *tr).size();
            });
            row("multipass", repr == Repr::Offsets ? "offsets" : repr == Repr::Lists ? "lists" : "tstring",
                f.states.size(), 0, cost, secs);
        }
        if (sink == 0 && c.ntags() > 0) std::printf("%-22s multipass: no match\n", bc.pattern.c_str());
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tagged DFA regular expression matcher"};
    app.require_subcommand(1);

    Config cfg;
    std::string pattern;
    std::vector<std::string> dumps;
    std::string out_dir;
    bool json = false;
    auto* compile_cmd = app.add_subcommand("compile", "build automata, print statistics and dumps");
    compile_cmd->add_option("pattern", pattern, "regular expression")->required();
    add_engine_flags(compile_cmd, cfg);
    compile_cmd->add_option("--dump", dumps, "tnfa, tdfa, cfg, opt, min, multipass, ast, json")
        ->delimiter(',')
        ->check(CLI::IsMember({"tnfa", "tdfa", "cfg", "opt", "min", "multipass", "ast", "json"}));
    compile_cmd->add_option("--out-dir", out_dir, "write dumps into this directory instead of stdout");
    compile_cmd->add_flag("--json", json, "print statistics as JSON");

    std::vector<std::string> match_args;
    std::string load;
    std::string input_file;
    bool show_stats = false;
    auto* match_cmd = app.add_subcommand("match", "match inputs (arguments, --input-file or stdin)");
    match_cmd->add_option("args", match_args, "pattern followed by inputs");
    add_engine_flags(match_cmd, cfg);
    match_cmd->add_option("--repr", cfg.repr, "offsets, lists or tstring")
        ->check(CLI::IsMember({"offsets", "lists", "tstring"}));
    match_cmd->add_option("--mode", cfg.mode, "full or longest-prefix")
        ->check(CLI::IsMember({"full", "longest-prefix"}));
    match_cmd->add_option("--load", load, "run a register automaton from a JSON dump");
    match_cmd->add_option("--input-file", input_file, "read one input from a file");
    match_cmd->add_flag("--stats", show_stats, "print transition and operation counts");

    FuzzOptions fo;
    std::string mutation = "none";
    auto* fuzz_cmd = app.add_subcommand("fuzz", "cross-check all engines against simulation");
    fuzz_cmd->add_option("--seed", fo.seed);
    fuzz_cmd->add_option("--start", fo.start, "index of the first pattern");
    fuzz_cmd->add_option("--count", fo.count, "number of patterns");
    fuzz_cmd->add_option("--max-nodes", fo.limits.max_nodes);
    fuzz_cmd->add_option("--max-tags", fo.limits.max_tags);
    fuzz_cmd->add_option("--alphabet", fo.limits.alphabet);
    fuzz_cmd->add_option("--max-bound", fo.limits.max_bound);
    fuzz_cmd->add_option("--max-input", fo.limits.max_input, "longest input length");
    fuzz_cmd->add_option("--mutate", mutation, "inject a defect: none, skip-normalization, drop-backups")
        ->check(CLI::IsMember({"none", "skip-normalization", "drop-backups"}));

    std::vector<std::string> bench_patterns;
    std::string bench_alphabet = "ab";
    double size_mb = 10;
    int repeat = 3;
    std::uint64_t bench_seed = 1;
    auto* bench_cmd = app.add_subcommand("bench", "throughput and operation counts");
    bench_cmd->add_option("--pattern", bench_patterns, "patterns to run instead of the built-in set");
    bench_cmd->add_option("--alphabet", bench_alphabet, "input alphabet for --pattern");
    bench_cmd->add_option("--size-mb", size_mb, "input size");
    bench_cmd->add_option("--repeat", repeat, "runs per measurement, best is reported");
    bench_cmd->add_option("--seed", bench_seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*compile_cmd) return cmd_compile(pattern, cfg, dumps, out_dir, json);
        if (*match_cmd) return cmd_match(match_args, cfg, load, input_file, show_stats);
        if (*fuzz_cmd) {
            fo.mutation = mutation == "skip-normalization" ? Mutation::SkipNormalization
                        : mutation == "drop-backups"       ? Mutation::DropBackups
                                                           : Mutation::None;
            return cmd_fuzz(fo, mutation);
        }
        if (*bench_cmd) return cmd_bench(bench_patterns, bench_alphabet, size_mb, repeat, bench_seed);
    } catch (const SyntaxError& e) {
        std::cerr << "syntax error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceError& e) {
        std::cerr << "resource limit: " << e.what() << "\n";
        return kResource;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kOk;
}

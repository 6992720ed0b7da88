// Copyright 2026 The qramc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <fmt/core.h>
#include <fmt/ostream.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <map>
#include <memory>
#include <iostream>
#include <random>
#include <sstream>

#include "qramc/app_trees.hpp"
#include "qramc/bits.hpp"
#include "qramc/circuit.hpp"
#include "qramc/compressor.hpp"
#include "qramc/qradix.hpp"
#include "qramc/radix_tree.hpp"
#include "qramc/simulator.hpp"

namespace qramc::cli {

namespace {

/// Thrown for bad flags or unreadable files; maps to exit 1.
class InputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct Config {
    std::string circuit;
    std::string input;
    std::string measure;
    std::string output;
    std::string mode = "exact";
    std::string eps;
    std::string eps_per_use;
    std::string checkpoints;
    bool enforce = false;
    long long seed = -1;

    // demo and generate
    std::string demo;
    std::size_t n = 4;
    std::size_t k = 2;
    std::size_t sigma = 4;
    std::size_t d = 1;
    std::string demo_eps = "2";
    long long L = 8;
    std::size_t W = 5;
    std::size_t M = 8;
    std::size_t m = 2;
    std::size_t T = 20;
};

std::uint64_t resolve_seed(const Config& cfg) {
    if (cfg.seed >= 0) {
        return static_cast<std::uint64_t>(cfg.seed);
    }
    if (const char* env = std::getenv("QRAMC_SEED"); env != nullptr && *env != '\0') {
        try {
            std::size_t used = 0;
            const auto v = std::stoull(env, &used);
            if (used == std::string(env).size()) {
                return v;
            }
        } catch (const std::exception&) {
        }
        throw InputError(std::string("QRAMC_SEED is not an unsigned integer: '") + env + "'");
    }
    return 0;
}

QramCircuit load_circuit(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read circuit file '" + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse_circuit(text.str());
}

BitString parse_input(const std::string& text, const QramCircuit& c) {
    if (text.empty()) {
        return BitString(c.n);
    }
    BitString x;
    try {
        x = BitString::from_string(text);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    if (x.size() != c.n) {
        throw InputError(fmt::format("--input has {} bits, circuit declares n={}", x.size(), c.n));
    }
    return x;
}

std::size_t parse_index(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw InputError("bad qubit index '" + s + "'");
    }
    return std::stoul(s);
}

/// "0..3", "0,2,5" or a mix such as "0..2,4". Empty means every work qubit.
std::vector<std::size_t> parse_measure(const std::string& spec, std::size_t W) {
    std::vector<std::size_t> out;
    if (spec.empty()) {
        for (std::size_t q = 0; q < W; ++q) {
            out.push_back(q);
        }
        return out;
    }
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        if (const auto dots = part.find(".."); dots != std::string::npos) {
            const auto lo = parse_index(part.substr(0, dots));
            const auto hi = parse_index(part.substr(dots + 2));
            if (hi < lo) {
                throw InputError("empty qubit range '" + part + "'");
            }
            for (std::size_t q = lo; q <= hi; ++q) {
                out.push_back(q);
            }
        } else {
            out.push_back(parse_index(part));
        }
    }
    for (const auto q : out) {
        if (q >= W) {
            throw InputError(fmt::format("measured qubit {} is not a work qubit (W={})", q, W));
        }
    }
    return out;
}

std::vector<std::size_t> parse_list(const std::string& spec) {
    std::vector<std::size_t> out;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ',')) {
        out.push_back(parse_index(part));
    }
    return out;
}

Rational parse_rational(const std::string& text, const char* flag) {
    try {
        return Rational::parse(text);
    } catch (const std::invalid_argument& e) {
        throw InputError(std::string(flag) + ": " + e.what());
    }
}

std::string num(double v) { return fmt::format("{:.12g}", v); }

void write_distribution(std::ostream& os, const OutcomeDistribution& dist) {
    for (const auto& [outcome, p] : dist) {
        if (p > 0.0) {
            fmt::print(os, "{}\t{}\n", outcome.to_string(), num(p));
        }
    }
}

int cmd_run(const Config& cfg, std::ostream& os) {
    const auto c = load_circuit(cfg.circuit);
    const auto input = parse_input(cfg.input, c);
    const auto measured = parse_measure(cfg.measure, c.W);
    const auto r = run(c, input, cfg.enforce ? SparsityMode::kEnforce : SparsityMode::kMonitor);
    fmt::print(os, "# outcome\tprobability\n");
    write_distribution(os, measure_distribution(r.state, measured));
    std::string steps;
    for (std::size_t t = 0; t < r.report.max_weight_per_step.size(); ++t) {
        steps += (t ? "," : "") + std::to_string(r.report.max_weight_per_step[t]);
    }
    fmt::print(os, "declared_m={}\nmax_weight={}\nexceeded={}\nfirst_violation={}\n", c.m,
               r.report.max_weight, r.report.exceeded ? 1 : 0, r.report.first_violation);
    fmt::print(os, "max_weight_per_step={}\n", steps);
    return kExitOk;
}

int cmd_compare(const Config& cfg, std::ostream& os) {
    const auto c = load_circuit(cfg.circuit);
    const auto input = parse_input(cfg.input, c);
    const auto measured = parse_measure(cfg.measure, c.W);
    CompressionOptions opt;
    double budget = 0.0;
    if (cfg.mode == "approx") {
        opt.mode = SuperposeMode::kApprox;
        if (!cfg.eps_per_use.empty()) {
            opt.epsilon_per_use = parse_rational(cfg.eps_per_use, "--eps-per-use").value();
        } else if (!cfg.eps.empty()) {
            budget = parse_rational(cfg.eps, "--eps").value();
            opt.error_budget = budget;
        } else {
            throw InputError("approx mode needs --eps or --eps-per-use");
        }
        try {
            per_use_epsilon(opt, c.T());
        } catch (const std::invalid_argument& e) {
            throw InputError(e.what());
        }
    } else if (!cfg.eps.empty() || !cfg.eps_per_use.empty()) {
        throw InputError("--eps applies only to --mode approx");
    }
    if (!cfg.checkpoints.empty()) {
        opt.checkpoints = parse_list(cfg.checkpoints);
        for (const auto t : opt.checkpoints) {
            if (t > c.T()) {
                throw InputError(fmt::format("checkpoint {} is past T={}", t, c.T()));
            }
        }
    }
    const auto rep = equivalence_check(c, input, measured, opt);
    const auto& res = rep.resources;
    fmt::print(os, "mode={}\n", cfg.mode);
    fmt::print(os, "tv_distance={}\n", num(rep.tv_distance));
    fmt::print(os, "threshold={}\n", num(rep.threshold));
    fmt::print(os, "within_threshold={}\n", rep.within_threshold ? 1 : 0);
    if (opt.error_budget) {
        fmt::print(os, "error_budget={}\n", num(budget));
    }
    fmt::print(os, "epsilon_per_use={}\n", num(res.epsilon_per_use));
    fmt::print(os, "qubits_direct={}\nqubits_compressed={}\n", res.qubits_direct,
               res.qubits_compressed);
    fmt::print(os, "region_qubits={}\nscratch_qubits={}\n", res.region_qubits,
               res.scratch_qubits);
    fmt::print(os, "rag_count={}\nsuperpose_uses={}\n", res.rag_count, res.superpose_uses);
    fmt::print(os, "lookups={}\ntoggles={}\nword_ops={}\nblock_reads={}\n", res.lookups,
               res.toggles, res.word_ops, res.block_reads);
    fmt::print(os, "remainder_mass={}\n", num(res.remainder_mass));
    for (std::size_t i = 0; i < rep.checkpoint_fidelity.size(); ++i) {
        fmt::print(os, "checkpoint_{}_fidelity={}\n", opt.checkpoints[i],
                   num(rep.checkpoint_fidelity[i]));
    }
    return rep.within_threshold ? kExitOk : kExitRuntime;
}

int cmd_generate(const Config& cfg, std::ostream& os) {
    QramCircuit c;
    try {
        c = random_sparse_circuit(resolve_seed(cfg), cfg.W, cfg.M, cfg.m, cfg.T);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    os << serialize_circuit(c);
    return kExitOk;
}

std::string bits_of(std::uint64_t x, std::size_t width) {
    BitString b(width);
    b.set_uint(0, width, x);
    return b.to_string();
}

int demo_ked(const Config& cfg, std::ostream& os) {
    if (!is_power_of_two(cfg.sigma) || cfg.n < 1 || cfg.k < 1) {
        throw InputError("demo ked needs n >= 1, k >= 1 and --sigma a power of 2");
    }
    std::mt19937_64 rng(resolve_seed(cfg));
    KedTree t(cfg.n, cfg.k, cfg.sigma);
    const std::size_t label_bits = log2_floor(cfg.sigma);
    fmt::print(os, "# k-ED tree n={} k={} sigma={}\n", cfg.n, cfg.k, cfg.sigma);
    std::vector<std::pair<std::size_t, std::uint64_t>> live;
    for (std::size_t i = 1; i <= cfg.n; ++i) {
        const std::uint64_t x = rng() % cfg.sigma;
        t.insert(i, x);
        live.emplace_back(i, x);
        fmt::print(os, "insert i={} x={} query={} ones={} encoding={}\n", i,
                   bits_of(x, std::max<std::size_t>(label_bits, 1)), t.query() ? 1 : 0,
                   sparsity_count(t.encode()), t.encode().to_string());
    }
    std::shuffle(live.begin(), live.end(), rng);
    for (std::size_t s = 0; s < live.size() / 2; ++s) {
        const auto [i, x] = live[s];
        t.erase(i, x);
        fmt::print(os, "delete i={} x={} query={} ones={} encoding={}\n", i,
                   bits_of(x, std::max<std::size_t>(label_bits, 1)), t.query() ? 1 : 0,
                   sparsity_count(t.encode()), t.encode().to_string());
    }
    fmt::print(os, "query={}\n", t.query() ? 1 : 0);
    return kExitOk;
}

int demo_cp(const Config& cfg, std::ostream& os) {
    const auto eps = parse_rational(cfg.demo_eps, "--eps");
    std::size_t n = 1;
    while (n < cfg.n) {
        n *= 2;
    }
    std::unique_ptr<CpTree> t;
    try {
        t = std::make_unique<CpTree>(n, cfg.d, eps, cfg.L);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    std::mt19937_64 rng(resolve_seed(cfg));
    fmt::print(os, "# closest-pair tree n={} d={} eps={} L={} boxes={}\n", cfg.n, cfg.d,
               eps.to_string(), cfg.L, t->leaves());
    const auto show_point = [](const Point& p) {
        std::string s = "(";
        for (std::size_t i = 0; i < p.size(); ++i) {
            s += (i ? "," : "") + std::to_string(p[i]);
        }
        return s + ")";
    };
    std::vector<std::pair<std::size_t, Point>> live;
    const auto report = [&](const char* what, std::size_t i, const Point& p) {
        std::map<std::uint64_t, bool> boxes;
        for (const auto& [j, q] : live) {
            boxes[t->box_of(q)] = true;
        }
        std::string ext;
        for (const auto& [x, unused] : boxes) {
            ext += fmt::format(" {}:{}/{}", x, t->set_size(x), t->external(x));
        }
        fmt::print(os, "{} i={} p={} box={} query={} boxes(size/external)={}\n", what, i,
                   show_point(p), t->box_of(p), t->query() ? 1 : 0, ext);
    };
    for (std::size_t i = 1; i <= cfg.n; ++i) {
        Point p(cfg.d);
        for (auto& c : p) {
            c = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cfg.L));
        }
        t->insert(i, p);
        live.emplace_back(i, p);
        report("insert", i, p);
    }
    std::shuffle(live.begin(), live.end(), rng);
    const std::size_t drop = live.size() / 2;
    for (std::size_t s = 0; s < drop; ++s) {
        const auto [i, p] = live.front();
        live.erase(live.begin());
        t->erase(i, p);
        report("delete", i, p);
    }
    fmt::print(os, "ones={}\nquery={}\n", sparsity_count(t->encode()), t->query() ? 1 : 0);
    return kExitOk;
}

int demo_radix(const Config& cfg, std::ostream& os) {
    (void)cfg;
    std::vector<BitString> S;
    for (const char* s : {"0000", "1001", "1011", "1111"}) {
        S.push_back(BitString::from_string(s));
    }
    const auto tree = RadixTree::from_set(4, S);
    fmt::print(os, "# radix tree for {{0000, 1001, 1011, 1111}}\n");
    os << tree.dump();
    fmt::print(os, "nodes={}\n", tree.node_count());
    const auto canonical = prepare_canonical(S, 4, 4);
    fmt::print(os, "layouts={}\n", canonical.size());
    return kExitOk;
}

int cmd_demo(const Config& cfg, std::ostream& os) {
    if (cfg.demo == "ked") {
        return demo_ked(cfg, os);
    }
    if (cfg.demo == "cp") {
        return demo_cp(cfg, os);
    }
    if (cfg.demo == "radix") {
        return demo_radix(cfg, os);
    }
    throw InputError("unknown demo '" + cfg.demo + "' (expected ked, cp or radix)");
}

void add_circuit_flags(CLI::App* sub, Config& cfg) {
    sub->add_option("--circuit", cfg.circuit, "Circuit file")->required();
    sub->add_option("--input", cfg.input, "Input bit string x (default all zeros)");
    sub->add_option("--measure", cfg.measure, "Work qubits to measure, e.g. 0..3 or 0,2");
    sub->add_option("-o,--output", cfg.output, "Write the report here instead of stdout");
}

}  // namespace

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"qramc: sparse QRAM simulation and memory compression", "qramc"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--seed", cfg.seed, "Seed (falls back to QRAMC_SEED, then 0)")
        ->check(CLI::NonNegativeNumber);

    auto* run_cmd = app.add_subcommand("run", "Simulate a circuit directly");
    add_circuit_flags(run_cmd, cfg);
    run_cmd->add_flag("--enforce-sparsity", cfg.enforce, "Fail on the first step above m");

    auto* cmp = app.add_subcommand("compare", "Run direct and compressed, compare distributions");
    add_circuit_flags(cmp, cfg);
    cmp->add_option("--mode", cfg.mode, "exact or approx")
        ->check(CLI::IsMember({"exact", "approx"}));
    cmp->add_option("--eps", cfg.eps, "Error budget; each use gets eps/(2T)");
    cmp->add_option("--eps-per-use", cfg.eps_per_use, "Error per superposition use");
    cmp->add_option("--checkpoints", cfg.checkpoints, "Steps for isomorphism checks, e.g. 0,4");

    auto* gen = app.add_subcommand("generate", "Write a seeded random m-sparse circuit");
    gen->add_option("--W", cfg.W, "Work qubits");
    gen->add_option("--M", cfg.M, "Memory qubits");
    gen->add_option("--m", cfg.m, "Sparsity");
    gen->add_option("--T", cfg.T, "Instructions");
    gen->add_option("-o,--output", cfg.output, "Write the circuit here instead of stdout");

    auto* demo = app.add_subcommand("demo", "Scripted data-structure transcript");
    demo->add_option("name", cfg.demo, "ked, cp or radix")->required();
    demo->add_option("--n", cfg.n, "Indices / points");
    demo->add_option("--k", cfg.k, "k for k-ED");
    demo->add_option("--sigma", cfg.sigma, "Alphabet size for k-ED");
    demo->add_option("--d", cfg.d, "Dimension for CP");
    demo->add_option("--eps", cfg.demo_eps, "Distance threshold for CP");
    demo->add_option("--L", cfg.L, "Coordinate range for CP");
    demo->add_option("-o,--output", cfg.output, "Write the transcript here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    }

    std::ostringstream report;
    int code = kExitOk;
    try {
        if (run_cmd->parsed()) {
            code = cmd_run(cfg, report);
        } else if (cmp->parsed()) {
            code = cmd_compare(cfg, report);
        } else if (gen->parsed()) {
            code = cmd_generate(cfg, report);
        } else {
            code = cmd_demo(cfg, report);
        }
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInput;
    } catch (const ParseError& e) {
        err << "error: " << cfg.circuit << ":" << e.line() << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const ValidationError& e) {
        err << "error: invalid circuit:";
        for (const auto& v : e.violations()) {
            err << ' ' << (v.instruction >= 0 ? "instruction " + std::to_string(v.instruction) : "header")
                << " [" << v.rule << "] " << v.message << ';';
        }
        err << '\n';
        return kExitInput;
    } catch (const SparsityViolation& e) {
        err << "error: sparsity violation at step " << e.step() << ": " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }

    if (cfg.output.empty()) {
        out << report.str();
    } else {
        std::ofstream file(cfg.output);
        if (!(file << report.str())) {
            err << "error: cannot write '" << cfg.output << "'\n";
            return kExitRuntime;
        }
    }
    return code;
}

}  // namespace qramc::cli

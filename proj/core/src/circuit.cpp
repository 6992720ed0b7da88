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

#include "qramc/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <set>
#include <sstream>

#include "qramc/bits.hpp"

namespace qramc {

namespace {

constexpr std::array<std::pair<GateKind, std::string_view>, 10> kGateNames{{
    {GateKind::H, "H"},
    {GateKind::X, "X"},
    {GateKind::Y, "Y"},
    {GateKind::Z, "Z"},
    {GateKind::S, "S"},
    {GateKind::Sdg, "SDG"},
    {GateKind::T, "T"},
    {GateKind::Tdg, "TDG"},
    {GateKind::U3, "U3"},
    {GateKind::CNOT, "CNOT"},
}};

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') {
            ++j;
        }
        if (j > i) {
            out.push_back(line.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

std::size_t parse_uint(std::string_view tok, std::size_t line, std::string_view what) {
    std::size_t value = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc{} || ptr != end || tok.empty()) {
        throw ParseError(line, "expected non-negative integer for " + std::string(what) +
                                   ", got '" + std::string(tok) + "'");
    }
    return value;
}

int parse_qubit(std::string_view tok, std::size_t line) {
    const auto v = parse_uint(tok, line, "qubit index");
    if (v > 1'000'000) {
        throw ParseError(line, "qubit index out of range: " + std::string(tok));
    }
    return static_cast<int>(v);
}

double parse_angle(std::string_view tok, std::size_t line) {
    double value = 0.0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc{} || ptr != end || tok.empty()) {
        throw ParseError(line, "expected decimal angle in radians, got '" + std::string(tok) + "'");
    }
    return value;
}

std::string format_angle(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void parse_header(std::string_view text, std::size_t line, QramCircuit& c) {
    const auto toks = split_ws(text);
    if (toks.empty() || toks[0] != "QRAM") {
        throw ParseError(line, "first line must be 'QRAM n=<int> W=<int> M=<int> m=<int>'");
    }
    std::set<std::string> seen;
    for (std::size_t i = 1; i < toks.size(); ++i) {
        const auto eq = toks[i].find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(line, "malformed header field '" + std::string(toks[i]) + "'");
        }
        const std::string key(toks[i].substr(0, eq));
        const auto value = parse_uint(toks[i].substr(eq + 1), line, key);
        if (!seen.insert(key).second) {
            throw ParseError(line, "duplicate header field '" + key + "'");
        }
        if (key == "n") {
            c.n = value;
        } else if (key == "W") {
            c.W = value;
        } else if (key == "M") {
            c.M = value;
        } else if (key == "m") {
            c.m = value;
        } else {
            throw ParseError(line, "unknown header field '" + key + "'");
        }
    }
    for (const char* k : {"n", "W", "M", "m"}) {
        if (!seen.contains(k)) {
            throw ParseError(line, std::string("missing header field '") + k + "'");
        }
    }
}

Instruction parse_instruction(std::string_view text, std::size_t line) {
    const auto toks = split_ws(text);
    std::string op(toks[0]);
    for (auto& ch : op) {
        ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    }
    auto expect = [&](std::size_t operands) {
        if (toks.size() != operands + 1) {
            throw ParseError(line, std::string(op) + " expects " + std::to_string(operands) +
                                       " operand(s), got " + std::to_string(toks.size() - 1));
        }
    };
    if (op == "RAG") {
        expect(0);
        return Rag{};
    }
    if (op == "READ") {
        expect(2);
        Read r;
        if (toks[1] != "-") {
            std::string_view list = toks[1];
            while (true) {
                const auto comma = list.find(',');
                r.address.push_back(parse_qubit(list.substr(0, comma), line));
                if (comma == std::string_view::npos) {
                    break;
                }
                list.remove_prefix(comma + 1);
            }
        }
        r.target = parse_qubit(toks[2], line);
        return r;
    }
    const auto kind = gate_from_name(op);
    if (!kind) {
        throw ParseError(line, "unknown instruction '" + std::string(toks[0]) + "'");
    }
    GateSpec g;
    g.kind = *kind;
    if (*kind == GateKind::U3) {
        expect(4);
        g.targets = {parse_qubit(toks[1], line)};
        for (std::size_t i = 0; i < 3; ++i) {
            g.angles[i] = parse_angle(toks[2 + i], line);
        }
    } else {
        const auto arity = gate_arity(*kind);
        expect(arity);
        for (std::size_t i = 0; i < arity; ++i) {
            g.targets.push_back(parse_qubit(toks[1 + i], line));
        }
    }
    return ApplyGate{g};
}

}  // namespace

std::string_view gate_name(GateKind kind) {
    for (const auto& [k, name] : kGateNames) {
        if (k == kind) {
            return name;
        }
    }
    return "?";
}

std::optional<GateKind> gate_from_name(std::string_view name) {
    for (const auto& [k, n] : kGateNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

std::size_t gate_arity(GateKind kind) { return kind == GateKind::CNOT ? 2 : 1; }

std::size_t QramCircuit::address_bits() const { return log2_ceil(M); }

ParseError::ParseError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line) {}

namespace {
std::string join_violations(const std::vector<Violation>& vs) {
    std::ostringstream os;
    os << "circuit violates QRAM restrictions:";
    for (const auto& v : vs) {
        os << "\n  [" << v.rule << "]";
        if (v.instruction >= 0) {
            os << " instruction " << v.instruction;
        }
        os << ": " << v.message;
    }
    return os.str();
}
}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_violations(violations)), violations_(std::move(violations)) {}

std::vector<Violation> validate_qram(const QramCircuit& c) {
    std::vector<Violation> out;
    auto header = [&](std::string rule, std::string msg) {
        out.push_back({-1, std::move(rule), std::move(msg)});
    };
    if (c.n < 1) {
        header("input-length", "n must be at least 1");
    }
    if (!is_power_of_two(c.M)) {
        header("memory-power-of-two", "M=" + std::to_string(c.M) + " is not a power of 2");
    }
    if (!is_power_of_two(c.m)) {
        header("sparsity-power-of-two", "m=" + std::to_string(c.m) + " is not a power of 2");
    }
    if (c.m < 1 || c.m > c.M) {
        header("sparsity-range", "m must satisfy 1 <= m <= M");
    }
    const std::size_t need = log2_ceil(std::max<std::size_t>(c.M, 1)) + 1;
    if (c.W < need) {
        header("rag-wiring-room", "W=" + std::to_string(c.W) + " < log2(M)+1=" +
                                      std::to_string(need) +
                                      ": no room for the address register and swap bit");
    }

    const auto W = static_cast<long>(c.W);
    for (std::size_t idx = 0; idx < c.instructions.size(); ++idx) {
        const auto at = static_cast<long>(idx);
        auto bad = [&](std::string rule, std::string msg) {
            out.push_back({at, std::move(rule), std::move(msg)});
        };
        const auto& ins = c.instructions[idx];
        if (const auto* ag = std::get_if<ApplyGate>(&ins)) {
            const auto& g = ag->gate;
            if (g.targets.size() != gate_arity(g.kind)) {
                bad("gate-arity", std::string(gate_name(g.kind)) + " needs " +
                                      std::to_string(gate_arity(g.kind)) + " target(s)");
            }
            for (const int q : g.targets) {
                if (q < 0 || q >= W) {
                    bad("work-qubits-only", "gate target " + std::to_string(q) +
                                                " is not a work qubit (W=" + std::to_string(W) + ")");
                }
            }
            if (std::set<int>(g.targets.begin(), g.targets.end()).size() != g.targets.size()) {
                bad("distinct-targets", "gate targets must be distinct");
            }
        } else if (const auto* r = std::get_if<Read>(&ins)) {
            const auto want = log2_ceil(std::max<std::size_t>(c.n, 1));
            if (r->address.size() != want) {
                bad("read-address-width", "READ needs ceil(log2 n)=" + std::to_string(want) +
                                              " address qubits, got " +
                                              std::to_string(r->address.size()));
            }
            for (const int q : r->address) {
                if (q < 0 || q >= W) {
                    bad("work-qubits-only", "READ address qubit " + std::to_string(q) +
                                                " is not a work qubit");
                }
            }
            if (r->target < 0 || r->target >= W) {
                bad("work-qubits-only", "READ target " + std::to_string(r->target) +
                                            " is not a work qubit");
            }
            if (std::set<int>(r->address.begin(), r->address.end()).size() != r->address.size()) {
                bad("distinct-targets", "READ address qubits must be distinct");
            }
            if (std::find(r->address.begin(), r->address.end(), r->target) != r->address.end()) {
                bad("read-target-distinct", "READ target may not be one of its address qubits");
            }
        }
        // RAG has no operands; its legality is covered by the header checks.
    }
    return out;
}

QramCircuit parse_circuit(std::string_view text) {
    QramCircuit c;
    bool have_header = false;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (split_ws(line).empty()) {
            continue;
        }
        if (!have_header) {
            parse_header(line, line_no, c);
            have_header = true;
            continue;
        }
        c.instructions.push_back(parse_instruction(line, line_no));
    }
    if (!have_header) {
        throw ParseError(line_no == 0 ? 1 : line_no, "missing 'QRAM ...' header line");
    }
    if (auto violations = validate_qram(c); !violations.empty()) {
        throw ValidationError(std::move(violations));
    }
    return c;
}

std::string serialize_circuit(const QramCircuit& c) {
    std::ostringstream os;
    os << "QRAM n=" << c.n << " W=" << c.W << " M=" << c.M << " m=" << c.m << '\n';
    for (const auto& ins : c.instructions) {
        if (const auto* ag = std::get_if<ApplyGate>(&ins)) {
            const auto& g = ag->gate;
            os << gate_name(g.kind);
            for (const int q : g.targets) {
                os << ' ' << q;
            }
            if (g.kind == GateKind::U3) {
                for (const double a : g.angles) {
                    os << ' ' << format_angle(a);
                }
            }
        } else if (const auto* r = std::get_if<Read>(&ins)) {
            os << "READ ";
            if (r->address.empty()) {
                os << '-';
            }
            for (std::size_t i = 0; i < r->address.size(); ++i) {
                os << (i ? "," : "") << r->address[i];
            }
            os << ' ' << r->target;
        } else {
            os << "RAG";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace qramc

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

#include "qramc/qradix.hpp"

#include <cmath>
#include <string>

namespace qramc {

QrtLayout QrtLayout::make(std::size_t ell, std::size_t m, std::size_t region_base,
                          std::size_t scratch_base) {
    if (ell < 1) {
        throw std::invalid_argument("radix tree word length must be at least 1");
    }
    if (!is_power_of_two(m)) {
        throw std::invalid_argument("capacity m must be a power of 2, got " + std::to_string(m));
    }
    QrtLayout L;
    L.ell = ell;
    L.m = m;
    L.radix = region_base;
    L.alloc = region_base + L.radix_width();
    const auto fmt = L.format();
    std::size_t p = scratch_base;
    L.found = p++;
    L.split = p++;
    L.cur = p;
    p += fmt.link_width();
    L.off = p;
    p += width_for(ell);
    L.idx_n = p;
    p += fmt.link_width();
    L.idx_s = p;
    p += fmt.link_width();
    L.rank = p;
    p += AllocRegisters::rank_width(2 * m);
    L.ws = p;
    p += fmt.block_width();
    L.zs = p;
    return L;
}

QrtLayout QrtLayout::standalone(std::size_t ell, std::size_t m) {
    const BlockFormat fmt{ell, m};
    return make(ell, m, 0, fmt.total_width() + PrefixSumTree::encoding_width(2 * m));
}

std::size_t QrtLayout::scratch_width(std::size_t ell, std::size_t m) {
    const BlockFormat fmt{ell, m};
    return 2 + 3 * fmt.link_width() + width_for(ell) + AllocRegisters::rank_width(2 * m) +
           fmt.block_width() + width_for(ell) + ell;
}

AllocRegisters QrtLayout::alloc_regs(std::size_t index) const {
    AllocRegisters r;
    r.leaves = 2 * m;
    r.encoding = alloc;
    r.index = index;
    r.rank = rank;
    return r;
}

namespace {

// Field access on the node blocks of one basis string.
struct Blocks {
    const QrtLayout& L;
    BlockFormat f;

    explicit Blocks(const QrtLayout& layout) : L(layout), f(layout.format()) {}

    void check(std::uint64_t b) const {
        if (b < 1 || b > f.blocks()) {
            throw std::logic_error("block index " + std::to_string(b) + " outside [1, 2m]");
        }
    }
    std::size_t base(std::uint64_t b) const {
        check(b);
        return L.radix + f.block_off(b);
    }
    std::size_t len(const BitString& k, std::uint64_t b) const {
        return static_cast<std::size_t>(k.get_uint(base(b) + f.len_off(), f.len_width()));
    }
    std::size_t z_pos(std::uint64_t b) const { return base(b) + f.z_off(); }
    std::size_t parent_pos(std::uint64_t b) const { return base(b) + f.parent_off(); }
    std::size_t child_pos(std::uint64_t b, int s) const { return base(b) + f.child_off(s); }
    std::uint64_t child(const BitString& k, std::uint64_t b, int s) const {
        return k.get_uint(child_pos(b, s), f.link_width());
    }
    std::uint64_t link(const BitString& k, std::size_t pos) const {
        return k.get_uint(pos, f.link_width());
    }
    void xor_link(BitString& k, std::size_t pos, std::uint64_t v) const {
        k.xor_uint(pos, f.link_width(), v);
    }
};

struct Plan {
    bool found = false;
    bool split = false;
    std::uint64_t cur = 1;
    std::size_t off = 0;
    std::size_t reads = 0;
};

// Downward traversal for e. For e absent, stops at the node X whose child
// slot e[off] is empty (X is then the root) or whose child C diverges from e
// inside C's label (split). For e present, reports the same X and split as
// the insertion that would have created e's leaf.
Plan compute_plan(const BitString& key, Reg e, const Blocks& B) {
    const auto& L = B.L;
    struct Step {
        std::uint64_t block;
        std::size_t off;
    };
    std::vector<Step> path{{1, 0}};
    Plan p;
    while (true) {
        if (path.size() > L.depth_cap() + 1) {
            throw std::logic_error("radix traversal exceeded depth cap; region is corrupted");
        }
        const auto [x, o] = path.back();
        p.reads = path.size();
        if (o == L.ell) {
            p.found = true;
            const auto& par = path[path.size() - 2];
            p.split = par.block != 1;
            const auto& X = p.split ? path[path.size() - 3] : path[0];
            p.cur = X.block;
            p.off = X.off;
            return p;
        }
        const int s = key.get(e.offset + o) ? 1 : 0;
        const auto c = B.child(key, x, s);
        if (c == 0) {
            if (x != 1) {
                throw std::logic_error("non-root node with a missing child; region is corrupted");
            }
            p.cur = x;
            p.off = o;
            return p;
        }
        const auto len = B.len(key, c);
        const auto lam = common_prefix(key, e.offset + o, key, B.z_pos(c),
                                       std::min(len, L.ell - o));
        if (lam == len) {
            path.push_back({c, o + len});
            continue;
        }
        p.split = true;
        p.cur = x;
        p.off = o;
        return p;
    }
}

void xor_plan(BitString& key, const QrtLayout& L, const Plan& p, bool negate_found) {
    if (p.found != negate_found) {
        key.flip(L.found);
    }
    if (p.split) {
        key.flip(L.split);
    }
    L.cur_reg().write(key, L.cur_reg().read(key) ^ p.cur);
    L.off_reg().write(key, L.off_reg().read(key) ^ p.off);
}

// Plan-register step: plan ^= plan(e, R), optionally with found negated.
void plan_step(SparseState& state, Reg e, const QrtLayout& L, const Controls& controls,
               bool negate_found, QrtStats& stats) {
    const Blocks B(L);
    std::size_t reads = 0;
    state.permute([&](BitString& key) {
        if (!controls_active(key, controls)) {
            return;
        }
        const Plan p = compute_plan(key, e, B);
        reads = std::max(reads, p.reads);
        xor_plan(key, L, p, negate_found);
    });
    stats.block_reads += reads;
    ++stats.word_ops;
}

void write_node_xor(BitString& key, std::size_t pos, const BlockFormat& f, const BitString& z,
                    std::uint64_t parent, std::uint64_t left, std::uint64_t right) {
    key.xor_uint(pos + f.len_off(), f.len_width(), z.size());
    key.xor_bits(pos + f.z_off(), z, 0, z.size());
    key.xor_uint(pos + f.parent_off(), f.link_width(), parent);
    key.xor_uint(pos + f.child_off(0), f.link_width(), left);
    key.xor_uint(pos + f.child_off(1), f.link_width(), right);
}

// Quantities every edit step reads from the stored plan.
struct Ctx {
    std::uint64_t cur;
    std::size_t off;
    int s;
    bool split;
};

Ctx read_ctx(const BitString& key, Reg e, const QrtLayout& L) {
    Ctx c;
    c.cur = L.cur_reg().read(key);
    c.off = static_cast<std::size_t>(L.off_reg().read(key));
    if (c.off >= L.ell) {
        throw std::logic_error("stored traversal offset out of range");
    }
    c.s = key.get(e.offset + c.off) ? 1 : 0;
    c.split = key.get(L.split);
    return c;
}

// Split point inside the label of C = X.child[s], before C is relabelled.
std::size_t lambda_from_child(const BitString& key, Reg e, const Blocks& B, const Ctx& c) {
    const auto C = B.child(key, c.cur, c.s);
    const auto len = B.len(key, C);
    return common_prefix(key, e.offset + c.off, key, B.z_pos(C), std::min(len, B.L.ell - c.off));
}

using Edit = std::function<void(BitString&)>;

struct EditStep {
    // Exactly one of these is set.
    Edit edit;
    std::size_t alloc_index = 0;
    bool alloc_needs_split = false;
};

std::vector<EditStep> edit_steps(Reg e, const QrtLayout& L) {
    const Blocks B(L);
    const auto f = L.format();
    const Reg idx_n = L.idx_n_reg();
    const Reg idx_s = L.idx_s_reg();
    std::vector<EditStep> steps;
    auto edit = [&](Edit fn) { steps.push_back({std::move(fn), 0, false}); };

    // S1, S2: allocate the new leaf's block, and the split node's block.
    steps.push_back({nullptr, L.idx_n, false});
    steps.push_back({nullptr, L.idx_s, true});

    // S3: ws ^= leaf N.
    edit([=](BitString& key) {
        const Ctx c = read_ctx(key, e, L);
        const std::size_t lam = c.split ? lambda_from_child(key, e, B, c) : 0;
        const BitString z = key.slice(e.offset + c.off + lam, L.ell - c.off - lam);
        write_node_xor(key, L.ws, f, z, c.split ? idx_s.read(key) : c.cur, 0, 0);
    });
    // S4: swap ws with block idxN.
    edit([=](BitString& key) { key.swap_ranges(L.ws, B.base(idx_n.read(key)), f.block_width()); });
    // S5: ws ^= split node N'.
    edit([=](BitString& key) {
        const Ctx c = read_ctx(key, e, L);
        if (!c.split) {
            return;
        }
        const std::size_t lam = lambda_from_child(key, e, B, c);
        const auto C = B.child(key, c.cur, c.s);
        const BitString z = key.slice(e.offset + c.off, lam);
        const bool leaf_bit = key.get(e.offset + c.off + lam);
        std::uint64_t kids[2];
        kids[leaf_bit ? 1 : 0] = idx_n.read(key);
        kids[leaf_bit ? 0 : 1] = C;
        write_node_xor(key, L.ws, f, z, c.cur, kids[0], kids[1]);
    });
    // S6: swap ws with block idxS.
    edit([=](BitString& key) {
        if (!key.get(L.split)) {
            return;
        }
        key.swap_ranges(L.ws, B.base(idx_s.read(key)), f.block_width());
    });
    // S7: drop the first lambda bits of C's label and repoint its parent.
    const std::size_t zw = f.len_width() + L.ell;
    edit([=](BitString& key) {  // (a) swap C.z with zs
        const Ctx c = read_ctx(key, e, L);
        if (!c.split) {
            return;
        }
        const auto C = B.child(key, c.cur, c.s);
        key.swap_ranges(B.base(C), L.zs, zw);
    });
    edit([=](BitString& key) {  // (b) C.z ^= zs[lambda:]
        const Ctx c = read_ctx(key, e, L);
        if (!c.split) {
            return;
        }
        const auto C = B.child(key, c.cur, c.s);
        const std::size_t lam = B.len(key, idx_s.read(key));
        const auto zlen = static_cast<std::size_t>(L.zs_len_reg().read(key));
        if (zlen < lam || zlen > L.ell) {
            throw std::logic_error("label scratch inconsistent with split node");
        }
        key.xor_uint(B.base(C) + f.len_off(), f.len_width(), zlen - lam);
        key.xor_bits(B.z_pos(C), key, L.zs + f.len_width() + lam, zlen - lam);
    });
    edit([=](BitString& key) {  // (c) zs ^= e[off:off+lambda] ++ C.z
        const Ctx c = read_ctx(key, e, L);
        if (!c.split) {
            return;
        }
        const auto C = B.child(key, c.cur, c.s);
        const std::size_t lam = B.len(key, idx_s.read(key));
        const std::size_t clen = B.len(key, C);
        if (lam + clen > L.ell) {
            throw std::logic_error("relabelled child longer than the word length");
        }
        key.xor_uint(L.zs, f.len_width(), lam + clen);
        key.xor_bits(L.zs + f.len_width(), key, e.offset + c.off, lam);
        key.xor_bits(L.zs + f.len_width() + lam, key, B.z_pos(C), clen);
    });
    edit([=](BitString& key) {  // (d) C.parent ^= cur ^ idxS
        const Ctx c = read_ctx(key, e, L);
        if (!c.split) {
            return;
        }
        const auto C = B.child(key, c.cur, c.s);
        B.xor_link(key, B.parent_pos(C), c.cur ^ idx_s.read(key));
    });
    // S8: hang the new subtree off X.
    edit([=](BitString& key) {
        const Ctx c = read_ctx(key, e, L);
        std::uint64_t v = idx_n.read(key);
        if (c.split) {
            const auto ns = idx_s.read(key);
            const std::size_t lam = B.len(key, ns);
            const int leaf_bit = key.get(e.offset + c.off + lam) ? 1 : 0;
            v = B.child(key, ns, 1 - leaf_bit) ^ ns;
        }
        B.xor_link(key, B.child_pos(c.cur, c.s), v);
    });
    // S9: clear idxN against the link that now holds it.
    edit([=](BitString& key) {
        const Ctx c = read_ctx(key, e, L);
        std::uint64_t v;
        if (c.split) {
            const auto ns = idx_s.read(key);
            const std::size_t lam = B.len(key, ns);
            const int leaf_bit = key.get(e.offset + c.off + lam) ? 1 : 0;
            v = B.child(key, ns, leaf_bit);
        } else {
            v = B.child(key, c.cur, c.s);
        }
        idx_n.write(key, idx_n.read(key) ^ v);
    });
    // S10: clear idxS against X's child link.
    edit([=](BitString& key) {
        const Ctx c = read_ctx(key, e, L);
        if (!c.split) {
            return;
        }
        idx_s.write(key, idx_s.read(key) ^ B.child(key, c.cur, c.s));
    });
    return steps;
}

void run_edits(SparseState& state, Reg e, const QrtLayout& L, const SuperposeConfig& config,
               QrtStats& stats, const Controls& active, bool forward) {
    auto steps = edit_steps(e, L);
    const auto n = steps.size();
    for (std::size_t t = 0; t < n; ++t) {
        const auto& st = steps[forward ? t : n - 1 - t];
        if (st.edit) {
            state.permute([&](BitString& key) {
                if (controls_active(key, active)) {
                    st.edit(key);
                }
            });
        } else {
            Controls c = active;
            if (st.alloc_needs_split) {
                c.push_back(L.split);
            }
            const auto regs = L.alloc_regs(st.alloc_index);
            if (forward) {
                u_alloc(state, regs, config, stats.alloc, c);
            } else {
                u_free(state, regs, config, stats.alloc, c);
            }
        }
        ++stats.word_ops;
    }
}

std::size_t count_elements(const BitString& key, const Blocks& B) {
    std::size_t leaves = 0;
    std::vector<std::pair<std::uint64_t, std::size_t>> stack{{1, 0}};
    std::size_t visited = 0;
    while (!stack.empty()) {
        const auto [b, d] = stack.back();
        stack.pop_back();
        if (++visited > B.f.blocks()) {
            throw std::logic_error("radix region has a cycle");
        }
        if (d == B.L.ell && b != 1) {
            ++leaves;
            continue;
        }
        for (int s = 0; s < 2; ++s) {
            const auto c = B.child(key, b, s);
            if (c != 0) {
                stack.emplace_back(c, d + B.len(key, c));
            }
        }
    }
    return leaves;
}

}  // namespace

std::vector<BitString> region_set(const BitString& key, const QrtLayout& L) {
    return decode_layout(key, L.radix, L.ell, L.m).tree.to_set();
}

void write_region(BitString& key, const QrtLayout& L, const RadixTree& tree, const Layout& tau) {
    encode_with_layout_into(key, L.radix, tree, tau, L.m);
    PrefixSumTree::from_set(2 * L.m, free_blocks(tau, L.m)).encode_into(key, L.alloc);
}

SparseState prepare_canonical(const std::vector<BitString>& S, const QrtLayout& L,
                              const BitString& context, std::uint64_t cap) {
    if (S.size() > L.m) {
        throw std::invalid_argument("set of size " + std::to_string(S.size()) +
                                    " exceeds capacity m=" + std::to_string(L.m));
    }
    const auto tree = RadixTree::from_set(L.ell, S);
    const auto taus = enumerate_taus(tree, L.m, cap);
    const double amp = 1.0 / std::sqrt(static_cast<double>(taus.size()));
    std::vector<SparseState::Entry> entries;
    entries.reserve(taus.size());
    BitString key = context;
    for (const auto& tau : taus) {
        write_region(key, L, tree, tau);
        entries.emplace_back(key, amp);
    }
    return SparseState::from_entries(context.size(), std::move(entries));
}

SparseState prepare_canonical(const std::vector<BitString>& S, std::size_t ell, std::size_t m,
                              std::uint64_t cap) {
    const auto L = QrtLayout::standalone(ell, m);
    return prepare_canonical(S, L, BitString(L.zs + width_for(ell) + ell), cap);
}

double scratch_mass(const SparseState& state, const QrtLayout& L) {
    double mass = 0.0;
    for (const auto& [key, a] : state.entries()) {
        if (!key.range_is_zero(L.scratch_base(), L.scratch_width())) {
            mass += std::norm(a);
        }
    }
    return mass;
}

void u_lookup(SparseState& state, Reg e, const QrtLayout& L, std::size_t b, QrtStats& stats,
              const Controls& controls) {
    plan_step(state, e, L, controls, false, stats);
    state.permute([&](BitString& key) {
        if (controls_active(key, controls) && key.get(L.found)) {
            key.flip(b);
        }
    });
    ++stats.word_ops;
    plan_step(state, e, L, controls, false, stats);
    ++stats.lookups;
}

void u_toggle(SparseState& state, Reg e, const QrtLayout& L, const SuperposeConfig& config,
              QrtStats& stats, const Controls& controls) {
    const Blocks B(L);
    for (const auto& [key, a] : state.entries()) {
        if (!controls_active(key, controls)) {
            continue;
        }
        if (!compute_plan(key, e, B).found && count_elements(key, B) >= L.m) {
            throw CapacityError("insert into a radix tree already holding m=" +
                                std::to_string(L.m) + " elements");
        }
    }
    plan_step(state, e, L, controls, false, stats);

    // Insert where found = 0: flip found so it can act as a positive control.
    auto flip_found = [&] {
        state.permute([&](BitString& key) {
            if (controls_active(key, controls)) {
                key.flip(L.found);
            }
        });
        ++stats.word_ops;
    };
    Controls active = controls;
    active.push_back(L.found);
    flip_found();
    run_edits(state, e, L, config, stats, active, true);
    flip_found();
    // Delete where found = 1: the insertion steps in reverse.
    run_edits(state, e, L, config, stats, active, false);

    plan_step(state, e, L, controls, true, stats);
    ++stats.toggles;
}

void u_swap(SparseState& state, Reg e, const QrtLayout& L, std::size_t b,
            const SuperposeConfig& config, QrtStats& stats, const Controls& controls) {
    u_lookup(state, e, L, b, stats, controls);
    Controls with_b = controls;
    with_b.push_back(b);
    u_toggle(state, e, L, config, stats, with_b);
    u_lookup(state, e, L, b, stats, controls);
}

QrtOp controlled(QrtOp op, std::size_t control) {
    return [op = std::move(op), control](SparseState& state, const Controls& controls) {
        Controls c = controls;
        c.push_back(control);
        op(state, c);
    };
}

}  // namespace qramc

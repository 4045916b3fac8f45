#include "chu3/tensor_bimorphic.hpp"

#include "chu3/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <utility>

namespace chu3 {

namespace {

std::vector<Det> table_meet(const std::vector<Det>& x,
                            const std::vector<Det>& y) {
    std::vector<Det> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = det_meet(x[k], y[k]);
    return out;
}

bool table_leq(const std::vector<Det>& x, const std::vector<Det>& y) {
    for (std::size_t k = 0; k < x.size(); ++k)
        if (!det_leq(x[k], y[k])) return false;
    return true;
}

void close_under_meets(std::vector<std::vector<Det>>& tabs,
                       std::map<std::vector<Det>, int>& index,
                       std::size_t class_cap) {
    for (std::size_t i = 0; i < tabs.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            auto m = table_meet(tabs[i], tabs[j]);
            auto [it, fresh] = index.try_emplace(std::move(m),
                                                 static_cast<int>(tabs.size()));
            if (fresh) {
                if (tabs.size() >= class_cap)
                    throw EnumerationTooLarge(
                        "quotient enumeration exceeded " +
                        std::to_string(class_cap) + " classes");
                tabs.push_back(it->first);
            }
        }
    }
}

// Subset constraints for one factor: the meet of a maximal-effect subset K
// is dominated by a possibly larger subset K'; any table expandable to a
// bimorphism must fold equally over K and K'.
std::vector<std::pair<unsigned, unsigned>> side_constraints(
    const EffectSpace& e, const std::vector<EffectId>& maxs) {
    const int m = static_cast<int>(maxs.size());
    std::vector<std::pair<unsigned, unsigned>> out;
    std::vector<EffectId> subset;
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        subset.clear();
        for (int i = 0; i < m; ++i)
            if (mask >> i & 1u) subset.push_back(maxs[static_cast<std::size_t>(i)]);
        EffectId met = e.meet_all(subset);
        unsigned dominated = 0;
        for (int i = 0; i < m; ++i)
            if (e.leq(met, maxs[static_cast<std::size_t>(i)]))
                dominated |= 1u << i;
        if (dominated != mask) out.emplace_back(mask, dominated);
    }
    return out;
}

// Indices into maxs of the maximal effects above l. Nonempty in a finite
// effect space.
std::vector<int> maximals_above(const EffectSpace& e,
                                const std::vector<EffectId>& maxs,
                                EffectId l) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(maxs.size()); ++i)
        if (e.leq(l, maxs[static_cast<std::size_t>(i)])) out.push_back(i);
    return out;
}

// One argument side of a bimorphism candidate: how many elements it has,
// how to form their meets and how to name them in witnesses.
struct BimorphismSide {
    int size = 0;
    std::function<int(std::span<const int>)> meet_all;
    std::function<std::string(int)> label;
};

// Checks meet preservation in the first of the two sides, against every
// element of the second, over subsets of size two and three plus the full
// side. Binary preservation already forces every finite meet; the larger
// subsets guard the fold directly.
BimorphismCheck check_meets_in_side(const BimorphismSide& varied,
                                    const BimorphismSide& fixed,
                                    const std::function<Det(int, int)>& val,
                                    const std::string& argname) {
    auto test = [&](std::span<const int> subset)
        -> std::optional<BimorphismCheck> {
        int met = varied.meet_all(subset);
        for (int r = 0; r < fixed.size; ++r) {
            Det folded = val(subset[0], r);
            for (std::size_t i = 1; i < subset.size(); ++i)
                folded = det_meet(folded, val(subset[i], r));
            if (val(met, r) == folded) continue;
            std::string names = varied.label(subset[0]);
            for (std::size_t i = 1; i < subset.size(); ++i)
                names += "," + varied.label(subset[i]);
            return BimorphismCheck{
                false, "the meet of {" + names + "} in the " + argname +
                           " argument breaks against '" + fixed.label(r) +
                           "'"};
        }
        return std::nullopt;
    };

    std::vector<int> subset;
    for (int i = 0; i < varied.size; ++i)
        for (int j = i + 1; j < varied.size; ++j) {
            subset = {i, j};
            if (auto bad = test(subset)) return *bad;
        }
    for (int i = 0; i < varied.size; ++i)
        for (int j = i + 1; j < varied.size; ++j)
            for (int k = j + 1; k < varied.size; ++k) {
                subset = {i, j, k};
                if (auto bad = test(subset)) return *bad;
            }
    if (varied.size >= 2) {
        subset.resize(static_cast<std::size_t>(varied.size));
        std::iota(subset.begin(), subset.end(), 0);
        if (auto bad = test(subset)) return *bad;
    }
    return {};
}

BimorphismCheck check_bimorphism(const BimorphismSide& first,
                                 const BimorphismSide& second,
                                 const std::function<Det(int, int)>& val) {
    auto left = check_meets_in_side(first, second, val, "first");
    if (!left.pass) return left;
    return check_meets_in_side(
        second, first, [&](int r, int l) { return val(l, r); }, "second");
}

BimorphismSide effect_side(const EffectSpace& e) {
    return {e.size(),
            [&e](std::span<const int> s) { return e.meet_all(s); },
            [&e](int l) { return e.label(l); }};
}

BimorphismSide state_side(const StateSpace& s) {
    return {s.size(),
            [&s](std::span<const int> xs) { return s.meet_all(xs); },
            [&s](int x) { return s.label(x); }};
}

} // namespace

BimorphismCheck is_bimorphism_effects(const EffectSpace& ea,
                                      const EffectSpace& eb,
                                      std::span<const Det> table) {
    const std::size_t cells =
        static_cast<std::size_t>(ea.size()) * static_cast<std::size_t>(eb.size());
    if (table.size() != cells)
        throw DimensionMismatch("bimorphism table holds " +
                                std::to_string(table.size()) +
                                " cells, the effect pair domain has " +
                                std::to_string(cells));
    const int pb = eb.size();
    return check_bimorphism(effect_side(ea), effect_side(eb),
                            [&](int la, int lb) {
                                return table[static_cast<std::size_t>(la) * pb +
                                             lb];
                            });
}

BimorphismCheck is_bimorphism_states(const StateSpace& a, const StateSpace& b,
                                     std::span<const Det> table) {
    const std::size_t cells =
        static_cast<std::size_t>(a.size()) * static_cast<std::size_t>(b.size());
    if (table.size() != cells)
        throw DimensionMismatch("bimorphism table holds " +
                                std::to_string(table.size()) +
                                " cells, the state pair domain has " +
                                std::to_string(cells));
    const int nb = b.size();
    return check_bimorphism(state_side(a), state_side(b),
                            [&](int x, int y) {
                                return table[static_cast<std::size_t>(x) * nb +
                                             y];
                            });
}

std::vector<Det> phi_state_pair(const EffectSpace& ea, const EffectSpace& eb,
                                StateId sa, StateId sb) {
    if (sa < 0 || sa >= ea.base().size() || sb < 0 || sb >= eb.base().size())
        throw DimensionMismatch("state pair outside the factor spaces");
    const int pa = ea.size();
    const int pb = eb.size();
    std::vector<Det> table(static_cast<std::size_t>(pa) * pb);
    for (EffectId la = 0; la < pa; ++la)
        for (EffectId lb = 0; lb < pb; ++lb)
            table[static_cast<std::size_t>(la) * pb + lb] =
                det_bullet(ea.eval(la, sa), eb.eval(lb, sb));
    return table;
}

PhiGammaResult phi_gamma(const EffectSpace& ea, const EffectSpace& eb,
                         std::span<const Det> gamma) {
    const auto maxa = ea.max_effects();
    const auto maxb = eb.max_effects();
    const std::size_t cells = maxa.size() * maxb.size();
    if (gamma.size() != cells)
        throw DimensionMismatch("boundary table holds " +
                                std::to_string(gamma.size()) +
                                " cells, the maximal effect pair domain has " +
                                std::to_string(cells));
    for (Det d : gamma)
        if (d == Det::Bot)
            throw Error("boundary tables must be two valued");

    const int pa = ea.size();
    const int pb = eb.size();
    const int mb = static_cast<int>(maxb.size());
    std::vector<std::vector<int>> ua(static_cast<std::size_t>(pa));
    std::vector<std::vector<int>> ub(static_cast<std::size_t>(pb));
    for (EffectId la = 0; la < pa; ++la)
        ua[static_cast<std::size_t>(la)] = maximals_above(ea, maxa, la);
    for (EffectId lb = 0; lb < pb; ++lb)
        ub[static_cast<std::size_t>(lb)] = maximals_above(eb, maxb, lb);

    PhiGammaResult out;
    out.table.resize(static_cast<std::size_t>(pa) * pb);
    for (EffectId la = 0; la < pa; ++la)
        for (EffectId lb = 0; lb < pb; ++lb) {
            std::optional<Det> acc;
            for (int i : ua[static_cast<std::size_t>(la)])
                for (int j : ub[static_cast<std::size_t>(lb)]) {
                    Det g = gamma[static_cast<std::size_t>(i) * mb + j];
                    acc = acc ? det_meet(*acc, g) : g;
                }
            out.table[static_cast<std::size_t>(la) * pb + lb] = *acc;
        }
    auto check = is_bimorphism_effects(ea, eb, out.table);
    out.bimorphic = check.pass;
    out.witness = std::move(check.witness);
    return out;
}

PureBimorphismScan enumerate_pure_bimorphisms(const EffectSpace& ea,
                                              const EffectSpace& eb) {
    const auto maxa = ea.max_effects();
    const auto maxb = eb.max_effects();
    const int ma = static_cast<int>(maxa.size());
    const int mb = static_cast<int>(maxb.size());
    if (ma > kPureBimorphismSideCap || mb > kPureBimorphismSideCap)
        throw EnumerationTooLarge(
            "bimorphism enumeration allows at most " +
            std::to_string(kPureBimorphismSideCap) +
            " maximal effects per side, the factors carry " +
            std::to_string(ma) + " and " + std::to_string(mb));

    const auto cons_a = side_constraints(ea, maxa);
    const auto cons_b = side_constraints(eb, maxb);

    // Fold of a two-valued column (bit set = Yes) over an index mask.
    auto fold_code = [](unsigned code, unsigned mask) {
        unsigned hit = code & mask;
        if (hit == mask) return Det::Yes;
        if (hit == 0) return Det::No;
        return Det::Bot;
    };

    std::vector<unsigned> valid_cols;
    for (unsigned code = 0; code < (1u << ma); ++code) {
        bool ok = true;
        for (const auto& [k, kp] : cons_a)
            if (fold_code(code, k) != fold_code(code, kp)) {
                ok = false;
                break;
            }
        if (ok) valid_cols.push_back(code);
    }

    // Row constraints become checkable once every column they touch is
    // placed; group them under their highest column.
    std::vector<std::vector<std::pair<unsigned, unsigned>>> row_groups(
        static_cast<std::size_t>(mb));
    for (const auto& [k, kp] : cons_b) {
        int hi = 0;
        for (int j = 0; j < mb; ++j)
            if ((k | kp) >> j & 1u) hi = j;
        row_groups[static_cast<std::size_t>(hi)].emplace_back(k, kp);
    }
    auto fold_row = [&](const std::vector<unsigned>& cols, unsigned mask,
                        int row) {
        bool all_yes = true;
        bool all_no = true;
        for (int j = 0; j < mb; ++j)
            if (mask >> j & 1u) {
                if (cols[static_cast<std::size_t>(j)] >> row & 1u)
                    all_no = false;
                else
                    all_yes = false;
            }
        if (all_yes) return Det::Yes;
        if (all_no) return Det::No;
        return Det::Bot;
    };

    PureBimorphismScan scan;
    scan.candidates = 1ull << (static_cast<unsigned long long>(ma) * mb);

    std::vector<unsigned> cols(static_cast<std::size_t>(mb));
    std::vector<Det> gamma(static_cast<std::size_t>(ma) * mb);
    auto dfs = [&](auto&& self, int j) -> void {
        if (j == mb) {
            for (int i = 0; i < ma; ++i)
                for (int jj = 0; jj < mb; ++jj)
                    gamma[static_cast<std::size_t>(i) * mb + jj] =
                        (cols[static_cast<std::size_t>(jj)] >> i & 1u)
                            ? Det::Yes
                            : Det::No;
            auto res = phi_gamma(ea, eb, gamma);
            if (res.bimorphic) {
                ++scan.valid;
                scan.tables.push_back(std::move(res.table));
            }
            return;
        }
        for (unsigned code : valid_cols) {
            cols[static_cast<std::size_t>(j)] = code;
            bool ok = true;
            for (const auto& [k, kp] : row_groups[static_cast<std::size_t>(j)]) {
                for (int i = 0; i < ma; ++i)
                    if (fold_row(cols, k, i) != fold_row(cols, kp, i)) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            if (ok) self(self, j + 1);
        }
    };
    dfs(dfs, 0);
    std::sort(scan.tables.begin(), scan.tables.end());
    return scan;
}

MaximalTensorEnumeration maximal_tensor_elements(const EffectSpace& ea,
                                                 const EffectSpace& eb) {
    MaximalTensorEnumeration out;
    out.pure = enumerate_pure_bimorphisms(ea, eb);

    const auto maxa = ea.max_effects();
    const auto maxb = eb.max_effects();
    const int ma = static_cast<int>(maxa.size());
    const int mb = static_cast<int>(maxb.size());
    const int pa = ea.size();
    const int pb = eb.size();

    // Determination premise: a bimorphism is fixed by its values on maximal
    // effect pairs only when every effect is the meet of the maximal effects
    // above it.
    auto verify_determination = [](const EffectSpace& e,
                                   const std::vector<EffectId>& maxs) {
        std::vector<EffectId> dominators;
        for (EffectId l = 0; l < e.size(); ++l) {
            dominators.clear();
            for (EffectId m : maxs)
                if (e.leq(l, m)) dominators.push_back(m);
            if (dominators.empty() || e.meet_all(dominators) != l)
                throw ImplicationViolated(
                    "effect '" + e.label(l) +
                    "' is not the meet of the maximal effects above it");
        }
    };
    verify_determination(ea, maxa);
    verify_determination(eb, maxb);

    std::vector<std::vector<int>> ua(static_cast<std::size_t>(pa));
    std::vector<std::vector<int>> ub(static_cast<std::size_t>(pb));
    for (EffectId la = 0; la < pa; ++la)
        ua[static_cast<std::size_t>(la)] = maximals_above(ea, maxa, la);
    for (EffectId lb = 0; lb < pb; ++lb)
        ub[static_cast<std::size_t>(lb)] = maximals_above(eb, maxb, lb);

    const auto cons_a = side_constraints(ea, maxa);
    const auto cons_b = side_constraints(eb, maxb);

    // Columns over the first side that satisfy its subset constraints; only
    // such columns can appear in a bimorphism table.
    auto fold_column = [ma](const std::vector<Det>& col, unsigned mask) {
        std::optional<Det> acc;
        for (int i = 0; i < ma; ++i)
            if (mask >> i & 1u) {
                Det v = col[static_cast<std::size_t>(i)];
                acc = acc ? det_meet(*acc, v) : v;
            }
        return *acc;
    };
    std::vector<std::vector<Det>> valid_cols;
    {
        static constexpr Det kVals[3] = {Det::Bot, Det::Yes, Det::No};
        unsigned long long span = 1;
        for (int i = 0; i < ma; ++i) span *= 3;
        std::vector<Det> col(static_cast<std::size_t>(ma));
        for (unsigned long long code = 0; code < span; ++code) {
            unsigned long long c = code;
            for (int i = 0; i < ma; ++i) {
                col[static_cast<std::size_t>(i)] = kVals[c % 3];
                c /= 3;
            }
            bool ok = true;
            for (const auto& [k, kp] : cons_a)
                if (fold_column(col, k) != fold_column(col, kp)) {
                    ok = false;
                    break;
                }
            if (ok) valid_cols.push_back(col);
        }
    }

    std::vector<std::vector<std::pair<unsigned, unsigned>>> row_groups(
        static_cast<std::size_t>(mb));
    for (const auto& [k, kp] : cons_b) {
        int hi = 0;
        for (int j = 0; j < mb; ++j)
            if ((k | kp) >> j & 1u) hi = j;
        row_groups[static_cast<std::size_t>(hi)].emplace_back(k, kp);
    }

    // Restrictions of the valid pure expansions to maximal pairs, for the
    // sub-semilattice membership test at each leaf.
    std::vector<std::vector<Det>> pure_boundary;
    pure_boundary.reserve(out.pure.tables.size());
    for (const auto& t : out.pure.tables) {
        std::vector<Det> bnd(static_cast<std::size_t>(ma) * mb);
        for (int i = 0; i < ma; ++i)
            for (int j = 0; j < mb; ++j)
                bnd[static_cast<std::size_t>(i) * mb + j] =
                    t[static_cast<std::size_t>(maxa[static_cast<std::size_t>(i)]) * pb +
                      maxb[static_cast<std::size_t>(j)]];
        pure_boundary.push_back(std::move(bnd));
    }

    // Meet tables of the full effect domains, for the leaf verification.
    std::vector<EffectId> meet_a(static_cast<std::size_t>(pa) * pa);
    std::vector<EffectId> meet_b(static_cast<std::size_t>(pb) * pb);
    for (EffectId x = 0; x < pa; ++x)
        for (EffectId y = 0; y < pa; ++y)
            meet_a[static_cast<std::size_t>(x) * pa + y] = ea.meet(x, y);
    for (EffectId x = 0; x < pb; ++x)
        for (EffectId y = 0; y < pb; ++y)
            meet_b[static_cast<std::size_t>(x) * pb + y] = eb.meet(x, y);

    std::vector<std::vector<Det>> cols(static_cast<std::size_t>(mb),
                                       std::vector<Det>(static_cast<std::size_t>(ma)));
    std::vector<Det> boundary(static_cast<std::size_t>(ma) * mb);
    std::vector<Det> full(static_cast<std::size_t>(pa) * pb);
    std::vector<Det> accumulated;

    auto leaf = [&]() {
        for (int i = 0; i < ma; ++i)
            for (int j = 0; j < mb; ++j)
                boundary[static_cast<std::size_t>(i) * mb + j] =
                    cols[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)];

        // Expand to the full pair domain through the meet over dominating
        // maximal pairs.
        for (EffectId la = 0; la < pa; ++la)
            for (EffectId lb = 0; lb < pb; ++lb) {
                std::optional<Det> acc;
                for (int i : ua[static_cast<std::size_t>(la)])
                    for (int j : ub[static_cast<std::size_t>(lb)]) {
                        Det g = boundary[static_cast<std::size_t>(i) * mb + j];
                        acc = acc ? det_meet(*acc, g) : g;
                    }
                full[static_cast<std::size_t>(la) * pb + lb] = *acc;
            }

        // Binary meet preservation on the full domain; the effect spaces
        // are meet closed, so every finite meet follows.
        for (EffectId x = 0; x < pa; ++x)
            for (EffectId y = x + 1; y < pa; ++y) {
                EffectId m = meet_a[static_cast<std::size_t>(x) * pa + y];
                for (EffectId r = 0; r < pb; ++r)
                    if (full[static_cast<std::size_t>(m) * pb + r] !=
                        det_meet(full[static_cast<std::size_t>(x) * pb + r],
                                 full[static_cast<std::size_t>(y) * pb + r]))
                        return;
            }
        for (EffectId x = 0; x < pb; ++x)
            for (EffectId y = x + 1; y < pb; ++y) {
                EffectId m = meet_b[static_cast<std::size_t>(x) * pb + y];
                for (EffectId r = 0; r < pa; ++r)
                    if (full[static_cast<std::size_t>(r) * pb + m] !=
                        det_meet(full[static_cast<std::size_t>(r) * pb + x],
                                 full[static_cast<std::size_t>(r) * pb + y]))
                        return;
            }
        ++out.bimorphism_count;

        // The bimorphism lies in the generated sub-semilattice exactly when
        // it equals the meet of the pure tables above it.
        accumulated.clear();
        for (const auto& p : pure_boundary) {
            bool dominates = true;
            for (std::size_t c = 0; c < boundary.size(); ++c)
                if (!det_leq(boundary[c], p[c])) {
                    dominates = false;
                    break;
                }
            if (!dominates) continue;
            if (accumulated.empty()) {
                accumulated = p;
            } else {
                for (std::size_t c = 0; c < accumulated.size(); ++c)
                    accumulated[c] = det_meet(accumulated[c], p[c]);
            }
        }
        if (!accumulated.empty() && accumulated == boundary)
            out.generated_tables.push_back(full);
    };

    auto dfs = [&](auto&& self, int j) -> void {
        if (j == mb) {
            leaf();
            return;
        }
        auto fold_row = [&](unsigned mask, int row) {
            std::optional<Det> acc;
            for (int jj = 0; jj < mb; ++jj)
                if (mask >> jj & 1u) {
                    Det v = cols[static_cast<std::size_t>(jj)][static_cast<std::size_t>(row)];
                    acc = acc ? det_meet(*acc, v) : v;
                }
            return *acc;
        };
        for (const auto& candidate : valid_cols) {
            cols[static_cast<std::size_t>(j)] = candidate;
            bool ok = true;
            for (const auto& [k, kp] : row_groups[static_cast<std::size_t>(j)]) {
                for (int i = 0; i < ma; ++i)
                    if (fold_row(k, i) != fold_row(kp, i)) {
                        ok = false;
                        break;
                    }
                if (!ok) break;
            }
            if (ok) self(self, j + 1);
        }
    };
    dfs(dfs, 0);
    std::sort(out.generated_tables.begin(), out.generated_tables.end());
    return out;
}

std::vector<std::vector<Det>> mu_embedding(const TensorSpace& tensor) {
    const EffectSpace& ea = tensor.effects_a();
    const EffectSpace& eb = tensor.effects_b();
    const StateSpace& sp = tensor.space();
    const int pa = ea.size();
    const int pb = eb.size();
    const int n = sp.size();

    std::vector<std::vector<Det>> tables(static_cast<std::size_t>(n));
    for (StateId s = 0; s < n; ++s) {
        auto& t = tables[static_cast<std::size_t>(s)];
        t.resize(static_cast<std::size_t>(pa) * pb);
        for (EffectId la = 0; la < pa; ++la)
            for (EffectId lb = 0; lb < pb; ++lb)
                t[static_cast<std::size_t>(la) * pb + lb] =
                    tensor.nu_class(s, la, lb);
    }

    std::map<std::vector<Det>, StateId> seen;
    for (StateId s = 0; s < n; ++s) {
        auto [it, fresh] = seen.try_emplace(tables[static_cast<std::size_t>(s)], s);
        if (!fresh)
            throw ImplicationViolated("two tensor classes share one effect "
                                      "table: '" +
                                      sp.label(it->second) + "' and '" +
                                      sp.label(s) + "'");
        auto check =
            is_bimorphism_effects(ea, eb, tables[static_cast<std::size_t>(s)]);
        if (!check.pass)
            throw ImplicationViolated("the effect table of '" + sp.label(s) +
                                      "' is not a bimorphism: " +
                                      check.witness);
    }
    for (StateId s = 0; s < n; ++s)
        for (StateId t = 0; t < n; ++t) {
            auto met = table_meet(tables[static_cast<std::size_t>(s)],
                                  tables[static_cast<std::size_t>(t)]);
            if (met != tables[static_cast<std::size_t>(sp.meet(s, t))])
                throw ImplicationViolated(
                    "effect tables do not preserve the meet of '" +
                    sp.label(s) + "' and '" + sp.label(t) + "'");
        }
    return tables;
}

StarTensorElement make_star_element(const StateSpace& a, const StateSpace& b,
                                    std::vector<StatePair> gens) {
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    if (gens.empty()) throw EmptySet("generator set is empty");
    for (const auto& [x, y] : gens) {
        if (x < 0 || x >= a.size() || y < 0 || y >= b.size())
            throw DimensionMismatch("generator pair outside the factors");
        if (!a.is_pure(x) || !b.is_pure(y))
            throw NotPure("generator pair [" + a.label(x) + "," + b.label(y) +
                          "] is not pure in both factors");
    }
    return StarTensorElement{std::move(gens)};
}

StarTensorElement star_generator(const StateSpace& a, const StarMap& star_a,
                                 const StateSpace& b, const StarMap& star_b,
                                 StateId alpha, StateId beta) {
    check_star_shape(a, star_a);
    check_star_shape(b, star_b);
    return make_star_element(a, b, {{alpha, beta}});
}

StarTensorElement star_pure_expansion(const StateSpace& a,
                                      const StateSpace& b, StateId sa,
                                      StateId sb) {
    if (sa < 0 || sa >= a.size() || sb < 0 || sb >= b.size())
        throw DimensionMismatch("state pair outside the factors");
    std::vector<StatePair> gens;
    for (StateId alpha : a.underline(sa))
        for (StateId beta : b.underline(sb)) gens.push_back({alpha, beta});
    return make_star_element(a, b, std::move(gens));
}

Det star_eval(const StateSpace& a, const StarMap& star_a, const StateSpace& b,
              const StarMap& star_b, const StarTensorElement& elem,
              StateId sa, StateId sb) {
    check_star_shape(a, star_a);
    check_star_shape(b, star_b);
    if (sa < 0 || sa >= a.size() || sb < 0 || sb >= b.size())
        throw DimensionMismatch("state pair outside the factors");
    if (elem.gens.empty()) throw EmptySet("generator set is empty");
    std::optional<Det> acc;
    for (const auto& [alpha, beta] : elem.gens) {
        if (!a.is_pure(alpha) || !b.is_pure(beta))
            throw NotPure("generator pair [" + a.label(alpha) + "," +
                          b.label(beta) + "] is not pure in both factors");
        Det v = det_bullet(bracket(a, star_a, alpha, sa),
                           bracket(b, star_b, beta, sb));
        acc = acc ? det_meet(*acc, v) : v;
    }
    return *acc;
}

Det double_bracket(const StateSpace& a, const StarMap& star_a,
                   const StateSpace& b, const StarMap& star_b,
                   const StarTensorElement& lhs,
                   const StarTensorElement& rhs) {
    check_star_shape(a, star_a);
    check_star_shape(b, star_b);
    if (lhs.gens.empty() || rhs.gens.empty())
        throw EmptySet("generator set is empty");
    std::optional<Det> acc;
    for (const auto& [ai, bi] : lhs.gens)
        for (const auto& [aj, bj] : rhs.gens) {
            Det v = det_bullet(bracket(a, star_a, ai, aj),
                               bracket(b, star_b, bi, bj));
            acc = acc ? det_meet(*acc, v) : v;
        }
    return *acc;
}

StarTensorSpace::StarTensorSpace(const StateSpace& a, const StarMap& star_a,
                                 const StateSpace& b, const StarMap& star_b,
                                 int max_pairs)
    : a_(&a), b_(&b), star_a_(&star_a), star_b_(&star_b),
      space_(materialize(max_pairs)) {}

StateSpace StarTensorSpace::materialize(int max_pairs) {
    const StateSpace& a = *a_;
    const StateSpace& b = *b_;
    check_star_shape(a, *star_a_);
    check_star_shape(b, *star_b_);
    for (const StateSpace* f : {a_, b_})
        if (!f->check_state_axioms().all_pass())
            throw Error("tensor factor '" + f->name() +
                        "' fails the state axioms");

    std::vector<StatePair> pures;
    for (StateId alpha : a.pure_states())
        for (StateId beta : b.pure_states()) pures.push_back({alpha, beta});
    if (static_cast<int>(pures.size()) > max_pairs)
        throw EnumerationTooLarge(
            "star tensor of '" + a.name() + "' and '" + b.name() +
            "' spans " + std::to_string(pures.size()) +
            " pure pairs, cap is " + std::to_string(max_pairs));

    const int na = a.size();
    const int nb = b.size();
    const std::size_t cells = static_cast<std::size_t>(na) * nb;

    std::vector<std::vector<Det>> tabs;
    std::map<std::vector<Det>, int> index;
    std::vector<int> pure_tab(pures.size());
    for (std::size_t p = 0; p < pures.size(); ++p) {
        const auto [alpha, beta] = pures[p];
        std::vector<Det> t(cells);
        for (StateId x = 0; x < na; ++x)
            for (StateId y = 0; y < nb; ++y)
                t[static_cast<std::size_t>(x) * nb + y] =
                    det_bullet(bracket(a, *star_a_, alpha, x),
                               bracket(b, *star_b_, beta, y));
        auto [it, fresh] =
            index.try_emplace(std::move(t), static_cast<int>(tabs.size()));
        if (fresh) tabs.push_back(it->first);
        pure_tab[p] = it->second;
    }
    close_under_meets(tabs, index, 100000);

    const int ncls = static_cast<int>(tabs.size());
    std::vector<std::vector<StatePair>> canon(static_cast<std::size_t>(ncls));
    for (int c = 0; c < ncls; ++c)
        for (std::size_t p = 0; p < pures.size(); ++p)
            if (table_leq(tabs[static_cast<std::size_t>(c)],
                          tabs[static_cast<std::size_t>(pure_tab[p])]))
                canon[static_cast<std::size_t>(c)].push_back(pures[p]);

    std::vector<int> order(static_cast<std::size_t>(ncls));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int l, int r) {
        return canon[static_cast<std::size_t>(l)] <
               canon[static_cast<std::size_t>(r)];
    });

    std::vector<std::string> labels(static_cast<std::size_t>(ncls));
    std::vector<std::vector<bool>> leq(
        static_cast<std::size_t>(ncls),
        std::vector<bool>(static_cast<std::size_t>(ncls), false));
    for (int i = 0; i < ncls; ++i) {
        const auto& ci = canon[static_cast<std::size_t>(order[i])];
        labels[static_cast<std::size_t>(i)] = render_pairs(a, b, ci);
        for (int j = 0; j < ncls; ++j) {
            const auto& cj = canon[static_cast<std::size_t>(order[j])];
            leq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                std::includes(ci.begin(), ci.end(), cj.begin(), cj.end());
        }
    }

    StateSpace sp = StateSpace::from_leq(
        "star_tensor(" + a.name() + "," + b.name() + ")", labels, leq);
    if (!sp.check_state_axioms().all_pass())
        throw ImplicationViolated(
            "enumerated star tensor of valid factors fails the state axioms");

    std::vector<StateId> cls_to_sid(static_cast<std::size_t>(ncls));
    for (int i = 0; i < ncls; ++i)
        cls_to_sid[static_cast<std::size_t>(order[i])] =
            sp.id_of(labels[static_cast<std::size_t>(i)]);
    canonical_.assign(static_cast<std::size_t>(ncls), {});
    tables_.assign(static_cast<std::size_t>(ncls), {});
    for (int c = 0; c < ncls; ++c) {
        const auto sid = static_cast<std::size_t>(
            cls_to_sid[static_cast<std::size_t>(c)]);
        canonical_[sid] = std::move(canon[static_cast<std::size_t>(c)]);
        tables_[sid] = std::move(tabs[static_cast<std::size_t>(c)]);
    }
    return sp;
}

Det StarTensorSpace::value(StateId s, StateId sa, StateId sb) const {
    if (s < 0 || s >= space_.size())
        throw DimensionMismatch("class outside the enumerated tensor");
    if (sa < 0 || sa >= a_->size() || sb < 0 || sb >= b_->size())
        throw DimensionMismatch("state pair outside the factors");
    return tables_[static_cast<std::size_t>(s)]
                  [static_cast<std::size_t>(sa) * b_->size() + sb];
}

StateId StarTensorSpace::class_of(const StarTensorElement& elem) const {
    const StateSpace& a = *a_;
    const StateSpace& b = *b_;
    if (elem.gens.empty()) throw EmptySet("generator set is empty");
    const int nb = b.size();
    std::vector<Det> t(static_cast<std::size_t>(a.size()) * nb, Det::Yes);
    bool first = true;
    for (const auto& [alpha, beta] : elem.gens) {
        if (alpha < 0 || alpha >= a.size() || beta < 0 || beta >= nb)
            throw DimensionMismatch("generator pair outside the factors");
        if (!a.is_pure(alpha) || !b.is_pure(beta))
            throw NotPure("generator pair [" + a.label(alpha) + "," +
                          b.label(beta) + "] is not pure in both factors");
        for (StateId x = 0; x < a.size(); ++x)
            for (StateId y = 0; y < nb; ++y) {
                Det v = det_bullet(bracket(a, *star_a_, alpha, x),
                                   bracket(b, *star_b_, beta, y));
                auto& cell = t[static_cast<std::size_t>(x) * nb + y];
                cell = first ? v : det_meet(cell, v);
            }
        first = false;
    }
    for (StateId s = 0; s < space_.size(); ++s)
        if (tables_[static_cast<std::size_t>(s)] == t) return s;
    throw Error("generator set fell outside the enumerated quotient");
}

StateId StarTensorSpace::class_of_pair(StateId sa, StateId sb) const {
    return class_of(star_pure_expansion(*a_, *b_, sa, sb));
}

Det StarTensorSpace::pairing(StateId s, StateId t) const {
    if (s < 0 || s >= space_.size() || t < 0 || t >= space_.size())
        throw DimensionMismatch("class outside the enumerated tensor");
    const auto& cs = canonical_[static_cast<std::size_t>(s)];
    const auto& ct = canonical_[static_cast<std::size_t>(t)];
    std::optional<Det> generated;
    for (const auto& [ai, bi] : cs)
        for (const auto& [aj, bj] : ct) {
            Det v = det_bullet(bracket(*a_, *star_a_, ai, aj),
                               bracket(*b_, *star_b_, bi, bj));
            generated = generated ? det_meet(*generated, v) : v;
        }
    const int nb = b_->size();
    std::optional<Det> evaluated;
    for (const auto& [aj, bj] : ct) {
        Det v = tables_[static_cast<std::size_t>(s)]
                       [static_cast<std::size_t>(aj) * nb + bj];
        evaluated = evaluated ? det_meet(*evaluated, v) : v;
    }
    if (*generated != *evaluated)
        throw ImplicationViolated(
            "the pairing of '" + space_.label(s) + "' and '" +
            space_.label(t) + "' depends on the chosen generator sets");
    return *generated;
}

StateId star_tensor_star(const StarTensorSpace& tensor, StateId s) {
    const StateSpace& sp = tensor.space();
    if (s == sp.bottom())
        throw Error("the bottom element has no star");
    std::vector<StateId> orth;
    for (StateId t = 0; t < sp.size(); ++t)
        if (tensor.pairing(t, s) == Det::No) orth.push_back(t);
    if (orth.empty())
        throw Error("element '" + sp.label(s) + "' pairs to No with nothing");
    StateId star = sp.meet_all(orth);
    if (star == sp.bottom())
        throw Error("the orthogonal infimum of '" + sp.label(s) +
                    "' collapses to the bottom");
    return star;
}

StarMap star_tensor_star_map(const StarTensorSpace& tensor) {
    const StateSpace& sp = tensor.space();
    StarMap star(static_cast<std::size_t>(sp.size()), -1);
    for (StateId s = 0; s < sp.size(); ++s)
        if (s != sp.bottom())
            star[static_cast<std::size_t>(s)] = star_tensor_star(tensor, s);
    return star;
}

std::vector<StateId> star_tensor_atoms(const StarTensorSpace& tensor) {
    const StateSpace& a = tensor.factor_a();
    const StateSpace& b = tensor.factor_b();
    std::vector<StateId> out;
    for (StateId x : a.atoms())
        for (StateId y : b.atoms()) {
            auto left = star_pure_expansion(a, b, x, b.bottom());
            auto right = star_pure_expansion(a, b, a.bottom(), y);
            left.gens.insert(left.gens.end(), right.gens.begin(),
                             right.gens.end());
            out.push_back(
                tensor.class_of(make_star_element(a, b, std::move(left.gens))));
        }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    if (out != tensor.space().atoms())
        throw ImplicationViolated("the factor-atom formula misses the "
                                  "covering atoms of the tensor");
    return out;
}

StarOrthoReport star_orthocomplementation_check(
    const StateSpace& a, const StarMap& star_a, const StateSpace& b,
    const StarMap& star_b, int max_pairs) {
    StarTensorSpace tensor(a, star_a, b, star_b, max_pairs);
    const StateSpace& sp = tensor.space();

    // The star of a pure tensor must match its factor-star form, the meet
    // of alpha* (x) bot and bot (x) beta*.
    for (StateId alpha : a.pure_states())
        for (StateId beta : b.pure_states()) {
            StateId direct = star_tensor_star(
                tensor, tensor.class_of(make_star_element(a, b, {{alpha, beta}})));
            auto left = star_pure_expansion(
                a, b, star_a[static_cast<std::size_t>(alpha)], b.bottom());
            auto right = star_pure_expansion(
                a, b, a.bottom(), star_b[static_cast<std::size_t>(beta)]);
            left.gens.insert(left.gens.end(), right.gens.begin(),
                             right.gens.end());
            StateId formed =
                tensor.class_of(make_star_element(a, b, std::move(left.gens)));
            if (direct != formed)
                throw ImplicationViolated(
                    "the star of the pure tensor [" + a.label(alpha) + "," +
                    b.label(beta) + "] disagrees with its factor-star form");
        }

    StarOrthoReport out;
    out.report = validate_star(sp, star_tensor_star_map(tensor));
    out.orthocomplemented = out.report.orthocomplemented;
    if (out.orthocomplemented) return out;

    // An ascending scan for the certificate: a two-generator element and
    // the star of its first generator with no common upper bound.
    for (StateId alpha : a.pure_states())
        for (StateId beta : b.pure_states())
            for (StateId alpha2 : a.pure_states()) {
                if (alpha2 == alpha) continue;
                for (StateId beta2 : b.pure_states()) {
                    if (beta2 == beta) continue;
                    std::vector<StatePair> vg = {{alpha, beta},
                                                 {alpha2, beta2}};
                    std::sort(vg.begin(), vg.end());
                    StateId v =
                        tensor.class_of(make_star_element(a, b, vg));
                    StateId w = star_tensor_star(
                        tensor,
                        tensor.class_of(make_star_element(a, b, {{alpha, beta}})));
                    bool bounded = false;
                    for (StateId u = 0; u < sp.size(); ++u)
                        if (sp.leq(v, u) && sp.leq(w, u)) {
                            bounded = true;
                            break;
                        }
                    if (!bounded) {
                        const std::vector<StatePair> wg = {{alpha, beta}};
                        out.certificate =
                            "elements " + render_pairs(a, b, vg) +
                            " and the star of " + render_pairs(a, b, wg) +
                            " admit no common upper bound";
                        return out;
                    }
                }
            }
    out.certificate = "no pure quadruple certificate found";
    return out;
}

BipartiteReport check_star_bipartite(const StarTensorSpace& tensor) {
    const StateSpace& a = tensor.factor_a();
    const StateSpace& b = tensor.factor_b();
    const StarMap& star_a = tensor.factor_star_a();
    const StarMap& star_b = tensor.factor_star_b();
    const StateSpace& sp = tensor.space();
    const int n = sp.size();
    const int na = a.size();
    const int nb = b.size();

    std::vector<std::vector<Det>> pairing(
        static_cast<std::size_t>(n), std::vector<Det>(static_cast<std::size_t>(n)));
    for (StateId s = 0; s < n; ++s)
        for (StateId t = 0; t < n; ++t)
            pairing[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)] =
                tensor.pairing(s, t);

    std::vector<StateId> pair_cls(static_cast<std::size_t>(na) * nb);
    for (StateId x = 0; x < na; ++x)
        for (StateId y = 0; y < nb; ++y)
            pair_cls[static_cast<std::size_t>(x) * nb + y] =
                tensor.class_of_pair(x, y);

    BipartiteReport rep;

    std::vector<StateId> everything(static_cast<std::size_t>(n));
    std::iota(everything.begin(), everything.end(), 0);
    const StateId all_meet = sp.meet_all(everything);

    // b1: every class evaluates continuously on state meets.
    for (StateId l = 0; l < n && rep.b1.pass; ++l) {
        for (StateId s = 0; s < n && rep.b1.pass; ++s)
            for (StateId t = 0; t < s; ++t) {
                Det direct = pairing[static_cast<std::size_t>(l)]
                                    [static_cast<std::size_t>(sp.meet(s, t))];
                Det split = det_meet(
                    pairing[static_cast<std::size_t>(l)][static_cast<std::size_t>(s)],
                    pairing[static_cast<std::size_t>(l)][static_cast<std::size_t>(t)]);
                if (direct != split) {
                    rep.b1 = {false, "'" + sp.label(l) +
                                         "' is not continuous at the meet "
                                         "of '" +
                                         sp.label(s) + "' and '" +
                                         sp.label(t) + "'"};
                    break;
                }
            }
        if (!rep.b1.pass) break;
        Det folded = pairing[static_cast<std::size_t>(l)][0];
        for (StateId s = 1; s < n; ++s)
            folded = det_meet(folded,
                              pairing[static_cast<std::size_t>(l)]
                                     [static_cast<std::size_t>(s)]);
        if (pairing[static_cast<std::size_t>(l)]
                   [static_cast<std::size_t>(all_meet)] != folded)
            rep.b1 = {false, "'" + sp.label(l) +
                                 "' is not continuous at the infimum of "
                                 "the whole space"};
    }

    // b2: evaluation turns effect meets into pointwise meets.
    for (StateId s = 0; s < n && rep.b2.pass; ++s) {
        for (StateId l = 0; l < n && rep.b2.pass; ++l)
            for (StateId m = 0; m < l; ++m) {
                Det direct = pairing[static_cast<std::size_t>(sp.meet(l, m))]
                                    [static_cast<std::size_t>(s)];
                Det split = det_meet(
                    pairing[static_cast<std::size_t>(l)][static_cast<std::size_t>(s)],
                    pairing[static_cast<std::size_t>(m)][static_cast<std::size_t>(s)]);
                if (direct != split) {
                    rep.b2 = {false, "the meet of '" + sp.label(l) +
                                         "' and '" + sp.label(m) +
                                         "' misevaluates on '" + sp.label(s) +
                                         "'"};
                    break;
                }
            }
        if (!rep.b2.pass) break;
        Det folded = pairing[0][static_cast<std::size_t>(s)];
        for (StateId l = 1; l < n; ++l)
            folded = det_meet(folded,
                              pairing[static_cast<std::size_t>(l)]
                                     [static_cast<std::size_t>(s)]);
        if (pairing[static_cast<std::size_t>(all_meet)]
                   [static_cast<std::size_t>(s)] != folded)
            rep.b2 = {false, "the infimum of the whole effect family "
                             "misevaluates on '" + sp.label(s) + "'"};
    }

    // b3 / b4: every factor pair lands on a class, as an effect and as a
    // state; totality is by construction, the scan keeps it witnessed.
    for (StateId x = 0; x < na; ++x)
        for (StateId y = 0; y < nb; ++y)
            if (StateId c = pair_cls[static_cast<std::size_t>(x) * nb + y];
                c < 0 || c >= n) {
                rep.b3 = {false, "factor pair [" + a.label(x) + "," +
                                     b.label(y) + "] has no class"};
                rep.b4 = rep.b3;
            }

    // Mixtures: factor meets embed as tensor meets, per side, over pairs
    // and the full family. With effects identified with states the effect
    // and state mixture laws coincide; both report slots are filled by the
    // same scans.
    auto mix_left = [&]() -> BipartiteAxiomCheck {
        for (StateId y = 0; y < nb; ++y) {
            for (StateId x1 = 0; x1 < na; ++x1)
                for (StateId x2 = 0; x2 < x1; ++x2) {
                    StateId direct =
                        pair_cls[static_cast<std::size_t>(a.meet(x1, x2)) * nb +
                                 y];
                    StateId split = sp.meet(
                        pair_cls[static_cast<std::size_t>(x1) * nb + y],
                        pair_cls[static_cast<std::size_t>(x2) * nb + y]);
                    if (direct != split)
                        return {false, "the meet of '" + a.label(x1) +
                                           "' and '" + a.label(x2) +
                                           "' does not mix at '" + b.label(y) +
                                           "'"};
                }
            std::vector<StateId> whole;
            for (StateId x = 0; x < na; ++x)
                whole.push_back(pair_cls[static_cast<std::size_t>(x) * nb + y]);
            std::vector<StateId> left_all(static_cast<std::size_t>(na));
            std::iota(left_all.begin(), left_all.end(), 0);
            if (pair_cls[static_cast<std::size_t>(a.meet_all(left_all)) * nb +
                         y] != sp.meet_all(whole))
                return {false, "the infimum of the first factor does not "
                               "mix at '" + b.label(y) + "'"};
        }
        return {};
    };
    auto mix_right = [&]() -> BipartiteAxiomCheck {
        for (StateId x = 0; x < na; ++x) {
            for (StateId y1 = 0; y1 < nb; ++y1)
                for (StateId y2 = 0; y2 < y1; ++y2) {
                    StateId direct =
                        pair_cls[static_cast<std::size_t>(x) * nb +
                                 b.meet(y1, y2)];
                    StateId split = sp.meet(
                        pair_cls[static_cast<std::size_t>(x) * nb + y1],
                        pair_cls[static_cast<std::size_t>(x) * nb + y2]);
                    if (direct != split)
                        return {false, "the meet of '" + b.label(y1) +
                                           "' and '" + b.label(y2) +
                                           "' does not mix at '" + a.label(x) +
                                           "'"};
                }
            std::vector<StateId> whole;
            for (StateId y = 0; y < nb; ++y)
                whole.push_back(pair_cls[static_cast<std::size_t>(x) * nb + y]);
            std::vector<StateId> right_all(static_cast<std::size_t>(nb));
            std::iota(right_all.begin(), right_all.end(), 0);
            if (pair_cls[static_cast<std::size_t>(x) * nb +
                         b.meet_all(right_all)] != sp.meet_all(whole))
                return {false, "the infimum of the second factor does not "
                               "mix at '" + a.label(x) + "'"};
        }
        return {};
    };
    rep.b3_mix_left = mix_left();
    rep.b3_mix_right = mix_right();
    rep.b4_mix_left = rep.b3_mix_left;
    rep.b4_mix_right = rep.b3_mix_right;

    // b5: product effects separate the classes.
    for (StateId s = 0; s < n && rep.b5.pass; ++s)
        for (StateId t = 0; t < s; ++t) {
            bool split = false;
            for (std::size_t q = 0; q < pair_cls.size() && !split; ++q)
                split = pairing[static_cast<std::size_t>(pair_cls[q])]
                               [static_cast<std::size_t>(s)] !=
                        pairing[static_cast<std::size_t>(pair_cls[q])]
                               [static_cast<std::size_t>(t)];
            if (!split) {
                rep.b5 = {false, "product effects cannot tell '" +
                                     sp.label(s) + "' from '" + sp.label(t) +
                                     "'"};
                break;
            }
        }

    // c: on embedded pairs the pairing is the bullet product of the factor
    // brackets.
    for (StateId lx = 0; lx < na && rep.c.pass; ++lx)
        for (StateId ly = 0; ly < nb && rep.c.pass; ++ly)
            for (StateId x = 0; x < na && rep.c.pass; ++x)
                for (StateId y = 0; y < nb; ++y) {
                    Det direct =
                        pairing[static_cast<std::size_t>(
                            pair_cls[static_cast<std::size_t>(lx) * nb + ly])]
                               [static_cast<std::size_t>(
                                   pair_cls[static_cast<std::size_t>(x) * nb +
                                            y])];
                    Det factored = det_bullet(bracket(a, star_a, lx, x),
                                              bracket(b, star_b, ly, y));
                    if (direct != factored) {
                        rep.c = {false,
                                 "the pairing of [" + a.label(lx) + "," +
                                     b.label(ly) + "] and [" + a.label(x) +
                                     "," + b.label(y) +
                                     "] is not the bullet product of the "
                                     "factor brackets"};
                        break;
                    }
                }
    return rep;
}

} // namespace chu3

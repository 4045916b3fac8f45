#include "chu3/tensor_basic.hpp"

#include "chu3/errors.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <utility>

namespace chu3 {

namespace {

// Pointwise meet of two determination tables of equal length.
std::vector<Det> table_meet(const std::vector<Det>& x, const std::vector<Det>& y) {
    std::vector<Det> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = det_meet(x[k], y[k]);
    return out;
}

bool table_leq(const std::vector<Det>& x, const std::vector<Det>& y) {
    for (std::size_t k = 0; k < x.size(); ++k)
        if (!det_leq(x[k], y[k])) return false;
    return true;
}

// Grows a family of tables until it is closed under pointwise meets. The
// iteration index stays valid because new tables are only appended.
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

} // namespace

TensorGen make_tensor_gen(std::vector<StatePair> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    if (pairs.empty()) throw EmptySet("tensor generator set is empty");
    return TensorGen{std::move(pairs)};
}

Det nu_eval(const EffectSpace& ea, const EffectSpace& eb, const TensorGen& u,
            const Effect& la, const Effect& lb) {
    if (u.pairs.empty()) throw EmptySet("nu evaluation needs generators");
    Det acc = det_bullet(ea.eval(la, u.pairs.front().first),
                         eb.eval(lb, u.pairs.front().second));
    for (std::size_t i = 1; i < u.pairs.size(); ++i)
        acc = det_meet(acc, det_bullet(ea.eval(la, u.pairs[i].first),
                                       eb.eval(lb, u.pairs[i].second)));
    return acc;
}

bool leq_pure(const StateSpace& a, const StateSpace& b, const TensorGen& u,
              StatePair target) {
    const int n = static_cast<int>(u.pairs.size());
    if (n == 0) throw EmptySet("order test needs generators");
    if (n > kTensorGeneratorCap)
        throw GeneratorCapExceeded("generator set of size " + std::to_string(n) +
                                   " exceeds the subset expansion cap of " +
                                   std::to_string(kTensorGeneratorCap));
    const std::size_t full = std::size_t{1} << n;
    std::vector<StateId> meet_a(full), meet_b(full);
    for (int i = 0; i < n; ++i) {
        meet_a[std::size_t{1} << i] = u.pairs[static_cast<std::size_t>(i)].first;
        meet_b[std::size_t{1} << i] = u.pairs[static_cast<std::size_t>(i)].second;
    }
    for (std::size_t m = 1; m < full; ++m) {
        if ((m & (m - 1)) == 0) continue;
        const std::size_t low = m & (~m + 1);
        const std::size_t rest = m ^ low;
        meet_a[m] = a.meet(meet_a[rest], meet_a[low]);
        meet_b[m] = b.meet(meet_b[rest], meet_b[low]);
    }
    // For every split of the generators, the left block must sink below the
    // left target or the right block below the right target; empty blocks
    // never count.
    const std::size_t all = full - 1;
    for (std::size_t k = 0; k < full; ++k) {
        const bool left_ok = k != 0 && a.leq(meet_a[k], target.first);
        const std::size_t comp = all ^ k;
        const bool right_ok = comp != 0 && b.leq(meet_b[comp], target.second);
        if (!left_ok && !right_ok) return false;
    }
    return true;
}

BasicTensorElement canonicalize(const StateSpace& a, const StateSpace& b,
                                const TensorGen& u) {
    std::vector<StatePair> in;
    for (StateId x = 0; x < a.size(); ++x)
        for (StateId y = 0; y < b.size(); ++y)
            if (leq_pure(a, b, u, {x, y})) in.push_back({x, y});

    const auto member = [&](StateId x, StateId y) {
        return std::binary_search(in.begin(), in.end(), StatePair{x, y});
    };
    for (const auto& [x, y] : in) {
        for (StateId x2 = 0; x2 < a.size(); ++x2)
            for (StateId y2 = 0; y2 < b.size(); ++y2)
                if (a.leq(x, x2) && b.leq(y, y2) && !member(x2, y2))
                    throw ImplicationViolated(
                        "canonical set of " + render_pairs(a, b, u.pairs) +
                        " is not upward closed at [" + a.label(x2) + "," +
                        b.label(y2) + "]");
        for (const auto& [x2, y2] : in) {
            if (y2 == y && !member(a.meet(x, x2), y))
                throw ImplicationViolated(
                    "canonical set of " + render_pairs(a, b, u.pairs) +
                    " is not closed under left meets at fixed '" + b.label(y) +
                    "'");
            if (x2 == x && !member(x, b.meet(y, y2)))
                throw ImplicationViolated(
                    "canonical set of " + render_pairs(a, b, u.pairs) +
                    " is not closed under right meets at fixed '" +
                    a.label(x) + "'");
        }
    }
    return BasicTensorElement{std::move(in)};
}

bool tensor_leq(const StateSpace& a, const StateSpace& b, const TensorGen& u,
                const TensorGen& v) {
    for (const auto& p : v.pairs)
        if (!leq_pure(a, b, u, p)) return false;
    return true;
}

bool tensor_eq(const StateSpace& a, const StateSpace& b, const TensorGen& u,
               const TensorGen& v) {
    return tensor_leq(a, b, u, v) && tensor_leq(a, b, v, u);
}

BasicTensorElement tensor_meet(const StateSpace& a, const StateSpace& b,
                               std::span<const TensorGen> us) {
    if (us.empty()) throw EmptySet("tensor infimum needs at least one element");
    std::vector<StatePair> all;
    for (const auto& u : us)
        all.insert(all.end(), u.pairs.begin(), u.pairs.end());
    return canonicalize(a, b, make_tensor_gen(std::move(all)));
}

std::optional<BasicTensorElement> tensor_join(const StateSpace& a,
                                              const StateSpace& b,
                                              const TensorGen& u,
                                              const TensorGen& v) {
    std::vector<StatePair> common;
    for (StateId x : a.pure_states())
        for (StateId y : b.pure_states())
            if (leq_pure(a, b, u, {x, y}) && leq_pure(a, b, v, {x, y}))
                common.push_back({x, y});
    std::optional<BasicTensorElement> join;
    if (!common.empty()) join = canonicalize(a, b, make_tensor_gen(common));

    if (a.is_distributive() && b.is_distributive()) {
        std::vector<StatePair> expanded;
        bool defined = true;
        for (const auto& [ua, ub] : u.pairs) {
            for (const auto& [va, vb] : v.pairs) {
                const auto ja = a.bounded_join(ua, va);
                const auto jb = b.bounded_join(ub, vb);
                if (!ja || !jb) {
                    defined = false;
                    break;
                }
                expanded.push_back({*ja, *jb});
            }
            if (!defined) break;
        }
        if (defined) {
            if (!join)
                throw ImplicationViolated(
                    "pairwise join expansion of " +
                    render_pairs(a, b, u.pairs) + " and " +
                    render_pairs(a, b, v.pairs) +
                    " exists although the elements have no common upper bound");
            const auto via_formula =
                canonicalize(a, b, make_tensor_gen(std::move(expanded)));
            if (via_formula != *join)
                throw ImplicationViolated(
                    "pairwise join expansion of " +
                    render_pairs(a, b, u.pairs) + " and " +
                    render_pairs(a, b, v.pairs) +
                    " disagrees with the least common upper bound");
        }
    }
    return join;
}

std::vector<BasicTensorElement> tensor_pure_states(const StateSpace& a,
                                                   const StateSpace& b) {
    std::vector<BasicTensorElement> out;
    for (StateId x : a.pure_states())
        for (StateId y : b.pure_states())
            out.push_back(canonicalize(a, b, TensorGen{{{x, y}}}));
    return out;
}

std::vector<BasicTensorElement> tensor_atoms(const StateSpace& a,
                                             const StateSpace& b) {
    std::vector<BasicTensorElement> out;
    for (StateId x : a.atoms())
        for (StateId y : b.atoms())
            out.push_back(canonicalize(
                a, b,
                make_tensor_gen({{x, b.bottom()}, {a.bottom(), y}})));
    return out;
}

std::string render_pairs(const StateSpace& a, const StateSpace& b,
                         std::span<const StatePair> pairs) {
    std::string out = "[";
    bool first = true;
    for (const auto& [x, y] : pairs) {
        if (!first) out += ",";
        first = false;
        out += "[" + a.label(x) + "," + b.label(y) + "]";
    }
    return out + "]";
}

TensorSpace::TensorSpace(const StateSpace& a, const StateSpace& b,
                         int max_pairs)
    : a_(&a), b_(&b), ea_(a), eb_(b), space_(materialize(max_pairs)) {}

StateSpace TensorSpace::materialize(int max_pairs) {
    const StateSpace& a = *a_;
    const StateSpace& b = *b_;
    for (const StateSpace* f : {a_, b_})
        if (!f->check_state_axioms().all_pass())
            throw Error("tensor factor '" + f->name() +
                        "' fails the state axioms");
    const int na = a.size();
    const int nb = b.size();
    const int pairs = na * nb;
    if (pairs > max_pairs)
        throw EnumerationTooLarge(
            "tensor of '" + a.name() + "' and '" + b.name() + "' spans " +
            std::to_string(pairs) + " pairs, cap is " +
            std::to_string(max_pairs));

    const int pa = ea_.size();
    const int pb = eb_.size();
    const std::size_t tlen = static_cast<std::size_t>(pa) * pb;

    std::vector<std::vector<Det>> tabs;
    std::map<std::vector<Det>, int> index;
    std::vector<int> pair_tab(static_cast<std::size_t>(pairs));
    for (StateId x = 0; x < na; ++x) {
        for (StateId y = 0; y < nb; ++y) {
            std::vector<Det> t(tlen);
            for (EffectId la = 0; la < pa; ++la)
                for (EffectId lb = 0; lb < pb; ++lb)
                    t[static_cast<std::size_t>(la) * pb + lb] =
                        det_bullet(ea_.eval(la, x), eb_.eval(lb, y));
            auto [it, fresh] =
                index.try_emplace(std::move(t), static_cast<int>(tabs.size()));
            if (fresh) tabs.push_back(it->first);
            pair_tab[static_cast<std::size_t>(x) * nb + y] = it->second;
        }
    }
    close_under_meets(tabs, index, 100000);

    const int ncls = static_cast<int>(tabs.size());
    std::vector<std::vector<StatePair>> canon(static_cast<std::size_t>(ncls));
    for (int c = 0; c < ncls; ++c)
        for (StateId x = 0; x < na; ++x)
            for (StateId y = 0; y < nb; ++y)
                if (table_leq(tabs[static_cast<std::size_t>(c)],
                              tabs[static_cast<std::size_t>(
                                  pair_tab[static_cast<std::size_t>(x) * nb + y])]))
                    canon[static_cast<std::size_t>(c)].push_back({x, y});

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
        "tensor(" + a.name() + "," + b.name() + ")", labels, leq);
    if (!sp.check_state_axioms().all_pass())
        throw ImplicationViolated(
            "enumerated tensor of valid factors fails the state axioms");

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
    pair_class_.assign(static_cast<std::size_t>(pairs), -1);
    for (int q = 0; q < pairs; ++q)
        pair_class_[static_cast<std::size_t>(q)] =
            cls_to_sid[static_cast<std::size_t>(
                pair_tab[static_cast<std::size_t>(q)])];
    return sp;
}

const std::vector<Det>& TensorSpace::table_of(const TensorGen& u,
                                              std::vector<Det>& scratch) const {
    if (u.pairs.empty()) throw EmptySet("class lookup needs generators");
    const int na = a_->size();
    const int nb = b_->size();
    const auto pair_table = [&](const StatePair& p) -> const std::vector<Det>& {
        if (p.first < 0 || p.first >= na || p.second < 0 || p.second >= nb)
            throw DimensionMismatch("generator pair lies outside the factors");
        return tables_[static_cast<std::size_t>(
            pair_class_[static_cast<std::size_t>(p.first) * nb + p.second])];
    };
    const auto& front = pair_table(u.pairs.front());
    if (u.pairs.size() == 1) return front;
    scratch = front;
    for (std::size_t i = 1; i < u.pairs.size(); ++i) {
        const auto& t = pair_table(u.pairs[i]);
        for (std::size_t k = 0; k < scratch.size(); ++k)
            scratch[k] = det_meet(scratch[k], t[k]);
    }
    return scratch;
}

StateId TensorSpace::class_of(const TensorGen& u) const {
    std::vector<Det> scratch;
    const auto& t = table_of(u, scratch);
    for (std::size_t s = 0; s < tables_.size(); ++s)
        if (tables_[s] == t) return static_cast<StateId>(s);
    throw Error("generator set fell outside the enumerated quotient");
}

StateId TensorSpace::class_of_pair(StateId sa, StateId sb) const {
    if (sa < 0 || sa >= a_->size() || sb < 0 || sb >= b_->size())
        throw DimensionMismatch("factor state id out of range");
    return pair_class_[static_cast<std::size_t>(sa) * b_->size() + sb];
}

Det TensorSpace::nu_class(StateId s, EffectId la, EffectId lb) const {
    if (s < 0 || s >= space_.size())
        throw DimensionMismatch("tensor state id out of range");
    if (la < 0 || la >= ea_.size() || lb < 0 || lb >= eb_.size())
        throw DimensionMismatch("factor effect id out of range");
    return tables_[static_cast<std::size_t>(s)]
                  [static_cast<std::size_t>(la) * eb_.size() + lb];
}

StateSpace enumerate_tensor(const StateSpace& a, const StateSpace& b,
                            int max_pairs) {
    return TensorSpace(a, b, max_pairs).space();
}

TensorEffectElement make_tensor_effect(
    std::vector<std::pair<EffectId, EffectId>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    if (pairs.empty()) throw EmptySet("effect generator set is empty");
    return TensorEffectElement{std::move(pairs)};
}

TensorEffectSpace::TensorEffectSpace(const TensorSpace& tensor)
    : tensor_(&tensor) {
    const int ns = tensor.space().size();
    const int pa = tensor.effects_a().size();
    const int pb = tensor.effects_b().size();

    std::vector<std::vector<Det>> tabs;
    std::map<std::vector<Det>, int> index;
    std::vector<int> pair_tab(static_cast<std::size_t>(pa) * pb);
    for (EffectId la = 0; la < pa; ++la) {
        for (EffectId lb = 0; lb < pb; ++lb) {
            std::vector<Det> t(static_cast<std::size_t>(ns));
            for (StateId s = 0; s < ns; ++s)
                t[static_cast<std::size_t>(s)] = tensor.nu_class(s, la, lb);
            auto [it, fresh] =
                index.try_emplace(std::move(t), static_cast<int>(tabs.size()));
            if (fresh) tabs.push_back(it->first);
            pair_tab[static_cast<std::size_t>(la) * pb + lb] = it->second;
        }
    }
    close_under_meets(tabs, index, 100000);

    const int ncls = static_cast<int>(tabs.size());
    std::vector<std::vector<std::pair<EffectId, EffectId>>> canon(
        static_cast<std::size_t>(ncls));
    for (int c = 0; c < ncls; ++c)
        for (EffectId la = 0; la < pa; ++la)
            for (EffectId lb = 0; lb < pb; ++lb)
                if (table_leq(tabs[static_cast<std::size_t>(c)],
                              tabs[static_cast<std::size_t>(
                                  pair_tab[static_cast<std::size_t>(la) * pb +
                                           lb])]))
                    canon[static_cast<std::size_t>(c)].push_back({la, lb});

    std::vector<int> order(static_cast<std::size_t>(ncls));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int l, int r) {
        return canon[static_cast<std::size_t>(l)] <
               canon[static_cast<std::size_t>(r)];
    });
    tables_.reserve(static_cast<std::size_t>(ncls));
    canonical_.reserve(static_cast<std::size_t>(ncls));
    for (int i = 0; i < ncls; ++i) {
        tables_.push_back(std::move(tabs[static_cast<std::size_t>(order[i])]));
        canonical_.push_back(
            std::move(canon[static_cast<std::size_t>(order[i])]));
    }
}

Det TensorEffectSpace::eval(int effect_class, StateId tensor_state) const {
    if (effect_class < 0 || effect_class >= size())
        throw DimensionMismatch("effect class id out of range");
    if (tensor_state < 0 || tensor_state >= tensor_->space().size())
        throw DimensionMismatch("tensor state id out of range");
    return tables_[static_cast<std::size_t>(effect_class)]
                  [static_cast<std::size_t>(tensor_state)];
}

Det TensorEffectSpace::eval(const TensorEffectElement& lam,
                            StateId tensor_state) const {
    if (lam.pairs.empty()) throw EmptySet("effect evaluation needs generators");
    Det acc = tensor_->nu_class(tensor_state, lam.pairs.front().first,
                                lam.pairs.front().second);
    for (std::size_t i = 1; i < lam.pairs.size(); ++i)
        acc = det_meet(acc, tensor_->nu_class(tensor_state, lam.pairs[i].first,
                                              lam.pairs[i].second));
    return acc;
}

Det TensorEffectSpace::eval_gen(const TensorEffectElement& lam,
                                const TensorGen& u) const {
    if (lam.pairs.empty()) throw EmptySet("effect evaluation needs generators");
    const EffectSpace& ea = tensor_->effects_a();
    const EffectSpace& eb = tensor_->effects_b();
    Det acc = nu_eval(ea, eb, u, ea.effect(lam.pairs.front().first),
                      eb.effect(lam.pairs.front().second));
    for (std::size_t i = 1; i < lam.pairs.size(); ++i)
        acc = det_meet(acc, nu_eval(ea, eb, u, ea.effect(lam.pairs[i].first),
                                    eb.effect(lam.pairs[i].second)));
    return acc;
}

int TensorEffectSpace::class_of(const TensorEffectElement& lam) const {
    const int ns = tensor_->space().size();
    std::vector<Det> t(static_cast<std::size_t>(ns));
    for (StateId s = 0; s < ns; ++s)
        t[static_cast<std::size_t>(s)] = eval(lam, s);
    for (std::size_t c = 0; c < tables_.size(); ++c)
        if (tables_[c] == t) return static_cast<int>(c);
    throw Error("effect generator set fell outside the enumerated quotient");
}

bool TensorEffectSpace::leq(int x, int y) const {
    if (x < 0 || x >= size() || y < 0 || y >= size())
        throw DimensionMismatch("effect class id out of range");
    return table_leq(tables_[static_cast<std::size_t>(x)],
                     tables_[static_cast<std::size_t>(y)]);
}

int TensorEffectSpace::meet(int x, int y) const {
    if (x < 0 || x >= size() || y < 0 || y >= size())
        throw DimensionMismatch("effect class id out of range");
    const auto m = table_meet(tables_[static_cast<std::size_t>(x)],
                              tables_[static_cast<std::size_t>(y)]);
    for (std::size_t c = 0; c < tables_.size(); ++c)
        if (tables_[c] == m) return static_cast<int>(c);
    throw Error("effect infimum fell outside the enumerated quotient");
}

std::string TensorEffectSpace::label(int effect_class) const {
    if (effect_class < 0 || effect_class >= size())
        throw DimensionMismatch("effect class id out of range");
    const EffectSpace& ea = tensor_->effects_a();
    const EffectSpace& eb = tensor_->effects_b();
    std::string out = "[";
    bool first = true;
    for (const auto& [la, lb] :
         canonical_[static_cast<std::size_t>(effect_class)]) {
        if (!first) out += ",";
        first = false;
        out += "[" + ea.label(la) + "," + eb.label(lb) + "]";
    }
    return out + "]";
}

BipartiteReport check_bipartite_axioms(const TensorSpace& tensor) {
    BipartiteReport rep;
    const StateSpace& sp = tensor.space();
    const StateSpace& a = tensor.factor_a();
    const StateSpace& b = tensor.factor_b();
    const EffectSpace& ea = tensor.effects_a();
    const EffectSpace& eb = tensor.effects_b();
    const int ns = sp.size();
    const int pa = ea.size();
    const int pb = eb.size();

    const auto effect_name = [&](EffectId la, EffectId lb) {
        return "[" + ea.label(la) + "," + eb.label(lb) + "]";
    };

    // b1: infima of states exist by construction; every product effect must
    // evaluate on them as the meet of the evaluations. Mixed bipartite
    // effects inherit the identity pointwise from their generators.
    for (StateId s = 0; s < ns && rep.b1.pass; ++s)
        for (StateId t = 0; t < s && rep.b1.pass; ++t) {
            const StateId m = sp.meet(s, t);
            for (EffectId la = 0; la < pa && rep.b1.pass; ++la)
                for (EffectId lb = 0; lb < pb; ++lb)
                    if (tensor.nu_class(m, la, lb) !=
                        det_meet(tensor.nu_class(s, la, lb),
                                 tensor.nu_class(t, la, lb))) {
                        rep.b1 = {false, "effect " + effect_name(la, lb) +
                                             " is not continuous on the "
                                             "infimum of '" +
                                             sp.label(s) + "' and '" +
                                             sp.label(t) + "'"};
                        break;
                    }
        }
    if (rep.b1.pass && ns > 0) {
        std::vector<StateId> everything(static_cast<std::size_t>(ns));
        std::iota(everything.begin(), everything.end(), 0);
        const StateId m = sp.meet_all(everything);
        for (EffectId la = 0; la < pa && rep.b1.pass; ++la)
            for (EffectId lb = 0; lb < pb; ++lb) {
                Det acc = tensor.nu_class(0, la, lb);
                for (StateId s = 1; s < ns; ++s)
                    acc = det_meet(acc, tensor.nu_class(s, la, lb));
                if (tensor.nu_class(m, la, lb) != acc) {
                    rep.b1 = {false, "effect " + effect_name(la, lb) +
                                         " is not continuous on the infimum "
                                         "of the whole space"};
                    break;
                }
            }
    }

    // b2: infima of effects are generator unions, evaluated as pointwise
    // meets. The pairwise scan checks the lower bound law; the greatest
    // lower bound half follows pointwise from the meet law of the
    // tri-domain. The full-family scan pins the fold as order independent,
    // so arbitrary finite infima are well defined.
    for (EffectId la = 0; la < pa && rep.b2.pass; ++la)
        for (EffectId lb = 0; lb < pb && rep.b2.pass; ++lb)
            for (EffectId la2 = 0; la2 < pa && rep.b2.pass; ++la2)
                for (EffectId lb2 = 0; lb2 < pb; ++lb2) {
                    bool ok = true;
                    for (StateId s = 0; s < ns && ok; ++s) {
                        const Det united =
                            det_meet(tensor.nu_class(s, la, lb),
                                     tensor.nu_class(s, la2, lb2));
                        ok = det_leq(united, tensor.nu_class(s, la, lb)) &&
                             det_leq(united, tensor.nu_class(s, la2, lb2));
                        if (!ok)
                            rep.b2 = {false,
                                      "union of " + effect_name(la, lb) +
                                          " and " + effect_name(la2, lb2) +
                                          " does not sink below both on '" +
                                          sp.label(s) + "'"};
                    }
                    if (!ok) break;
                }
    if (rep.b2.pass) {
        for (StateId s = 0; s < ns && rep.b2.pass; ++s) {
            std::vector<Det> vals;
            vals.reserve(static_cast<std::size_t>(pa) * pb);
            for (EffectId la = 0; la < pa; ++la)
                for (EffectId lb = 0; lb < pb; ++lb)
                    vals.push_back(tensor.nu_class(s, la, lb));
            Det up = vals.front();
            for (std::size_t k = 1; k < vals.size(); ++k)
                up = det_meet(up, vals[k]);
            Det down = vals.back();
            for (std::size_t k = vals.size() - 1; k-- > 0;)
                down = det_meet(down, vals[k]);
            if (up != down || up != det_meet_all(vals))
                rep.b2 = {false, "the infimum of the whole effect family is "
                                 "fold order dependent on '" +
                                     sp.label(s) + "'"};
        }
    }

    // b3 / b4: every factor pair embeds; exercising the lookups is the
    // whole check, since both embeddings are total by construction.
    for (EffectId la = 0; la < pa; ++la)
        for (EffectId lb = 0; lb < pb; ++lb)
            for (StateId s = 0; s < ns; ++s) (void)tensor.nu_class(s, la, lb);
    for (StateId x = 0; x < a.size(); ++x)
        for (StateId y = 0; y < b.size(); ++y) (void)tensor.class_of_pair(x, y);

    // b3 mixtures: factor effect meets embed as meets of the embeddings.
    const auto check_b3_left = [&]() -> BipartiteAxiomCheck {
        for (EffectId l1 = 0; l1 < pa; ++l1)
            for (EffectId l2 = 0; l2 <= l1; ++l2) {
                const EffectId m = ea.meet(l1, l2);
                for (EffectId lb = 0; lb < pb; ++lb)
                    for (StateId s = 0; s < ns; ++s)
                        if (tensor.nu_class(s, m, lb) !=
                            det_meet(tensor.nu_class(s, l1, lb),
                                     tensor.nu_class(s, l2, lb)))
                            return {false,
                                    "left mixture of '" + ea.label(l1) +
                                        "' and '" + ea.label(l2) +
                                        "' breaks against '" + eb.label(lb) +
                                        "' on '" + sp.label(s) + "'"};
            }
        std::vector<EffectId> all(static_cast<std::size_t>(pa));
        std::iota(all.begin(), all.end(), 0);
        const EffectId m = ea.meet_all(all);
        for (EffectId lb = 0; lb < pb; ++lb)
            for (StateId s = 0; s < ns; ++s) {
                Det acc = tensor.nu_class(s, 0, lb);
                for (EffectId la = 1; la < pa; ++la)
                    acc = det_meet(acc, tensor.nu_class(s, la, lb));
                if (tensor.nu_class(s, m, lb) != acc)
                    return {false, "left mixture of the whole effect space "
                                   "breaks against '" +
                                       eb.label(lb) + "'"};
            }
        return {};
    };
    const auto check_b3_right = [&]() -> BipartiteAxiomCheck {
        for (EffectId l1 = 0; l1 < pb; ++l1)
            for (EffectId l2 = 0; l2 <= l1; ++l2) {
                const EffectId m = eb.meet(l1, l2);
                for (EffectId la = 0; la < pa; ++la)
                    for (StateId s = 0; s < ns; ++s)
                        if (tensor.nu_class(s, la, m) !=
                            det_meet(tensor.nu_class(s, la, l1),
                                     tensor.nu_class(s, la, l2)))
                            return {false,
                                    "right mixture of '" + eb.label(l1) +
                                        "' and '" + eb.label(l2) +
                                        "' breaks against '" + ea.label(la) +
                                        "' on '" + sp.label(s) + "'"};
            }
        std::vector<EffectId> all(static_cast<std::size_t>(pb));
        std::iota(all.begin(), all.end(), 0);
        const EffectId m = eb.meet_all(all);
        for (EffectId la = 0; la < pa; ++la)
            for (StateId s = 0; s < ns; ++s) {
                Det acc = tensor.nu_class(s, la, 0);
                for (EffectId lb = 1; lb < pb; ++lb)
                    acc = det_meet(acc, tensor.nu_class(s, la, lb));
                if (tensor.nu_class(s, la, m) != acc)
                    return {false, "right mixture of the whole effect space "
                                   "breaks against '" +
                                       ea.label(la) + "'"};
            }
        return {};
    };
    rep.b3_mix_left = check_b3_left();
    rep.b3_mix_right = check_b3_right();

    // b4 mixtures: factor state meets embed as meets of the pure tensors.
    const auto check_b4_left = [&]() -> BipartiteAxiomCheck {
        for (StateId x1 = 0; x1 < a.size(); ++x1)
            for (StateId x2 = 0; x2 <= x1; ++x2)
                for (StateId y = 0; y < b.size(); ++y)
                    if (tensor.class_of_pair(a.meet(x1, x2), y) !=
                        sp.meet(tensor.class_of_pair(x1, y),
                                tensor.class_of_pair(x2, y)))
                        return {false, "left mixture of '" + a.label(x1) +
                                           "' and '" + a.label(x2) +
                                           "' breaks at '" + b.label(y) + "'"};
        std::vector<StateId> all(static_cast<std::size_t>(a.size()));
        std::iota(all.begin(), all.end(), 0);
        const StateId bottom_a = a.meet_all(all);
        for (StateId y = 0; y < b.size(); ++y) {
            std::vector<StateId> classes;
            for (StateId x = 0; x < a.size(); ++x)
                classes.push_back(tensor.class_of_pair(x, y));
            if (tensor.class_of_pair(bottom_a, y) != sp.meet_all(classes))
                return {false,
                        "left mixture of the whole left factor breaks at '" +
                            b.label(y) + "'"};
        }
        return {};
    };
    const auto check_b4_right = [&]() -> BipartiteAxiomCheck {
        for (StateId y1 = 0; y1 < b.size(); ++y1)
            for (StateId y2 = 0; y2 <= y1; ++y2)
                for (StateId x = 0; x < a.size(); ++x)
                    if (tensor.class_of_pair(x, b.meet(y1, y2)) !=
                        sp.meet(tensor.class_of_pair(x, y1),
                                tensor.class_of_pair(x, y2)))
                        return {false, "right mixture of '" + b.label(y1) +
                                           "' and '" + b.label(y2) +
                                           "' breaks at '" + a.label(x) + "'"};
        std::vector<StateId> all(static_cast<std::size_t>(b.size()));
        std::iota(all.begin(), all.end(), 0);
        const StateId bottom_b = b.meet_all(all);
        for (StateId x = 0; x < a.size(); ++x) {
            std::vector<StateId> classes;
            for (StateId y = 0; y < b.size(); ++y)
                classes.push_back(tensor.class_of_pair(x, y));
            if (tensor.class_of_pair(x, bottom_b) != sp.meet_all(classes))
                return {false,
                        "right mixture of the whole right factor breaks at '" +
                            a.label(x) + "'"};
        }
        return {};
    };
    rep.b4_mix_left = check_b4_left();
    rep.b4_mix_right = check_b4_right();

    // b5: product effects separate the enumerated states.
    for (StateId s = 0; s < ns && rep.b5.pass; ++s)
        for (StateId t = 0; t < s && rep.b5.pass; ++t) {
            bool separated = false;
            for (EffectId la = 0; la < pa && !separated; ++la)
                for (EffectId lb = 0; lb < pb && !separated; ++lb)
                    separated = tensor.nu_class(s, la, lb) !=
                                tensor.nu_class(t, la, lb);
            if (!separated)
                rep.b5 = {false, "'" + sp.label(s) + "' and '" + sp.label(t) +
                                     "' agree under every product effect"};
        }

    // c: on pure tensors the evaluation is the bullet product.
    for (StateId x = 0; x < a.size() && rep.c.pass; ++x)
        for (StateId y = 0; y < b.size() && rep.c.pass; ++y) {
            const StateId s = tensor.class_of_pair(x, y);
            for (EffectId la = 0; la < pa && rep.c.pass; ++la)
                for (EffectId lb = 0; lb < pb; ++lb)
                    if (tensor.nu_class(s, la, lb) !=
                        det_bullet(ea.eval(la, x), eb.eval(lb, y))) {
                        rep.c = {false,
                                 "pure tensor of '" + a.label(x) + "' and '" +
                                     b.label(y) +
                                     "' does not evaluate as the product "
                                     "under " +
                                     effect_name(la, lb)};
                        break;
                    }
        }
    return rep;
}

bool multipartite_leq(std::span<const StateSpace* const> factors,
                      std::span<const StateTuple> gens,
                      const StateTuple& target) {
    const int nj = static_cast<int>(factors.size());
    const int ni = static_cast<int>(gens.size());
    if (nj == 0) throw EmptySet("order test needs factors");
    if (ni == 0) throw EmptySet("order test needs generators");
    if (nj > kMultiFactorCap)
        throw GeneratorCapExceeded("factor count " + std::to_string(nj) +
                                   " exceeds the cap of " +
                                   std::to_string(kMultiFactorCap));
    if (ni > kMultiGeneratorCap)
        throw GeneratorCapExceeded("generator count " + std::to_string(ni) +
                                   " exceeds the cap of " +
                                   std::to_string(kMultiGeneratorCap));
    if (static_cast<int>(target.size()) != nj)
        throw DimensionMismatch("target arity does not match the factors");
    for (const auto& row : gens)
        if (static_cast<int>(row.size()) != nj)
            throw DimensionMismatch(
                "generator arity does not match the factors");

    // Scan every split of the generator rows into per-factor blocks; some
    // nonempty block must sink below the target in its factor.
    std::vector<int> assign(static_cast<std::size_t>(ni), 0);
    while (true) {
        bool ok = false;
        for (int j = 0; j < nj && !ok; ++j) {
            StateId m = -1;
            for (int i = 0; i < ni; ++i)
                if (assign[static_cast<std::size_t>(i)] == j) {
                    const StateId s = gens[static_cast<std::size_t>(i)]
                                          [static_cast<std::size_t>(j)];
                    m = m < 0 ? s : factors[static_cast<std::size_t>(j)]->meet(
                                        m, s);
                }
            ok = m >= 0 && factors[static_cast<std::size_t>(j)]->leq(
                               m, target[static_cast<std::size_t>(j)]);
        }
        if (!ok) return false;
        std::size_t pos = 0;
        while (pos < assign.size() && ++assign[pos] == nj) assign[pos++] = 0;
        if (pos == assign.size()) break;
    }
    return true;
}

bool multipartite_assoc_check(const StateSpace& a, const StateSpace& b,
                              const StateSpace& c) {
    const long triples =
        static_cast<long>(a.size()) * b.size() * c.size();
    if (triples > 32)
        throw EnumerationTooLarge("associativity scan needs at most 32 "
                                  "triples, got " +
                                  std::to_string(triples));
    const TensorSpace ab(a, b);
    const TensorSpace bc(b, c);

    std::vector<StateTuple> all;
    for (StateId x = 0; x < a.size(); ++x)
        for (StateId y = 0; y < b.size(); ++y)
            for (StateId z = 0; z < c.size(); ++z)
                all.push_back({x, y, z});

    std::vector<std::vector<StateTuple>> gens_list;
    for (std::size_t i = 0; i < all.size(); ++i) {
        gens_list.push_back({all[i]});
        for (std::size_t j = i + 1; j < all.size(); ++j)
            gens_list.push_back({all[i], all[j]});
    }

    const StateSpace* const fac[3] = {&a, &b, &c};
    std::vector<std::vector<StatePair>> left_keys, right_keys;
    std::vector<std::vector<StateTuple>> triple_keys;
    for (const auto& g : gens_list) {
        std::vector<StatePair> lhs, rhs;
        for (const auto& row : g) {
            lhs.push_back({ab.class_of_pair(row[0], row[1]), row[2]});
            rhs.push_back({row[0], bc.class_of_pair(row[1], row[2])});
        }
        left_keys.push_back(
            canonicalize(ab.space(), c, make_tensor_gen(std::move(lhs)))
                .canonical);
        right_keys.push_back(
            canonicalize(a, bc.space(), make_tensor_gen(std::move(rhs)))
                .canonical);
        std::vector<StateTuple> members;
        for (const auto& t : all)
            if (multipartite_leq(fac, g, t)) members.push_back(t);
        triple_keys.push_back(std::move(members));
    }

    for (std::size_t i = 0; i < gens_list.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const bool left = left_keys[i] == left_keys[j];
            const bool right = right_keys[i] == right_keys[j];
            const bool direct = triple_keys[i] == triple_keys[j];
            if (left != right || left != direct) return false;
        }
    return true;
}

} // namespace chu3

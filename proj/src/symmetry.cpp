#include "chu3/symmetry.hpp"

#include <algorithm>

#include "chu3/errors.hpp"
#include "chu3/tensor_basic.hpp"

namespace chu3 {

namespace {

void check_state_table(const StateSpace& source, const StateSpace& target,
                       const std::vector<StateId>& f12) {
    if (static_cast<int>(f12.size()) != source.size())
        throw DimensionMismatch("state table covers " + std::to_string(f12.size()) +
                                " states, space '" + source.name() + "' has " +
                                std::to_string(source.size()));
    for (StateId v : f12)
        if (v < 0 || v >= target.size())
            throw DimensionMismatch("state table value out of range for space '" +
                                    target.name() + "'");
}

bool is_permutation(const StateSpace& source, const StateSpace& target,
                    const std::vector<StateId>& f12) {
    if (source.size() != target.size()) return false;
    std::vector<bool> hit(f12.size(), false);
    for (StateId v : f12) {
        if (hit[static_cast<std::size_t>(v)]) return false;
        hit[static_cast<std::size_t>(v)] = true;
    }
    return true;
}

std::string effect_text(const StateSpace& base, const Effect& e) {
    auto side = [&](const std::optional<StateId>& s) {
        return s ? base.label(*s) : std::string("-");
    };
    return "(" + side(e.yes) + "|" + side(e.no) + ")";
}

} // namespace

ChuMap derive_effect_map(const StateSpace& source, const StateSpace& target,
                         std::vector<StateId> f12) {
    check_state_table(source, target, f12);
    for (StateId a = 0; a < source.size(); ++a)
        for (StateId b = 0; b < source.size(); ++b) {
            if (source.leq(a, b) && !target.leq(f12[a], f12[b]))
                throw NotMonotone("'" + source.label(a) + "' ⊑ '" + source.label(b) +
                                  "' but image '" + target.label(f12[a]) + "' ⋢ '" +
                                  target.label(f12[b]) + "'");
            if (f12[source.meet(a, b)] != target.meet(f12[a], f12[b]))
                throw NotMeetPreserving("image of '" + source.label(a) + "' ⊓ '" +
                                        source.label(b) + "' is '" +
                                        target.label(f12[source.meet(a, b)]) +
                                        "', meet of images is '" +
                                        target.label(target.meet(f12[a], f12[b])) + "'");
        }
    ChuMap m{&source, &target, std::move(f12), {}};
    EffectSpace eff2(target);
    std::vector<Det> val(static_cast<std::size_t>(source.size()));
    for (EffectId l = 0; l < eff2.size(); ++l) {
        for (StateId s = 0; s < source.size(); ++s)
            val[static_cast<std::size_t>(s)] = eff2.eval(l, m.f12[static_cast<std::size_t>(s)]);
        m.f21.push_back(effect_from_valuation(source, val));
    }
    return m;
}

ChuMap identity_channel(const StateSpace& space) {
    std::vector<StateId> id(static_cast<std::size_t>(space.size()));
    for (StateId s = 0; s < space.size(); ++s) id[static_cast<std::size_t>(s)] = s;
    return derive_effect_map(space, space, std::move(id));
}

SymmetryReport verify_symmetry(const ChuMap& map) {
    SymmetryReport r;
    const StateSpace& s1 = *map.source;
    const StateSpace& s2 = *map.target;
    EffectSpace e1(s1), e2(s2);

    auto fail_all = [&](const std::string& why) {
        r.well_formed = false;
        for (LawCheck* c : {&r.duality, &r.f12_meets, &r.f12_chain_joins, &r.f21_meets,
                            &r.f21_chain_joins, &r.f21_bar, &r.f21_unit, &r.pure_transport,
                            &r.max_transport})
            *c = {false, why};
        return r;
    };
    if (static_cast<int>(map.f12.size()) != s1.size())
        return fail_all("state table size mismatch");
    for (StateId v : map.f12)
        if (v < 0 || v >= s2.size()) return fail_all("state table value out of range");
    if (static_cast<int>(map.f21.size()) != e2.size())
        return fail_all("effect table size mismatch");
    std::vector<EffectId> g;
    for (const Effect& e : map.f21) {
        auto id = e1.find(e);
        if (!id) return fail_all("effect table entry " + effect_text(s1, e) +
                                 " is not an effect of the source space");
        g.push_back(*id);
    }
    r.bijective = is_permutation(s1, s2, map.f12);

    auto f = [&](StateId s) { return map.f12[static_cast<std::size_t>(s)]; };
    for (StateId s = 0; s < s1.size() && r.duality.pass; ++s)
        for (EffectId l = 0; l < e2.size(); ++l)
            if (e2.eval(l, f(s)) != e1.eval(g[static_cast<std::size_t>(l)], s)) {
                r.duality = {false, "state '" + s1.label(s) + "', effect " +
                                        e2.label(l) + ": evaluations disagree"};
                break;
            }

    auto check_state_meet = [&](std::span<const StateId> xs) {
        std::vector<StateId> images;
        for (StateId x : xs) images.push_back(f(x));
        if (f(s1.meet_all(xs)) == s2.meet_all(images)) return true;
        std::string names;
        for (StateId x : xs) names += (names.empty() ? "" : ",") + s1.label(x);
        r.f12_meets = {false, "meet of {" + names + "} breaks under the state map"};
        return false;
    };
    for (StateId a = 0; a < s1.size() && r.f12_meets.pass; ++a)
        for (StateId b = a; b < s1.size() && r.f12_meets.pass; ++b) {
            const StateId pair[] = {a, b};
            if (!check_state_meet(pair)) break;
            for (StateId c = b; c < s1.size(); ++c) {
                const StateId triple[] = {a, b, c};
                if (!check_state_meet(triple)) break;
            }
        }
    if (r.f12_meets.pass) {
        std::vector<StateId> all;
        for (StateId s = 0; s < s1.size(); ++s) all.push_back(s);
        check_state_meet(all);
    }

    for (StateId a = 0; a < s1.size() && r.f12_chain_joins.pass; ++a)
        for (StateId b = 0; b < s1.size(); ++b)
            if (s1.leq(a, b)) {
                auto j = s2.bounded_join(f(a), f(b));
                if (!j || *j != f(b)) {
                    r.f12_chain_joins = {false, "join of chain {" + s1.label(a) + "," +
                                                    s1.label(b) + "} breaks under the state map"};
                    break;
                }
            }

    auto gm = [&](EffectId l) { return g[static_cast<std::size_t>(l)]; };
    auto check_effect_meet = [&](std::span<const EffectId> ls) {
        std::vector<EffectId> images;
        for (EffectId l : ls) images.push_back(gm(l));
        if (gm(e2.meet_all(ls)) == e1.meet_all(images)) return true;
        std::string names;
        for (EffectId l : ls) names += (names.empty() ? "" : ",") + e2.label(l);
        r.f21_meets = {false, "meet of {" + names + "} breaks under the effect map"};
        return false;
    };
    for (EffectId a = 0; a < e2.size() && r.f21_meets.pass; ++a)
        for (EffectId b = a; b < e2.size() && r.f21_meets.pass; ++b) {
            const EffectId pair[] = {a, b};
            if (!check_effect_meet(pair)) break;
            for (EffectId c = b; c < e2.size(); ++c) {
                const EffectId triple[] = {a, b, c};
                if (!check_effect_meet(triple)) break;
            }
        }
    if (r.f21_meets.pass) {
        std::vector<EffectId> all;
        for (EffectId l = 0; l < e2.size(); ++l) all.push_back(l);
        check_effect_meet(all);
    }

    for (EffectId a = 0; a < e2.size() && r.f21_chain_joins.pass; ++a)
        for (EffectId b = 0; b < e2.size(); ++b)
            if (e2.leq(a, b)) {
                auto j = e1.bounded_join(gm(a), gm(b));
                if (!j || *j != gm(b)) {
                    r.f21_chain_joins = {false, "join of chain {" + e2.label(a) + "," +
                                                    e2.label(b) + "} breaks under the effect map"};
                    break;
                }
            }

    for (EffectId l = 0; l < e2.size(); ++l)
        if (gm(e2.bar(l)) != e1.bar(gm(l))) {
            r.f21_bar = {false, "conjugate of " + e2.label(l) + " breaks under the effect map"};
            break;
        }
    if (gm(e2.yes_effect()) != e1.yes_effect())
        r.f21_unit = {false, "constantly-Yes effect maps to " + e1.label(gm(e2.yes_effect()))};

    if (r.bijective) {
        auto image_equals = [&](const std::vector<StateId>& from, const std::vector<StateId>& to) {
            std::vector<StateId> img;
            for (StateId s : from) img.push_back(f(s));
            std::sort(img.begin(), img.end());
            return img == to;
        };
        if (!image_equals(s1.pure_states(), s2.pure_states()))
            r.pure_transport = {false, "image of the pure states differs from the target's"};
        if (!image_equals(s1.maximal_states(), s2.maximal_states()))
            r.max_transport = {false, "image of the maximal states differs from the target's"};
    }
    return r;
}

ChuMap compose(const ChuMap& f, const ChuMap& g) {
    if (f.target != g.source)
        throw DimensionMismatch("composition needs the first map's target to be the second's source");
    ChuMap out{f.source, g.target, {}, {}};
    for (StateId s : f.f12) out.f12.push_back(g.f12[static_cast<std::size_t>(s)]);
    EffectSpace mid(*g.source);
    for (const Effect& e : g.f21) out.f21.push_back(f.f21[static_cast<std::size_t>(mid.id_of(e))]);

    EffectSpace ea(*out.source), ec(*out.target);
    for (StateId s = 0; s < out.source->size(); ++s)
        for (EffectId l = 0; l < ec.size(); ++l)
            if (ec.eval(l, out.f12[static_cast<std::size_t>(s)]) !=
                ea.eval(out.f21[static_cast<std::size_t>(l)], s))
                throw ImplicationViolated("composition of channels lost duality");
    return out;
}

ChuMap meet_channels(const ChuMap& f, const ChuMap& g) {
    if (f.source != g.source || f.target != g.target)
        throw DimensionMismatch("channel infimum needs parallel channels");
    ChuMap out{f.source, f.target, {}, {}};
    for (StateId s = 0; s < f.source->size(); ++s)
        out.f12.push_back(f.target->meet(f.f12[static_cast<std::size_t>(s)],
                                         g.f12[static_cast<std::size_t>(s)]));
    EffectSpace e1(*f.source), e2(*f.target);
    for (EffectId l = 0; l < e2.size(); ++l)
        out.f21.push_back(e1.effect(e1.meet(e1.id_of(f.f21[static_cast<std::size_t>(l)]),
                                            e1.id_of(g.f21[static_cast<std::size_t>(l)]))));

    for (StateId s = 0; s < out.source->size(); ++s)
        for (EffectId l = 0; l < e2.size(); ++l)
            if (e2.eval(l, out.f12[static_cast<std::size_t>(s)]) !=
                e1.eval(out.f21[static_cast<std::size_t>(l)], s))
                throw ImplicationViolated("channel infimum lost duality");
    return out;
}

ChuMap tensor_symmetries(const ChuMap& f, const ChuMap& g,
                         const TensorSpace& source_tensor,
                         const TensorSpace& target_tensor) {
    if (f.source != &source_tensor.factor_a() ||
        g.source != &source_tensor.factor_b() ||
        f.target != &target_tensor.factor_a() ||
        g.target != &target_tensor.factor_b())
        throw DimensionMismatch(
            "tensor of channels needs endpoints matching the tensor factors");
    const StateSpace& sp = source_tensor.space();
    std::vector<StateId> f12;
    f12.reserve(static_cast<std::size_t>(sp.size()));
    for (StateId u = 0; u < sp.size(); ++u) {
        std::vector<StatePair> mapped;
        mapped.reserve(source_tensor.canonical_pairs(u).size());
        for (const auto& [x, y] : source_tensor.canonical_pairs(u))
            mapped.push_back({f.f12[static_cast<std::size_t>(x)],
                              g.f12[static_cast<std::size_t>(y)]});
        f12.push_back(target_tensor.class_of(make_tensor_gen(std::move(mapped))));
    }
    return derive_effect_map(sp, target_tensor.space(), std::move(f12));
}

} // namespace chu3

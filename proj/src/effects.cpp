#include "chu3/effects.hpp"

#include <algorithm>
#include <map>

#include "chu3/errors.hpp"

namespace chu3 {

namespace {

std::string side_label(const StateSpace& s, const std::optional<StateId>& side) {
    return side ? s.label(*side) : "-";
}

} // namespace

EffectSpace::EffectSpace(const StateSpace& base) : base_(&base) {
    const int n = base.size();
    all_.push_back(Effect{std::nullopt, std::nullopt});
    bottom_ = 0;
    for (StateId s = 0; s < n; ++s) all_.push_back(Effect{s, std::nullopt});
    for (StateId s = 0; s < n; ++s) all_.push_back(Effect{std::nullopt, s});
    for (StateId y = 0; y < n; ++y)
        for (StateId no = 0; no < n; ++no)
            if (!base.widehat(y, no)) all_.push_back(Effect{y, no});
    yes_ = 1 + base.bottom();
    no_ = 1 + n + base.bottom();
}

std::optional<EffectId> EffectSpace::find(const Effect& e) const {
    const int n = base_->size();
    if (!e.yes && !e.no) return bottom_;
    if (e.yes && !e.no) return 1 + *e.yes;
    if (!e.yes && e.no) return 1 + n + *e.no;
    if (base_->widehat(*e.yes, *e.no)) return std::nullopt;
    // Two-sided effects are stored after the one-sided blocks in (yes, no)
    // lexicographic order; locate by counting.
    int pos = 1 + 2 * n;
    for (StateId y = 0; y < *e.yes; ++y)
        for (StateId no = 0; no < n; ++no)
            if (!base_->widehat(y, no)) ++pos;
    for (StateId no = 0; no < *e.no; ++no)
        if (!base_->widehat(*e.yes, no)) ++pos;
    return pos;
}

EffectId EffectSpace::id_of(const Effect& e) const {
    auto id = find(e);
    if (!id)
        throw ParseError("effect (" + side_label(*base_, e.yes) + "|" + side_label(*base_, e.no) +
                         ") is inconsistent in space '" + base_->name() + "'");
    return *id;
}

Det EffectSpace::eval(const Effect& e, StateId s) const {
    if (e.yes && base_->leq(*e.yes, s)) return Det::Yes;
    if (e.no && base_->leq(*e.no, s)) return Det::No;
    return Det::Bot;
}

bool EffectSpace::leq(EffectId a, EffectId b) const {
    const Effect& ea = all_[static_cast<std::size_t>(a)];
    const Effect& eb = all_[static_cast<std::size_t>(b)];
    const bool yes_ok = !ea.yes || (eb.yes && base_->leq(*eb.yes, *ea.yes));
    const bool no_ok = !ea.no || (eb.no && base_->leq(*eb.no, *ea.no));
    return yes_ok && no_ok;
}

EffectId EffectSpace::meet(EffectId a, EffectId b) const {
    const EffectId pair[2] = {a, b};
    return meet_all(pair);
}

EffectId EffectSpace::meet_all(std::span<const EffectId> es) const {
    if (es.empty()) throw EmptySet("effect meet_all: empty operand list");
    std::optional<StateId> yes, no;
    bool yes_all = true, no_all = true;
    std::vector<StateId> ys, ns;
    for (EffectId e : es) {
        const Effect& ef = all_[static_cast<std::size_t>(e)];
        if (ef.yes) ys.push_back(*ef.yes); else yes_all = false;
        if (ef.no) ns.push_back(*ef.no); else no_all = false;
    }
    if (yes_all) yes = base_->bounded_join_all(ys);
    if (no_all) no = base_->bounded_join_all(ns);
    return id_of(Effect{yes, no});
}

std::optional<EffectId> EffectSpace::bounded_join(EffectId a, EffectId b) const {
    const EffectId pair[2] = {a, b};
    return bounded_join_all(pair);
}

std::optional<EffectId> EffectSpace::bounded_join_all(std::span<const EffectId> es) const {
    if (es.empty()) throw EmptySet("effect bounded_join_all: empty operand list");
    std::vector<EffectId> ub;
    for (EffectId e = 0; e < size(); ++e) {
        bool above_all = true;
        for (EffectId x : es)
            if (!leq(x, e)) { above_all = false; break; }
        if (above_all) ub.push_back(e);
    }
    if (ub.empty()) return std::nullopt;
    return meet_all(ub);
}

EffectId EffectSpace::bar(EffectId e) const {
    const Effect& ef = all_[static_cast<std::size_t>(e)];
    return id_of(Effect{ef.no, ef.yes});
}

std::vector<EffectId> EffectSpace::max_effects() const {
    std::vector<EffectId> out;
    const int n = base_->size();
    for (StateId y = 0; y < n; ++y)
        for (StateId no = 0; no < n; ++no)
            if (base_->quasi_antipodal(y, no)) out.push_back(id_of(Effect{y, no}));
    out.push_back(yes_);
    out.push_back(no_);
    std::sort(out.begin(), out.end());

    std::vector<EffectId> scan;
    for (EffectId e = 0; e < size(); ++e) {
        bool maximal = true;
        for (EffectId f = 0; f < size(); ++f)
            if (f != e && leq(e, f)) { maximal = false; break; }
        if (maximal) scan.push_back(e);
    }
    if (scan != out)
        throw ImplicationViolated("max_effects: quasi-antipodal characterization disagrees with "
                                  "maximality scan in space '" + base_->name() + "'");
    return out;
}

std::vector<EffectId> EffectSpace::atom_effects() const {
    std::vector<EffectId> out;
    for (StateId p : base_->pure_states()) out.push_back(id_of(Effect{p, std::nullopt}));
    for (StateId p : base_->pure_states()) out.push_back(id_of(Effect{std::nullopt, p}));
    std::sort(out.begin(), out.end());
    return out;
}

std::string EffectSpace::label(EffectId e) const {
    const Effect& ef = all_[static_cast<std::size_t>(e)];
    return "(" + side_label(*base_, ef.yes) + "|" + side_label(*base_, ef.no) + ")";
}

StateSpace EffectSpace::as_state_space() const {
    const int m = size();
    std::vector<std::string> labels(static_cast<std::size_t>(m));
    std::vector<std::vector<bool>> order(static_cast<std::size_t>(m),
                                         std::vector<bool>(static_cast<std::size_t>(m), false));
    for (EffectId a = 0; a < m; ++a) {
        labels[static_cast<std::size_t>(a)] = label(a);
        for (EffectId b = 0; b < m; ++b) order[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = leq(a, b);
    }
    return StateSpace::from_leq("effects(" + base_->name() + ")", labels, order);
}

Effect effect_from_valuation(const StateSpace& space, std::span<const Det> a) {
    const int n = space.size();
    if (static_cast<int>(a.size()) != n)
        throw ParseError("effect_from_valuation: valuation size mismatch in space '" + space.name() + "'");
    for (StateId x = 0; x < n; ++x)
        for (StateId y = 0; y < n; ++y)
            if (space.leq(x, y) && !det_leq(a[static_cast<std::size_t>(x)], a[static_cast<std::size_t>(y)]))
                throw NotMonotone("valuation not monotone: '" + space.label(x) + "' ⊑ '" + space.label(y) +
                                  "' but " + det_to_string(a[static_cast<std::size_t>(x)]) + " ≰ " +
                                  det_to_string(a[static_cast<std::size_t>(y)]));
    for (StateId x = 0; x < n; ++x)
        for (StateId y = 0; y < n; ++y) {
            const StateId m = space.meet(x, y);
            if (a[static_cast<std::size_t>(m)] !=
                det_meet(a[static_cast<std::size_t>(x)], a[static_cast<std::size_t>(y)]))
                throw NotMeetPreserving("valuation not meet-preserving at '" + space.label(x) +
                                        "' ⊓ '" + space.label(y) + "'");
        }
    std::vector<StateId> ys, ns;
    for (StateId s = 0; s < n; ++s) {
        if (a[static_cast<std::size_t>(s)] == Det::Yes) ys.push_back(s);
        if (a[static_cast<std::size_t>(s)] == Det::No) ns.push_back(s);
    }
    Effect e;
    if (!ys.empty()) e.yes = space.meet_all(ys);
    if (!ns.empty()) e.no = space.meet_all(ns);
    // The two conditions force both filters to be principal and disjoint, so
    // the constructed effect must evaluate back to the valuation exactly.
    EffectSpace es(space);
    for (StateId s = 0; s < n; ++s)
        if (es.eval(e, s) != a[static_cast<std::size_t>(s)])
            throw ImplicationViolated("effect_from_valuation: reconstructed effect diverges at '" +
                                      space.label(s) + "'");
    return e;
}

StateId state_from_valuation(const EffectSpace& effects, std::span<const Det> b) {
    const int m = effects.size();
    if (static_cast<int>(b.size()) != m)
        throw ParseError("state_from_valuation: valuation size mismatch");
    for (EffectId x = 0; x < m; ++x)
        for (EffectId y = 0; y < m; ++y)
            if (effects.leq(x, y) && !det_leq(b[static_cast<std::size_t>(x)], b[static_cast<std::size_t>(y)]))
                throw NotMonotone("valuation not monotone: " + effects.label(x) + " ⊑ " + effects.label(y) +
                                  " but " + det_to_string(b[static_cast<std::size_t>(x)]) + " ≰ " +
                                  det_to_string(b[static_cast<std::size_t>(y)]));
    for (EffectId x = 0; x < m; ++x)
        for (EffectId y = 0; y < m; ++y) {
            const EffectId mt = effects.meet(x, y);
            if (b[static_cast<std::size_t>(mt)] !=
                det_meet(b[static_cast<std::size_t>(x)], b[static_cast<std::size_t>(y)]))
                throw NotMeetPreserving("valuation not meet-preserving at " + effects.label(x) +
                                        " ⊓ " + effects.label(y));
        }
    for (EffectId x = 0; x < m; ++x)
        if (b[static_cast<std::size_t>(effects.bar(x))] != det_bar(b[static_cast<std::size_t>(x)]))
            throw Error("valuation not conjugation-compatible at " + effects.label(x));
    if (b[static_cast<std::size_t>(effects.yes_effect())] != Det::Yes)
        throw Error("valuation does not send the constantly-Yes effect to Y");

    std::vector<EffectId> yes_set;
    for (EffectId x = 0; x < m; ++x)
        if (b[static_cast<std::size_t>(x)] == Det::Yes) yes_set.push_back(x);
    const EffectId generator = effects.meet_all(yes_set);
    const std::optional<StateId> sigma = effects.effect_state(generator);
    if (!sigma)
        throw ImplicationViolated("state_from_valuation: Yes-class meet has no effect-state");
    for (EffectId x = 0; x < m; ++x)
        if (effects.eval(x, *sigma) != b[static_cast<std::size_t>(x)])
            throw ImplicationViolated("state_from_valuation: reconstructed state diverges at " +
                                      effects.label(x));
    return *sigma;
}

} // namespace chu3

#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chu3/determination.hpp"
#include "chu3/state_space.hpp"

namespace chu3 {

using EffectId = int;

// A yes/no test: the yes component generates the certainty filter for Yes,
// the no component the one for No. Either side may be absent (empty filter);
// absent is not the same thing as Some(bottom), which is the full filter.
// When both are present their generators must have no common upper bound.
struct Effect {
    std::optional<StateId> yes;
    std::optional<StateId> no;

    bool operator==(const Effect&) const = default;
};

// The complete effect space of a finite state space: every filter pair that
// forms a consistent test. Effects are enumerated deterministically: first
// the bottom effect, then yes-only effects by state id, then no-only effects
// by state id, then two-sided effects in lexicographic (yes, no) order.
class EffectSpace {
public:
    explicit EffectSpace(const StateSpace& base);

    const StateSpace& base() const { return *base_; }
    int size() const { return static_cast<int>(all_.size()); }
    const Effect& effect(EffectId e) const { return all_[static_cast<std::size_t>(e)]; }
    EffectId id_of(const Effect& e) const;              // throws ParseError if invalid
    std::optional<EffectId> find(const Effect& e) const;

    EffectId bottom() const { return bottom_; }          // both sides absent
    EffectId yes_effect() const { return yes_; }         // (Some ⊥, absent): constantly Yes
    EffectId no_effect() const { return no_; }           // bar of yes_effect: constantly No

    Det eval(EffectId e, StateId s) const { return eval(all_[static_cast<std::size_t>(e)], s); }
    Det eval(const Effect& e, StateId s) const;

    // Effect order: pointwise comparison of evaluations in the information
    // order; equivalently componentwise reversed state order with absence as
    // the smallest filter.
    bool leq(EffectId a, EffectId b) const;
    EffectId meet(EffectId a, EffectId b) const;
    EffectId meet_all(std::span<const EffectId> es) const;   // EmptySet on empty
    std::optional<EffectId> bounded_join(EffectId a, EffectId b) const;
    std::optional<EffectId> bounded_join_all(std::span<const EffectId> es) const;
    EffectId bar(EffectId e) const;

    // Σ of the effect: the generator of its Yes filter; absent when the
    // effect can never answer Yes.
    std::optional<StateId> effect_state(EffectId e) const { return all_[static_cast<std::size_t>(e)].yes; }

    // Max(𝔈): the quasi-antipodal two-sided effects plus the two constant
    // ones. Cross-checked against a brute maximality scan of the order; a
    // divergence would mean the characterization broke and raises
    // ImplicationViolated.
    std::vector<EffectId> max_effects() const;

    // The one-sided effects over pure generators.
    std::vector<EffectId> atom_effects() const;

    std::string label(EffectId e) const;                 // "(a|b)", "(a|-)", "(-|b)", "(-|-)"

    // The effect order materialized as a state space (canonical ids, labels
    // as above).
    StateSpace as_state_space() const;

private:
    const StateSpace* base_;
    std::vector<Effect> all_;
    EffectId bottom_ = -1, yes_ = -1, no_ = -1;
};

// The unique effect whose evaluation is the given per-state valuation.
// Requires the valuation to be monotone and to commute with meets; violations
// raise NotMonotone / NotMeetPreserving naming a witness.
Effect effect_from_valuation(const StateSpace& space, std::span<const Det> a);

// The unique state realizing a per-effect valuation that is monotone,
// meet-preserving, conjugation-compatible and sends the constantly-Yes effect
// to Yes. Violations raise NotMonotone / NotMeetPreserving / Error naming the
// broken condition and a witness.
StateId state_from_valuation(const EffectSpace& effects, std::span<const Det> b);

} // namespace chu3

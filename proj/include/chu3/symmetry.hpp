#pragma once

#include <string>
#include <vector>

#include "chu3/effects.hpp"
#include "chu3/state_space.hpp"

namespace chu3 {

class TensorSpace;

// A channel between two state spaces: the state-side table f12 together with
// the effect-side table f21 going the opposite way. f21 is always derived
// from f12 by pulling effect filters back through it, never user-supplied,
// so a constructed ChuMap satisfies the duality
//   ε_target(l)(f12(σ)) = ε_source(f21(l))(σ)
// by construction. The fields stay public so tests can build deliberately
// broken tables and watch the verifier flag them.
struct ChuMap {
    const StateSpace* source = nullptr;
    const StateSpace* target = nullptr;
    // State table, indexed by source state id.
    std::vector<StateId> f12;
    // Effect table, indexed by the target's effect id in its canonical
    // enumeration; entries are effects of the source space.
    std::vector<Effect> f21;
};

struct LawCheck {
    bool pass = true;
    std::string witness;
};

// Result of checking every channel law. The two transport checks only apply
// to symmetries (bijective f12); for a non-bijective channel they are left
// passing and the bijective flag tells the consumer they were skipped.
struct SymmetryReport {
    bool well_formed = true;
    bool bijective = false;
    LawCheck duality;
    LawCheck f12_meets;        // f12(⊓S) = ⊓ f12(S), nonempty S
    LawCheck f12_chain_joins;  // f12(⊔C) = ⊔ f12(C) for chains C
    LawCheck f21_meets;
    LawCheck f21_chain_joins;
    LawCheck f21_bar;          // f21 commutes with conjugation
    LawCheck f21_unit;         // f21 sends the constantly-Yes effect to its twin
    LawCheck pure_transport;   // f12(pure) = pure, bijective maps only
    LawCheck max_transport;    // f12(Max) = Max, bijective maps only
    bool all_pass() const {
        return well_formed && duality.pass && f12_meets.pass && f12_chain_joins.pass &&
               f21_meets.pass && f21_chain_joins.pass && f21_bar.pass && f21_unit.pass &&
               pure_transport.pass && max_transport.pass;
    }
};

// Builds the channel determined by a state table. The table must be monotone
// and preserve binary meets (which extends to all nonempty meets); violations
// raise NotMonotone / NotMeetPreserving with a witness. The effect side is
// the unique table satisfying duality.
ChuMap derive_effect_map(const StateSpace& source, const StateSpace& target,
                         std::vector<StateId> f12);

ChuMap identity_channel(const StateSpace& space);

// Checks duality and every derived law on the given tables, whatever their
// origin. Meet laws are checked for all pairs and triples plus the whole
// space, join laws for all comparable pairs (a chain's join is its top, so
// two-element chains are the binding case).
SymmetryReport verify_symmetry(const ChuMap& map);

// Composition g∘f of channels; the effect side composes the other way.
// Throws DimensionMismatch unless f's target is g's source. The duality of
// the result is re-verified.
ChuMap compose(const ChuMap& f, const ChuMap& g);

// Pointwise infimum of two parallel channels: state meets in the target,
// effect meets in the source. The result is a channel but generally not
// bijective. Throws DimensionMismatch unless sources and targets agree.
ChuMap meet_channels(const ChuMap& f, const ChuMap& g);

// The induced map of enumerated basic tensor spaces: the class of generators
// {(σ_i, τ_i)} goes to the class of {(f(σ_i), g(τ_i))}. Requires f, g to be
// channels between the tensors' factors; the result connects the two
// materialized tensor spaces and passes verify_symmetry whenever f and g are
// symmetries.
ChuMap tensor_symmetries(const ChuMap& f, const ChuMap& g,
                         const TensorSpace& source_tensor, const TensorSpace& target_tensor);

} // namespace chu3

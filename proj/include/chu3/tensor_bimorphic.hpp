#pragma once

#include <span>
#include <string>
#include <vector>

#include "chu3/determination.hpp"
#include "chu3/effects.hpp"
#include "chu3/ortho.hpp"
#include "chu3/state_space.hpp"
#include "chu3/tensor_basic.hpp"

namespace chu3 {

struct BimorphismCheck {
    bool pass = true;
    std::string witness;
};

// Verifies that a table is meet-preserving in each argument separately, over
// all argument subsets of size two or three plus the full side. Tables are
// row-major with index first * |second side| + second.
BimorphismCheck is_bimorphism_effects(const EffectSpace& ea,
                                      const EffectSpace& eb,
                                      std::span<const Det> table);
BimorphismCheck is_bimorphism_states(const StateSpace& a, const StateSpace& b,
                                     std::span<const Det> table);

// The table of the pure tensor of two factor states over all effect pairs:
// (la, lb) evaluates to eps(la, sa) bullet eps(lb, sb).
std::vector<Det> phi_state_pair(const EffectSpace& ea, const EffectSpace& eb,
                                StateId sa, StateId sb);

// Expansion of a two-valued table on maximal effect pairs to the full
// effect-pair domain: the value at (la, lb) is the meet of gamma over the
// maximal effects above la and above lb. The verdict of is_bimorphism on
// the expansion is reported, never assumed.
struct PhiGammaResult {
    std::vector<Det> table;  // over the full effect-pair domain
    bool bimorphic = false;
    std::string witness;
};
// gamma is row-major over max_effects(ea) x max_effects(eb) and must take
// only the values Yes and No.
PhiGammaResult phi_gamma(const EffectSpace& ea, const EffectSpace& eb,
                         std::span<const Det> gamma);

// Per-side cap on maximal effects for bimorphism enumeration.
inline constexpr int kPureBimorphismSideCap = 6;

// Enumerates the two-valued tables on maximal effect pairs whose expansion
// is a genuine bimorphism. candidates counts every two-valued table of the
// given shape; tables holds the valid expansions over the full effect-pair
// domain, sorted for determinism.
struct PureBimorphismScan {
    std::vector<std::vector<Det>> tables;
    unsigned long long candidates = 0;
    unsigned long long valid = 0;
};
PureBimorphismScan enumerate_pure_bimorphisms(const EffectSpace& ea,
                                              const EffectSpace& eb);

// Full walk of the bimorphism space. Every effect must be the meet of the
// maximal effects above it (ImplicationViolated otherwise), so a bimorphism
// is determined by its three-valued table on maximal effect pairs; the walk
// ranges over those tables and verifies the full-domain meet laws on each.
// bimorphism_count counts the genuine bimorphisms without storing them;
// generated_tables holds only the sub-semilattice the valid pure expansions
// generate under pointwise meets, as full-domain tables, sorted.
struct MaximalTensorEnumeration {
    PureBimorphismScan pure;
    unsigned long long bimorphism_count = 0;
    std::vector<std::vector<Det>> generated_tables;
};
MaximalTensorEnumeration maximal_tensor_elements(const EffectSpace& ea,
                                                 const EffectSpace& eb);

// The homomorphism from an enumerated tensor into the bimorphism space:
// each class maps to its table of nu values over effect pairs. Injectivity,
// meet preservation and bimorphy of every image are verified; any failure
// raises ImplicationViolated.
std::vector<std::vector<Det>> mu_embedding(const TensorSpace& tensor);

// ---- the tensor generated by bracket products of pure states ----

// Generator set of a bracket-tensor element: pure factor pairs. The element
// evaluates on a factor state pair as the meet over generators of
// <alpha, sa> bullet <beta, sb>.
struct StarTensorElement {
    std::vector<StatePair> gens;  // sorted, duplicate free, never empty

    auto operator<=>(const StarTensorElement&) const = default;
};

// Normalizes and validates a generator list: every pair must be pure in its
// factor (NotPure), the list nonempty (EmptySet).
StarTensorElement make_star_element(const StateSpace& a, const StateSpace& b,
                                    std::vector<StatePair> gens);

// Single-generator element of two pure states.
StarTensorElement star_generator(const StateSpace& a, const StarMap& star_a,
                                 const StateSpace& b, const StarMap& star_b,
                                 StateId alpha, StateId beta);

// The generator set of the tensor of two arbitrary factor states: all pure
// pairs componentwise above them.
StarTensorElement star_pure_expansion(const StateSpace& a,
                                      const StateSpace& b, StateId sa,
                                      StateId sb);

Det star_eval(const StateSpace& a, const StarMap& star_a, const StateSpace& b,
              const StarMap& star_b, const StarTensorElement& elem,
              StateId sa, StateId sb);

// The pairing of two elements: the meet over both generator sets of
// <alpha_i, alpha'_j> bullet <beta_i, beta'_j>. Symmetric, and independent
// of the chosen generator sets.
Det double_bracket(const StateSpace& a, const StarMap& star_a,
                   const StateSpace& b, const StarMap& star_b,
                   const StarTensorElement& lhs, const StarTensorElement& rhs);

// The materialized semilattice generated by the bracket products of pure
// pairs, with classes keyed by their value tables over all factor state
// pairs and labelled by canonical pure-pair sets. Both stars must pass the
// shape laws; |pure_A| * |pure_B| must stay within max_pairs
// (EnumerationTooLarge). The materialized space must pass the state axioms;
// a failure raises ImplicationViolated.
class StarTensorSpace {
public:
    StarTensorSpace(const StateSpace& a, const StarMap& star_a,
                    const StateSpace& b, const StarMap& star_b,
                    int max_pairs = kTensorEnumerationCap);

    const StateSpace& factor_a() const { return *a_; }
    const StateSpace& factor_b() const { return *b_; }
    const StarMap& factor_star_a() const { return *star_a_; }
    const StarMap& factor_star_b() const { return *star_b_; }
    const StateSpace& space() const { return space_; }

    // Value of a class on a factor state pair.
    Det value(StateId s, StateId sa, StateId sb) const;

    // Canonical pure-pair set of a class; it doubles as a generator set.
    const std::vector<StatePair>& canonical_pairs(StateId s) const {
        return canonical_[static_cast<std::size_t>(s)];
    }

    StateId class_of(const StarTensorElement& elem) const;
    // Class of the tensor of two arbitrary factor states.
    StateId class_of_pair(StateId sa, StateId sb) const;

    // The pairing on classes, computed from the canonical sets and checked
    // against the evaluator form; a disagreement raises ImplicationViolated.
    Det pairing(StateId s, StateId t) const;

private:
    StateSpace materialize(int max_pairs);

    const StateSpace* a_;
    const StateSpace* b_;
    const StarMap* star_a_;
    const StarMap* star_b_;
    std::vector<std::vector<StatePair>> canonical_;  // per class id
    std::vector<std::vector<Det>> tables_;           // per class id
    StateSpace space_;
};

// Star of a class: the infimum of the classes paired to N with it. Throws
// Error when no class pairs to N or the infimum lands on the bottom, since
// the star map is then undefined.
StateId star_tensor_star(const StarTensorSpace& tensor, StateId s);

// The full star table in StarMap layout (bottom slot -1).
StarMap star_tensor_star_map(const StarTensorSpace& tensor);

// Atoms from the factor atoms: the meet of sa (x) bot and bot (x) sb over
// factor atoms sa, sb. Cross-checked against the covering scan of the
// materialized space; a mismatch raises ImplicationViolated.
std::vector<StateId> star_tensor_atoms(const StarTensorSpace& tensor);

// Materializes the tensor, builds the star map and validates it. When the
// validation fails, certificate names two elements with no common upper
// bound, found by an ascending scan over pure quadruples.
struct StarOrthoReport {
    bool orthocomplemented = false;
    StarReport report;
    std::string certificate;
};
StarOrthoReport star_orthocomplementation_check(
    const StateSpace& a, const StarMap& star_a, const StateSpace& b,
    const StarMap& star_b, int max_pairs = kTensorEnumerationCap);

// The bipartite requirements on the bracket tensor, with the tensor itself
// serving as its own effect space through the pairing.
BipartiteReport check_star_bipartite(const StarTensorSpace& tensor);

} // namespace chu3

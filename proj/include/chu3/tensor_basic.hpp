#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chu3/determination.hpp"
#include "chu3/effects.hpp"
#include "chu3/state_space.hpp"

namespace chu3 {

// A pair of factor states; the first component lives in the left factor, the
// second in the right factor.
using StatePair = std::pair<StateId, StateId>;

// Generator set of a bipartite element: the element is the infimum of the
// pure tensors named by the pairs. Kept sorted and duplicate free, never
// empty.
struct TensorGen {
    std::vector<StatePair> pairs;

    auto operator<=>(const TensorGen&) const = default;
};

// Normalizes a pair list into a generator set: sorts, removes duplicates.
// Throws EmptySet when the list is empty.
TensorGen make_tensor_gen(std::vector<StatePair> pairs);

// Canonical form of a bipartite element: the set of every factor pair whose
// pure tensor lies above the element. Two elements are equal exactly when
// their canonical sets are equal, and the canonical set regenerates the
// element as the infimum of its pairs.
struct BasicTensorElement {
    std::vector<StatePair> canonical;

    auto operator<=>(const BasicTensorElement&) const = default;
};

// Largest generator count accepted by the subset expansion in leq_pure.
inline constexpr int kTensorGeneratorCap = 12;

// Default bound on |A|*|B| for quotient enumeration.
inline constexpr int kTensorEnumerationCap = 20;

// The nu evaluation of a generator set against one effect from each factor:
// the meet over generators of eps_A(la)(s_A) bullet eps_B(lb)(s_B).
Det nu_eval(const EffectSpace& ea, const EffectSpace& eb, const TensorGen& u,
            const Effect& la, const Effect& lb);

// Word problem for the generated order: whether the infimum of the pure
// tensors named by u lies below the pure tensor of target. True iff for
// every subset K of the generators, either K is nonempty with the meet of
// its left components below target's left state, or its complement is
// nonempty with the meet of the right components below target's right
// state. Throws GeneratorCapExceeded beyond kTensorGeneratorCap.
bool leq_pure(const StateSpace& a, const StateSpace& b, const TensorGen& u,
              StatePair target);

// Scans every factor pair with leq_pure and verifies the resulting set is a
// bi-filter: upward closed componentwise, and closed under one-sided meets
// at a fixed other component. A violation would mean the word problem
// disagrees with the order it is meant to decide, and raises
// ImplicationViolated.
BasicTensorElement canonicalize(const StateSpace& a, const StateSpace& b,
                                const TensorGen& u);

// Order and equality on the quotient, decided through the canonical sets:
// u lies below v exactly when every generator pair of v is above u.
bool tensor_leq(const StateSpace& a, const StateSpace& b, const TensorGen& u,
                const TensorGen& v);
bool tensor_eq(const StateSpace& a, const StateSpace& b, const TensorGen& u,
               const TensorGen& v);

// Infimum of finitely many elements: the canonical form of the union of the
// generator sets. Throws EmptySet on an empty list.
BasicTensorElement tensor_meet(const StateSpace& a, const StateSpace& b,
                               std::span<const TensorGen> us);

// Least upper bound, when a common upper bound exists: the infimum of the
// common pure-pair upper bounds, absent when there are none. When both
// factors are distributive the result is cross-checked against the pairwise
// join expansion meet_{i,j} (u_iA join v_jA) (x) (u_iB join v_jB) whenever
// all the factor joins exist; a disagreement raises ImplicationViolated.
std::optional<BasicTensorElement> tensor_join(const StateSpace& a,
                                              const StateSpace& b,
                                              const TensorGen& u,
                                              const TensorGen& v);

// The pure states of the tensor: exactly the pure tensors of pure factor
// states, enumerated in factor id order.
std::vector<BasicTensorElement> tensor_pure_states(const StateSpace& a,
                                                   const StateSpace& b);

// The atoms of the tensor: (alpha_A (x) bot) meet (bot (x) alpha_B) over
// factor atoms alpha_A, alpha_B, enumerated in factor id order.
std::vector<BasicTensorElement> tensor_atoms(const StateSpace& a,
                                             const StateSpace& b);

// Renders a pair list as the element literal used for labels and on the
// command line, e.g. "[[a,a],[b,b]]".
std::string render_pairs(const StateSpace& a, const StateSpace& b,
                         std::span<const StatePair> pairs);

// The materialized quotient of a product of two valid state spaces. Each
// class is keyed by its table of nu values over all factor effect pairs;
// two generator sets fall in the same class exactly when their tables
// agree, and the order is pointwise table dominance. Classes are labelled
// by their canonical pair sets and enumerated in lexicographic canonical
// set order before the usual (depth, label) id policy is applied.
//
// Both factors must pass check_state_axioms, and |A|*|B| must stay within
// max_pairs (EnumerationTooLarge otherwise). The factors are referenced,
// not copied, and must outlive the tensor. The materialized space must
// itself pass check_state_axioms; a failure raises ImplicationViolated.
class TensorSpace {
public:
    TensorSpace(const StateSpace& a, const StateSpace& b,
                int max_pairs = kTensorEnumerationCap);

    const StateSpace& factor_a() const { return *a_; }
    const StateSpace& factor_b() const { return *b_; }
    const EffectSpace& effects_a() const { return ea_; }
    const EffectSpace& effects_b() const { return eb_; }
    const StateSpace& space() const { return space_; }

    // Class of the element generated by u, as an id of space().
    StateId class_of(const TensorGen& u) const;
    StateId class_of_pair(StateId sa, StateId sb) const;

    // Canonical pair set of a class; it doubles as a generator set.
    const std::vector<StatePair>& canonical_pairs(StateId s) const {
        return canonical_[static_cast<std::size_t>(s)];
    }
    TensorGen generators(StateId s) const {
        return TensorGen{canonical_[static_cast<std::size_t>(s)]};
    }

    // The nu value of a class against one effect from each factor.
    Det nu_class(StateId s, EffectId la, EffectId lb) const;

private:
    StateSpace materialize(int max_pairs);
    const std::vector<Det>& table_of(const TensorGen& u,
                                     std::vector<Det>& scratch) const;

    const StateSpace* a_;
    const StateSpace* b_;
    EffectSpace ea_;
    EffectSpace eb_;
    std::vector<std::vector<StatePair>> canonical_;  // per class id
    std::vector<std::vector<Det>> tables_;           // per class id
    std::vector<StateId> pair_class_;                // per sa * |B| + sb
    StateSpace space_;
};

// Materializes the quotient as a plain StateSpace.
StateSpace enumerate_tensor(const StateSpace& a, const StateSpace& b,
                            int max_pairs = kTensorEnumerationCap);

// Generator set of a bipartite effect: a nonempty sorted set of factor
// effect pairs, named by their canonical ids in the factor effect spaces.
struct TensorEffectElement {
    std::vector<std::pair<EffectId, EffectId>> pairs;

    auto operator<=>(const TensorEffectElement&) const = default;
};

TensorEffectElement make_tensor_effect(
    std::vector<std::pair<EffectId, EffectId>> pairs);

// The quotient of finite factor effect pair sets over an enumerated tensor.
// An element evaluates on a tensor state as the meet over its pairs of the
// nu values; two pair sets are identified exactly when they evaluate
// equally on every tensor state, the order is pointwise dominance, and the
// infimum of two classes is the class of the union of their generators.
// Classes carry canonical pair sets analogous to the state side.
class TensorEffectSpace {
public:
    explicit TensorEffectSpace(const TensorSpace& tensor);

    const TensorSpace& tensor() const { return *tensor_; }
    int size() const { return static_cast<int>(tables_.size()); }

    Det eval(int effect_class, StateId tensor_state) const;
    Det eval(const TensorEffectElement& lam, StateId tensor_state) const;
    // The meet over the element's pairs of nu_eval against a raw generator
    // set, without any reference to the enumerated classes.
    Det eval_gen(const TensorEffectElement& lam, const TensorGen& u) const;

    int class_of(const TensorEffectElement& lam) const;
    const std::vector<std::pair<EffectId, EffectId>>& canonical_pairs(
        int effect_class) const {
        return canonical_[static_cast<std::size_t>(effect_class)];
    }

    bool leq(int x, int y) const;
    int meet(int x, int y) const;
    std::string label(int effect_class) const;

private:
    const TensorSpace* tensor_;
    std::vector<std::vector<Det>> tables_;  // per class, over tensor states
    std::vector<std::vector<std::pair<EffectId, EffectId>>> canonical_;
};

struct BipartiteAxiomCheck {
    bool pass = true;
    std::string witness;
};

// Exhaustive verification of the bipartite requirements on an enumerated
// tensor. Mixture laws quantify over generator pairs and the full family;
// finite infima reduce to those by associativity.
//   b1  state infima exist and every effect evaluates continuously on them
//   b2  effect infima exist (unions) and evaluate as pointwise meets
//   b3  every factor effect pair embeds as a bipartite effect
//   b3_mix_left / b3_mix_right  effect mixtures per side factor through
//       the embedding
//   b4  every factor state pair embeds as a bipartite state
//   b4_mix_left / b4_mix_right  state mixtures per side factor through
//       the embedding
//   b5  product effects separate the enumerated states
//   c   on pure tensors the evaluation is the bullet product of the factor
//       evaluations
struct BipartiteReport {
    BipartiteAxiomCheck b1, b2, b3, b3_mix_left, b3_mix_right;
    BipartiteAxiomCheck b4, b4_mix_left, b4_mix_right, b5, c;

    bool all_pass() const {
        return b1.pass && b2.pass && b3.pass && b3_mix_left.pass &&
               b3_mix_right.pass && b4.pass && b4_mix_left.pass &&
               b4_mix_right.pass && b5.pass && c.pass;
    }
};

BipartiteReport check_bipartite_axioms(const TensorSpace& tensor);

// One generator row of a multipartite element: a state from each factor.
using StateTuple = std::vector<StateId>;

// Caps for the multipartite partition scan.
inline constexpr int kMultiGeneratorCap = 8;
inline constexpr int kMultiFactorCap = 3;

// Word problem for a multipartite product: the infimum of the generator
// rows lies below the pure tensor of target iff every split of the rows
// into per-factor blocks has some nonempty block whose componentwise meet
// lies below the target in that factor.
bool multipartite_leq(std::span<const StateSpace* const> factors,
                      std::span<const StateTuple> gens,
                      const StateTuple& target);

// Verifies that tensoring is associative over a triple of factors: the
// classes induced on triple generator sets (of at most two rows) by
// (A (x) B) (x) C, by A (x) (B (x) C), and by the direct triple order all
// coincide. The triple product must stay within kTensorEnumerationCap
// pairs on each nested step and at most 32 triples overall.
bool multipartite_assoc_check(const StateSpace& a, const StateSpace& b,
                              const StateSpace& c);

} // namespace chu3

#pragma once

#include <vector>

#include "chu3/state_space.hpp"
#include "chu3/tensor_basic.hpp"

namespace chu3 {

// The least set of factor pairs containing some generators and closed under
// three rules: componentwise upward closure, left meets at a fixed right
// state, and right meets at a fixed left state.
struct BiFilter {
    std::vector<StatePair> pairs;  // sorted, duplicate free

    bool contains(StatePair p) const;
};

// Least fixed point of the three closure rules over the generators.
// Terminates by finiteness of the pair grid. Throws EmptySet on an empty
// generator list.
BiFilter bifilter_closure(const StateSpace& a, const StateSpace& b,
                          const TensorGen& gens);

// Order generated by the closure: the infimum of the pure tensors named by
// gens lies below the pure tensor of target exactly when target belongs to
// the closure of gens.
bool fraser_leq(const StateSpace& a, const StateSpace& b,
                const TensorGen& gens, StatePair target);

struct CanonicalComparison {
    bool fraser = false;
    bool basic = false;
};

// Decides the same order question in the closure order and in the
// evaluation order. The closure order always implies the evaluation order;
// a violation raises ImplicationViolated, as does any disagreement while
// either factor is distributive, where the two orders must coincide.
CanonicalComparison compare_with_basic(const StateSpace& a,
                                       const StateSpace& b,
                                       const TensorGen& gens,
                                       StatePair target);

} // namespace chu3

#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "chu3/determination.hpp"
#include "chu3/state_space.hpp"

namespace chu3 {

// Star map over a state space: total on everything except bottom, where the
// slot holds -1. Values must avoid bottom as well.
using StarMap = std::vector<StateId>;

struct StarReport {
    bool involutive = true;
    std::optional<StateId> involutive_witness;
    bool order_reversing = true;
    std::optional<std::pair<StateId, StateId>> order_reversing_witness;
    bool inconsistent = true;                       // ¬widehat{σ, σ*}
    std::optional<StateId> inconsistent_witness;
    bool star_atoms = true;                         // σ* is an atom for pure σ
    std::optional<StateId> star_atoms_witness;

    bool orthocomplemented = false;                 // σ ⋈̌ σ* for every σ ≠ ⊥
    std::optional<StateId> orthocomplemented_witness;
    bool orthogonal = false;                        // underline σ ∪ underline σ* covers all pure states
    std::optional<StateId> orthogonal_witness;

    bool star_ok() const { return involutive && order_reversing && inconsistent && star_atoms; }
};

// Checks the four defining star laws, then classifies the space as
// orthocomplemented / orthogonal. Orthocomplementation is additionally
// recomputed through the upper-bound criterion
// (σ⊓σ′ strictly below σ implies widehat{σ*, σ⊓σ′}); the two routes must
// agree whenever the star laws hold, and a divergence raises
// ImplicationViolated since it cannot happen for a lawful star.
StarReport validate_star(const StateSpace& space, const StarMap& star);

// Throws ParseError if the map is not a total non-bottom self-map.
void check_star_shape(const StateSpace& space, const StarMap& star);

// ⟨σ,σ′⟩: Yes when σ is pure and equal to σ′; No when σ ≠ ⊥ and σ′ lies above
// σ*; Bot otherwise. Symmetric and bimorphic for lawful stars.
Det bracket(const StateSpace& space, const StarMap& star, StateId a, StateId b);

// σ ⊥̲ σ′, i.e. ⟨σ,σ′⟩ = No.
bool orthogonal_pair(const StateSpace& space, const StarMap& star, StateId a, StateId b);

// Recovers the star table from the bracket alone: σ* = ⊓{σ′ | σ′ ⊥̲ σ}.
// Slots whose orthogonal set is empty come back as -1; for a lawful star the
// recovered table equals the input (tested, not assumed).
StarMap recover_star(const StateSpace& space, const StarMap& star);

// Orthonormal basis conditions for a family of pure states: unit diagonal
// bracket, pairwise-No bracket, and every state above the meet of some
// subfamily. Returns the reason the family fails, or nothing if it is a
// basis. Families larger than 20 raise GeneratorCapExceeded (the coverage
// scan is exponential in the family size).
std::optional<std::string> check_orthonormal_basis(const StateSpace& space, const StarMap& star,
                                                   const std::vector<StateId>& family);

// Constructive basis search: start from the lowest-index pure state; while
// the running meet m is not bottom, pick the lowest-index pure state σ not
// above m, then the lowest-index pure common upper bound of m⊓σ and m*.
// Returns nothing if the search dead-ends or the result fails the basis
// conditions; on orthocomplemented spaces it must succeed. The star must
// satisfy the four star laws (Error otherwise).
std::optional<std::vector<StateId>> ortho_basis_greedy(const StateSpace& space, const StarMap& star);

struct BasisSublattice {
    StateSpace space;
    StarMap star;
};

// The meet-closure of an orthonormal basis as a standalone space, with the
// complementary-subfamily star. Throws NotABasis when the family fails the
// basis conditions (pass the space's star if it has one; a family can never
// be a basis without one, since the pairwise condition needs the bracket).
BasisSublattice basis_sublattice(const StateSpace& space, const StarMap* star,
                                 const std::vector<StateId>& basis);

} // namespace chu3

#pragma once

#include <boost/dynamic_bitset.hpp>

#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace chu3 {

using StateId = int;
using Bits = boost::dynamic_bitset<std::uint64_t>;

enum class PureType { NotPure, Type1, Type2 };

struct DistributivityWitness {
    StateId sigma;
    StateId sigma1;
    StateId sigma2;
};

struct AxiomCheck {
    bool pass = true;
    std::optional<StateId> witness;
};

// A1/A2 hold by construction for any StateSpace that was built successfully;
// they are re-verified anyway. A4 checks that every state is the mixture of
// the maximal states above it, which for finite spaces is equivalent to the
// conjunction of pure-state order generation and A5; the pure-based
// decomposition alone is a theorem in the finite case, so it cannot fail on
// its own. A5 compares the completely meet-irreducible states with the
// maximal ones; its witness is the deepest non-maximal pure state.
struct AxiomReport {
    AxiomCheck a1, a2, a4, a5;
    bool all_pass() const { return a1.pass && a2.pass && a4.pass && a5.pass; }
};

// A finite bottomed Inf semi-lattice of information states. Construction
// validates the whole structure eagerly: the order must be a partial order
// with a unique least element and all pairwise greatest lower bounds.
//
// Element ids are canonical: sorted by (depth, label), where depth is the
// longest chain length from bottom. The bottom therefore always has id 0,
// and identical inputs presented in any element order produce identical
// spaces.
class StateSpace {
public:
    // Builds from labelled cover pairs (lower, upper). Redundant comparable
    // pairs are tolerated; the stored cover relation is recomputed.
    static StateSpace from_covers(std::string name,
                                  const std::vector<std::string>& labels,
                                  const std::vector<std::pair<std::string, std::string>>& covers);

    // Builds from a reflexive order table: leq[i][j] means element i is below
    // element j. The table must be a partial order.
    static StateSpace from_leq(std::string name,
                               const std::vector<std::string>& labels,
                               const std::vector<std::vector<bool>>& leq);

    const std::string& name() const { return name_; }
    int size() const { return static_cast<int>(labels_.size()); }
    const std::string& label(StateId s) const { return labels_[s]; }
    StateId id_of(const std::string& label) const;          // throws ParseError
    std::optional<StateId> find(const std::string& label) const;

    StateId bottom() const { return 0; }
    bool leq(StateId a, StateId b) const { return up_[a].test(b); }
    StateId meet(StateId a, StateId b) const { return meet_[a][static_cast<std::size_t>(b)]; }
    StateId meet_all(std::span<const StateId> xs) const;     // EmptySet on empty input

    bool widehat(StateId a, StateId b) const;
    bool widehat_all(std::span<const StateId> xs) const;
    // Least upper bound; absent exactly when there is no common upper bound
    // (any nonempty set of upper bounds has a minimum, namely its meet).
    std::optional<StateId> bounded_join(StateId a, StateId b) const;
    std::optional<StateId> bounded_join_all(std::span<const StateId> xs) const;

    const std::vector<StateId>& pure_states() const { return pure_; }
    PureType pure_type(StateId s) const { return pure_type_[s]; }
    bool is_pure(StateId s) const { return pure_type_[s] != PureType::NotPure; }
    bool is_maximal(StateId s) const { return up_[s].count() == 1; }
    const std::vector<StateId>& maximal_states() const { return maximal_; }

    std::vector<StateId> underline(StateId s) const;         // pure states above s
    const Bits& underline_bits(StateId s) const { return underline_[s]; }
    const std::vector<StateId>& atoms() const { return atoms_; }

    int depth(StateId s) const { return depth_[s]; }
    // True cover pairs (lower, upper), sorted by (lower, upper) id.
    std::vector<std::pair<StateId, StateId>> cover_pairs() const;

    const Bits& up_set(StateId s) const { return up_[s]; }
    const Bits& down_set(StateId s) const { return down_[s]; }

    AxiomReport check_state_axioms() const;

    // Distributivity in the meet semi-lattice sense: whenever σ1⊓σ2 ⊑ σ and σ
    // lies above neither σ1 nor σ2, the bound decomposes as σ = σ1′⊓σ2′ with
    // σ1′⊒σ1, σ2′⊒σ2. Triples where σ is above one of the two are excluded:
    // they are exactly the ones a top element would make trivially
    // decomposable, and requiring them would reject even two-atom spaces.
    std::optional<DistributivityWitness> distributivity_witness() const;
    bool is_distributive() const { return !distributivity_witness().has_value(); }

    // Maximal incompatibility: no common upper bound, but every strictly
    // smaller state on either side is compatible with the other state.
    bool quasi_antipodal(StateId a, StateId b) const;

private:
    StateSpace() = default;
    static StateSpace build(std::string name, std::vector<std::string> labels,
                            std::vector<Bits> up);
    void compute_caches();

    std::string name_;
    std::vector<std::string> labels_;
    std::unordered_map<std::string, StateId> index_;
    std::vector<Bits> up_;      // up_[a] = {b : a ⊑ b}
    std::vector<Bits> down_;    // down_[a] = {b : b ⊑ a}
    std::vector<std::vector<StateId>> meet_;
    std::vector<int> depth_;
    std::vector<PureType> pure_type_;
    std::vector<StateId> pure_;
    std::vector<StateId> maximal_;
    std::vector<StateId> atoms_;
    std::vector<Bits> underline_;
};

// Convenience builders for the recurring test shapes: a flat space with the
// given atom labels over "bot", and a chain bot ⊏ l1 ⊏ l2 ⊏ ….
StateSpace make_flat_space(std::string name, const std::vector<std::string>& atom_labels);
StateSpace make_chain_space(std::string name, const std::vector<std::string>& labels_above_bot);

} // namespace chu3

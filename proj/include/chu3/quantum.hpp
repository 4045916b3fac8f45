#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chu3/determination.hpp"
#include "chu3/ortho.hpp"
#include "chu3/state_space.hpp"

namespace chu3 {

using Rational = boost::multiprecision::cpp_rational;

// Exact complex-rational scalar. No floating point anywhere.
struct GaussianRational {
    Rational re;
    Rational im;

    bool operator==(const GaussianRational&) const = default;
    bool is_zero() const { return re == 0 && im == 0; }
};

GaussianRational operator+(const GaussianRational& x, const GaussianRational& y);
GaussianRational operator-(const GaussianRational& x, const GaussianRational& y);
GaussianRational operator*(const GaussianRational& x, const GaussianRational& y);
GaussianRational conj(const GaussianRational& z);
// Multiplicative inverse; Error on zero.
GaussianRational inverse(const GaussianRational& z);

// Accepts "3", "-2/5", "i", "-i", "2i", "1+2i", "1/2-3/4i".
GaussianRational parse_gaussian(const std::string& text);  // ParseError
// Canonical rendering, inverse to the parser on its own output.
std::string render_gaussian(const GaussianRational& z);

// A subspace of the ambient space, held as the unique reduced row-echelon
// basis with pivots one; equality of subspaces is equality of fields.
struct Subspace {
    int dim = 0;
    std::vector<std::vector<GaussianRational>> rows;

    bool operator==(const Subspace&) const = default;
    int rank() const { return static_cast<int>(rows.size()); }
};

// Canonicalizes a spanning set into echelon form. Rows must match dim.
Subspace make_subspace(int dim, std::vector<std::vector<GaussianRational>> rows);
Subspace zero_subspace(int dim);
Subspace full_subspace(int dim);

std::string subspace_label(const Subspace& g);  // "span[(1,0),(0,1)]"

// Span of the union, intersection, conjugate orthocomplement, inclusion.
// All demand matching ambient dimensions (DimensionMismatch).
Subspace subspace_sum(const Subspace& g1, const Subspace& g2);
Subspace subspace_intersect(const Subspace& g1, const Subspace& g2);
Subspace subspace_perp(const Subspace& g);
bool subspace_contains(const Subspace& outer, const Subspace& inner);

// A finite family of subspaces closed under pairwise sums, materialized as
// a state space: order is reverse inclusion, the meet is the sum, and the
// bottom is the full ambient space (always seeded). members aligns with
// state ids.
struct Fragment {
    StateSpace space;
    std::vector<Subspace> members;
};

// Closes the generators under pairwise sums. The closure is capped at
// 2^|generators| members (EnumerationTooLarge); generators must share one
// ambient dimension (DimensionMismatch) and be nonempty (EmptySet). The
// meet table of the resulting space is cross-checked against subspace_sum;
// a divergence raises ImplicationViolated.
Fragment fragment_closure(std::span<const Subspace> generators);

// The star induced by the orthocomplement, when the family is perp-closed:
// absent whenever some member's perp falls outside the fragment or on its
// bottom.
std::optional<StarMap> fragment_star(const Fragment& fragment);

// Effect evaluation over an orthogonal pair of subspaces: Yes on states
// inside g1, No on states inside g2, Bot elsewhere. A one-sided effect
// passes the zero subspace for the missing side. NotOrthogonal when g1 and
// g2 are not orthogonal under the conjugate inner product.
Det quantum_effect_eval(const Subspace& g1, const Subspace& g2,
                        const Subspace& g);

} // namespace chu3

#include "chu3/ortho.hpp"

#include <algorithm>
#include <map>

#include "chu3/errors.hpp"

namespace chu3 {

void check_star_shape(const StateSpace& space, const StarMap& star) {
    const int n = space.size();
    if (static_cast<int>(star.size()) != n)
        throw ParseError("star map size mismatch in space '" + space.name() + "'");
    if (star[0] != -1)
        throw ParseError("star map must leave bottom unmapped in space '" + space.name() + "'");
    for (StateId s = 1; s < n; ++s)
        if (star[static_cast<std::size_t>(s)] <= 0 || star[static_cast<std::size_t>(s)] >= n)
            throw ParseError("star map must send '" + space.label(s) +
                             "' to a non-bottom element of space '" + space.name() + "'");
}

StarReport validate_star(const StateSpace& space, const StarMap& star) {
    check_star_shape(space, star);
    const int n = space.size();
    StarReport r;
    auto st = [&](StateId s) { return star[static_cast<std::size_t>(s)]; };

    for (StateId s = 1; s < n && r.involutive; ++s)
        if (st(st(s)) != s) {
            r.involutive = false;
            r.involutive_witness = s;
        }
    for (StateId a = 1; a < n && r.order_reversing; ++a)
        for (StateId b = 1; b < n; ++b)
            if (space.leq(a, b) && !space.leq(st(b), st(a))) {
                r.order_reversing = false;
                r.order_reversing_witness = {a, b};
                break;
            }
    for (StateId s = 1; s < n && r.inconsistent; ++s)
        if (space.widehat(s, st(s))) {
            r.inconsistent = false;
            r.inconsistent_witness = s;
        }
    const auto& atoms = space.atoms();
    for (StateId s : space.pure_states()) {
        if (s == space.bottom()) continue;
        if (std::find(atoms.begin(), atoms.end(), st(s)) == atoms.end()) {
            r.star_atoms = false;
            r.star_atoms_witness = s;
            break;
        }
    }

    r.orthocomplemented = true;
    for (StateId s = 1; s < n; ++s)
        if (!space.quasi_antipodal(s, st(s))) {
            r.orthocomplemented = false;
            r.orthocomplemented_witness = s;
            break;
        }

    if (r.star_ok()) {
        // Redundant route: σ⊓σ′ strictly below σ must share an upper bound
        // with σ*. Equivalent to orthocomplementation for a lawful star.
        bool via_upper_bounds = true;
        for (StateId s = 1; s < n && via_upper_bounds; ++s)
            for (StateId t = 0; t < n; ++t) {
                const StateId m = space.meet(s, t);
                if (m != s && !space.widehat(st(s), m)) {
                    via_upper_bounds = false;
                    break;
                }
            }
        if (via_upper_bounds != r.orthocomplemented)
            throw ImplicationViolated("validate_star: upper-bound criterion disagrees with "
                                      "quasi-antipodal classification in space '" + space.name() + "'");
    }

    r.orthogonal = true;
    const auto pure_count = space.pure_states().size();
    for (StateId s = 1; s < n; ++s) {
        Bits covered = space.underline_bits(s) | space.underline_bits(st(s));
        if (covered.count() != pure_count) {
            r.orthogonal = false;
            r.orthogonal_witness = s;
            break;
        }
    }
    return r;
}

Det bracket(const StateSpace& space, const StarMap& star, StateId a, StateId b) {
    if (space.is_pure(a) && a == b) return Det::Yes;
    if (a != space.bottom() && space.leq(star[static_cast<std::size_t>(a)], b)) return Det::No;
    return Det::Bot;
}

bool orthogonal_pair(const StateSpace& space, const StarMap& star, StateId a, StateId b) {
    return bracket(space, star, a, b) == Det::No;
}

StarMap recover_star(const StateSpace& space, const StarMap& star) {
    const int n = space.size();
    StarMap out(static_cast<std::size_t>(n), -1);
    for (StateId s = 1; s < n; ++s) {
        std::vector<StateId> partners;
        for (StateId t = 0; t < n; ++t)
            if (bracket(space, star, t, s) == Det::No) partners.push_back(t);
        if (!partners.empty()) out[static_cast<std::size_t>(s)] = space.meet_all(partners);
    }
    return out;
}

std::optional<std::string> check_orthonormal_basis(const StateSpace& space, const StarMap& star,
                                                   const std::vector<StateId>& family) {
    if (family.empty()) return "family is empty";
    if (family.size() > 20)
        throw GeneratorCapExceeded("orthonormal basis check: family of size " +
                                   std::to_string(family.size()) + " exceeds cap 20");
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (family[i] == family[j])
                return "family repeats element '" + space.label(family[i]) + "'";
    for (StateId a : family)
        if (bracket(space, star, a, a) != Det::Yes)
            return "⟨" + space.label(a) + "," + space.label(a) + "⟩ ≠ Y (element not pure)";
    for (StateId a : family)
        for (StateId b : family)
            if (a != b && bracket(space, star, a, b) != Det::No)
                return "⟨" + space.label(a) + "," + space.label(b) + "⟩ ≠ N";
    const std::size_t k = family.size();
    for (StateId s = 0; s < space.size(); ++s) {
        bool covered = false;
        for (std::uint32_t mask = 1; mask < (1u << k) && !covered; ++mask) {
            std::vector<StateId> sub;
            for (std::size_t i = 0; i < k; ++i)
                if (mask & (1u << i)) sub.push_back(family[i]);
            covered = space.leq(space.meet_all(sub), s);
        }
        if (!covered)
            return "'" + space.label(s) + "' is not above any subfamily meet";
    }
    return std::nullopt;
}

std::optional<std::vector<StateId>> ortho_basis_greedy(const StateSpace& space, const StarMap& star) {
    StarReport rep = validate_star(space, star);
    if (!rep.star_ok())
        throw Error("ortho_basis_greedy: star map fails the star laws in space '" + space.name() + "'");
    const auto& pure = space.pure_states();
    if (pure.empty()) return std::nullopt;
    std::vector<StateId> basis = {pure.front()};
    StateId m = pure.front();
    while (m != space.bottom()) {
        StateId uncovered = -1;
        for (StateId p : pure)
            if (!space.leq(m, p)) { uncovered = p; break; }
        if (uncovered < 0) return std::nullopt;
        const StateId lower = space.meet(m, uncovered);
        const StateId mstar = star[static_cast<std::size_t>(m)];
        StateId next = -1;
        for (StateId p : pure)
            if (space.leq(lower, p) && space.leq(mstar, p)) { next = p; break; }
        if (next < 0) return std::nullopt;
        basis.push_back(next);
        m = space.meet(m, next);
    }
    if (check_orthonormal_basis(space, star, basis)) return std::nullopt;
    return basis;
}

BasisSublattice basis_sublattice(const StateSpace& space, const StarMap* star,
                                 const std::vector<StateId>& basis) {
    if (!star)
        throw NotABasis("space '" + space.name() + "' has no star map, so no family can satisfy "
                        "the pairwise bracket condition");
    if (auto reason = check_orthonormal_basis(space, *star, basis))
        throw NotABasis("family is not an orthonormal basis of '" + space.name() + "': " + *reason);

    const std::size_t k = basis.size();
    const std::uint32_t full = (k == 32) ? 0xffffffffu : ((1u << k) - 1);
    auto subfamily_meet = [&](std::uint32_t mask) {
        std::vector<StateId> sub;
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (1u << i)) sub.push_back(basis[i]);
        return space.meet_all(sub);
    };
    std::map<StateId, StateId> complement_of; // closure element -> complementary-subfamily meet
    std::vector<StateId> elements;
    for (std::uint32_t mask = 1; mask <= full; ++mask) {
        const StateId v = subfamily_meet(mask);
        if (std::find(elements.begin(), elements.end(), v) == elements.end()) elements.push_back(v);
        if (v == space.bottom()) continue;
        const std::uint32_t comp = full & ~mask;
        if (comp == 0)
            throw NotABasis("proper element '" + space.label(v) +
                            "' arises only as the full-family meet; complementary star undefined");
        const StateId c = subfamily_meet(comp);
        auto [it, fresh] = complement_of.emplace(v, c);
        if (!fresh && it->second != c)
            throw NotABasis("complementary star ill-defined at '" + space.label(v) + "'");
    }
    if (std::find(elements.begin(), elements.end(), space.bottom()) == elements.end())
        throw NotABasis("no subfamily meets to bottom, closure has no least element");

    std::vector<std::string> labels;
    for (StateId v : elements) labels.push_back(space.label(v));
    std::vector<std::vector<bool>> order(elements.size(), std::vector<bool>(elements.size(), false));
    for (std::size_t i = 0; i < elements.size(); ++i)
        for (std::size_t j = 0; j < elements.size(); ++j)
            order[i][j] = space.leq(elements[i], elements[j]);
    BasisSublattice out{StateSpace::from_leq("basis(" + space.name() + ")", labels, order), {}};

    out.star.assign(static_cast<std::size_t>(out.space.size()), -1);
    for (const auto& [v, c] : complement_of)
        out.star[static_cast<std::size_t>(out.space.id_of(space.label(v)))] = out.space.id_of(space.label(c));

    StarReport rep = validate_star(out.space, out.star);
    if (!rep.star_ok() || !rep.orthogonal || !out.space.is_distributive())
        throw ImplicationViolated("basis_sublattice: closure of an orthonormal basis of '" +
                                  space.name() + "' failed the orthogonality or distributivity guarantee");
    return out;
}

} // namespace chu3

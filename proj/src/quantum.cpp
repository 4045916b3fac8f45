#include "chu3/quantum.hpp"

#include <algorithm>
#include <cstddef>
#include <utility>

#include "chu3/errors.hpp"

namespace chu3 {

namespace {

// In-place reduced row echelon form over the Gaussian rationals: pivots
// normalized to one, pivot columns cleared above and below, zero rows
// dropped. The result is the unique canonical basis of the row space.
void reduce_rows(std::vector<std::vector<GaussianRational>>& rows, int dim) {
    std::size_t pivot_row = 0;
    for (int col = 0; col < dim && pivot_row < rows.size(); ++col) {
        std::size_t found = rows.size();
        for (std::size_t r = pivot_row; r < rows.size(); ++r) {
            if (!rows[r][col].is_zero()) {
                found = r;
                break;
            }
        }
        if (found == rows.size()) continue;
        std::swap(rows[pivot_row], rows[found]);
        const GaussianRational inv = inverse(rows[pivot_row][col]);
        for (int c = col; c < dim; ++c) {
            rows[pivot_row][c] = rows[pivot_row][c] * inv;
        }
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == pivot_row) continue;
            const GaussianRational factor = rows[r][col];
            if (factor.is_zero()) continue;
            for (int c = col; c < dim; ++c) {
                rows[r][c] = rows[r][c] - factor * rows[pivot_row][c];
            }
        }
        ++pivot_row;
    }
    rows.resize(pivot_row);
}

std::vector<int> pivot_columns(const Subspace& g) {
    std::vector<int> pivots;
    pivots.reserve(g.rows.size());
    for (const auto& row : g.rows) {
        for (int c = 0; c < g.dim; ++c) {
            if (!row[c].is_zero()) {
                pivots.push_back(c);
                break;
            }
        }
    }
    return pivots;
}

void require_same_dim(const Subspace& g1, const Subspace& g2) {
    if (g1.dim != g2.dim) {
        throw DimensionMismatch("subspaces live in ambient dimensions " +
                                std::to_string(g1.dim) + " and " +
                                std::to_string(g2.dim));
    }
}

Rational parse_rational(const std::string& text) {
    if (text.empty()) throw ParseError("empty scalar");
    try {
        return Rational(text);
    } catch (const std::exception&) {
        throw ParseError("invalid scalar '" + text + "'");
    }
}

} // namespace

GaussianRational operator+(const GaussianRational& x, const GaussianRational& y) {
    return {x.re + y.re, x.im + y.im};
}

GaussianRational operator-(const GaussianRational& x, const GaussianRational& y) {
    return {x.re - y.re, x.im - y.im};
}

GaussianRational operator*(const GaussianRational& x, const GaussianRational& y) {
    return {x.re * y.re - x.im * y.im, x.re * y.im + x.im * y.re};
}

GaussianRational conj(const GaussianRational& z) {
    return {z.re, -z.im};
}

GaussianRational inverse(const GaussianRational& z) {
    if (z.is_zero()) throw Error("zero scalar has no inverse");
    const Rational norm = z.re * z.re + z.im * z.im;
    return {z.re / norm, -z.im / norm};
}

GaussianRational parse_gaussian(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char ch : text) {
        if (ch != ' ') s.push_back(ch);
    }
    if (s.empty()) throw ParseError("empty scalar");

    // A sign past the front separates the real part from the imaginary one;
    // rational literals carry no interior signs, so the split is unambiguous.
    std::size_t split = std::string::npos;
    for (std::size_t i = 1; i < s.size(); ++i) {
        if (s[i] == '+' || s[i] == '-') {
            split = i;
            break;
        }
    }

    auto imaginary_coefficient = [](const std::string& part) {
        if (part.empty() || part.back() != 'i') {
            throw ParseError("imaginary part '" + part + "' does not end in i");
        }
        std::string coeff = part.substr(0, part.size() - 1);
        if (!coeff.empty() && coeff.front() == '+') coeff.erase(0, 1);
        if (coeff.empty()) return Rational(1);
        if (coeff == "-") return Rational(-1);
        return parse_rational(coeff);
    };

    if (split != std::string::npos) {
        return {parse_rational(s.substr(0, split)),
                imaginary_coefficient(s.substr(split))};
    }
    if (s.back() == 'i') {
        return {Rational(0), imaginary_coefficient(s)};
    }
    return {parse_rational(s), Rational(0)};
}

std::string render_gaussian(const GaussianRational& z) {
    if (z.im == 0) return z.re.str();
    std::string im_mag = abs(z.im) == 1 ? "" : Rational(abs(z.im)).str();
    if (z.re == 0) {
        return (z.im < 0 ? "-" : "") + im_mag + "i";
    }
    return z.re.str() + (z.im < 0 ? "-" : "+") + im_mag + "i";
}

Subspace make_subspace(int dim, std::vector<std::vector<GaussianRational>> rows) {
    if (dim < 1) {
        throw DimensionMismatch("ambient dimension must be positive");
    }
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != dim) {
            throw DimensionMismatch("row of length " +
                                    std::to_string(row.size()) +
                                    " in ambient dimension " +
                                    std::to_string(dim));
        }
    }
    reduce_rows(rows, dim);
    return {dim, std::move(rows)};
}

Subspace zero_subspace(int dim) {
    return make_subspace(dim, {});
}

Subspace full_subspace(int dim) {
    std::vector<std::vector<GaussianRational>> rows(
        dim, std::vector<GaussianRational>(dim));
    for (int i = 0; i < dim; ++i) rows[i][i] = {Rational(1), Rational(0)};
    return make_subspace(dim, std::move(rows));
}

std::string subspace_label(const Subspace& g) {
    std::string out = "span[";
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
        if (r > 0) out += ",";
        out += "(";
        for (int c = 0; c < g.dim; ++c) {
            if (c > 0) out += ",";
            out += render_gaussian(g.rows[r][c]);
        }
        out += ")";
    }
    out += "]";
    return out;
}

Subspace subspace_sum(const Subspace& g1, const Subspace& g2) {
    require_same_dim(g1, g2);
    std::vector<std::vector<GaussianRational>> rows = g1.rows;
    rows.insert(rows.end(), g2.rows.begin(), g2.rows.end());
    return make_subspace(g1.dim, std::move(rows));
}

Subspace subspace_perp(const Subspace& g) {
    // Solutions of <row, v> = 0 for every basis row, with the inner product
    // conjugate-linear in the first slot: the kernel of the conjugated row
    // matrix. Conjugation keeps the matrix in echelon form, so the kernel
    // has the standard free-column basis.
    const std::vector<int> pivots = pivot_columns(g);
    std::vector<bool> is_pivot(g.dim, false);
    for (int p : pivots) is_pivot[p] = true;

    std::vector<std::vector<GaussianRational>> kernel;
    for (int f = 0; f < g.dim; ++f) {
        if (is_pivot[f]) continue;
        std::vector<GaussianRational> v(g.dim);
        v[f] = {Rational(1), Rational(0)};
        for (std::size_t j = 0; j < pivots.size(); ++j) {
            v[pivots[j]] = GaussianRational{} - conj(g.rows[j][f]);
        }
        kernel.push_back(std::move(v));
    }
    return make_subspace(g.dim, std::move(kernel));
}

bool subspace_contains(const Subspace& outer, const Subspace& inner) {
    require_same_dim(outer, inner);
    const std::vector<int> pivots = pivot_columns(outer);
    for (const auto& inner_row : inner.rows) {
        std::vector<GaussianRational> row = inner_row;
        for (std::size_t j = 0; j < pivots.size(); ++j) {
            const GaussianRational factor = row[pivots[j]];
            if (factor.is_zero()) continue;
            for (int c = 0; c < outer.dim; ++c) {
                row[c] = row[c] - factor * outer.rows[j][c];
            }
        }
        for (const auto& entry : row) {
            if (!entry.is_zero()) return false;
        }
    }
    return true;
}

Subspace subspace_intersect(const Subspace& g1, const Subspace& g2) {
    require_same_dim(g1, g2);
    return subspace_perp(subspace_sum(subspace_perp(g1), subspace_perp(g2)));
}

Fragment fragment_closure(std::span<const Subspace> generators) {
    if (generators.empty()) {
        throw EmptySet("fragment closure needs at least one generator");
    }
    const int dim = generators[0].dim;
    for (const Subspace& g : generators) {
        if (g.dim != dim) {
            throw DimensionMismatch(
                "fragment generators live in different ambient dimensions");
        }
    }

    const std::size_t cap =
        std::size_t{1} << std::min<std::size_t>(generators.size(), 20);

    // The full ambient space is the least element and is always present.
    std::vector<Subspace> members;
    members.push_back(full_subspace(dim));
    auto add = [&](Subspace g) {
        if (std::find(members.begin(), members.end(), g) != members.end()) {
            return;
        }
        if (members.size() == cap) {
            throw EnumerationTooLarge("fragment closure exceeds " +
                                      std::to_string(cap) + " subspaces");
        }
        members.push_back(std::move(g));
    };
    for (const Subspace& g : generators) {
        add(make_subspace(g.dim, g.rows));
    }

    for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            add(subspace_sum(members[i], members[j]));
        }
    }

    const int n = static_cast<int>(members.size());
    std::vector<std::string> labels;
    labels.reserve(members.size());
    for (const Subspace& g : members) labels.push_back(subspace_label(g));

    // States are ordered by reverse inclusion: a below b when the subspace
    // of b sits inside the subspace of a.
    std::vector<std::vector<bool>> leq(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            leq[i][j] = subspace_contains(members[i], members[j]);
        }
    }

    StateSpace space = StateSpace::from_leq("quantum_fragment", labels, leq);
    std::vector<Subspace> aligned(members.size());
    for (int i = 0; i < n; ++i) {
        aligned[space.id_of(labels[i])] = std::move(members[i]);
    }
    Fragment fragment{std::move(space), std::move(aligned)};

    for (StateId a = 0; a < n; ++a) {
        for (StateId b = 0; b < n; ++b) {
            const Subspace sum =
                subspace_sum(fragment.members[a], fragment.members[b]);
            if (!(fragment.members[fragment.space.meet(a, b)] == sum)) {
                throw ImplicationViolated(
                    "fragment meet of '" + fragment.space.label(a) +
                    "' and '" + fragment.space.label(b) +
                    "' disagrees with the subspace sum");
            }
        }
    }
    return fragment;
}

std::optional<StarMap> fragment_star(const Fragment& fragment) {
    const int n = fragment.space.size();
    StarMap star(n, -1);
    for (StateId s = 1; s < n; ++s) {
        const Subspace perp = subspace_perp(fragment.members[s]);
        const auto it =
            std::find(fragment.members.begin(), fragment.members.end(), perp);
        if (it == fragment.members.end()) return std::nullopt;
        const StateId target =
            static_cast<StateId>(it - fragment.members.begin());
        if (target == fragment.space.bottom()) return std::nullopt;
        star[s] = target;
    }
    return star;
}

Det quantum_effect_eval(const Subspace& g1, const Subspace& g2,
                        const Subspace& g) {
    require_same_dim(g1, g2);
    require_same_dim(g1, g);
    if (!subspace_contains(subspace_perp(g1), g2)) {
        throw NotOrthogonal("effect sides '" + subspace_label(g1) + "' and '" +
                            subspace_label(g2) + "' are not orthogonal");
    }
    if (subspace_contains(g1, g)) return Det::Yes;
    if (subspace_contains(g2, g)) return Det::No;
    return Det::Bot;
}

} // namespace chu3

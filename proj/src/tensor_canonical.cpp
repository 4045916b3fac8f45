#include "chu3/tensor_canonical.hpp"

#include "chu3/errors.hpp"

#include <algorithm>
#include <cstddef>

namespace chu3 {

bool BiFilter::contains(StatePair p) const {
    return std::binary_search(pairs.begin(), pairs.end(), p);
}

BiFilter bifilter_closure(const StateSpace& a, const StateSpace& b,
                          const TensorGen& gens) {
    if (gens.pairs.empty()) throw EmptySet("closure needs generators");
    const int na = a.size();
    const int nb = b.size();
    const auto idx = [nb](StateId x, StateId y) {
        return static_cast<std::size_t>(x) * nb + y;
    };
    std::vector<char> in(static_cast<std::size_t>(na) * nb, 0);
    for (const auto& [x, y] : gens.pairs) {
        if (x < 0 || x >= na || y < 0 || y >= nb)
            throw DimensionMismatch("generator pair lies outside the factors");
        in[idx(x, y)] = 1;
    }

    // Full passes in grid order until a fixed point; each pass applies the
    // upward rule and both one-sided meet rules from every member.
    bool changed = true;
    while (changed) {
        changed = false;
        for (StateId x = 0; x < na; ++x)
            for (StateId y = 0; y < nb; ++y) {
                if (!in[idx(x, y)]) continue;
                for (StateId x2 = 0; x2 < na; ++x2) {
                    if (!a.leq(x, x2)) continue;
                    for (StateId y2 = 0; y2 < nb; ++y2)
                        if (b.leq(y, y2) && !in[idx(x2, y2)]) {
                            in[idx(x2, y2)] = 1;
                            changed = true;
                        }
                }
                for (StateId x2 = 0; x2 < na; ++x2)
                    if (in[idx(x2, y)]) {
                        const StateId m = a.meet(x, x2);
                        if (!in[idx(m, y)]) {
                            in[idx(m, y)] = 1;
                            changed = true;
                        }
                    }
                for (StateId y2 = 0; y2 < nb; ++y2)
                    if (in[idx(x, y2)]) {
                        const StateId m = b.meet(y, y2);
                        if (!in[idx(x, m)]) {
                            in[idx(x, m)] = 1;
                            changed = true;
                        }
                    }
            }
    }

    BiFilter out;
    for (StateId x = 0; x < na; ++x)
        for (StateId y = 0; y < nb; ++y)
            if (in[idx(x, y)]) out.pairs.push_back({x, y});
    return out;
}

bool fraser_leq(const StateSpace& a, const StateSpace& b,
                const TensorGen& gens, StatePair target) {
    if (target.first < 0 || target.first >= a.size() || target.second < 0 ||
        target.second >= b.size())
        throw DimensionMismatch("target pair lies outside the factors");
    return bifilter_closure(a, b, gens).contains(target);
}

CanonicalComparison compare_with_basic(const StateSpace& a,
                                       const StateSpace& b,
                                       const TensorGen& gens,
                                       StatePair target) {
    CanonicalComparison out;
    out.fraser = fraser_leq(a, b, gens, target);
    out.basic = leq_pure(a, b, gens, target);
    const std::string question =
        render_pairs(a, b, gens.pairs) + " below [" + a.label(target.first) +
        "," + b.label(target.second) + "]";
    if (out.fraser && !out.basic)
        throw ImplicationViolated("closure order claims " + question +
                                  " but the evaluation order denies it");
    if (out.fraser != out.basic &&
        (a.is_distributive() || b.is_distributive()))
        throw ImplicationViolated(
            "closure and evaluation orders split on a distributive factor: " +
            question);
    return out;
}

} // namespace chu3

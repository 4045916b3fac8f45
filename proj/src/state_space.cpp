#include "chu3/state_space.hpp"

#include <algorithm>
#include <numeric>

#include "chu3/errors.hpp"

namespace chu3 {

namespace {

// Longest chain length from the (unique) minimum, computed over an arbitrary
// id assignment before canonicalization.
std::vector<int> longest_chain_depths(const std::vector<Bits>& up) {
    const int n = static_cast<int>(up.size());
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    // |down(x)| is a topological key: y ⊏ x implies down(y) ⊊ down(x).
    std::vector<std::size_t> below(static_cast<std::size_t>(n));
    for (int x = 0; x < n; ++x) {
        std::size_t c = 0;
        for (int y = 0; y < n; ++y)
            if (up[y].test(static_cast<std::size_t>(x))) ++c;
        below[static_cast<std::size_t>(x)] = c;
    }
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return below[static_cast<std::size_t>(a)] < below[static_cast<std::size_t>(b)]; });
    std::vector<int> depth(static_cast<std::size_t>(n), 0);
    for (int x : order) {
        int d = 0;
        for (int y = 0; y < n; ++y) {
            if (y != x && up[y].test(static_cast<std::size_t>(x)))
                d = std::max(d, depth[static_cast<std::size_t>(y)] + 1);
        }
        depth[static_cast<std::size_t>(x)] = d;
    }
    return depth;
}

} // namespace

StateSpace StateSpace::from_covers(std::string name,
                                   const std::vector<std::string>& labels,
                                   const std::vector<std::pair<std::string, std::string>>& covers) {
    const int n = static_cast<int>(labels.size());
    if (n == 0) throw NoBottom("space '" + name + "': no elements");
    std::unordered_map<std::string, int> idx;
    for (int i = 0; i < n; ++i) {
        if (!idx.emplace(labels[static_cast<std::size_t>(i)], i).second)
            throw ParseError("space '" + name + "': duplicate element label '" +
                             labels[static_cast<std::size_t>(i)] + "'");
    }
    std::vector<std::vector<int>> succ(static_cast<std::size_t>(n));
    for (const auto& [lo, hi] : covers) {
        auto a = idx.find(lo);
        auto b = idx.find(hi);
        if (a == idx.end()) throw ParseError("space '" + name + "': unknown label '" + lo + "' in covers");
        if (b == idx.end()) throw ParseError("space '" + name + "': unknown label '" + hi + "' in covers");
        if (a->second == b->second)
            throw CycleDetected("space '" + name + "': self-loop on '" + lo + "'");
        succ[static_cast<std::size_t>(a->second)].push_back(b->second);
    }
    // Reflexive-transitive closure by DFS from each element, with cycle
    // detection via the recursion stack.
    std::vector<Bits> up(static_cast<std::size_t>(n), Bits(static_cast<std::size_t>(n)));
    std::vector<int> color(static_cast<std::size_t>(n), 0); // 0 new, 1 active, 2 done
    std::vector<int> stack;
    auto dfs = [&](auto&& self, int v) -> void {
        color[static_cast<std::size_t>(v)] = 1;
        up[static_cast<std::size_t>(v)].set(static_cast<std::size_t>(v));
        for (int w : succ[static_cast<std::size_t>(v)]) {
            if (color[static_cast<std::size_t>(w)] == 1)
                throw CycleDetected("space '" + name + "': cycle through '" +
                                    labels[static_cast<std::size_t>(w)] + "'");
            if (color[static_cast<std::size_t>(w)] == 0) self(self, w);
            up[static_cast<std::size_t>(v)] |= up[static_cast<std::size_t>(w)];
        }
        color[static_cast<std::size_t>(v)] = 2;
    };
    for (int v = 0; v < n; ++v)
        if (color[static_cast<std::size_t>(v)] == 0) dfs(dfs, v);
    return build(std::move(name), labels, std::move(up));
}

StateSpace StateSpace::from_leq(std::string name,
                                const std::vector<std::string>& labels,
                                const std::vector<std::vector<bool>>& leq) {
    const int n = static_cast<int>(labels.size());
    if (n == 0) throw NoBottom("space '" + name + "': no elements");
    if (static_cast<int>(leq.size()) != n)
        throw ParseError("space '" + name + "': order table size mismatch");
    std::unordered_map<std::string, int> idx;
    for (int i = 0; i < n; ++i) {
        if (!idx.emplace(labels[static_cast<std::size_t>(i)], i).second)
            throw ParseError("space '" + name + "': duplicate element label '" +
                             labels[static_cast<std::size_t>(i)] + "'");
    }
    std::vector<Bits> up(static_cast<std::size_t>(n), Bits(static_cast<std::size_t>(n)));
    for (int a = 0; a < n; ++a) {
        if (static_cast<int>(leq[static_cast<std::size_t>(a)].size()) != n)
            throw ParseError("space '" + name + "': order table row size mismatch");
        for (int b = 0; b < n; ++b)
            if (leq[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])
                up[static_cast<std::size_t>(a)].set(static_cast<std::size_t>(b));
    }
    for (int a = 0; a < n; ++a) {
        if (!up[static_cast<std::size_t>(a)].test(static_cast<std::size_t>(a)))
            throw ParseError("space '" + name + "': order not reflexive at '" +
                             labels[static_cast<std::size_t>(a)] + "'");
        for (int b = 0; b < n; ++b) {
            if (a != b && up[static_cast<std::size_t>(a)].test(static_cast<std::size_t>(b)) &&
                up[static_cast<std::size_t>(b)].test(static_cast<std::size_t>(a)))
                throw CycleDetected("space '" + name + "': '" + labels[static_cast<std::size_t>(a)] +
                                    "' and '" + labels[static_cast<std::size_t>(b)] + "' are mutually below each other");
            if (up[static_cast<std::size_t>(a)].test(static_cast<std::size_t>(b)) &&
                !up[static_cast<std::size_t>(b)].is_subset_of(up[static_cast<std::size_t>(a)]))
                throw ParseError("space '" + name + "': order not transitive at '" +
                                 labels[static_cast<std::size_t>(a)] + "' ⊑ '" +
                                 labels[static_cast<std::size_t>(b)] + "'");
        }
    }
    return build(std::move(name), labels, std::move(up));
}

StateSpace StateSpace::build(std::string name, std::vector<std::string> labels,
                             std::vector<Bits> up) {
    const int n = static_cast<int>(labels.size());
    // Unique least element.
    int bottom = -1;
    for (int v = 0; v < n; ++v) {
        if (up[static_cast<std::size_t>(v)].count() == static_cast<std::size_t>(n)) {
            bottom = v;
            break;
        }
    }
    if (bottom < 0) throw NoBottom("space '" + name + "': no least element");

    // Canonical id assignment: (depth, label).
    std::vector<int> depth = longest_chain_depths(up);
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (depth[static_cast<std::size_t>(a)] != depth[static_cast<std::size_t>(b)])
            return depth[static_cast<std::size_t>(a)] < depth[static_cast<std::size_t>(b)];
        return labels[static_cast<std::size_t>(a)] < labels[static_cast<std::size_t>(b)];
    });
    std::vector<int> new_id(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) new_id[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    StateSpace s;
    s.name_ = std::move(name);
    s.labels_.resize(static_cast<std::size_t>(n));
    s.up_.assign(static_cast<std::size_t>(n), Bits(static_cast<std::size_t>(n)));
    s.depth_.resize(static_cast<std::size_t>(n));
    for (int old = 0; old < n; ++old) {
        const int ni = new_id[static_cast<std::size_t>(old)];
        s.labels_[static_cast<std::size_t>(ni)] = labels[static_cast<std::size_t>(old)];
        s.depth_[static_cast<std::size_t>(ni)] = depth[static_cast<std::size_t>(old)];
        for (int old2 = 0; old2 < n; ++old2)
            if (up[static_cast<std::size_t>(old)].test(static_cast<std::size_t>(old2)))
                s.up_[static_cast<std::size_t>(ni)].set(static_cast<std::size_t>(new_id[static_cast<std::size_t>(old2)]));
    }
    for (int i = 0; i < n; ++i) s.index_.emplace(s.labels_[static_cast<std::size_t>(i)], i);
    s.compute_caches();
    return s;
}

void StateSpace::compute_caches() {
    const auto n = static_cast<std::size_t>(size());
    down_.assign(n, Bits(n));
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (up_[a].test(b)) down_[b].set(a);

    // Pairwise greatest lower bounds; their absence is a structural defect.
    meet_.assign(n, std::vector<StateId>(n, -1));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = a; b < n; ++b) {
            Bits lower = down_[a] & down_[b];
            StateId glb = -1;
            for (std::size_t c = lower.find_first(); c != Bits::npos; c = lower.find_next(c)) {
                if (lower.is_subset_of(down_[c])) {
                    glb = static_cast<StateId>(c);
                    break;
                }
            }
            if (glb < 0)
                throw NotALattice("space '" + name_ + "': no greatest lower bound for '" +
                                  labels_[a] + "' and '" + labels_[b] + "'");
            meet_[a][b] = meet_[b][a] = glb;
        }
    }

    maximal_.clear();
    for (std::size_t v = 0; v < n; ++v)
        if (up_[v].count() == 1) maximal_.push_back(static_cast<StateId>(v));

    pure_type_.assign(n, PureType::NotPure);
    pure_.clear();
    for (std::size_t v = 0; v < n; ++v) {
        if (up_[v].count() == 1) {
            pure_type_[v] = PureType::Type1;
        } else {
            // Strictly-above set admits a minimum iff its meet lies inside it.
            std::vector<StateId> above;
            for (std::size_t w = up_[v].find_first(); w != Bits::npos; w = up_[v].find_next(w))
                if (w != v) above.push_back(static_cast<StateId>(w));
            if (meet_all(above) != static_cast<StateId>(v)) pure_type_[v] = PureType::Type2;
        }
        if (pure_type_[v] != PureType::NotPure) pure_.push_back(static_cast<StateId>(v));
    }

    underline_.assign(n, Bits(n));
    for (std::size_t v = 0; v < n; ++v) {
        for (StateId p : pure_)
            if (up_[v].test(static_cast<std::size_t>(p))) underline_[v].set(static_cast<std::size_t>(p));
    }

    atoms_.clear();
    const Bits& above_bot = up_[0];
    for (std::size_t v = above_bot.find_first(); v != Bits::npos; v = above_bot.find_next(v)) {
        if (v == 0) continue;
        // v covers bottom iff nothing else sits strictly between.
        bool covers = true;
        for (std::size_t w = down_[v].find_first(); w != Bits::npos; w = down_[v].find_next(w))
            if (w != 0 && w != v) { covers = false; break; }
        if (covers) atoms_.push_back(static_cast<StateId>(v));
    }
}

StateId StateSpace::id_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end())
        throw ParseError("space '" + name_ + "': unknown element label '" + label + "'");
    return it->second;
}

std::optional<StateId> StateSpace::find(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

StateId StateSpace::meet_all(std::span<const StateId> xs) const {
    if (xs.empty()) throw EmptySet("meet_all: empty operand list in space '" + name_ + "'");
    StateId acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = meet(acc, xs[i]);
    return acc;
}

bool StateSpace::widehat(StateId a, StateId b) const {
    return (up_[static_cast<std::size_t>(a)] & up_[static_cast<std::size_t>(b)]).any();
}

bool StateSpace::widehat_all(std::span<const StateId> xs) const {
    if (xs.empty()) throw EmptySet("widehat_all: empty operand list in space '" + name_ + "'");
    Bits common = up_[static_cast<std::size_t>(xs[0])];
    for (std::size_t i = 1; i < xs.size(); ++i) common &= up_[static_cast<std::size_t>(xs[i])];
    return common.any();
}

std::optional<StateId> StateSpace::bounded_join(StateId a, StateId b) const {
    const StateId pair[2] = {a, b};
    return bounded_join_all(pair);
}

std::optional<StateId> StateSpace::bounded_join_all(std::span<const StateId> xs) const {
    if (xs.empty()) throw EmptySet("bounded_join_all: empty operand list in space '" + name_ + "'");
    Bits common = up_[static_cast<std::size_t>(xs[0])];
    for (std::size_t i = 1; i < xs.size(); ++i) common &= up_[static_cast<std::size_t>(xs[i])];
    if (common.none()) return std::nullopt;
    std::vector<StateId> ub;
    for (std::size_t v = common.find_first(); v != Bits::npos; v = common.find_next(v))
        ub.push_back(static_cast<StateId>(v));
    // The meet of all upper bounds is itself an upper bound, hence the least one.
    return meet_all(ub);
}

std::vector<StateId> StateSpace::underline(StateId s) const {
    std::vector<StateId> out;
    const Bits& bits = underline_[static_cast<std::size_t>(s)];
    for (std::size_t v = bits.find_first(); v != Bits::npos; v = bits.find_next(v))
        out.push_back(static_cast<StateId>(v));
    return out;
}

std::vector<std::pair<StateId, StateId>> StateSpace::cover_pairs() const {
    const auto n = static_cast<std::size_t>(size());
    std::vector<std::pair<StateId, StateId>> out;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = up_[a].find_first(); b != Bits::npos; b = up_[a].find_next(b)) {
            if (b == a) continue;
            bool direct = true;
            for (std::size_t c = up_[a].find_first(); c != Bits::npos; c = up_[a].find_next(c)) {
                if (c != a && c != b && up_[c].test(b)) { direct = false; break; }
            }
            if (direct) out.emplace_back(static_cast<StateId>(a), static_cast<StateId>(b));
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

AxiomReport StateSpace::check_state_axioms() const {
    AxiomReport r;
    const auto n = static_cast<std::size_t>(size());
    // A1: pairwise meets are greatest lower bounds (construction computed
    // them; re-verify against a full scan).
    for (std::size_t a = 0; a < n && r.a1.pass; ++a) {
        for (std::size_t b = 0; b < n && r.a1.pass; ++b) {
            const StateId m = meet_[a][b];
            Bits lower = down_[a] & down_[b];
            if (!lower.test(static_cast<std::size_t>(m)) || !lower.is_subset_of(down_[static_cast<std::size_t>(m)])) {
                r.a1.pass = false;
                r.a1.witness = static_cast<StateId>(a);
            }
        }
    }
    // A2: a least element exists.
    if (up_[0].count() != n) {
        r.a2.pass = false;
        r.a2.witness = 0;
    }
    // A4: every state is the mixture of the maximal states above it.
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<StateId> max_above;
        for (StateId m : maximal_)
            if (up_[v].test(static_cast<std::size_t>(m))) max_above.push_back(m);
        if (max_above.empty() || meet_all(max_above) != static_cast<StateId>(v)) {
            r.a4.pass = false;
            r.a4.witness = static_cast<StateId>(v);
            break;
        }
    }
    // A5: pure states are exactly the maximal ones. Maximal elements are pure
    // unconditionally, so any mismatch is a non-maximal pure state; report
    // the deepest one.
    for (std::size_t i = n; i-- > 0;) {
        if (is_pure(static_cast<StateId>(i)) && !is_maximal(static_cast<StateId>(i))) {
            r.a5.pass = false;
            r.a5.witness = static_cast<StateId>(i);
            break;
        }
    }
    return r;
}

std::optional<DistributivityWitness> StateSpace::distributivity_witness() const {
    const auto n = static_cast<std::size_t>(size());
    // For fixed (σ, σ1), collect every y such that some x ⊒ σ1 has x⊓y = σ;
    // σ2 then admits a decomposition iff some such y lies above σ2.
    for (std::size_t sigma = 0; sigma < n; ++sigma) {
        for (std::size_t s1 = 0; s1 < n; ++s1) {
            if (up_[s1].test(sigma)) continue; // σ above σ1: excluded triple
            Bits partners(n);
            for (std::size_t x = up_[s1].find_first(); x != Bits::npos; x = up_[s1].find_next(x))
                for (std::size_t y = 0; y < n; ++y)
                    if (meet_[x][y] == static_cast<StateId>(sigma)) partners.set(y);
            for (std::size_t s2 = 0; s2 < n; ++s2) {
                if (up_[s2].test(sigma)) continue;
                if (!up_[static_cast<std::size_t>(meet_[s1][s2])].test(sigma)) continue;
                if (!(partners & up_[s2]).any())
                    return DistributivityWitness{static_cast<StateId>(sigma),
                                                 static_cast<StateId>(s1),
                                                 static_cast<StateId>(s2)};
            }
        }
    }
    return std::nullopt;
}

bool StateSpace::quasi_antipodal(StateId a, StateId b) const {
    if (widehat(a, b)) return false;
    const Bits& db = down_[static_cast<std::size_t>(b)];
    for (std::size_t v = db.find_first(); v != Bits::npos; v = db.find_next(v))
        if (v != static_cast<std::size_t>(b) && !widehat(a, static_cast<StateId>(v))) return false;
    const Bits& da = down_[static_cast<std::size_t>(a)];
    for (std::size_t v = da.find_first(); v != Bits::npos; v = da.find_next(v))
        if (v != static_cast<std::size_t>(a) && !widehat(b, static_cast<StateId>(v))) return false;
    return true;
}

StateSpace make_flat_space(std::string name, const std::vector<std::string>& atom_labels) {
    std::vector<std::string> labels = {"bot"};
    labels.insert(labels.end(), atom_labels.begin(), atom_labels.end());
    std::vector<std::pair<std::string, std::string>> covers;
    for (const auto& a : atom_labels) covers.emplace_back("bot", a);
    return StateSpace::from_covers(std::move(name), labels, covers);
}

StateSpace make_chain_space(std::string name, const std::vector<std::string>& labels_above_bot) {
    std::vector<std::string> labels = {"bot"};
    labels.insert(labels.end(), labels_above_bot.begin(), labels_above_bot.end());
    std::vector<std::pair<std::string, std::string>> covers;
    for (std::size_t i = 0; i + 1 < labels.size(); ++i)
        covers.emplace_back(labels[i], labels[i + 1]);
    return StateSpace::from_covers(std::move(name), labels, covers);
}

} // namespace chu3

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "chu3/errors.hpp"
#include "chu3/state_space.hpp"
#include "chu3/tensor_basic.hpp"
#include "chu3/tensor_canonical.hpp"

#include "helpers.hpp"

using namespace chu3;

namespace {

// Independent oracle: iterate the three closure rules over a std::set until
// nothing changes, with no shortcuts or ordering tricks.
std::set<StatePair> naive_closure(const StateSpace& a, const StateSpace& b,
                                  const std::vector<StatePair>& seed) {
    std::set<StatePair> out(seed.begin(), seed.end());
    bool grew = true;
    while (grew) {
        grew = false;
        std::set<StatePair> next = out;
        for (const auto& [x, y] : out) {
            for (StateId x2 = 0; x2 < a.size(); ++x2)
                if (a.leq(x, x2)) next.insert({x2, y});
            for (StateId y2 = 0; y2 < b.size(); ++y2)
                if (b.leq(y, y2)) next.insert({x, y2});
        }
        for (const auto& p : out)
            for (const auto& q : out) {
                if (p.second == q.second) next.insert({a.meet(p.first, q.first), p.second});
                if (p.first == q.first) next.insert({p.first, b.meet(p.second, q.second)});
            }
        if (next.size() != out.size()) {
            out = std::move(next);
            grew = true;
        }
    }
    return out;
}

TensorGen random_gen(std::mt19937& rng, const StateSpace& a,
                     const StateSpace& b, int max_size) {
    std::uniform_int_distribution<int> size_d(1, max_size);
    std::uniform_int_distribution<int> xa(0, a.size() - 1);
    std::uniform_int_distribution<int> xb(0, b.size() - 1);
    std::vector<StatePair> pairs;
    const int k = size_d(rng);
    for (int i = 0; i < k; ++i) pairs.push_back({xa(rng), xb(rng)});
    return make_tensor_gen(std::move(pairs));
}

} // namespace

TEST_CASE("bifilter closures match a naive fixed point iteration") {
    std::mt19937 rng(20719);
    for (const char* name : {"f2.json", "f3.json", "s4.json"}) {
        const StateSpace& sp = fixture(name).space;
        for (int trial = 0; trial < 60; ++trial) {
            TensorGen gens = random_gen(rng, sp, sp, 3);
            BiFilter bf = bifilter_closure(sp, sp, gens);
            auto expect = naive_closure(sp, sp, gens.pairs);
            CHECK(bf.pairs == std::vector<StatePair>(expect.begin(), expect.end()));
            CHECK(std::is_sorted(bf.pairs.begin(), bf.pairs.end()));
            for (StateId x = 0; x < sp.size(); ++x)
                for (StateId y = 0; y < sp.size(); ++y)
                    CHECK(bf.contains({x, y}) == expect.count({x, y}));
        }
    }
    CHECK_THROWS_AS(bifilter_closure(fixture("f2.json").space,
                                     fixture("f2.json").space, TensorGen{}),
                    EmptySet);
}

TEST_CASE("closure membership decides the closure order") {
    const StateSpace& f3 = fixture("f3.json").space;
    std::mt19937 rng(6011);
    for (int trial = 0; trial < 40; ++trial) {
        TensorGen gens = random_gen(rng, f3, f3, 3);
        BiFilter bf = bifilter_closure(f3, f3, gens);
        for (StateId x = 0; x < f3.size(); ++x)
            for (StateId y = 0; y < f3.size(); ++y)
                CHECK(fraser_leq(f3, f3, gens, {x, y}) == bf.contains({x, y}));
    }
}

TEST_CASE("the closure order refines the evaluation order") {
    std::mt19937 rng(88103);
    for (const char* name : {"f3.json", "s4.json"}) {
        const StateSpace& sp = fixture(name).space;
        for (int trial = 0; trial < 80; ++trial) {
            TensorGen gens = random_gen(rng, sp, sp, 3);
            std::uniform_int_distribution<int> xs(0, sp.size() - 1);
            StatePair target{xs(rng), xs(rng)};
            auto cmp = compare_with_basic(sp, sp, gens, target);
            if (cmp.fraser) CHECK(cmp.basic);
            CHECK(cmp.fraser == fraser_leq(sp, sp, gens, target));
            CHECK(cmp.basic == leq_pure(sp, sp, gens, target));
        }
    }
}

TEST_CASE("both orders coincide over a distributive factor") {
    const StateSpace& f2 = fixture("f2.json").space;
    const StateSpace& s4 = fixture("s4.json").space;

    // f2 x f2 exhaustively over generator sets of size at most two.
    std::vector<StatePair> pairs;
    for (StateId x = 0; x < f2.size(); ++x)
        for (StateId y = 0; y < f2.size(); ++y) pairs.push_back({x, y});
    for (std::size_t i = 0; i < pairs.size(); ++i)
        for (std::size_t j = i; j < pairs.size(); ++j) {
            TensorGen g = make_tensor_gen({pairs[i], pairs[j]});
            for (const StatePair& t : pairs) {
                auto cmp = compare_with_basic(f2, f2, g, t);
                CHECK(cmp.fraser == cmp.basic);
            }
        }

    // One distributive factor is enough.
    std::mt19937 rng(3361);
    for (int trial = 0; trial < 60; ++trial) {
        TensorGen g = random_gen(rng, f2, s4, 3);
        std::uniform_int_distribution<int> xa(0, f2.size() - 1);
        std::uniform_int_distribution<int> xb(0, s4.size() - 1);
        StatePair t{xa(rng), xb(rng)};
        auto cmp = compare_with_basic(f2, s4, g, t);
        CHECK(cmp.fraser == cmp.basic);
    }
}

TEST_CASE("the diagonal of the three atom space separates the two orders") {
    const StateSpace& f3 = fixture("f3.json").space;
    const StateId s1 = f3.id_of("s1"), s2 = f3.id_of("s2"), s3 = f3.id_of("s3");
    TensorGen diag = make_tensor_gen({{s1, s1}, {s2, s2}, {s3, s3}});
    const StatePair bottom{f3.bottom(), f3.bottom()};

    auto cmp = compare_with_basic(f3, f3, diag, bottom);
    CHECK_FALSE(cmp.fraser);
    CHECK(cmp.basic);

    // The closure of the diagonal is exactly its upward closure: meets never
    // leave it because the diagonal pairs share no component.
    BiFilter bf = bifilter_closure(f3, f3, diag);
    CHECK(bf.pairs == std::vector<StatePair>{{s1, s1}, {s2, s2}, {s3, s3}});
    CHECK_FALSE(bf.contains(bottom));
    CHECK(leq_pure(f3, f3, diag, bottom));
}

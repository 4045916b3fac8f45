#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "chu3/effects.hpp"
#include "chu3/errors.hpp"
#include "chu3/symmetry.hpp"
#include "chu3/tensor_basic.hpp"

#include "helpers.hpp"

using namespace chu3;

namespace {

// Label of the source effect a channel assigns to a target effect label.
std::string pulled_back(const ChuMap& m, const std::string& target_effect) {
    EffectSpace et(*m.target), es(*m.source);
    for (EffectId l = 0; l < et.size(); ++l)
        if (et.label(l) == target_effect)
            return es.label(es.id_of(m.f21[static_cast<std::size_t>(l)]));
    FAIL("no target effect labelled ", target_effect);
    return {};
}

} // namespace

TEST_CASE("identity channels satisfy every law") {
    for (const char* name : {"f2.json", "s4.json", "f3.json", "c3.json"}) {
        const StateSpace& sp = fixture(name).space;
        ChuMap id = identity_channel(sp);
        auto rep = verify_symmetry(id);
        CHECK(rep.well_formed);
        CHECK(rep.bijective);
        CHECK(rep.all_pass());
        EffectSpace eff(sp);
        for (EffectId l = 0; l < eff.size(); ++l)
            CHECK(eff.id_of(id.f21[static_cast<std::size_t>(l)]) == l);
    }
}

TEST_CASE("the atom swap on the two atom space is a symmetry") {
    const StateSpace& f2 = fixture("f2.json").space;
    ChuMap swap = derive_effect_map(f2, f2, {0, f2.id_of("b"), f2.id_of("a")});
    auto rep = verify_symmetry(swap);
    CHECK(rep.bijective);
    CHECK(rep.all_pass());

    // Duality pins the pulled-back effects: a target effect tests the image
    // state, so its pullback swaps the side states.
    CHECK(pulled_back(swap, "(a|-)") == "(b|-)");
    CHECK(pulled_back(swap, "(a|b)") == "(b|a)");
    CHECK(pulled_back(swap, "(bot|-)") == "(bot|-)");
    CHECK(pulled_back(swap, "(-|-)") == "(-|-)");
}

TEST_CASE("state tables that break the channel laws are rejected") {
    const StateSpace& f2 = fixture("f2.json").space;
    const StateSpace& s4 = fixture("s4.json").space;
    const StateId a = f2.id_of("a"), b = f2.id_of("b");
    CHECK_THROWS_AS(derive_effect_map(f2, f2, {a, 0, b}), NotMonotone);
    CHECK_THROWS_AS(derive_effect_map(f2, f2, {0, a, a}), NotMeetPreserving);
    CHECK_THROWS_AS(derive_effect_map(f2, f2, {0, a}), DimensionMismatch);
    CHECK_THROWS_AS(derive_effect_map(f2, s4, {0, 1, 7}), DimensionMismatch);

    // Constant maps to a fixed state are lawful channels, just not bijective.
    ChuMap collapse = derive_effect_map(s4, f2, {0, 0, 0, 0, 0});
    auto rep = verify_symmetry(collapse);
    CHECK(rep.well_formed);
    CHECK_FALSE(rep.bijective);
    CHECK(rep.all_pass());
}

TEST_CASE("hand-broken effect tables are flagged by the verifier") {
    const StateSpace& f2 = fixture("f2.json").space;
    ChuMap swap = derive_effect_map(f2, f2, {0, f2.id_of("b"), f2.id_of("a")});
    EffectSpace eff(f2);

    SUBCASE("a wrong but valid effect entry breaks duality") {
        ChuMap broken = swap;
        broken.f21[static_cast<std::size_t>(eff.id_of(Effect{f2.id_of("a"), {}}))] =
            Effect{f2.id_of("a"), {}};
        auto rep = verify_symmetry(broken);
        CHECK(rep.well_formed);
        CHECK_FALSE(rep.duality.pass);
        CHECK_FALSE(rep.all_pass());
        CHECK_FALSE(rep.duality.witness.empty());
    }
    SUBCASE("an inconsistent effect entry breaks well-formedness") {
        ChuMap broken = swap;
        broken.f21[0] = Effect{f2.id_of("a"), f2.id_of("a")};
        auto rep = verify_symmetry(broken);
        CHECK_FALSE(rep.well_formed);
        CHECK_FALSE(rep.all_pass());
    }
    SUBCASE("a truncated state table breaks well-formedness") {
        ChuMap broken = swap;
        broken.f12.pop_back();
        CHECK_FALSE(verify_symmetry(broken).well_formed);
    }
}

TEST_CASE("brute scan of the square: 24 channels, 8 star symmetries") {
    const auto& sf = fixture("s4.json");
    const StateSpace& s4 = sf.space;
    REQUIRE(sf.star.has_value());
    const StarMap& star = *sf.star;

    std::vector<StateId> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    int channels = 0, star_respecting = 0, total = 0;
    do {
        ++total;
        ChuMap m;
        try {
            m = derive_effect_map(s4, s4, perm);
        } catch (const NotMonotone&) {
            continue;
        } catch (const NotMeetPreserving&) {
            continue;
        }
        ++channels;
        auto rep = verify_symmetry(m);
        CHECK(rep.bijective);
        CHECK(rep.all_pass());

        bool respects = true;
        for (StateId s = 1; s < s4.size(); ++s)
            if (star[static_cast<std::size_t>(perm[static_cast<std::size_t>(s)])] !=
                perm[static_cast<std::size_t>(star[static_cast<std::size_t>(s)])]) {
                respects = false;
                break;
            }
        if (respects) ++star_respecting;
    } while (std::next_permutation(perm.begin(), perm.end()));

    CHECK(total == 120);
    CHECK(channels == 24);
    CHECK(star_respecting == 8);
}

TEST_CASE("brute scan of the two atom space: both channels respect the star") {
    const auto& sf = fixture("f2.json");
    const StateSpace& f2 = sf.space;
    std::vector<StateId> perm(3);
    std::iota(perm.begin(), perm.end(), 0);
    int channels = 0;
    do {
        try {
            ChuMap m = derive_effect_map(f2, f2, perm);
            ++channels;
            CHECK(verify_symmetry(m).all_pass());
        } catch (const NotMonotone&) {
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(channels == 2);
}

TEST_CASE("channels compose and the swap is an involution") {
    const StateSpace& f2 = fixture("f2.json").space;
    ChuMap swap = derive_effect_map(f2, f2, {0, f2.id_of("b"), f2.id_of("a")});
    ChuMap id = identity_channel(f2);

    ChuMap twice = compose(swap, swap);
    CHECK(twice.f12 == id.f12);
    EffectSpace eff(f2);
    for (EffectId l = 0; l < eff.size(); ++l)
        CHECK(eff.id_of(twice.f21[static_cast<std::size_t>(l)]) ==
              eff.id_of(id.f21[static_cast<std::size_t>(l)]));
    CHECK(verify_symmetry(twice).all_pass());

    const StateSpace& s4 = fixture("s4.json").space;
    ChuMap other = identity_channel(s4);
    CHECK_THROWS_AS(compose(swap, other), DimensionMismatch);
}

TEST_CASE("the pointwise infimum of channels is a lawful channel") {
    const StateSpace& f2 = fixture("f2.json").space;
    ChuMap swap = derive_effect_map(f2, f2, {0, f2.id_of("b"), f2.id_of("a")});
    ChuMap id = identity_channel(f2);

    ChuMap inf = meet_channels(id, swap);
    CHECK(inf.f12 == std::vector<StateId>{0, 0, 0});
    auto rep = verify_symmetry(inf);
    CHECK(rep.well_formed);
    CHECK_FALSE(rep.bijective);
    CHECK(rep.duality.pass);
    CHECK(rep.f12_meets.pass);
    CHECK(rep.f21_meets.pass);

    ChuMap same = meet_channels(id, id);
    CHECK(same.f12 == id.f12);

    const StateSpace& s4 = fixture("s4.json").space;
    ChuMap other = identity_channel(s4);
    CHECK_THROWS_AS(meet_channels(id, other), DimensionMismatch);
}

TEST_CASE("factor symmetries induce a symmetry of the enumerated tensor") {
    const StateSpace& f2 = fixture("f2.json").space;
    TensorSpace tensor(f2, f2);
    REQUIRE(tensor.space().size() == 15);

    ChuMap swap = derive_effect_map(f2, f2, {0, f2.id_of("b"), f2.id_of("a")});
    ChuMap id = identity_channel(f2);

    ChuMap lifted = tensor_symmetries(swap, id, tensor, tensor);
    auto rep = verify_symmetry(lifted);
    CHECK(rep.bijective);
    CHECK(rep.all_pass());

    // The lift acts on classes through the factor tables.
    const StateId a = f2.id_of("a"), b = f2.id_of("b");
    CHECK(lifted.f12[static_cast<std::size_t>(tensor.class_of_pair(a, a))] ==
          tensor.class_of_pair(b, a));
    CHECK(lifted.f12[static_cast<std::size_t>(tensor.class_of_pair(b, b))] ==
          tensor.class_of_pair(a, b));
    CHECK(lifted.f12[static_cast<std::size_t>(tensor.class_of_pair(0, 0))] ==
          tensor.class_of_pair(0, 0));
    TensorGen diag = make_tensor_gen({{a, a}, {b, b}});
    TensorGen anti = make_tensor_gen({{b, a}, {a, b}});
    CHECK(lifted.f12[static_cast<std::size_t>(tensor.class_of(diag))] ==
          tensor.class_of(anti));

    // Lifting the swap twice composes to the identity lift.
    ChuMap lifted_id = tensor_symmetries(id, id, tensor, tensor);
    ChuMap twice = compose(lifted, tensor_symmetries(swap, id, tensor, tensor));
    CHECK(twice.f12 == lifted_id.f12);

    const StateSpace& s4 = fixture("s4.json").space;
    ChuMap wrong = identity_channel(s4);
    CHECK_THROWS_AS(tensor_symmetries(wrong, id, tensor, tensor), DimensionMismatch);
}

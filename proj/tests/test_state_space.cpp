#include <doctest.h>

#include <algorithm>
#include <optional>
#include <vector>

#include "chu3/errors.hpp"
#include "chu3/state_space.hpp"
#include "helpers.hpp"

using namespace chu3;

namespace {

// Brute greatest lower bound: the unique maximum of the common lower set.
std::optional<StateId> glb_scan(const StateSpace& sp, StateId a, StateId b) {
    std::vector<StateId> lower;
    for (StateId z = 0; z < sp.size(); ++z)
        if (sp.leq(z, a) && sp.leq(z, b)) lower.push_back(z);
    for (StateId cand : lower) {
        bool top = true;
        for (StateId z : lower)
            if (!sp.leq(z, cand)) {
                top = false;
                break;
            }
        if (top) return cand;
    }
    return std::nullopt;
}

// Brute least upper bound over the whole carrier.
std::optional<StateId> lub_scan(const StateSpace& sp, StateId a, StateId b) {
    std::vector<StateId> upper;
    for (StateId z = 0; z < sp.size(); ++z)
        if (sp.leq(a, z) && sp.leq(b, z)) upper.push_back(z);
    for (StateId cand : upper) {
        bool least = true;
        for (StateId z : upper)
            if (!sp.leq(cand, z)) {
                least = false;
                break;
            }
        if (least) return cand;
    }
    return std::nullopt;
}

// Decomposition scan mirroring the definition: a witness is a triple where
// sigma bounds sigma1 meet sigma2 from above, is above neither factor, and
// admits no decomposition into enlargements of the two.
std::optional<DistributivityWitness> distributivity_scan(const StateSpace& sp) {
    for (StateId s = 0; s < sp.size(); ++s)
        for (StateId s1 = 0; s1 < sp.size(); ++s1)
            for (StateId s2 = 0; s2 < sp.size(); ++s2) {
                if (!sp.leq(sp.meet(s1, s2), s)) continue;
                if (sp.leq(s1, s) || sp.leq(s2, s)) continue;
                bool decomposable = false;
                for (StateId t1 = 0; t1 < sp.size() && !decomposable; ++t1) {
                    if (!sp.leq(s1, t1)) continue;
                    for (StateId t2 = 0; t2 < sp.size(); ++t2) {
                        if (!sp.leq(s2, t2)) continue;
                        if (sp.meet(t1, t2) == s) {
                            decomposable = true;
                            break;
                        }
                    }
                }
                if (!decomposable) return DistributivityWitness{s, s1, s2};
            }
    return std::nullopt;
}

} // namespace

TEST_CASE("element ids are canonical by depth then label") {
    auto f2 = load_fixture("f2.json").space;
    REQUIRE(f2.size() == 3);
    CHECK(f2.label(0) == "bot");
    CHECK(f2.label(1) == "a");
    CHECK(f2.label(2) == "b");

    auto s4 = load_fixture("s4.json").space;
    REQUIRE(s4.size() == 5);
    CHECK(s4.label(0) == "bot");
    CHECK(s4.label(1) == "a1");
    CHECK(s4.label(2) == "a1s");
    CHECK(s4.label(3) == "a2");
    CHECK(s4.label(4) == "a2s");

    auto p3 = make_p3().space;
    REQUIRE(p3.size() == 11);
    const char* expected[] = {"bot", "p12", "p13", "p23", "pd3", "pdp3",
                              "d",   "dp",  "e1",  "e2",  "e3"};
    for (int i = 0; i < 11; ++i) CHECK(p3.label(i) == expected[i]);
}

TEST_CASE("identical structures presented in different element orders coincide") {
    std::vector<std::string> shuffled{"y", "x", "bot"};
    std::vector<std::pair<std::string, std::string>> covers{{"x", "y"},
                                                            {"bot", "x"}};
    auto chain = StateSpace::from_covers("c3", shuffled, covers);
    CHECK(chain.label(0) == "bot");
    CHECK(chain.label(1) == "x");
    CHECK(chain.label(2) == "y");
    CHECK(chain.depth(2) == 2);
}

TEST_CASE("meets match a brute greatest lower bound scan") {
    auto check_space = [](const StateSpace& sp) {
        for (StateId a = 0; a < sp.size(); ++a)
            for (StateId b = 0; b < sp.size(); ++b) {
                auto expected = glb_scan(sp, a, b);
                REQUIRE(expected.has_value());
                CHECK(sp.meet(a, b) == *expected);
            }
    };
    check_space(load_fixture("f2.json").space);
    check_space(load_fixture("f3.json").space);
    check_space(load_fixture("s4.json").space);
    check_space(load_fixture("c3.json").space);
    check_space(make_p3().space);
}

TEST_CASE("bounded joins match a brute least upper bound scan") {
    auto check_space = [](const StateSpace& sp) {
        for (StateId a = 0; a < sp.size(); ++a)
            for (StateId b = 0; b < sp.size(); ++b) {
                auto expected = lub_scan(sp, a, b);
                auto got = sp.bounded_join(a, b);
                CHECK(got == expected);
                CHECK(sp.widehat(a, b) == expected.has_value());
            }
    };
    check_space(load_fixture("s4.json").space);
    check_space(make_p3().space);
}

TEST_CASE("meet_all folds and rejects the empty family") {
    auto p3 = make_p3().space;
    std::vector<StateId> rays{p3.id_of("e1"), p3.id_of("e2"), p3.id_of("e3")};
    CHECK(p3.meet_all(rays) == p3.bottom());
    std::vector<StateId> plane_pair{p3.id_of("e1"), p3.id_of("e2")};
    CHECK(p3.meet_all(plane_pair) == p3.id_of("p12"));
    std::vector<StateId> empty;
    CHECK_THROWS_AS(p3.meet_all(empty), EmptySet);
}

TEST_CASE("construction rejects malformed orders") {
    CHECK_THROWS_AS(StateSpace::from_covers(
                        "cyc", {"a", "b"}, {{"a", "b"}, {"b", "a"}}),
                    CycleDetected);
    CHECK_THROWS_AS(StateSpace::from_covers("nobot", {"a", "b"}, {}),
                    NoBottom);
    // Two incomparable upper elements over two incomparable lower ones: the
    // pair of upper elements has two maximal lower bounds.
    CHECK_THROWS_AS(StateSpace::from_covers("nolat",
                                            {"bot", "a", "b", "t1", "t2"},
                                            {{"bot", "a"},
                                             {"bot", "b"},
                                             {"a", "t1"},
                                             {"b", "t1"},
                                             {"a", "t2"},
                                             {"b", "t2"}}),
                    NotALattice);
    CHECK_THROWS_AS(StateSpace::from_covers("dup", {"bot", "a", "a"},
                                            {{"bot", "a"}}),
                    ParseError);
}

TEST_CASE("cover pairs are recovered from the order") {
    auto f2 = load_fixture("f2.json").space;
    auto covers = f2.cover_pairs();
    REQUIRE(covers.size() == 2);
    CHECK(covers[0] == std::make_pair(f2.bottom(), f2.id_of("a")));
    CHECK(covers[1] == std::make_pair(f2.bottom(), f2.id_of("b")));

    auto p3 = make_p3().space;
    CHECK(p3.cover_pairs().size() == 17);
}

TEST_CASE("pure, maximal and atom inventories") {
    auto s4 = load_fixture("s4.json").space;
    CHECK(s4.pure_states().size() == 4);
    CHECK(s4.maximal_states().size() == 4);
    CHECK(s4.atoms().size() == 4);
    CHECK_FALSE(s4.is_pure(s4.bottom()));

    auto p3 = make_p3().space;
    std::vector<StateId> pures{p3.id_of("d"), p3.id_of("dp"), p3.id_of("e1"),
                               p3.id_of("e2"), p3.id_of("e3")};
    CHECK(p3.pure_states() == pures);
    CHECK(p3.maximal_states() == pures);
    std::vector<StateId> atoms{p3.id_of("p12"), p3.id_of("p13"),
                               p3.id_of("p23"), p3.id_of("pd3"),
                               p3.id_of("pdp3")};
    CHECK(p3.atoms() == atoms);

    auto c3 = load_fixture("c3.json").space;
    // Every state of a chain is completely meet irreducible, the bottom
    // included: nothing above it meets back down to it.
    CHECK(c3.pure_states().size() == 3);
    CHECK(c3.maximal_states().size() == 1);
}

TEST_CASE("underline lists the pure states above an element") {
    auto p3 = make_p3().space;
    auto under = p3.underline(p3.id_of("p12"));
    std::vector<StateId> expected{p3.id_of("d"), p3.id_of("dp"),
                                  p3.id_of("e1"), p3.id_of("e2")};
    std::sort(under.begin(), under.end());
    std::sort(expected.begin(), expected.end());
    CHECK(under == expected);
}

TEST_CASE("axiom report on the reference spaces") {
    for (const char* name : {"f2.json", "f3.json", "s4.json"}) {
        auto sp = load_fixture(name).space;
        auto rep = sp.check_state_axioms();
        CHECK(rep.all_pass());
    }
    CHECK(make_p3().space.check_state_axioms().all_pass());
}

TEST_CASE("chains fail the reconstruction axioms") {
    auto c3 = load_fixture("c3.json").space;
    auto rep = c3.check_state_axioms();
    CHECK(rep.a1.pass);
    CHECK(rep.a2.pass);
    CHECK_FALSE(rep.a4.pass);
    REQUIRE(rep.a4.witness.has_value());
    CHECK(*rep.a4.witness == c3.bottom());
    CHECK_FALSE(rep.a5.pass);
    REQUIRE(rep.a5.witness.has_value());
    CHECK(*rep.a5.witness == c3.id_of("x"));

    auto c2 = make_chain_space("c2", {"x"});
    auto rep2 = c2.check_state_axioms();
    CHECK_FALSE(rep2.a4.pass);
    CHECK(*rep2.a4.witness == c2.bottom());
    CHECK_FALSE(rep2.a5.pass);
    CHECK(*rep2.a5.witness == c2.bottom());
}

TEST_CASE("distributivity verdicts match the decomposition scan") {
    auto check_space = [](const StateSpace& sp) {
        auto expected = distributivity_scan(sp);
        auto got = sp.distributivity_witness();
        CHECK(got.has_value() == expected.has_value());
        CHECK(sp.is_distributive() == !expected.has_value());
    };
    check_space(load_fixture("f2.json").space);
    check_space(load_fixture("f3.json").space);
    check_space(load_fixture("s4.json").space);
    check_space(load_fixture("c3.json").space);
    check_space(make_p3().space);
}

TEST_CASE("frozen distributivity witnesses") {
    auto f2 = load_fixture("f2.json").space;
    CHECK(f2.is_distributive());

    auto f3 = load_fixture("f3.json").space;
    auto w3 = f3.distributivity_witness();
    REQUIRE(w3.has_value());
    CHECK(f3.label(w3->sigma) == "s1");
    CHECK(f3.label(w3->sigma1) == "s2");
    CHECK(f3.label(w3->sigma2) == "s3");

    auto s4 = load_fixture("s4.json").space;
    auto w4 = s4.distributivity_witness();
    REQUIRE(w4.has_value());
    CHECK(s4.label(w4->sigma) == "a1");
    CHECK(s4.label(w4->sigma1) == "a1s");
    CHECK(s4.label(w4->sigma2) == "a2");
}

TEST_CASE("quasi antipodal pairs") {
    auto f2 = load_fixture("f2.json").space;
    CHECK(f2.quasi_antipodal(f2.id_of("a"), f2.id_of("b")));
    CHECK_FALSE(f2.quasi_antipodal(f2.bottom(), f2.id_of("a")));

    auto s4 = load_fixture("s4.json").space;
    CHECK(s4.quasi_antipodal(s4.id_of("a1"), s4.id_of("a1s")));
    CHECK(s4.quasi_antipodal(s4.id_of("a1"), s4.id_of("a2")));

    auto c3 = load_fixture("c3.json").space;
    CHECK_FALSE(c3.quasi_antipodal(c3.id_of("x"), c3.id_of("y")));

    // Strict lower neighbours must stay compatible with the partner: the
    // rays e1 and e2 fail that through their common plane.
    auto p3 = make_p3().space;
    CHECK_FALSE(p3.quasi_antipodal(p3.id_of("e1"), p3.id_of("e2")));
    CHECK(p3.quasi_antipodal(p3.id_of("e1"), p3.id_of("p23")));
}

TEST_CASE("convenience builders") {
    auto flat = make_flat_space("f5", {"u", "v", "w", "x", "y"});
    CHECK(flat.size() == 6);
    CHECK(flat.atoms().size() == 5);
    CHECK(flat.check_state_axioms().all_pass());

    auto chain = make_chain_space("c4", {"l1", "l2", "l3"});
    CHECK(chain.size() == 4);
    CHECK(chain.depth(chain.id_of("l3")) == 3);
}

TEST_CASE("label lookup") {
    auto f2 = load_fixture("f2.json").space;
    CHECK(f2.id_of("a") == 1);
    CHECK_THROWS_AS(f2.id_of("zz"), ParseError);
    CHECK(f2.find("zz") == std::nullopt);
    CHECK(f2.find("b") == f2.id_of("b"));
}

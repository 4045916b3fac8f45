#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "chu3/effects.hpp"
#include "chu3/errors.hpp"
#include "chu3/json_io.hpp"
#include "chu3/ortho.hpp"
#include "chu3/quantum.hpp"

#include "helpers.hpp"

using namespace chu3;

namespace {

GaussianRational g(const std::string& text) { return parse_gaussian(text); }

Subspace ray2(const std::string& a, const std::string& b) {
    std::vector<std::vector<GaussianRational>> rows = {{g(a), g(b)}};
    return make_subspace(2, rows);
}

Subspace ray3(const std::string& a, const std::string& b, const std::string& c) {
    std::vector<std::vector<GaussianRational>> rows = {{g(a), g(b), g(c)}};
    return make_subspace(3, rows);
}

Fragment load_plane_fragment() {
    RaysFile rays = parse_rays_file(fixture_path("q4_rays.json"));
    std::vector<Subspace> generators;
    for (const auto& ray : rays.rays) {
        std::vector<std::vector<GaussianRational>> rows = {ray};
        generators.push_back(make_subspace(rays.dim, rows));
    }
    return fragment_closure(generators);
}

} // namespace

TEST_CASE("gaussian rational arithmetic is exact") {
    GaussianRational a = g("1/2-3/4i");
    GaussianRational b = g("2/3+i");
    CHECK(a + b == g("7/6+1/4i"));
    CHECK(a - b == g("-1/6-7/4i"));
    // (1/2 - 3/4 i)(2/3 + i) = 1/3 + 1/2 i - 1/2 i + 3/4 = 13/12
    CHECK(a * b == g("13/12"));
    CHECK(conj(a) == g("1/2+3/4i"));
    CHECK(conj(g("i")) == g("-i"));
    CHECK(conj(g("3")) == g("3"));

    SUBCASE("inverse multiplies back to one") {
        for (const char* text : {"3", "-2/5", "i", "-i", "2i", "1+2i", "1/2-3/4i"}) {
            GaussianRational z = g(text);
            CHECK(z * inverse(z) == g("1"));
        }
        CHECK_THROWS_AS(inverse(g("0")), Error);
    }

    SUBCASE("repeated tenths sum to one without drift") {
        GaussianRational tenth = g("1/10");
        GaussianRational total = g("0");
        for (int i = 0; i < 10; ++i) total = total + tenth;
        CHECK(total == g("1"));
        CHECK((total - g("1")).is_zero());
    }
}

TEST_CASE("gaussian parsing and rendering round trip") {
    const char* forms[] = {"3", "-2/5", "i", "-i", "2i", "1+2i", "1/2-3/4i", "0", "-1+1/3i"};
    for (const char* text : forms) {
        GaussianRational z = g(text);
        CHECK(render_gaussian(z) == text);
        CHECK(parse_gaussian(render_gaussian(z)) == z);
    }

    SUBCASE("rendering is canonical, not a copy of the input") {
        CHECK(render_gaussian(g("2/4")) == "1/2");
        CHECK(render_gaussian(g("0+0i")) == "0");
        CHECK(render_gaussian(g("1+1i")) == "1+i");
        CHECK(render_gaussian(g("0-1i")) == "-i");
        CHECK(g("1 + 2i") == g("1+2i"));
        CHECK(g("+2i") == g("2i"));
    }

    SUBCASE("malformed literals are rejected") {
        for (const char* bad : {"", "x", "1++i", "1/0", "i2", "2j", "--3"}) {
            CHECK_THROWS_AS(parse_gaussian(bad), ParseError);
        }
    }
}

TEST_CASE("subspaces canonicalize to a unique echelon basis") {
    // Two spanning sets of the same line compare equal after reduction.
    std::vector<std::vector<GaussianRational>> doubled = {{g("2"), g("2")}};
    CHECK(make_subspace(2, doubled) == ray2("1", "1"));
    CHECK(subspace_label(make_subspace(2, doubled)) == "span[(1,1)]");

    std::vector<std::vector<GaussianRational>> redundant = {
        {g("1"), g("0")}, {g("1"), g("1")}, {g("0"), g("1")}};
    Subspace plane = make_subspace(2, redundant);
    CHECK(plane == full_subspace(2));
    CHECK(plane.rank() == 2);
    CHECK(subspace_label(plane) == "span[(1,0),(0,1)]");

    CHECK(zero_subspace(2).rank() == 0);
    CHECK(subspace_label(zero_subspace(2)) == "span[]");

    SUBCASE("rows must match the ambient dimension") {
        std::vector<std::vector<GaussianRational>> short_row = {{g("1")}};
        CHECK_THROWS_AS(make_subspace(2, short_row), DimensionMismatch);
    }
}

TEST_CASE("subspace lattice operations") {
    Subspace e1 = ray2("1", "0");
    Subspace e2 = ray2("0", "1");
    Subspace d = ray2("1", "1");
    Subspace dp = ray2("1", "-1");

    CHECK(subspace_sum(e1, e2) == full_subspace(2));
    CHECK(subspace_sum(d, dp) == full_subspace(2));
    CHECK(subspace_intersect(d, dp) == zero_subspace(2));
    CHECK(subspace_intersect(subspace_sum(e1, e2), d) == d);

    CHECK(subspace_contains(full_subspace(2), d));
    CHECK(subspace_contains(d, d));
    CHECK(subspace_contains(d, zero_subspace(2)));
    CHECK_FALSE(subspace_contains(d, e1));

    SUBCASE("perp uses the conjugate inner product") {
        CHECK(subspace_perp(e1) == e2);
        CHECK(subspace_perp(d) == dp);
        CHECK(subspace_perp(ray2("1", "i")) == ray2("1", "-i"));
        CHECK(subspace_perp(subspace_perp(ray2("1", "i"))) == ray2("1", "i"));
        CHECK(subspace_perp(zero_subspace(2)) == full_subspace(2));
        CHECK(subspace_perp(full_subspace(2)) == zero_subspace(2));
    }

    SUBCASE("double perp is the identity in dimension three") {
        Subspace line = ray3("1", "2", "3");
        CHECK(subspace_perp(subspace_perp(line)) == line);
        std::vector<std::vector<GaussianRational>> rows = {
            {g("1"), g("0"), g("i")}, {g("0"), g("1"), g("1-i")}};
        Subspace plane = make_subspace(3, rows);
        CHECK(subspace_perp(subspace_perp(plane)) == plane);
        CHECK(plane.rank() + subspace_perp(plane).rank() == 3);
    }

    SUBCASE("ambient dimensions must agree") {
        CHECK_THROWS_AS(subspace_sum(e1, ray3("1", "0", "0")), DimensionMismatch);
        CHECK_THROWS_AS(subspace_intersect(e1, ray3("1", "0", "0")), DimensionMismatch);
        CHECK_THROWS_AS(subspace_contains(e1, ray3("1", "0", "0")), DimensionMismatch);
    }
}

TEST_CASE("ray files parse with integer or string entries") {
    RaysFile from_fixture = parse_rays_file(fixture_path("q4_rays.json"));
    CHECK(from_fixture.dim == 2);
    REQUIRE(from_fixture.rays.size() == 4);
    CHECK(from_fixture.rays[0] == std::vector<GaussianRational>{g("1"), g("0")});
    CHECK(from_fixture.rays[3] == std::vector<GaussianRational>{g("1"), g("-1")});

    RaysFile mixed = parse_rays_text(R"({"dim":2,"rays":[[1,0],["1","1/2i"]]})", "inline");
    CHECK(mixed.dim == 2);
    CHECK(mixed.rays[1][1] == g("1/2i"));

    RaysFile bare = parse_rays_text(R"([["1","0","0"],["0","1","i"]])", "inline", 3);
    CHECK(bare.dim == 3);
    CHECK(bare.rays.size() == 2);

    SUBCASE("a bare array without a dimension hint is rejected") {
        CHECK_THROWS_AS(parse_rays_text(R"([["1","0"]])", "inline"), ParseError);
        CHECK_THROWS_AS(parse_rays_text("{}", "inline"), ParseError);
        CHECK_THROWS_AS(parse_rays_text(R"({"dim":2,"rays":[["1"]]})", "inline"), ParseError);
    }
}

TEST_CASE("the four ray fragment of the plane closes to five members") {
    Fragment frag = load_plane_fragment();
    REQUIRE(frag.space.size() == 5);
    CHECK(frag.space.name() == "quantum_fragment");

    // Bottom is the full plane: the order is reverse inclusion.
    CHECK(frag.members[0] == full_subspace(2));
    CHECK(frag.space.label(0) == "span[(1,0),(0,1)]");
    std::vector<std::string> ray_labels;
    for (StateId s = 1; s < frag.space.size(); ++s) {
        CHECK(frag.members[s].rank() == 1);
        CHECK(frag.space.depth(s) == 1);
        ray_labels.push_back(frag.space.label(s));
    }
    CHECK(ray_labels == std::vector<std::string>{"span[(0,1)]", "span[(1,-1)]",
                                                 "span[(1,0)]", "span[(1,1)]"});

    // Order and meet agree with inclusion: any two distinct rays meet at the plane.
    for (StateId a = 0; a < frag.space.size(); ++a)
        for (StateId b = 0; b < frag.space.size(); ++b) {
            CHECK(frag.space.leq(a, b) == subspace_contains(frag.members[a], frag.members[b]));
            CHECK(frag.members[frag.space.meet(a, b)] ==
                  subspace_sum(frag.members[a], frag.members[b]));
        }

    SUBCASE("closure rejects empty or mixed dimension input") {
        std::vector<Subspace> none;
        CHECK_THROWS_AS(fragment_closure(none), EmptySet);
        std::vector<Subspace> mixed = {ray2("1", "0"), ray3("1", "0", "0")};
        CHECK_THROWS_AS(fragment_closure(mixed), DimensionMismatch);
    }
}

TEST_CASE("the plane fragment is the square space with its star") {
    Fragment frag = load_plane_fragment();
    const SpaceFile& s4 = fixture("s4.json");
    REQUIRE(s4.star.has_value());

    auto star = fragment_star(frag);
    REQUIRE(star.has_value());
    auto report = validate_star(frag.space, *star);
    CHECK(report.star_ok());
    CHECK(report.orthocomplemented);
    CHECK_FALSE(report.orthogonal);

    // Perpendicularity pairs the standard axes and the diagonal pair.
    auto id_of = [&](const Subspace& member) {
        for (StateId s = 0; s < frag.space.size(); ++s)
            if (frag.members[s] == member) return s;
        FAIL("member not found");
        return StateId{-1};
    };
    CHECK((*star)[id_of(ray2("0", "1"))] == id_of(ray2("1", "0")));
    CHECK((*star)[id_of(ray2("1", "0"))] == id_of(ray2("0", "1")));
    CHECK((*star)[id_of(ray2("1", "1"))] == id_of(ray2("1", "-1")));
    CHECK((*star)[id_of(ray2("1", "-1"))] == id_of(ray2("1", "1")));

    // Brute-force scan over all 120 bijections: the fragment is isomorphic to
    // the square space as an ordered set with involution, and the isomorphisms
    // are exactly the star-respecting order symmetries of the square.
    std::vector<StateId> perm(frag.space.size());
    for (StateId s = 0; s < frag.space.size(); ++s) perm[s] = s;
    int order_isos = 0, star_isos = 0;
    do {
        bool order_ok = true;
        for (StateId a = 0; a < frag.space.size() && order_ok; ++a)
            for (StateId b = 0; b < frag.space.size() && order_ok; ++b)
                if (frag.space.leq(a, b) != s4.space.leq(perm[a], perm[b])) order_ok = false;
        if (!order_ok) continue;
        ++order_isos;
        bool star_ok = true;
        for (StateId s = 1; s < frag.space.size() && star_ok; ++s)
            if (perm[(*star)[s]] != (*s4.star)[perm[s]]) star_ok = false;
        if (star_ok) ++star_isos;
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(order_isos == 24);
    CHECK(star_isos == 8);
}

TEST_CASE("quantum effect evaluation matches the abstract effects") {
    Fragment frag = load_plane_fragment();
    auto star = fragment_star(frag);
    REQUIRE(star.has_value());
    EffectSpace effects(frag.space);
    REQUIRE(effects.size() == 23);

    auto side = [&](const std::optional<StateId>& s) {
        return s ? frag.members[*s] : zero_subspace(2);
    };

    int defined = 0, rejected = 0;
    for (EffectId e = 0; e < effects.size(); ++e) {
        Effect effect = effects.effect(e);
        Subspace yes = side(effect.yes);
        Subspace no = side(effect.no);
        bool star_linked =
            !effect.yes || !effect.no || (*star)[*effect.yes] == *effect.no;
        if (!star_linked) {
            // Two-sided effects over non-perpendicular rays have no quantum
            // reading: the no-side must lie inside the yes-side's perp.
            CHECK_THROWS_AS(quantum_effect_eval(yes, no, frag.members[0]), NotOrthogonal);
            ++rejected;
            continue;
        }
        for (StateId s = 0; s < frag.space.size(); ++s)
            CHECK(quantum_effect_eval(yes, no, frag.members[s]) == effects.eval(e, s));
        ++defined;
    }
    CHECK(defined == 15);
    CHECK(rejected == 8);

    SUBCASE("spot values in the plane") {
        Subspace e1 = ray2("1", "0");
        Subspace e2 = ray2("0", "1");
        Subspace d = ray2("1", "1");
        CHECK(quantum_effect_eval(e1, e2, e1) == Det::Yes);
        CHECK(quantum_effect_eval(e1, e2, e2) == Det::No);
        CHECK(quantum_effect_eval(e1, e2, d) == Det::Bot);
        CHECK(quantum_effect_eval(e1, e2, full_subspace(2)) == Det::Bot);
        CHECK(quantum_effect_eval(e1, zero_subspace(2), d) == Det::Bot);
        CHECK(quantum_effect_eval(zero_subspace(2), e2, e2) == Det::No);
        CHECK_THROWS_AS(quantum_effect_eval(e1, d, e1), NotOrthogonal);
    }
}

TEST_CASE("a rank three fragment reproduces the ray geometry") {
    std::vector<Subspace> rays = {ray3("1", "0", "0"), ray3("0", "1", "0"),
                                  ray3("0", "0", "1"), ray3("1", "1", "0"),
                                  ray3("1", "-1", "0")};
    Fragment frag = fragment_closure(rays);
    REQUIRE(frag.space.size() == 11);
    CHECK(frag.space.atoms().size() == 5);
    CHECK(frag.space.pure_states().size() == 5);
    CHECK(frag.space.cover_pairs().size() == 17);
    CHECK(frag.space.check_state_axioms().all_pass());
    CHECK_FALSE(frag.space.is_distributive());

    // The closure is order-isomorphic to the hand-built rank three space:
    // match members to labels through the geometric reading of each element.
    P3 p3 = make_p3();
    auto member_for = [&](const std::string& label) -> Subspace {
        if (label == "bot") return full_subspace(3);
        if (label == "e1") return ray3("1", "0", "0");
        if (label == "e2") return ray3("0", "1", "0");
        if (label == "e3") return ray3("0", "0", "1");
        if (label == "d") return ray3("1", "1", "0");
        if (label == "dp") return ray3("1", "-1", "0");
        if (label == "p12") return subspace_sum(ray3("1", "0", "0"), ray3("0", "1", "0"));
        if (label == "p13") return subspace_sum(ray3("1", "0", "0"), ray3("0", "0", "1"));
        if (label == "p23") return subspace_sum(ray3("0", "1", "0"), ray3("0", "0", "1"));
        if (label == "pd3") return subspace_sum(ray3("1", "1", "0"), ray3("0", "0", "1"));
        if (label == "pdp3") return subspace_sum(ray3("1", "-1", "0"), ray3("0", "0", "1"));
        FAIL("unknown label");
        return zero_subspace(3);
    };
    std::vector<StateId> into_fragment(p3.space.size());
    for (StateId s = 0; s < p3.space.size(); ++s) {
        Subspace member = member_for(p3.space.label(s));
        StateId found = -1;
        for (StateId t = 0; t < frag.space.size(); ++t)
            if (frag.members[t] == member) found = t;
        REQUIRE(found >= 0);
        into_fragment[s] = found;
    }
    for (StateId a = 0; a < p3.space.size(); ++a)
        for (StateId b = 0; b < p3.space.size(); ++b)
            CHECK(p3.space.leq(a, b) ==
                  frag.space.leq(into_fragment[a], into_fragment[b]));

    // Perpendicularity recovers exactly the hand-built star.
    auto star = fragment_star(frag);
    REQUIRE(star.has_value());
    for (StateId s = 1; s < p3.space.size(); ++s)
        CHECK((*star)[into_fragment[s]] == into_fragment[p3.star[s]]);

    SUBCASE("a fragment that is not perp closed has no star") {
        std::vector<Subspace> partial = {ray3("1", "0", "0"), ray3("0", "1", "0")};
        Fragment open = fragment_closure(partial);
        // closure holds the ambient, both rays, and their common plane; the
        // perp of a ray is a plane outside this four member family.
        CHECK(open.space.size() == 4);
        CHECK_FALSE(fragment_star(open).has_value());
    }
}

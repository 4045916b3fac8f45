#include <doctest.h>

#include <optional>
#include <vector>

#include "chu3/determination.hpp"
#include "chu3/errors.hpp"

using namespace chu3;

namespace {

// Total order used by the conjunction: Yes above Bot above No.
int bullet_rank(Det d) {
    if (d == Det::Yes) return 2;
    if (d == Det::Bot) return 1;
    return 0;
}

} // namespace

TEST_CASE("information order puts the unknown value below both verdicts") {
    CHECK(det_leq(Det::Bot, Det::Bot));
    CHECK(det_leq(Det::Bot, Det::Yes));
    CHECK(det_leq(Det::Bot, Det::No));
    CHECK(det_leq(Det::Yes, Det::Yes));
    CHECK(det_leq(Det::No, Det::No));
    CHECK_FALSE(det_leq(Det::Yes, Det::Bot));
    CHECK_FALSE(det_leq(Det::No, Det::Bot));
    CHECK_FALSE(det_leq(Det::Yes, Det::No));
    CHECK_FALSE(det_leq(Det::No, Det::Yes));
}

TEST_CASE("meet table") {
    CHECK(det_meet(Det::Bot, Det::Bot) == Det::Bot);
    CHECK(det_meet(Det::Bot, Det::Yes) == Det::Bot);
    CHECK(det_meet(Det::Bot, Det::No) == Det::Bot);
    CHECK(det_meet(Det::Yes, Det::Bot) == Det::Bot);
    CHECK(det_meet(Det::Yes, Det::Yes) == Det::Yes);
    CHECK(det_meet(Det::Yes, Det::No) == Det::Bot);
    CHECK(det_meet(Det::No, Det::Bot) == Det::Bot);
    CHECK(det_meet(Det::No, Det::Yes) == Det::Bot);
    CHECK(det_meet(Det::No, Det::No) == Det::No);
}

TEST_CASE("meet is the greatest lower bound") {
    for (Det x : DET_ALL)
        for (Det y : DET_ALL) {
            Det m = det_meet(x, y);
            CHECK(det_leq(m, x));
            CHECK(det_leq(m, y));
            for (Det z : DET_ALL)
                if (det_leq(z, x) && det_leq(z, y)) CHECK(det_leq(z, m));
        }
}

TEST_CASE("join exists exactly on comparable pairs") {
    CHECK(det_join(Det::Bot, Det::Yes) == Det::Yes);
    CHECK(det_join(Det::Yes, Det::Bot) == Det::Yes);
    CHECK(det_join(Det::Bot, Det::No) == Det::No);
    CHECK(det_join(Det::No, Det::Bot) == Det::No);
    CHECK(det_join(Det::Bot, Det::Bot) == Det::Bot);
    CHECK(det_join(Det::Yes, Det::Yes) == Det::Yes);
    CHECK(det_join(Det::No, Det::No) == Det::No);
    CHECK(det_join(Det::Yes, Det::No) == std::nullopt);
    CHECK(det_join(Det::No, Det::Yes) == std::nullopt);
}

TEST_CASE("conjunction table") {
    CHECK(det_bullet(Det::Yes, Det::Yes) == Det::Yes);
    CHECK(det_bullet(Det::Yes, Det::Bot) == Det::Bot);
    CHECK(det_bullet(Det::Yes, Det::No) == Det::No);
    CHECK(det_bullet(Det::Bot, Det::Yes) == Det::Bot);
    CHECK(det_bullet(Det::Bot, Det::Bot) == Det::Bot);
    CHECK(det_bullet(Det::Bot, Det::No) == Det::No);
    CHECK(det_bullet(Det::No, Det::Yes) == Det::No);
    CHECK(det_bullet(Det::No, Det::Bot) == Det::No);
    CHECK(det_bullet(Det::No, Det::No) == Det::No);
}

TEST_CASE("conjunction is the minimum of the total order Yes above Bot above No") {
    for (Det x : DET_ALL)
        for (Det y : DET_ALL) {
            Det expected = bullet_rank(x) <= bullet_rank(y) ? x : y;
            CHECK(det_bullet(x, y) == expected);
        }
}

TEST_CASE("conjunction is associative, commutative and idempotent") {
    for (Det x : DET_ALL) CHECK(det_bullet(x, x) == x);
    for (Det x : DET_ALL)
        for (Det y : DET_ALL) {
            CHECK(det_bullet(x, y) == det_bullet(y, x));
            for (Det z : DET_ALL)
                CHECK(det_bullet(det_bullet(x, y), z) ==
                      det_bullet(x, det_bullet(y, z)));
        }
}

TEST_CASE("conjunction distributes over meets of up to four arguments") {
    std::vector<std::vector<Det>> families;
    for (Det a : DET_ALL) families.push_back({a});
    for (Det a : DET_ALL)
        for (Det b : DET_ALL) families.push_back({a, b});
    for (Det a : DET_ALL)
        for (Det b : DET_ALL)
            for (Det c : DET_ALL) families.push_back({a, b, c});
    for (Det a : DET_ALL)
        for (Det b : DET_ALL)
            for (Det c : DET_ALL)
                for (Det d : DET_ALL) families.push_back({a, b, c, d});

    for (Det x : DET_ALL)
        for (const auto& family : families) {
            Det met = family[0];
            for (std::size_t i = 1; i < family.size(); ++i)
                met = det_meet(met, family[i]);
            Det lhs = det_bullet(x, met);
            Det rhs = det_bullet(x, family[0]);
            for (std::size_t i = 1; i < family.size(); ++i)
                rhs = det_meet(rhs, det_bullet(x, family[i]));
            CHECK(lhs == rhs);
        }
}

TEST_CASE("negation swaps the verdicts and fixes the unknown value") {
    CHECK(det_bar(Det::Yes) == Det::No);
    CHECK(det_bar(Det::No) == Det::Yes);
    CHECK(det_bar(Det::Bot) == Det::Bot);
    for (Det x : DET_ALL) CHECK(det_bar(det_bar(x)) == x);
    for (Det x : DET_ALL)
        for (Det y : DET_ALL)
            CHECK(det_leq(det_bar(x), det_bar(y)) == det_leq(x, y));
}

TEST_CASE("folds agree with the binary operations and reject empty input") {
    std::vector<Det> one{Det::No};
    std::vector<Det> mixed{Det::Yes, Det::Bot, Det::Yes};
    std::vector<Det> verdicts{Det::Yes, Det::No};
    CHECK(det_meet_all(one) == Det::No);
    CHECK(det_meet_all(mixed) == Det::Bot);
    CHECK(det_meet_all(verdicts) == Det::Bot);
    CHECK(det_bullet_all(one) == Det::No);
    CHECK(det_bullet_all(mixed) == Det::Bot);
    CHECK(det_bullet_all(verdicts) == Det::No);
    std::vector<Det> empty;
    CHECK_THROWS_AS(det_meet_all(empty), EmptySet);
    CHECK_THROWS_AS(det_bullet_all(empty), EmptySet);
}

TEST_CASE("string round trip") {
    CHECK(det_to_string(Det::Bot) == "bot");
    CHECK(det_to_string(Det::Yes) == "Y");
    CHECK(det_to_string(Det::No) == "N");
    for (Det x : DET_ALL) CHECK(det_from_string(det_to_string(x)) == x);
    CHECK_THROWS_AS(det_from_string("yes"), ParseError);
    CHECK_THROWS_AS(det_from_string(""), ParseError);
}

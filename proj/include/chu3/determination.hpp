#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

namespace chu3 {

// The three-valued domain a measurement outcome lives in: definite yes,
// definite no, or indeterminate.
enum class Det : std::uint8_t { Bot = 0, Yes = 1, No = 2 };

inline constexpr Det DET_ALL[3] = {Det::Bot, Det::Yes, Det::No};

// Information order: Bot below everything, Yes and No incomparable.
constexpr bool det_leq(Det a, Det b) {
    return a == Det::Bot || a == b;
}

// Meet in the information order.
constexpr Det det_meet(Det a, Det b) {
    return a == b ? a : Det::Bot;
}

// Join exists only for comparable pairs; Yes and No have no upper bound.
constexpr std::optional<Det> det_join(Det a, Det b) {
    if (det_leq(a, b)) return b;
    if (det_leq(b, a)) return a;
    return std::nullopt;
}

// Conjunction of outcomes of jointly performed tests: No absorbs, Yes is
// neutral, and Bot wins against Yes only. Equivalently the minimum in the
// total order Yes > Bot > No.
constexpr Det det_bullet(Det a, Det b) {
    if (a == Det::No || b == Det::No) return Det::No;
    if (a == Det::Bot || b == Det::Bot) return Det::Bot;
    return Det::Yes;
}

// Outcome negation: swaps Yes and No, fixes Bot.
constexpr Det det_bar(Det a) {
    switch (a) {
        case Det::Yes: return Det::No;
        case Det::No: return Det::Yes;
        default: return Det::Bot;
    }
}

// Nonempty n-ary folds. Both operations are associative and commutative, so
// folding left is sound; an empty input has no neutral element in the
// information order and raises EmptySet.
Det det_meet_all(std::span<const Det> xs);
Det det_bullet_all(std::span<const Det> xs);

// Renders as "bot", "Y", "N"; parsing is case sensitive and accepts exactly
// those three strings.
std::string det_to_string(Det a);
Det det_from_string(const std::string& s);

} // namespace chu3

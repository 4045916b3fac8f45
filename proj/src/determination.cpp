#include "chu3/determination.hpp"

#include "chu3/errors.hpp"

namespace chu3 {

Det det_meet_all(std::span<const Det> xs) {
    if (xs.empty()) throw EmptySet("det_meet_all: empty operand list");
    Det acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = det_meet(acc, xs[i]);
    return acc;
}

Det det_bullet_all(std::span<const Det> xs) {
    if (xs.empty()) throw EmptySet("det_bullet_all: empty operand list");
    Det acc = xs[0];
    for (std::size_t i = 1; i < xs.size(); ++i) acc = det_bullet(acc, xs[i]);
    return acc;
}

std::string det_to_string(Det a) {
    switch (a) {
        case Det::Yes: return "Y";
        case Det::No: return "N";
        default: return "bot";
    }
}

Det det_from_string(const std::string& s) {
    if (s == "Y") return Det::Yes;
    if (s == "N") return Det::No;
    if (s == "bot") return Det::Bot;
    throw ParseError("not a determination value: '" + s + "' (expected \"Y\", \"N\" or \"bot\")");
}

} // namespace chu3

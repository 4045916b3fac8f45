#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "chu3/json_io.hpp"
#include "chu3/ortho.hpp"
#include "chu3/state_space.hpp"

inline std::string fixture_path(const std::string& name) {
    return std::string(CHU3_FIXTURES_DIR) + "/" + name;
}

inline chu3::SpaceFile load_fixture(const std::string& name) {
    return chu3::parse_space_file(fixture_path(name));
}

// Stable storage for spaces handed to types that retain references, such as
// effect spaces and tensors.
inline const chu3::SpaceFile& fixture(const std::string& name) {
    static std::map<std::string, chu3::SpaceFile> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache.emplace(name, chu3::parse_space_file(fixture_path(name)))
                 .first;
    return it->second;
}

// The rank-three ray fragment: bottom is the whole space, the five planes
// sit above it, and five rays top the order. d and dp are the diagonal and
// antidiagonal rays of the plane p12; pd3 and pdp3 are the planes they span
// with e3. The star sends every element to its orthogonal counterpart.
struct P3 {
    chu3::StateSpace space;
    chu3::StarMap star;
};

inline P3 make_p3() {
    std::vector<std::string> labels{"bot", "p12", "p13", "p23", "pd3",
                                    "pdp3", "d",   "dp",  "e1",  "e2",
                                    "e3"};
    std::vector<std::pair<std::string, std::string>> covers{
        {"bot", "p12"}, {"bot", "p13"}, {"bot", "p23"}, {"bot", "pd3"},
        {"bot", "pdp3"}, {"p12", "e1"}, {"p12", "e2"},  {"p12", "d"},
        {"p12", "dp"},  {"p13", "e1"}, {"p13", "e3"},  {"p23", "e2"},
        {"p23", "e3"},  {"pd3", "d"},  {"pd3", "e3"},  {"pdp3", "dp"},
        {"pdp3", "e3"}};
    P3 out{chu3::StateSpace::from_covers("p3", labels, covers), {}};
    const auto& sp = out.space;
    out.star.assign(static_cast<std::size_t>(sp.size()), -1);
    auto link = [&](const std::string& x, const std::string& y) {
        out.star[static_cast<std::size_t>(sp.id_of(x))] = sp.id_of(y);
        out.star[static_cast<std::size_t>(sp.id_of(y))] = sp.id_of(x);
    };
    link("p12", "e3");
    link("p13", "e2");
    link("p23", "e1");
    link("pd3", "dp");
    link("pdp3", "d");
    return out;
}

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chu3/ortho.hpp"
#include "chu3/quantum.hpp"
#include "chu3/state_space.hpp"
#include "chu3/tensor_basic.hpp"

namespace chu3 {

struct SpaceFile {
    StateSpace space;
    std::optional<StarMap> star;
};

// Space description {"name", "elements", "covers", "star"?}. The bottom is
// located structurally from the covers, never named in the file. Labels
// must be unique; covers must reference known labels; a present star must
// be total on non-bottom elements. Diagnostics carry the origin.
SpaceFile parse_space_text(const std::string& text, const std::string& origin);
SpaceFile parse_space_file(const std::string& path);

// Stable key order (name, elements, covers, star), two-space indent,
// trailing newline. parse(serialize(x)) is the identity.
std::string serialize_space(const StateSpace& space,
                            const StarMap* star = nullptr);

// Hasse diagram as a DOT digraph: nodes in canonical id order, one edge per
// covering pair pointing lower to upper. Byte-identical across runs.
std::string emit_dot(const StateSpace& space);

// Tensor element literal: JSON array of [left,right] label pairs, such as
// [["a","a"],["b","b"]].
std::vector<StatePair> parse_pair_literal(const StateSpace& a,
                                          const StateSpace& b,
                                          const std::string& text);

// Symmetry file {"map": {label: label}}; the result is the state table
// indexed by source id, ready for derive_effect_map. The map must cover
// every source element exactly once.
std::vector<StateId> parse_symmetry_file(const std::string& path,
                                         const StateSpace& source,
                                         const StateSpace& target);

struct RaysFile {
    int dim = 0;
    std::vector<std::vector<GaussianRational>> rays;
};

// Ray list {"dim": n, "rays": [[entry...]...]} with entries written as
// exact scalars: integers or strings like "1", "-2/5", "1+2i". A bare JSON
// array of rays is also accepted when the dimension is supplied separately.
RaysFile parse_rays_text(const std::string& text, const std::string& origin,
                         int dim_hint = 0);
RaysFile parse_rays_file(const std::string& path, int dim_hint = 0);

} // namespace chu3

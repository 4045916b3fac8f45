#include "chu3/json_io.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "chu3/errors.hpp"

namespace chu3 {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

json parse_document(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const json& expect_field(const json& doc, const std::string& key,
                         const std::string& origin) {
    const auto it = doc.find(key);
    if (it == doc.end()) {
        throw ParseError(origin + ": missing field '" + key + "'");
    }
    return *it;
}

std::string expect_string(const json& value, const std::string& origin,
                          const std::string& what) {
    if (!value.is_string()) {
        throw ParseError(origin + ": " + what + " must be a string");
    }
    return value.get<std::string>();
}

} // namespace

SpaceFile parse_space_text(const std::string& text, const std::string& origin) {
    const json doc = parse_document(text, origin);
    if (!doc.is_object()) {
        throw ParseError(origin + ": top level must be an object");
    }
    const std::string name =
        expect_string(expect_field(doc, "name", origin), origin, "'name'");

    const json& elements = expect_field(doc, "elements", origin);
    if (!elements.is_array() || elements.empty()) {
        throw ParseError(origin + ": 'elements' must be a nonempty array");
    }
    std::vector<std::string> labels;
    std::set<std::string> seen;
    for (const json& e : elements) {
        std::string label = expect_string(e, origin, "element label");
        if (!seen.insert(label).second) {
            throw ParseError(origin + ": duplicate label '" + label + "'");
        }
        labels.push_back(std::move(label));
    }

    const json& covers = expect_field(doc, "covers", origin);
    if (!covers.is_array()) {
        throw ParseError(origin + ": 'covers' must be an array");
    }
    std::vector<std::pair<std::string, std::string>> cover_pairs;
    for (const json& c : covers) {
        if (!c.is_array() || c.size() != 2) {
            throw ParseError(origin + ": each cover must be a [lower, upper] pair");
        }
        std::string lower = expect_string(c[0], origin, "cover endpoint");
        std::string upper = expect_string(c[1], origin, "cover endpoint");
        for (const std::string& lab : {lower, upper}) {
            if (!seen.count(lab)) {
                throw ParseError(origin + ": cover references unknown label '" +
                                 lab + "'");
            }
        }
        cover_pairs.emplace_back(std::move(lower), std::move(upper));
    }

    StateSpace space = StateSpace::from_covers(name, labels, cover_pairs);

    std::optional<StarMap> star;
    if (const auto it = doc.find("star"); it != doc.end()) {
        if (!it->is_object()) {
            throw ParseError(origin + ": 'star' must be an object");
        }
        StarMap map(static_cast<std::size_t>(space.size()), -1);
        for (const auto& [from, to] : it->items()) {
            const std::string target = expect_string(to, origin, "star image");
            for (const std::string& lab : {from, target}) {
                if (!seen.count(lab)) {
                    throw ParseError(origin + ": star references unknown label '" +
                                     lab + "'");
                }
            }
            const StateId s = space.id_of(from);
            if (s == space.bottom()) {
                throw ParseError(origin + ": the bottom carries no star");
            }
            if (map[static_cast<std::size_t>(s)] != -1) {
                throw ParseError(origin + ": duplicate star entry for '" + from +
                                 "'");
            }
            map[static_cast<std::size_t>(s)] = space.id_of(target);
        }
        check_star_shape(space, map);
        star = std::move(map);
    }
    return SpaceFile{std::move(space), std::move(star)};
}

SpaceFile parse_space_file(const std::string& path) {
    return parse_space_text(read_file(path), path);
}

std::string serialize_space(const StateSpace& space, const StarMap* star) {
    ordered_json doc;
    doc["name"] = space.name();
    ordered_json elements = ordered_json::array();
    for (StateId s = 0; s < space.size(); ++s) elements.push_back(space.label(s));
    doc["elements"] = std::move(elements);
    ordered_json covers = ordered_json::array();
    for (const auto& [lower, upper] : space.cover_pairs()) {
        covers.push_back({space.label(lower), space.label(upper)});
    }
    doc["covers"] = std::move(covers);
    if (star != nullptr) {
        check_star_shape(space, *star);
        ordered_json map = ordered_json::object();
        for (StateId s = 1; s < space.size(); ++s) {
            map[space.label(s)] = space.label((*star)[static_cast<std::size_t>(s)]);
        }
        doc["star"] = std::move(map);
    }
    return doc.dump(2) + "\n";
}

std::string emit_dot(const StateSpace& space) {
    std::string out = "digraph \"" + space.name() + "\" {\n";
    out += "  rankdir=BT;\n";
    for (StateId s = 0; s < space.size(); ++s) {
        out += "  \"" + space.label(s) + "\";\n";
    }
    for (const auto& [lower, upper] : space.cover_pairs()) {
        out += "  \"" + space.label(lower) + "\" -> \"" + space.label(upper) +
               "\";\n";
    }
    out += "}\n";
    return out;
}

std::vector<StatePair> parse_pair_literal(const StateSpace& a,
                                          const StateSpace& b,
                                          const std::string& text) {
    const json doc = parse_document(text, "pair literal");
    if (!doc.is_array() || doc.empty()) {
        throw ParseError("pair literal must be a nonempty array of label pairs");
    }
    std::vector<StatePair> pairs;
    for (const json& p : doc) {
        if (!p.is_array() || p.size() != 2) {
            throw ParseError("pair literal entries must be [left, right] pairs");
        }
        const std::string left = expect_string(p[0], "pair literal", "label");
        const std::string right = expect_string(p[1], "pair literal", "label");
        pairs.emplace_back(a.id_of(left), b.id_of(right));
    }
    return pairs;
}

std::vector<StateId> parse_symmetry_file(const std::string& path,
                                         const StateSpace& source,
                                         const StateSpace& target) {
    const json doc = parse_document(read_file(path), path);
    if (!doc.is_object()) {
        throw ParseError(path + ": top level must be an object");
    }
    const json& map = expect_field(doc, "map", path);
    if (!map.is_object()) {
        throw ParseError(path + ": 'map' must be an object");
    }
    std::vector<StateId> f12(static_cast<std::size_t>(source.size()), -1);
    for (const auto& [from, to] : map.items()) {
        const StateId s = source.id_of(from);
        if (f12[static_cast<std::size_t>(s)] != -1) {
            throw ParseError(path + ": duplicate map entry for '" + from + "'");
        }
        f12[static_cast<std::size_t>(s)] =
            target.id_of(expect_string(to, path, "map image"));
    }
    for (StateId s = 0; s < source.size(); ++s) {
        if (f12[static_cast<std::size_t>(s)] == -1) {
            throw ParseError(path + ": map misses source element '" +
                             source.label(s) + "'");
        }
    }
    return f12;
}

RaysFile parse_rays_text(const std::string& text, const std::string& origin,
                         int dim_hint) {
    const json doc = parse_document(text, origin);
    const json* rays = nullptr;
    int dim = dim_hint;
    if (doc.is_object()) {
        const json& dim_field = expect_field(doc, "dim", origin);
        if (!dim_field.is_number_integer()) {
            throw ParseError(origin + ": 'dim' must be an integer");
        }
        dim = dim_field.get<int>();
        rays = &expect_field(doc, "rays", origin);
    } else if (doc.is_array()) {
        rays = &doc;
    } else {
        throw ParseError(origin + ": expected a ray object or array");
    }
    if (dim < 1) {
        throw ParseError(origin + ": ray list without a positive ambient dimension");
    }
    if (!rays->is_array() || rays->empty()) {
        throw ParseError(origin + ": 'rays' must be a nonempty array");
    }

    RaysFile out;
    out.dim = dim;
    for (const json& ray : *rays) {
        if (!ray.is_array() || static_cast<int>(ray.size()) != dim) {
            throw ParseError(origin + ": each ray needs exactly " +
                             std::to_string(dim) + " entries");
        }
        std::vector<GaussianRational> entries;
        entries.reserve(ray.size());
        for (const json& entry : ray) {
            if (entry.is_number_integer()) {
                entries.push_back(
                    {Rational(entry.get<long long>()), Rational(0)});
            } else if (entry.is_string()) {
                entries.push_back(parse_gaussian(entry.get<std::string>()));
            } else {
                throw ParseError(origin +
                                 ": ray entries must be integers or scalar strings");
            }
        }
        out.rays.push_back(std::move(entries));
    }
    return out;
}

RaysFile parse_rays_file(const std::string& path, int dim_hint) {
    return parse_rays_text(read_file(path), path, dim_hint);
}

} // namespace chu3

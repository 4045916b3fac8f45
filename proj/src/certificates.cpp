#include "chu3/certificates.hpp"

#include "chu3/errors.hpp"
#include "chu3/json_io.hpp"
#include "chu3/tensor_basic.hpp"
#include "chu3/tensor_bimorphic.hpp"
#include "chu3/tensor_canonical.hpp"

namespace chu3 {

std::string Certificate::render() const {
    return id + ": " + statement + "\n  witness: " + witness +
           "\n  reproduced: " + (reproduced ? "yes" : "no") + "\n";
}

Certificate certify_f3_diagonal(const StateSpace& f3) {
    const StateId s1 = f3.id_of("s1");
    const StateId s2 = f3.id_of("s2");
    const StateId s3 = f3.id_of("s3");
    const TensorGen diagonal =
        make_tensor_gen({{s1, s1}, {s2, s2}, {s3, s3}});
    const StatePair target = {f3.bottom(), f3.bottom()};

    const CanonicalComparison cmp =
        compare_with_basic(f3, f3, diagonal, target);

    Certificate cert;
    cert.id = "f3";
    cert.statement =
        "the closure order on tensor(f3,f3) is strictly finer than the "
        "evaluation order";
    const std::vector<StatePair> target_pairs = {target};
    cert.witness = "the evaluation order puts " +
                   render_pairs(f3, f3, target_pairs) + " above " +
                   render_pairs(f3, f3, diagonal.pairs) +
                   "; the closure order does not";
    cert.reproduced = cmp.basic && !cmp.fraser;
    return cert;
}

Certificate certify_basic_tensor_join_gap(const StateSpace& s4) {
    const StateId a1 = s4.id_of("a1");
    const StateId a1s = s4.id_of("a1s");
    const StateId a2 = s4.id_of("a2");
    const TensorSpace tensor(s4, s4, s4.size() * s4.size());

    const TensorGen forced_star =
        make_tensor_gen({{a1s, s4.bottom()}, {s4.bottom(), a1s}});
    const TensorGen diagonal_meet = make_tensor_gen({{a1, a1}, {a2, a2}});
    const StateId u = tensor.class_of(forced_star);
    const StateId v = tensor.class_of(diagonal_meet);

    const StateSpace& sp = tensor.space();
    bool bounded = false;
    for (StateId w = 0; w < sp.size(); ++w) {
        if (sp.leq(u, w) && sp.leq(v, w)) {
            bounded = true;
            break;
        }
    }

    Certificate cert;
    cert.id = "s4-basic";
    cert.statement = "tensor(s4,s4) is not orthocomplemented";
    cert.witness = "elements " + render_pairs(s4, s4, forced_star.pairs) +
                   " and " + render_pairs(s4, s4, diagonal_meet.pairs) +
                   " admit no common upper bound";
    cert.reproduced = !bounded;
    return cert;
}

Certificate certify_star_tensor_orthocomplement(const StateSpace& s4,
                                                const StarMap& s4_star,
                                                const StateSpace& f2,
                                                const StarMap& f2_star) {
    const StarOrthoReport failing = star_orthocomplementation_check(
        s4, s4_star, s4, s4_star, s4.size() * s4.size());
    const StarOrthoReport passing =
        star_orthocomplementation_check(f2, f2_star, s4, s4_star);

    Certificate cert;
    cert.id = "s4-star";
    cert.statement =
        "star_tensor(s4,s4) is not orthocomplemented while star_tensor(f2,s4) "
        "is";
    cert.witness = failing.certificate +
                   (passing.orthocomplemented
                        ? "; star_tensor(f2,s4) is orthocomplemented"
                        : "; star_tensor(f2,s4) unexpectedly fails");
    cert.reproduced = !failing.orthocomplemented &&
                      failing.certificate.rfind("elements ", 0) == 0 &&
                      passing.orthocomplemented;
    return cert;
}

CounterexampleReport run_counterexamples(const std::string& fixtures_dir,
                                         const std::string& only) {
    if (only != "" && only != "f3" && only != "s4-basic" && only != "s4-star") {
        throw ParseError("unknown counterexample id '" + only + "'");
    }
    const auto fixture = [&](const std::string& name) {
        return parse_space_file(fixtures_dir + "/" + name);
    };
    const auto starred = [&](const std::string& name) {
        SpaceFile file = fixture(name);
        if (!file.star) {
            throw ParseError(fixtures_dir + "/" + name + ": missing star map");
        }
        return file;
    };

    CounterexampleReport report;
    if (only.empty() || only == "f3") {
        report.certificates.push_back(
            certify_f3_diagonal(fixture("f3.json").space));
    }
    if (only.empty() || only == "s4-basic") {
        report.certificates.push_back(
            certify_basic_tensor_join_gap(fixture("s4.json").space));
    }
    if (only.empty() || only == "s4-star") {
        const SpaceFile s4 = starred("s4.json");
        const SpaceFile f2 = starred("f2.json");
        report.certificates.push_back(certify_star_tensor_orthocomplement(
            s4.space, *s4.star, f2.space, *f2.star));
    }
    return report;
}

} // namespace chu3

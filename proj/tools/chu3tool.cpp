#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chu3/certificates.hpp"
#include "chu3/determination.hpp"
#include "chu3/effects.hpp"
#include "chu3/errors.hpp"
#include "chu3/json_io.hpp"
#include "chu3/ortho.hpp"
#include "chu3/quantum.hpp"
#include "chu3/state_space.hpp"
#include "chu3/symmetry.hpp"
#include "chu3/tensor_basic.hpp"
#include "chu3/tensor_bimorphic.hpp"
#include "chu3/tensor_canonical.hpp"

namespace {

using nlohmann::ordered_json;

void write_output(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw chu3::Error("cannot write '" + out_path + "'");
    out << text;
}

std::string pass_fail(bool pass) { return pass ? "pass" : "fail"; }

chu3::SpaceFile load_space(const std::string& path) {
    return chu3::parse_space_file(path);
}

const chu3::StarMap& require_star(const chu3::SpaceFile& file,
                                  const std::string& path) {
    if (!file.star) {
        throw chu3::ParseError(path + ": this command needs a 'star' map");
    }
    return *file.star;
}

int run_check(const std::string& path, bool as_json) {
    const chu3::SpaceFile file = load_space(path);
    const chu3::StateSpace& sp = file.space;
    const chu3::AxiomReport axioms = sp.check_state_axioms();
    const auto distr = sp.distributivity_witness();

    bool star_lawful = true;
    std::optional<chu3::StarReport> star_report;
    if (file.star) {
        star_report = chu3::validate_star(sp, *file.star);
        star_lawful = star_report->star_ok();
    }
    const bool ok = axioms.all_pass() && star_lawful;

    const auto witness_label = [&](const std::optional<chu3::StateId>& w) {
        return w ? sp.label(*w) : std::string();
    };

    if (as_json) {
        ordered_json doc;
        doc["space"] = sp.name();
        doc["elements"] = sp.size();
        ordered_json ax;
        const auto put = [&](const char* key, const chu3::AxiomCheck& c) {
            ordered_json entry;
            entry["pass"] = c.pass;
            if (c.witness) entry["witness"] = sp.label(*c.witness);
            ax[key] = std::move(entry);
        };
        put("a1", axioms.a1);
        put("a2", axioms.a2);
        put("a4", axioms.a4);
        put("a5", axioms.a5);
        doc["axioms"] = std::move(ax);
        doc["distributive"] = !distr.has_value();
        if (distr) {
            doc["distributivity_witness"] = {sp.label(distr->sigma),
                                             sp.label(distr->sigma1),
                                             sp.label(distr->sigma2)};
        }
        if (star_report) {
            ordered_json star;
            star["lawful"] = star_report->star_ok();
            star["involutive"] = star_report->involutive;
            star["order_reversing"] = star_report->order_reversing;
            star["inconsistent_pairs"] = star_report->inconsistent;
            star["star_atoms"] = star_report->star_atoms;
            star["orthocomplemented"] = star_report->orthocomplemented;
            star["orthogonal"] = star_report->orthogonal;
            doc["star"] = std::move(star);
        }
        doc["pass"] = ok;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "space: " << sp.name() << " (" << sp.size()
                  << " elements)\n";
        const auto line = [&](const char* name, const char* text,
                              const chu3::AxiomCheck& c) {
            std::cout << name << " " << text << ": " << pass_fail(c.pass);
            if (c.witness) std::cout << " (witness '" << witness_label(c.witness) << "')";
            std::cout << "\n";
        };
        line("A1", "meets are greatest lower bounds", axioms.a1);
        line("A2", "least element", axioms.a2);
        line("A4", "states are mixtures of maximal states", axioms.a4);
        line("A5", "pure equals maximal", axioms.a5);
        std::cout << "distributive: " << (distr ? "no" : "yes");
        if (distr) {
            std::cout << " (witness '" << sp.label(distr->sigma) << "', '"
                      << sp.label(distr->sigma1) << "', '"
                      << sp.label(distr->sigma2) << "')";
        }
        std::cout << "\n";
        if (star_report) {
            std::cout << "star laws: " << pass_fail(star_report->star_ok())
                      << "\n";
            std::cout << "orthocomplemented: "
                      << (star_report->orthocomplemented ? "yes" : "no")
                      << "\n";
            std::cout << "orthogonal: "
                      << (star_report->orthogonal ? "yes" : "no") << "\n";
        }
        std::cout << "verdict: " << pass_fail(ok) << "\n";
    }
    return ok ? 0 : 1;
}

int run_effects(const std::string& path, bool as_json) {
    const chu3::SpaceFile file = load_space(path);
    const chu3::StateSpace& sp = file.space;
    const chu3::EffectSpace effects(sp);
    const std::vector<chu3::EffectId> maxes = effects.max_effects();

    if (as_json) {
        ordered_json doc;
        doc["space"] = sp.name();
        doc["count"] = effects.size();
        ordered_json rows = ordered_json::array();
        for (chu3::EffectId e = 0; e < effects.size(); ++e) {
            const chu3::Effect& eff = effects.effect(e);
            ordered_json row;
            row["label"] = effects.label(e);
            row["yes"] = eff.yes ? ordered_json(sp.label(*eff.yes))
                                 : ordered_json(nullptr);
            row["no"] = eff.no ? ordered_json(sp.label(*eff.no))
                               : ordered_json(nullptr);
            ordered_json eval;
            for (chu3::StateId s = 0; s < sp.size(); ++s) {
                eval[sp.label(s)] = chu3::det_to_string(effects.eval(e, s));
            }
            row["eval"] = std::move(eval);
            rows.push_back(std::move(row));
        }
        doc["effects"] = std::move(rows);
        ordered_json max_labels = ordered_json::array();
        for (chu3::EffectId e : maxes) max_labels.push_back(effects.label(e));
        doc["maximal"] = std::move(max_labels);
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "effect space of " << sp.name() << ": " << effects.size()
                  << " effects\n";
        for (chu3::EffectId e = 0; e < effects.size(); ++e) {
            std::cout << effects.label(e) << ":";
            for (chu3::StateId s = 0; s < sp.size(); ++s) {
                std::cout << " " << sp.label(s) << "="
                          << chu3::det_to_string(effects.eval(e, s));
            }
            std::cout << "\n";
        }
        std::cout << "maximal:";
        for (chu3::EffectId e : maxes) std::cout << " " << effects.label(e);
        std::cout << "\n";
    }
    return 0;
}

int run_basis(const std::string& path, bool as_json) {
    const chu3::SpaceFile file = load_space(path);
    const chu3::StarMap& star = require_star(file, path);
    const auto basis = chu3::ortho_basis_greedy(file.space, star);

    if (as_json) {
        ordered_json doc;
        doc["space"] = file.space.name();
        if (basis) {
            ordered_json labels = ordered_json::array();
            for (chu3::StateId s : *basis) labels.push_back(file.space.label(s));
            doc["basis"] = std::move(labels);
        } else {
            doc["basis"] = nullptr;
        }
        std::cout << doc.dump(2) << "\n";
    } else if (basis) {
        std::cout << "basis:";
        for (chu3::StateId s : *basis) std::cout << " " << file.space.label(s);
        std::cout << "\n";
    } else {
        std::cout << "none\n";
    }
    return 0;
}

int run_symmetry(const std::string& source_path, const std::string& target_path,
                 const std::string& map_path, bool as_json) {
    const chu3::SpaceFile source = load_space(source_path);
    const chu3::SpaceFile target = load_space(target_path);
    std::vector<chu3::StateId> f12 =
        chu3::parse_symmetry_file(map_path, source.space, target.space);
    const chu3::ChuMap map =
        chu3::derive_effect_map(source.space, target.space, std::move(f12));
    const chu3::SymmetryReport report = chu3::verify_symmetry(map);

    const std::vector<std::pair<const char*, const chu3::LawCheck*>> laws = {
        {"duality", &report.duality},
        {"state map preserves meets", &report.f12_meets},
        {"state map preserves chain joins", &report.f12_chain_joins},
        {"effect map preserves meets", &report.f21_meets},
        {"effect map preserves chain joins", &report.f21_chain_joins},
        {"effect map commutes with conjugation", &report.f21_bar},
        {"effect map fixes the unit", &report.f21_unit},
        {"pure states transport", &report.pure_transport},
        {"maximal states transport", &report.max_transport},
    };

    if (as_json) {
        ordered_json doc;
        doc["source"] = source.space.name();
        doc["target"] = target.space.name();
        doc["bijective"] = report.bijective;
        ordered_json rows;
        for (const auto& [name, check] : laws) {
            ordered_json row;
            row["pass"] = check->pass;
            if (!check->pass) row["witness"] = check->witness;
            rows[name] = std::move(row);
        }
        doc["laws"] = std::move(rows);
        doc["pass"] = report.all_pass();
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "symmetry " << source.space.name() << " -> "
                  << target.space.name()
                  << (report.bijective ? " (bijective)" : " (channel)") << "\n";
        for (const auto& [name, check] : laws) {
            std::cout << name << ": " << pass_fail(check->pass);
            if (!check->pass) std::cout << " (" << check->witness << ")";
            std::cout << "\n";
        }
        std::cout << "verdict: " << pass_fail(report.all_pass()) << "\n";
    }
    return report.all_pass() ? 0 : 1;
}

void print_space_summary(const chu3::StateSpace& sp, bool enumerate,
                         bool as_json) {
    if (as_json) {
        ordered_json doc;
        doc["space"] = sp.name();
        doc["elements"] = sp.size();
        doc["pure"] = static_cast<int>(sp.pure_states().size());
        doc["atoms"] = static_cast<int>(sp.atoms().size());
        if (enumerate) {
            ordered_json labels = ordered_json::array();
            for (chu3::StateId s = 0; s < sp.size(); ++s) {
                labels.push_back(sp.label(s));
            }
            doc["labels"] = std::move(labels);
        }
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << sp.name() << ": " << sp.size() << " elements, "
                  << sp.pure_states().size() << " pure, " << sp.atoms().size()
                  << " atoms\n";
        if (enumerate) {
            for (chu3::StateId s = 0; s < sp.size(); ++s) {
                std::cout << "  " << sp.label(s) << "\n";
            }
        }
    }
}

int run_tensor(const std::string& kind, const std::string& a_path,
               const std::string& b_path, bool enumerate,
               const std::string& out_path, int max_pairs, bool as_json) {
    const chu3::SpaceFile a = load_space(a_path);
    const chu3::SpaceFile b = load_space(b_path);

    if (kind == "basic") {
        const chu3::TensorSpace tensor(a.space, b.space, max_pairs);
        print_space_summary(tensor.space(), enumerate, as_json);
        if (!out_path.empty()) {
            write_output(chu3::serialize_space(tensor.space()), out_path);
        }
        return 0;
    }
    if (kind == "star") {
        const chu3::StarMap& star_a = require_star(a, a_path);
        const chu3::StarMap& star_b = require_star(b, b_path);
        const chu3::StarTensorSpace tensor(a.space, star_a, b.space, star_b,
                                           max_pairs);
        print_space_summary(tensor.space(), enumerate, as_json);
        if (!out_path.empty()) {
            std::optional<chu3::StarMap> star;
            try {
                star = chu3::star_tensor_star_map(tensor);
            } catch (const chu3::Error&) {
                star.reset();
            }
            write_output(
                chu3::serialize_space(tensor.space(), star ? &*star : nullptr),
                out_path);
        }
        return 0;
    }
    if (kind == "maximal") {
        const chu3::EffectSpace ea(a.space);
        const chu3::EffectSpace eb(b.space);
        const chu3::MaximalTensorEnumeration enumeration =
            chu3::maximal_tensor_elements(ea, eb);
        const auto render_table = [&](const std::vector<chu3::Det>& table) {
            std::string row;
            for (chu3::Det d : table) {
                row += d == chu3::Det::Bot ? '.' : (d == chu3::Det::Yes ? 'Y' : 'N');
            }
            return row;
        };
        if (as_json) {
            ordered_json doc;
            doc["factors"] = {a.space.name(), b.space.name()};
            doc["pure_candidates"] = enumeration.pure.candidates;
            doc["pure_bimorphisms"] = enumeration.pure.valid;
            doc["bimorphisms"] = enumeration.bimorphism_count;
            doc["generated_elements"] =
                static_cast<unsigned long long>(enumeration.generated_tables.size());
            if (enumerate) {
                ordered_json rows = ordered_json::array();
                for (const auto& table : enumeration.pure.tables) {
                    rows.push_back(render_table(table));
                }
                doc["pure_tables"] = std::move(rows);
            }
            std::cout << doc.dump(2) << "\n";
        } else {
            std::cout << "maximal tensor of " << a.space.name() << " and "
                      << b.space.name() << ": "
                      << enumeration.pure.valid << " pure bimorphisms of "
                      << enumeration.pure.candidates << " candidates, "
                      << enumeration.bimorphism_count << " bimorphisms, "
                      << enumeration.generated_tables.size()
                      << " in the sub-semilattice the pure ones generate\n";
            if (enumerate) {
                for (const auto& table : enumeration.pure.tables) {
                    std::cout << "  " << render_table(table) << "\n";
                }
            }
        }
        return 0;
    }
    throw chu3::ParseError("unknown tensor kind '" + kind + "'");
}

int run_order(const std::string& kind, const std::string& a_path,
              const std::string& b_path, const std::string& left,
              const std::string& right, bool as_json) {
    const chu3::SpaceFile a = load_space(a_path);
    const chu3::SpaceFile b = load_space(b_path);
    const chu3::TensorGen lhs = chu3::make_tensor_gen(
        chu3::parse_pair_literal(a.space, b.space, left));
    const chu3::TensorGen rhs = chu3::make_tensor_gen(
        chu3::parse_pair_literal(a.space, b.space, right));

    bool leq = false;
    if (kind == "basic") {
        leq = chu3::tensor_leq(a.space, b.space, lhs, rhs);
    } else if (kind == "canonical") {
        leq = true;
        for (const chu3::StatePair& target : rhs.pairs) {
            if (!chu3::fraser_leq(a.space, b.space, lhs, target)) {
                leq = false;
                break;
            }
        }
    } else {
        throw chu3::ParseError("unknown order kind '" + kind + "'");
    }

    if (as_json) {
        ordered_json doc;
        doc["kind"] = kind;
        doc["leq"] = leq;
        std::cout << doc.dump(2) << "\n";
    } else {
        std::cout << "leq: " << (leq ? "true" : "false") << "\n";
    }
    return 0;
}

int run_quantum(int dim_flag, const std::string& rays_literal,
                const std::string& rays_path, const std::string& out_path) {
    if (rays_literal.empty() == rays_path.empty()) {
        throw chu3::ParseError("provide exactly one of --rays or --rays-file");
    }
    const chu3::RaysFile rays =
        rays_literal.empty()
            ? chu3::parse_rays_file(rays_path, dim_flag)
            : chu3::parse_rays_text(rays_literal, "--rays", dim_flag);
    if (dim_flag > 0 && rays.dim != dim_flag) {
        throw chu3::ParseError("--dim " + std::to_string(dim_flag) +
                               " disagrees with the ray list dimension " +
                               std::to_string(rays.dim));
    }

    std::vector<chu3::Subspace> generators;
    generators.reserve(rays.rays.size());
    for (const auto& ray : rays.rays) {
        generators.push_back(chu3::make_subspace(rays.dim, {ray}));
    }
    const chu3::Fragment fragment = chu3::fragment_closure(generators);
    const std::optional<chu3::StarMap> star = chu3::fragment_star(fragment);
    write_output(
        chu3::serialize_space(fragment.space, star ? &*star : nullptr),
        out_path);

    const chu3::AxiomReport axioms = fragment.space.check_state_axioms();
    if (!axioms.all_pass()) {
        std::cerr << "note: fragment fails the state axioms";
        if (!axioms.a4.pass && axioms.a4.witness) {
            std::cerr << " (A4 witness '"
                      << fragment.space.label(*axioms.a4.witness) << "')";
        }
        std::cerr << "\n";
        return 1;
    }
    return 0;
}

int run_counterexamples_verb(const std::string& fixtures_dir,
                             const std::string& only, bool as_json) {
    const chu3::CounterexampleReport report =
        chu3::run_counterexamples(fixtures_dir, only);
    int reproduced = 0;
    for (const chu3::Certificate& cert : report.certificates) {
        if (cert.reproduced) ++reproduced;
    }

    if (as_json) {
        ordered_json doc;
        ordered_json rows = ordered_json::array();
        for (const chu3::Certificate& cert : report.certificates) {
            ordered_json row;
            row["id"] = cert.id;
            row["statement"] = cert.statement;
            row["witness"] = cert.witness;
            row["reproduced"] = cert.reproduced;
            rows.push_back(std::move(row));
        }
        doc["certificates"] = std::move(rows);
        doc["reproduced"] = reproduced;
        doc["total"] = static_cast<int>(report.certificates.size());
        std::cout << doc.dump(2) << "\n";
    } else {
        for (const chu3::Certificate& cert : report.certificates) {
            std::cout << cert.render();
        }
        std::cout << "reproduced: " << reproduced << "/"
                  << report.certificates.size() << "\n";
    }
    return report.all_reproduced() ? 0 : 1;
}

int run_dot(const std::string& path, const std::string& out_path) {
    const chu3::SpaceFile file = load_space(path);
    write_output(chu3::emit_dot(file.space), out_path);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Three-valued state spaces: axioms, effects, symmetries, "
                 "tensor products, counterexamples"};
    app.require_subcommand(1);

    int exit_code = 0;

    // check
    std::string check_path;
    bool check_json = false;
    CLI::App* check = app.add_subcommand(
        "check", "Validate a space file against the state axioms");
    check->add_option("space", check_path, "space JSON file")->required();
    check->add_flag("--json", check_json, "machine-readable report");
    check->callback([&] { exit_code = run_check(check_path, check_json); });

    // effects
    std::string effects_path;
    bool effects_json = false;
    CLI::App* effects = app.add_subcommand(
        "effects", "Enumerate the effect space and its evaluation table");
    effects->add_option("space", effects_path, "space JSON file")->required();
    effects->add_flag("--json", effects_json, "machine-readable report");
    effects->callback(
        [&] { exit_code = run_effects(effects_path, effects_json); });

    // basis
    std::string basis_path;
    bool basis_json = false;
    CLI::App* basis = app.add_subcommand(
        "basis", "Greedy orthonormal basis of a starred space");
    basis->add_option("space", basis_path, "space JSON file with star")
        ->required();
    basis->add_flag("--json", basis_json, "machine-readable report");
    basis->callback([&] { exit_code = run_basis(basis_path, basis_json); });

    // symmetry
    std::string sym_source, sym_target, sym_map;
    bool sym_json = false;
    CLI::App* symmetry = app.add_subcommand(
        "symmetry", "Verify a state map as a channel between two spaces");
    symmetry->add_option("source", sym_source, "source space JSON file")
        ->required();
    symmetry->add_option("target", sym_target, "target space JSON file")
        ->required();
    symmetry->add_option("--map", sym_map, "map JSON file {\"map\": {...}}")
        ->required();
    symmetry->add_flag("--json", sym_json, "machine-readable report");
    symmetry->callback([&] {
        exit_code = run_symmetry(sym_source, sym_target, sym_map, sym_json);
    });

    // tensor
    std::string tensor_kind = "basic", tensor_a, tensor_b, tensor_out;
    bool tensor_enumerate = false, tensor_json = false;
    int tensor_max_pairs = chu3::kTensorEnumerationCap;
    CLI::App* tensor = app.add_subcommand(
        "tensor", "Build a tensor product of two space files");
    tensor->add_option("--kind", tensor_kind, "basic, maximal, or star")
        ->check(CLI::IsMember({"basic", "maximal", "star"}));
    tensor->add_option("a", tensor_a, "left factor JSON file")->required();
    tensor->add_option("b", tensor_b, "right factor JSON file")->required();
    tensor->add_flag("--enumerate", tensor_enumerate, "list the elements");
    tensor->add_option("--out", tensor_out, "write the result as a space file");
    tensor->add_option("--max-pairs", tensor_max_pairs,
                       "enumeration cap on |A|*|B|");
    tensor->add_flag("--json", tensor_json, "machine-readable report");
    tensor->callback([&] {
        exit_code = run_tensor(tensor_kind, tensor_a, tensor_b,
                               tensor_enumerate, tensor_out, tensor_max_pairs,
                               tensor_json);
    });

    // order
    std::string order_kind = "basic", order_a, order_b, order_left, order_right;
    bool order_json = false;
    CLI::App* order = app.add_subcommand(
        "order", "Decide the tensor order between two element literals");
    order->add_option("--kind", order_kind, "basic or canonical")
        ->check(CLI::IsMember({"basic", "canonical"}));
    order->add_option("a", order_a, "left factor JSON file")->required();
    order->add_option("b", order_b, "right factor JSON file")->required();
    order->add_option("--left", order_left, "element literal [[l,r],...]")
        ->required();
    order->add_option("--right", order_right, "element literal [[l,r],...]")
        ->required();
    order->add_flag("--json", order_json, "machine-readable report");
    order->callback([&] {
        exit_code = run_order(order_kind, order_a, order_b, order_left,
                              order_right, order_json);
    });

    // quantum
    int quantum_dim = 0;
    std::string quantum_rays, quantum_rays_file, quantum_out;
    CLI::App* quantum = app.add_subcommand(
        "quantum", "Close rays into a subspace fragment and emit it as a "
                   "space file");
    quantum->add_option("--dim", quantum_dim, "ambient dimension");
    quantum->add_option("--rays", quantum_rays,
                        "ray literal [[entry,...],...]");
    quantum->add_option("--rays-file", quantum_rays_file, "ray JSON file");
    quantum->add_option("--out", quantum_out, "write the space file here");
    quantum->callback([&] {
        exit_code = run_quantum(quantum_dim, quantum_rays, quantum_rays_file,
                                quantum_out);
    });

    // counterexamples
    std::string ce_only, ce_fixtures = "fixtures";
    bool ce_json = false;
    CLI::App* counterexamples = app.add_subcommand(
        "counterexamples", "Replay the certified counterexamples");
    counterexamples->add_option("--only", ce_only,
                                "run one id: f3, s4-basic, s4-star");
    counterexamples->add_option("--fixtures", ce_fixtures,
                                "fixtures directory");
    counterexamples->add_flag("--json", ce_json, "machine-readable report");
    counterexamples->callback([&] {
        exit_code = run_counterexamples_verb(ce_fixtures, ce_only, ce_json);
    });

    // dot
    std::string dot_path, dot_out;
    CLI::App* dot = app.add_subcommand(
        "dot", "Emit the Hasse diagram of a space file as DOT");
    dot->add_option("space", dot_path, "space JSON file")->required();
    dot->add_option("--out", dot_out, "write the diagram here");
    dot->callback([&] { exit_code = run_dot(dot_path, dot_out); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const chu3::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const chu3::CycleDetected& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const chu3::NoBottom& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const chu3::NotALattice& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const chu3::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}

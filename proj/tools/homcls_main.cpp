// homcls — homotopy classes of maps from a finite simplicial set into a
// (d-1)-connected target given by a Postnikov system.
//
// Commands:
//   group          [X,Y] for dim X <= 2d-2, invariant factors
//   stage-group    [X,P_i] for any X (no dimension clamp)
//   homotopic      decide whether two simplicial maps are homotopic
//   nullhomotopic  decide nullhomotopy; optionally export a certificate
//   cohomology     H^n(X; pi) of a space file
//   snf            debug: Smith normal form D = S*U*T of a JSON matrix
//
// Exit codes: 0 success; 1 usage error; 2 computation precondition violated
// (dimension or stage out of range, target without a stored model); 3 input
// validation failure (unreadable/ill-formed files, bad tokens).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "homcls/json_io.hpp"

namespace {

using namespace homcls;

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return Json::parse(in);
}

void write_file(const std::string& path, const Json& j) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << j.dump(2) << "\n";
}

void print_group(bool as_json, std::size_t free_rank, const std::vector<Int>& torsion) {
    if (as_json) std::cout << group_to_json(free_rank, torsion).dump() << "\n";
    else std::cout << format_group(free_rank, torsion) << "\n";
}

// Resolve a requested stage against the stored tower: stages above a
// complete tower's top coincide with the top stage.
int resolve_stage(const HomotopyEngine& engine, int stage) {
    if (stage < engine.d())
        throw std::domain_error("stage " + std::to_string(stage) +
                                " lies below the target's connectivity stage " +
                                std::to_string(engine.d()));
    if (stage > engine.top_stage()) {
        if (engine.tower().complete_above_top()) return engine.top_stage();
        throw std::domain_error("stage " + std::to_string(stage) +
                                " exceeds the stored tower (top stage " +
                                std::to_string(engine.top_stage()) + ")");
    }
    return stage;
}

SimplicialMap load_map(const HomotopyEngine& engine, const SimplicialSet& x,
                       const std::string& path) {
    if (!engine.tower().model())
        throw std::domain_error("target " + engine.tower().target_name() +
                                " stores no finite model; simplicial maps into it "
                                "cannot be interpreted");
    return map_from_json(x, *engine.tower().model(), load_json(path));
}

struct Args {
    std::string space_file;
    std::string target;
    std::vector<std::string> map_files;
    std::string certificate_file;
    std::string coeff;
    std::string matrix_file;
    int stage = 0;
    int dim = 0;
    bool as_json = false;
};

int run(const std::string& command, const Args& a) {
    if (command == "snf") {
        Json j;
        if (a.matrix_file.empty()) j = Json::parse(std::cin);
        else j = load_json(a.matrix_file);
        SnfDecomposition r = smith_normal_form(matrix_from_json(j));
        if (a.as_json) {
            std::cout << Json{{"schema_version", kSchemaVersion},
                              {"S", matrix_to_json(r.s)},
                              {"D", matrix_to_json(r.d)},
                              {"T", matrix_to_json(r.t)}}
                             .dump()
                      << "\n";
        } else {
            std::cout << "S = " << matrix_to_json(r.s).dump() << "\n";
            std::cout << "D = " << matrix_to_json(r.d).dump() << "\n";
            std::cout << "T = " << matrix_to_json(r.t).dump() << "\n";
        }
        return 0;
    }

    SimplicialSet x = space_from_json(load_json(a.space_file));

    if (command == "cohomology") {
        if (a.dim < 0) throw std::invalid_argument("cohomology: --dim must be >= 0");
        CohomologyResult h = cohomology(x, a.dim, parse_coeff(a.coeff));
        print_group(a.as_json, h.group.free_rank(), h.group.torsion());
        return 0;
    }

    HomotopyEngine engine(std::move(x), parse_target(a.target));

    if (command == "group") {
        const FullyEffectiveGroup& g = engine.classes();
        print_group(a.as_json, g.free_rank(), g.torsion());
        return 0;
    }
    if (command == "stage-group") {
        const FullyEffectiveGroup& g = engine.stage_group(resolve_stage(engine, a.stage));
        print_group(a.as_json, g.free_rank(), g.torsion());
        return 0;
    }
    if (command == "homotopic") {
        SimplicialMap f = load_map(engine, engine.space(), a.map_files.at(0));
        SimplicialMap g = load_map(engine, engine.space(), a.map_files.at(1));
        bool same = engine.homotopic(f, g);
        if (a.as_json)
            std::cout << Json{{"schema_version", kSchemaVersion}, {"homotopic", same}}.dump()
                      << "\n";
        else std::cout << (same ? "homotopic" : "not homotopic") << "\n";
        return 0;
    }
    if (command == "nullhomotopic") {
        SimplicialMap f = load_map(engine, engine.space(), a.map_files.at(0));
        bool isnull = engine.is_nullhomotopic(f);
        Json out{{"schema_version", kSchemaVersion}, {"nullhomotopic", isnull}};
        if (isnull && !a.certificate_file.empty()) {
            ConeMapRep cert = engine.nullhomotopy(engine.rep_of_map(f, engine.class_stage()));
            write_file(a.certificate_file, certificate_to_json(engine, cert));
            out["certificate"] = a.certificate_file;
        }
        if (a.as_json) std::cout << out.dump() << "\n";
        else {
            std::cout << (isnull ? "nullhomotopic" : "not nullhomotopic") << "\n";
            if (out.contains("certificate"))
                std::cout << "certificate written to " << a.certificate_file << "\n";
        }
        return 0;
    }
    throw std::invalid_argument("unknown command " + command);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "homotopy classes [X,Y] of maps from a finite simplicial set into a "
        "Postnikov-system target"};
    app.require_subcommand(1);
    Args a;

    auto add_space = [&a](CLI::App* sub) {
        sub->add_option("--space", a.space_file, "space JSON file")->required();
    };
    auto add_target = [&a](CLI::App* sub) {
        sub->add_option("--target", a.target, "sphere:3 or em:<coeff>:<n>")->required();
    };
    auto add_json = [&a](CLI::App* sub) {
        sub->add_flag("--json", a.as_json, "emit JSON instead of plaintext");
    };

    CLI::App* group = app.add_subcommand("group", "the group [X,Y] (dim X <= 2d-2)");
    add_space(group); add_target(group); add_json(group);

    CLI::App* stage = app.add_subcommand("stage-group", "the stage group [X,P_i], any X");
    add_space(stage); add_target(stage); add_json(stage);
    stage->add_option("--stage", a.stage, "Postnikov stage i")->required();

    CLI::App* hom = app.add_subcommand("homotopic", "decide homotopy of two simplicial maps");
    add_space(hom); add_target(hom); add_json(hom);
    hom->add_option("--map", a.map_files, "map JSON file (give twice)")->expected(2);

    CLI::App* nul = app.add_subcommand("nullhomotopic", "decide nullhomotopy of a map");
    add_space(nul); add_target(nul); add_json(nul);
    nul->add_option("--map", a.map_files, "map JSON file")->expected(1);
    nul->add_option("--certificate", a.certificate_file,
                    "write a nullhomotopy certificate to this file");

    CLI::App* coh = app.add_subcommand("cohomology", "H^n(X; pi) of a space file");
    add_space(coh); add_json(coh);
    coh->add_option("--coeff", a.coeff, "coefficients: Z, Z/q, Z^r, sums via +")->required();
    coh->add_option("--dim", a.dim, "cohomology degree n")->required();

    CLI::App* snf = app.add_subcommand("snf", "Smith normal form of a JSON matrix");
    snf->add_option("matrix", a.matrix_file, "matrix file [[...],...] (stdin when omitted)");
    add_json(snf);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        return run(app.get_subcommands().front()->get_name(), a);
    } catch (const Json::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

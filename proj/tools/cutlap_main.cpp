// Command-line front end: mesh generation, homology queries, spectrum and
// partition-energy computation, scenario runs, and exports.
//
// Exit codes: 0 success, 1 a verified check failed (scenario checks, energy
// minimality violations), 2 usage or input-format error, 3 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cutlap/builders.hpp>
#include <cutlap/eigensolver.hpp>
#include <cutlap/errors.hpp>
#include <cutlap/exports.hpp>
#include <cutlap/geometry.hpp>
#include <cutlap/homology.hpp>
#include <cutlap/mesh_io.hpp>
#include <cutlap/operator.hpp>
#include <cutlap/report.hpp>
#include <cutlap/scenarios.hpp>
#include <cutlap/spectral.hpp>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace cutlap;

struct GlobalOpts {
    std::string output_dir = ".";
    int jobs = 1;
};

std::string num(double v) {
    std::ostringstream os;
    os << std::setprecision(10) << v;
    return os.str();
}

// Relative output paths land under the configured output directory;
// absolute paths are honored as given.
std::string resolve_out(const GlobalOpts& g, const std::string& path) {
    namespace fs = std::filesystem;
    if (path.empty()) return path;
    fs::path p(path);
    if (p.is_absolute()) {
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        return path;
    }
    fs::path joined = fs::path(g.output_dir) / p;
    if (joined.has_parent_path()) fs::create_directories(joined.parent_path());
    return joined.string();
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

// Reports must round-trip through the shipped schema; a mismatch is an
// internal inconsistency, not a user error.
void write_report(const GlobalOpts& g, const std::string& path, const std::string& json_text) {
    const std::vector<std::string> problems = validate_report(json_text);
    if (!problems.empty())
        throw Error("internal: report failed schema validation: " + problems.front());
    write_text_file(resolve_out(g, path), json_text);
}

Cut cut_from_sources(const SurfaceMesh& mesh, const std::string& file, const std::string& recipe,
                     const std::string& what) {
    if (!file.empty() && !recipe.empty())
        throw InvalidArgument("provide at most one of --" + what + " / --" + what + "-recipe");
    if (!file.empty()) return Cut(mesh, read_cut_file(file, mesh));
    if (!recipe.empty()) return cut_from_recipe_text(mesh, recipe);
    return Cut();
}

// ---------------------------------------------------------------- mesh ----

struct MeshOpts {
    std::string surface;
    int refine = -1;  // sentinel: per-surface default
    std::string graded;
    int graded_rings = 3;
    double b = 1.0;
    double width = 1.0;
    double height = 1.0;
    int nx = 96;
    int ny = 64;
    double r_inner = 1.0;
    double r_outer = 2.0;
    int nt = 96;
    int nr = 16;
    std::string out;
    std::string json_path;
};

int run_mesh(const GlobalOpts& g, const MeshOpts& o) {
    SurfaceMesh mesh;
    if (o.surface == "disk") {
        const int refine = o.refine < 0 ? 5 : o.refine;
        const int rings = o.graded == "origin" ? o.graded_rings : 0;
        mesh = build_disk(refine, rings);
    } else if (o.surface == "sphere") {
        mesh = build_sphere(o.refine < 0 ? 4 : o.refine);
    } else if (o.surface == "torus") {
        mesh = build_rectangle(1.0, o.b, o.nx, o.ny, Identify::both);
    } else if (o.surface == "cylinder") {
        mesh = build_rectangle(1.0, o.b, o.nx, o.ny, Identify::horizontal);
    } else if (o.surface == "rectangle") {
        mesh = build_rectangle(o.width, o.height, o.nx, o.ny, Identify::none);
    } else {
        mesh = build_annulus(o.r_inner, o.r_outer, o.nt, o.nr);
    }

    int boundary_edges = 0;
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (!mesh.is_interior_edge(e)) ++boundary_edges;
    const int chi = mesh.n_vertices() - mesh.n_edges() + mesh.n_triangles();
    std::cout << "surface=" << mesh.surface_tag << " V=" << mesh.n_vertices()
              << " E=" << mesh.n_edges() << " F=" << mesh.n_triangles() << " chi=" << chi
              << " boundary_edges=" << boundary_edges << " area=" << num(mesh.total_area())
              << "\n";

    write_mesh_file(resolve_out(g, o.out), mesh);
    if (!o.json_path.empty()) write_report(g, o.json_path, mesh_report_json(mesh));
    return 0;
}

// ------------------------------------------------------------ homology ----

struct HomologyOpts {
    std::string mesh;
    std::string cut_file, cut_recipe;
    std::string other_file, other_recipe;
    std::string save_cut, save_other;
    std::string json_path;
};

int count_minus(const TriangleColoring& coloring) {
    int minus = 0;
    for (int c : coloring.color)
        if (c < 0) ++minus;
    return minus;
}

void describe_certificate(const HomologyCertificate& cert, HomologyVerdicts& verdicts,
                          std::ostream& os) {
    if (cert.verdict) {
        os << "true";
        if (cert.chain) {
            verdicts.witness_chain_triangles = static_cast<int>(cert.chain->triangles.size());
            os << " (witness chain: " << cert.chain->triangles.size() << " triangle(s)";
            if (cert.coloring) {
                verdicts.witness_coloring_minus = count_minus(*cert.coloring);
                os << ", coloring minus class: " << *verdicts.witness_coloring_minus;
            }
            os << ")";
        }
    } else {
        verdicts.obstruction = cert.obstruction_note;
        os << "false (" << cert.obstruction_note << ")";
    }
    os << "\n";
}

int run_homology(const GlobalOpts& g, const HomologyOpts& o) {
    const SurfaceMesh mesh = read_mesh_file(o.mesh);
    if (o.cut_file.empty() && o.cut_recipe.empty())
        throw InvalidArgument("provide one of --cut / --cut-recipe");
    const Cut cut = cut_from_sources(mesh, o.cut_file, o.cut_recipe, "cut");
    const bool have_other = !o.other_file.empty() || !o.other_recipe.empty();

    std::vector<HomologyReportCut> cuts;
    const auto odd_a = odd_points(mesh, cut);
    cuts.push_back({"cut", static_cast<int>(cut.edges.size()), static_cast<int>(odd_a.size())});
    std::cout << "cut: " << cut.edges.size() << " edge(s), " << odd_a.size()
              << " odd point(s)\n";

    HomologyVerdicts verdicts;
    if (!have_other) {
        verdicts.relative_cycle = odd_a.empty();
        std::cout << "relative-cycle: " << (odd_a.empty() ? "true" : "false") << "\n";
        const HomologyCertificate cert = null_homologous(mesh, cut);
        verdicts.null_homologous = cert.verdict;
        std::cout << "null-homologous: ";
        describe_certificate(cert, verdicts, std::cout);
    } else {
        const Cut other = cut_from_sources(mesh, o.other_file, o.other_recipe, "other");
        const auto odd_b = odd_points(mesh, other);
        cuts.push_back(
            {"other", static_cast<int>(other.edges.size()), static_cast<int>(odd_b.size())});
        std::cout << "other: " << other.edges.size() << " edge(s), " << odd_b.size()
                  << " odd point(s)\n";
        verdicts.relative_cycle = is_relative_cycle(mesh, cut, other);
        std::cout << "relative-cycle (difference): "
                  << (*verdicts.relative_cycle ? "true" : "false") << "\n";
        const HomologyCertificate cert = are_homologous(mesh, cut, other);
        verdicts.homologous = cert.verdict;
        std::cout << "homologous: ";
        describe_certificate(cert, verdicts, std::cout);
        if (!o.save_other.empty())
            write_cut_file(resolve_out(g, o.save_other), mesh, other.edges);
    }

    if (!o.save_cut.empty()) write_cut_file(resolve_out(g, o.save_cut), mesh, cut.edges);
    if (!o.json_path.empty())
        write_report(g, o.json_path, homology_report_json(mesh, cuts, verdicts));
    return 0;
}

// ------------------------------------------------------------ spectrum ----

struct SpectrumOpts {
    std::string mesh;
    std::string cut_file, cut_recipe;
    int k = 6;
    double tol = 1e-8;
    std::uint64_t seed = 20240901;
    int lock = 0;
    double rel_gap = 1e-6;
    double zero_tol = 1e-6;
    std::string json_path, vtk_path, svg_path;
    int svg_mode = 0;  // 0: highest computed mode
};

int run_spectrum(const GlobalOpts& g, const SpectrumOpts& o) {
    const SurfaceMesh mesh = read_mesh_file(o.mesh);
    const Cut cut = cut_from_sources(mesh, o.cut_file, o.cut_recipe, "cut");

    const DofMap dofs = build_dof_map(mesh, cut);
    const SparseSym stiffness = assemble_stiffness(mesh, dofs);
    const SparseSym mass = assemble_mass(mesh, dofs);
    Spectrum spectrum = smallest_eigenpairs(stiffness, mass, o.k, o.tol, o.seed);
    if (o.lock > 0) {
        if (o.lock > o.k)
            throw InvalidArgument("--lock index exceeds the number of requested eigenpairs");
        spectrum =
            lock_cluster_to_cut(mesh, cut, dofs, mass, std::move(spectrum), o.lock, o.rel_gap);
    }

    std::vector<SpectrumModeInfo> modes;
    std::vector<CornerField> fields;
    std::vector<Partition> nodal;
    for (int i = 1; i <= o.k; ++i) {
        const CourantReport cr = is_courant_sharp(mesh, cut, spectrum, i, o.zero_tol);
        modes.push_back({i, spectrum.eigenvalues[static_cast<size_t>(i - 1)], cr.nodal_count,
                         cr.position, cr.sharp});
        fields.push_back(corner_field(mesh, dofs, spectrum.eigenvectors[static_cast<size_t>(i - 1)],
                                      spectrum.eigenvalues[static_cast<size_t>(i - 1)]));
        nodal.push_back(nodal_partition(mesh, cut, fields.back(), o.zero_tol));
    }

    std::cout << "n_dofs=" << dofs.n_dofs << " cut_edges=" << cut.edges.size()
              << " method=" << spectrum.stats.method
              << " iterations=" << spectrum.stats.iterations
              << " operator_applies=" << spectrum.stats.n_operator_applies << "\n";
    std::cout << std::left << std::setw(6) << "index" << std::setw(20) << "eigenvalue"
              << std::setw(12) << "residual" << std::setw(7) << "nodal" << std::setw(10)
              << "position" << "sharp\n";
    for (const SpectrumModeInfo& m : modes) {
        std::ostringstream res;
        res << std::setprecision(3) << spectrum.residuals[static_cast<size_t>(m.index - 1)];
        std::cout << std::left << std::setw(6) << m.index << std::setw(20) << num(m.eigenvalue)
                  << std::setw(12) << res.str() << std::setw(7) << m.nodal_count << std::setw(10)
                  << m.spectral_position << (m.courant_sharp ? "yes" : "no") << "\n";
    }

    if (!o.json_path.empty())
        write_report(g, o.json_path,
                     spectrum_report_json(mesh, static_cast<int>(cut.edges.size()), dofs.n_dofs,
                                          o.k, o.tol, o.seed, spectrum, modes));
    if (!o.vtk_path.empty()) {
        std::vector<VtkPointField> point_fields;
        std::vector<VtkCellField> cell_fields;
        for (int i = 1; i <= o.k; ++i) {
            point_fields.push_back(
                {"mode_" + std::to_string(i), &fields[static_cast<size_t>(i - 1)]});
            cell_fields.push_back(
                {"nodal_" + std::to_string(i), &nodal[static_cast<size_t>(i - 1)].label});
        }
        write_vtk_file(resolve_out(g, o.vtk_path), mesh, point_fields, cell_fields, "spectrum");
    }
    if (!o.svg_path.empty()) {
        const int mode = o.svg_mode > 0 ? o.svg_mode : o.k;
        if (mode > o.k)
            throw InvalidArgument("--svg-mode index exceeds the number of requested eigenpairs");
        std::vector<SvgLayer> layers;
        SvgLayer nodal_layer;
        nodal_layer.edges = nodal[static_cast<size_t>(mode - 1)].boundary_edges(mesh);
        nodal_layer.stroke = "#000000";
        nodal_layer.width_px = 1.5;
        layers.push_back(std::move(nodal_layer));
        SvgLayer cut_layer;
        cut_layer.edges = cut.edges;
        cut_layer.stroke = "#d62728";
        cut_layer.width_px = 3.0;
        layers.push_back(std::move(cut_layer));
        write_svg_file(resolve_out(g, o.svg_path), mesh, layers);
    }
    return 0;
}

// -------------------------------------------------------------- energy ----

struct EnergyOpts {
    std::string mesh;
    std::string partition_file, partition_recipe;
    std::string target_cut_file, target_cut_recipe;
    int k = 0;
    double slack = 0.01;
    double tol = 1e-8;
    std::uint64_t seed = 20240901;
    std::string json_path;
};

int run_energy(const GlobalOpts& g, const EnergyOpts& o) {
    const SurfaceMesh mesh = read_mesh_file(o.mesh);
    if (o.partition_file.empty() == o.partition_recipe.empty())
        throw InvalidArgument("provide exactly one of --partition / --partition-recipe");
    Partition partition;
    if (!o.partition_file.empty()) {
        const PartitionData data = read_partition_file(o.partition_file, mesh);
        partition.label = data.labels;
        partition.k = data.k;
    } else {
        partition = partition_from_recipe_text(mesh, o.partition_recipe);
    }

    const PartitionEnergy energy = partition_energy(mesh, partition, o.tol, o.seed);
    const std::vector<double> areas = part_areas(mesh, partition);
    for (size_t p = 0; p < energy.per_part.size(); ++p)
        std::cout << "part " << (p + 1) << ": lambda1 = " << num(energy.per_part[p])
                  << ", area = " << num(areas[p]) << "\n";
    std::cout << "Lambda = " << num(energy.max_energy) << "\n";
    for (const std::string& d : energy.diagnostics) std::cout << "note: " << d << "\n";

    std::optional<EnergyMembership> membership;
    bool violation = false;
    const bool have_target = !o.target_cut_file.empty() || !o.target_cut_recipe.empty();
    if (have_target) {
        if (o.k < 1)
            throw InvalidArgument("--target-cut requires --k (the eigenvalue index to test)");
        const Cut target =
            cut_from_sources(mesh, o.target_cut_file, o.target_cut_recipe, "target-cut");
        const MinInequalityReport report =
            verify_min_inequality(mesh, target, o.k, {partition}, o.slack, o.tol, o.seed);
        const MinInequalityReport::Entry& entry = report.entries.front();
        membership = EnergyMembership{entry.member, report.lambda_k, entry.margin, entry.violation};
        violation = entry.violation;
        std::cout << "member: " << (entry.member ? "true" : "false") << "\n";
        std::cout << "lambda_" << o.k << " = " << num(report.lambda_k) << "\n";
        if (entry.member) {
            std::cout << "margin = " << num(entry.margin) << "\n";
            if (entry.violation)
                std::cout << "VIOLATION: partition energy undercuts lambda_" << o.k
                          << " beyond the slack\n";
        }
        for (const std::string& d : entry.diagnostics) std::cout << "note: " << d << "\n";
    }

    if (!o.json_path.empty())
        write_report(g, o.json_path, energy_report_json(mesh, partition, energy, membership));
    return violation ? 1 : 0;
}

// ------------------------------------------------------------ scenario ----

struct ScenarioOpts {
    std::string name;
    bool all = false;
    bool list = false;
    int refine = 0;
    bool do_export = false;
};

void print_catalog(std::ostream& os) {
    os << "available scenarios:\n";
    for (const ScenarioInfo& info : list_scenarios())
        os << "  " << std::left << std::setw(24) << info.name << " " << info.description << "\n";
}

void print_scenario_report(const ScenarioReport& report) {
    std::cout << "scenario " << report.name << " (shift " << report.refinement_shift << ")\n";
    for (const ScenarioCheck& c : report.checks) {
        std::cout << "  [" << (c.passed ? "PASS" : "FAIL") << "] " << std::left << std::setw(34)
                  << c.name << " " << c.detail;
        if (c.flagged) std::cout << "  (flag: non-monotone under refinement)";
        std::cout << "\n";
    }
    std::cout << report.name << ": " << (report.passed ? "PASS" : "FAIL") << "\n";
}

int run_scenario_cmd(const GlobalOpts& g, const ScenarioOpts& o) {
    if (o.list) {
        print_catalog(std::cout);
        return 0;
    }
    if (o.all == !o.name.empty())
        throw InvalidArgument("provide exactly one of --name / --all / --list");
    std::vector<std::string> names;
    if (o.all) {
        for (const ScenarioInfo& info : list_scenarios()) names.push_back(info.name);
    } else {
        if (!is_registered_scenario(o.name)) {
            std::cerr << "unknown scenario '" << o.name << "'\n";
            print_catalog(std::cerr);
            return 2;
        }
        names.push_back(o.name);
    }

    const std::string export_dir = o.do_export ? g.output_dir : std::string();
    std::vector<ScenarioReport> results(names.size());
    std::vector<std::exception_ptr> errors(names.size());
    const int jobs = std::max(1, std::min<int>(g.jobs, static_cast<int>(names.size())));
    if (jobs == 1) {
        for (size_t i = 0; i < names.size(); ++i) {
            try {
                results[i] = run_scenario(names[i], o.refine, export_dir);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    } else {
        std::atomic<size_t> next{0};
        auto worker = [&]() {
            for (size_t i; (i = next.fetch_add(1)) < names.size();) {
                try {
                    results[i] = run_scenario(names[i], o.refine, export_dir);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        };
        std::vector<std::thread> pool;
        for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    bool any_failed = false;
    for (size_t i = 0; i < names.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        print_scenario_report(results[i]);
        write_report(g, names[i] + ".json", scenario_report_json(results[i]));
        any_failed = any_failed || !results[i].passed;
    }
    if (names.size() > 1) {
        int passed = 0;
        for (const ScenarioReport& r : results) passed += r.passed ? 1 : 0;
        std::cout << "scenarios: " << passed << " passed, "
                  << (static_cast<int>(names.size()) - passed) << " failed\n";
    }
    return any_failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra, nodal partitions, and Z/2 homology of cuts on triangulated surfaces"};
    app.require_subcommand(1);
    GlobalOpts g;
    app.add_option("--output-dir", g.output_dir,
                   "Directory receiving relative output paths (env: CUTLAP_OUTPUT_DIR)")
        ->envname("CUTLAP_OUTPUT_DIR")
        ->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker threads for independent scenario runs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    MeshOpts mo;
    CLI::App* mesh_cmd = app.add_subcommand("mesh", "Build a canonical surface mesh");
    mesh_cmd->fallthrough();
    mesh_cmd->add_option("--surface", mo.surface, "Surface family")
        ->required()
        ->check(CLI::IsMember({"disk", "sphere", "torus", "cylinder", "rectangle", "annulus"}));
    mesh_cmd->add_option("--refine", mo.refine, "Refinement level (disk: 5, sphere: 4)");
    auto* graded_opt =
        mesh_cmd->add_option("--graded", mo.graded, "Grade the disk mesh toward this point")
            ->check(CLI::IsMember({"origin"}));
    mesh_cmd->add_option("--graded-rings", mo.graded_rings, "Extra geometric rings when graded")
        ->needs(graded_opt)
        ->capture_default_str();
    mesh_cmd->add_option("--b", mo.b, "Torus/cylinder height (circumference is 1)")
        ->capture_default_str();
    mesh_cmd->add_option("--width", mo.width, "Rectangle width")->capture_default_str();
    mesh_cmd->add_option("--height", mo.height, "Rectangle height")->capture_default_str();
    mesh_cmd->add_option("--nx", mo.nx, "Grid cells along x")->capture_default_str();
    mesh_cmd->add_option("--ny", mo.ny, "Grid cells along y")->capture_default_str();
    mesh_cmd->add_option("--r-inner", mo.r_inner, "Annulus inner radius")->capture_default_str();
    mesh_cmd->add_option("--r-outer", mo.r_outer, "Annulus outer radius")->capture_default_str();
    mesh_cmd->add_option("--nt", mo.nt, "Annulus angular cells")->capture_default_str();
    mesh_cmd->add_option("--nr", mo.nr, "Annulus radial cells")->capture_default_str();
    mesh_cmd->add_option("-o,--out", mo.out, "Mesh file to write")->required();
    mesh_cmd->add_option("--json", mo.json_path, "Also write a JSON mesh report here");

    HomologyOpts ho;
    CLI::App* homology_cmd =
        app.add_subcommand("homology", "Odd points and Z/2 relative homology of cuts");
    homology_cmd->fallthrough();
    homology_cmd->add_option("--mesh", ho.mesh, "Mesh file")->required();
    homology_cmd->add_option("--cut", ho.cut_file, "Cut file");
    homology_cmd->add_option("--cut-recipe", ho.cut_recipe, "Inline JSON cut recipe");
    homology_cmd->add_option("--other", ho.other_file, "Second cut file (compare mode)");
    homology_cmd->add_option("--other-recipe", ho.other_recipe, "Inline JSON second-cut recipe");
    homology_cmd->add_option("--save-cut", ho.save_cut, "Write the resolved cut here");
    homology_cmd->add_option("--save-other", ho.save_other, "Write the resolved second cut here");
    homology_cmd->add_option("--json", ho.json_path, "Write a JSON homology report here");

    SpectrumOpts so;
    CLI::App* spectrum_cmd =
        app.add_subcommand("spectrum", "Eigenpairs, nodal counts, and Courant-sharpness");
    spectrum_cmd->fallthrough();
    spectrum_cmd->add_option("--mesh", so.mesh, "Mesh file")->required();
    spectrum_cmd->add_option("--cut", so.cut_file, "Cut file (omit for the empty cut)");
    spectrum_cmd->add_option("--cut-recipe", so.cut_recipe, "Inline JSON cut recipe");
    spectrum_cmd->add_option("-k,--k", so.k, "Number of eigenpairs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    spectrum_cmd->add_option("--tol", so.tol, "Residual tolerance")->capture_default_str();
    spectrum_cmd->add_option("--seed", so.seed, "Start-vector seed")->capture_default_str();
    spectrum_cmd->add_option("--lock", so.lock,
                             "Rotate the cluster at this 1-based index into the "
                             "cut-adapted basis");
    spectrum_cmd->add_option("--rel-gap", so.rel_gap, "Relative gap grouping clusters")
        ->capture_default_str();
    spectrum_cmd->add_option("--zero-tol", so.zero_tol, "Nodal-domain zero tolerance")
        ->capture_default_str();
    spectrum_cmd->add_option("--json", so.json_path, "Write a JSON spectrum report here");
    spectrum_cmd->add_option("--vtk", so.vtk_path, "Write eigenfunctions as legacy VTK here");
    spectrum_cmd->add_option("--svg", so.svg_path,
                             "Write a nodal-line sketch here (planar meshes only)");
    spectrum_cmd->add_option("--svg-mode", so.svg_mode, "Mode shown in the SVG (default: k)");

    EnergyOpts eo;
    CLI::App* energy_cmd =
        app.add_subcommand("energy", "Partition energies and minimality certificates");
    energy_cmd->fallthrough();
    energy_cmd->add_option("--mesh", eo.mesh, "Mesh file")->required();
    energy_cmd->add_option("--partition", eo.partition_file, "Partition file");
    energy_cmd->add_option("--partition-recipe", eo.partition_recipe,
                           "Inline JSON partition recipe");
    energy_cmd->add_option("--target-cut", eo.target_cut_file,
                           "Cut for the membership certificate");
    energy_cmd->add_option("--target-cut-recipe", eo.target_cut_recipe,
                           "Inline JSON recipe for the membership cut");
    energy_cmd->add_option("-k,--k", eo.k, "Eigenvalue index for the membership test");
    energy_cmd->add_option("--slack", eo.slack, "Relative slack for the minimality test")
        ->capture_default_str();
    energy_cmd->add_option("--tol", eo.tol, "Residual tolerance")->capture_default_str();
    energy_cmd->add_option("--seed", eo.seed, "Start-vector seed")->capture_default_str();
    energy_cmd->add_option("--json", eo.json_path, "Write a JSON energy report here");

    ScenarioOpts sco;
    CLI::App* scenario_cmd =
        app.add_subcommand("scenario", "Run registered reference scenarios");
    scenario_cmd->fallthrough();
    scenario_cmd->add_option("--name", sco.name, "Scenario to run");
    scenario_cmd->add_flag("--all", sco.all, "Run every registered scenario");
    scenario_cmd->add_flag("--list", sco.list, "List the catalog and exit");
    scenario_cmd->add_option("--refine", sco.refine,
                             "Refinement shift (+1 doubles, -1 halves resolution)")
        ->capture_default_str();
    scenario_cmd->add_flag("--export", sco.do_export,
                           "Also write VTK/SVG exports into the output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (mesh_cmd->parsed()) return run_mesh(g, mo);
        if (homology_cmd->parsed()) return run_homology(g, ho);
        if (spectrum_cmd->parsed()) return run_spectrum(g, so);
        if (energy_cmd->parsed()) return run_energy(g, eo);
        return run_scenario_cmd(g, sco);
    } catch (const SolverError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InvalidArgument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const MeshError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error: malformed JSON input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}

#include "cutlap/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cutlap/builders.hpp"
#include "cutlap/eigensolver.hpp"
#include "cutlap/errors.hpp"
#include "cutlap/exports.hpp"
#include "cutlap/homology.hpp"
#include "cutlap/operator.hpp"
#include "cutlap/spectral.hpp"
#include "cutlap_embedded/embedded_data.hpp"

namespace cutlap {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Snap tolerance for recognizing vertices on exactly-placed recipe geometry
// (grid columns, spokes at multiples of 30 degrees, meridians): the builders
// put these within a few ulps, so absolute 1e-9 is loose yet unambiguous.
constexpr double kAlignTol = 1e-9;

const json& catalog() {
    static const json parsed = [] {
        json j = json::parse(embedded::kScenariosJson);
        if (!j.is_object() || j.value("format", std::string()) != "cutlap-scenarios" ||
            j.value("version", 0) != 1) {
            throw InvalidArgument("embedded scenario catalog has unexpected format or version");
        }
        return j;
    }();
    return parsed;
}

const json* find_scenario(const std::string& name) {
    for (const json& s : catalog().at("scenarios")) {
        if (s.at("name").get<std::string>() == name) return &s;
    }
    return nullptr;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

int scaled(int base, int shift, int min_value) {
    const double v = std::ldexp(static_cast<double>(base), shift);
    return std::max(min_value, static_cast<int>(std::llround(v)));
}

SurfaceMesh mesh_from_recipe(const json& r, int shift) {
    const std::string kind = r.at("kind").get<std::string>();
    if (kind == "disk")
        return build_disk(std::max(1, r.at("refinement").get<int>() + shift),
                          r.value("graded_rings", 0));
    if (kind == "sphere") return build_sphere(std::max(0, r.at("refinement").get<int>() + shift));
    if (kind == "rectangle") {
        const std::string ident = r.at("identify").get<std::string>();
        Identify identify = Identify::none;
        if (ident == "horizontal")
            identify = Identify::horizontal;
        else if (ident == "both")
            identify = Identify::both;
        else if (ident != "none")
            throw InvalidArgument("unknown identification '" + ident + "' in mesh recipe");
        return build_rectangle(r.at("width").get<double>(), r.at("height").get<double>(),
                               scaled(r.at("nx").get<int>(), shift, 3),
                               scaled(r.at("ny").get<int>(), shift, 3), identify);
    }
    if (kind == "annulus")
        return build_annulus(r.at("r_inner").get<double>(), r.at("r_outer").get<double>(),
                             scaled(r.at("n_theta").get<int>(), shift, 3),
                             scaled(r.at("n_radial").get<int>(), shift, 2));
    throw InvalidArgument("unknown mesh recipe kind '" + kind + "'");
}

void collect_ray_edges(const SurfaceMesh& mesh, double angle_deg, std::set<int>& out) {
    const double a = angle_deg * kPi / 180.0;
    const double ca = std::cos(a), sa = std::sin(a);
    const auto on_ray = [&](const Vec3& p) {
        return std::abs(p.x * sa - p.y * ca) <= kAlignTol && p.x * ca + p.y * sa >= -kAlignTol;
    };
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (!mesh.is_interior_edge(e)) continue;
        const auto [u, v] = mesh.edges[static_cast<size_t>(e)];
        if (on_ray(mesh.vertices[static_cast<size_t>(u)]) &&
            on_ray(mesh.vertices[static_cast<size_t>(v)]))
            out.insert(e);
    }
}

Cut cut_from_recipe(const SurfaceMesh& mesh, const json& r) {
    const std::string kind = r.at("kind").get<std::string>();
    std::set<int> picked;
    if (kind == "ray") {
        collect_ray_edges(mesh, r.at("angle_deg").get<double>(), picked);
    } else if (kind == "rays") {
        for (const json& a : r.at("angles_deg")) collect_ray_edges(mesh, a.get<double>(), picked);
    } else if (kind == "vertical-loop") {
        const double x0 = r.at("x").get<double>();
        for (int e = 0; e < mesh.n_edges(); ++e) {
            if (!mesh.is_interior_edge(e)) continue;
            const auto [u, v] = mesh.edges[static_cast<size_t>(e)];
            if (std::abs(mesh.vertices[static_cast<size_t>(u)].x - x0) <= kAlignTol &&
                std::abs(mesh.vertices[static_cast<size_t>(v)].x - x0) <= kAlignTol)
                picked.insert(e);
        }
    } else if (kind == "meridian") {
        for (int e = 0; e < mesh.n_edges(); ++e) {
            if (!mesh.is_interior_edge(e)) continue;
            const auto [u, v] = mesh.edges[static_cast<size_t>(e)];
            const Vec3& pu = mesh.vertices[static_cast<size_t>(u)];
            const Vec3& pv = mesh.vertices[static_cast<size_t>(v)];
            if (std::abs(pu.y) <= kAlignTol && std::abs(pv.y) <= kAlignTol &&
                pu.x >= -kAlignTol && pv.x >= -kAlignTol)
                picked.insert(e);
        }
    } else if (kind == "circle") {
        const double target = r.at("radius").get<double>();
        double best = -1.0, best_gap = 1e300;
        for (const Vec3& p : mesh.vertices) {
            const double rad = std::hypot(p.x, p.y);
            const double gap = std::abs(rad - target);
            if (gap < best_gap - 1e-12) {
                best_gap = gap;
                best = rad;
            }
        }
        for (int e = 0; e < mesh.n_edges(); ++e) {
            if (!mesh.is_interior_edge(e)) continue;
            const auto [u, v] = mesh.edges[static_cast<size_t>(e)];
            const Vec3& pu = mesh.vertices[static_cast<size_t>(u)];
            const Vec3& pv = mesh.vertices[static_cast<size_t>(v)];
            if (std::abs(std::hypot(pu.x, pu.y) - best) <= 1e-7 &&
                std::abs(std::hypot(pv.x, pv.y) - best) <= 1e-7)
                picked.insert(e);
        }
    } else if (kind == "snap") {
        std::vector<Vec3> polyline;
        for (const json& p : r.at("points"))
            polyline.push_back({p.at(0).get<double>(), p.at(1).get<double>(),
                                p.size() > 2 ? p.at(2).get<double>() : 0.0});
        const EdgePath path = snap_curve(mesh, polyline);
        // Legs of the walk may retrace edges; mod-2 semantics keep the
        // odd-multiplicity ones.
        std::map<int, int> count;
        for (int e : path.edges) ++count[e];
        for (const auto& [e, c] : count)
            if (c % 2 == 1) picked.insert(e);
    } else {
        throw InvalidArgument("unknown cut recipe kind '" + kind + "'");
    }
    if (picked.empty()) throw InvalidArgument("cut recipe '" + kind + "' selected no edges");
    return Cut(mesh, std::vector<int>(picked.begin(), picked.end()));
}

Partition partition_from_recipe(const SurfaceMesh& mesh, const json& r) {
    const std::string kind = r.at("kind").get<std::string>();
    if (kind == "azimuth-sectors") {
        const int count = r.at("count").get<int>();
        if (count < 1) throw InvalidArgument("azimuth-sectors needs count >= 1");
        const double offset = r.value("offset_deg", 0.0) * kPi / 180.0;
        Partition p;
        p.k = count;
        p.label.resize(static_cast<size_t>(mesh.n_triangles()));
        for (int t = 0; t < mesh.n_triangles(); ++t) {
            const auto& q = mesh.corner_pos[static_cast<size_t>(t)];
            const Vec3 c = (q[0] + q[1] + q[2]) * (1.0 / 3.0);
            double a = std::atan2(c.y, c.x) - offset;
            a -= 2 * kPi * std::floor(a / (2 * kPi));
            const int sector = std::min(count - 1, static_cast<int>(a / (2 * kPi / count)));
            p.label[static_cast<size_t>(t)] = 1 + sector;
        }
        return p;
    }
    throw InvalidArgument("unknown partition recipe kind '" + kind + "'");
}

// Everything computed so far for one variant, filled lazily as checks need it.
struct VariantContext {
    const json* v = nullptr;
    int shift = 0;
    SurfaceMesh mesh;
    std::map<std::string, Cut> cuts;
    std::string spectral_cut;
    int nev = 0;
    double solver_tol = 1e-8;
    bool lock = false;
    double lock_rel_gap = 0.005;
    double zero_tol = 0.02;

    bool spectral_ready = false;
    DofMap dofs;
    SparseSym stiffness, mass;
    Spectrum spectrum;

    bool prev_tried = false;
    std::optional<Spectrum> prev_spectrum;  // one refinement level down, for drift flags

    std::map<int, CourantReport> courant;
    std::map<int, Partition> nodal;
    std::map<int, PartitionEnergy> nodal_energy;
    std::map<std::string, Partition> partitions;
    std::map<std::string, PartitionEnergy> partition_energies;
    std::map<std::string, double> other_lambda1;
};

const Cut& cut_by_name(VariantContext& ctx, const std::string& name) {
    const auto it = ctx.cuts.find(name);
    if (it == ctx.cuts.end())
        throw InvalidArgument("check references unknown cut '" + name + "'");
    return it->second;
}

std::vector<int> lock_indices(const json& variant) {
    std::set<int> idx;
    for (const json& c : variant.at("checks")) {
        const std::string type = c.at("type").get<std::string>();
        if (type == "nodal-count" || type == "courant-sharp" || type == "part-areas" ||
            type == "nodal-energy")
            idx.insert(c.at("index").get<int>());
    }
    return {idx.begin(), idx.end()};
}

void ensure_spectrum(VariantContext& ctx) {
    if (ctx.spectral_ready) return;
    const Cut& cut = cut_by_name(ctx, ctx.spectral_cut);
    ctx.dofs = build_dof_map(ctx.mesh, cut);
    ctx.stiffness = assemble_stiffness(ctx.mesh, ctx.dofs);
    ctx.mass = assemble_mass(ctx.mesh, ctx.dofs);
    ctx.spectrum = smallest_eigenpairs(ctx.stiffness, ctx.mass, ctx.nev, ctx.solver_tol);
    if (ctx.lock) {
        for (int index : lock_indices(*ctx.v))
            ctx.spectrum = lock_cluster_to_cut(ctx.mesh, cut, ctx.dofs, ctx.mass,
                                               std::move(ctx.spectrum), index, ctx.lock_rel_gap);
    }
    ctx.spectral_ready = true;
}

// Eigenvalues one refinement level below the current run, for drift flags.
const std::optional<Spectrum>& ensure_prev_spectrum(VariantContext& ctx) {
    if (!ctx.prev_tried) {
        ctx.prev_tried = true;
        const json& v = *ctx.v;
        SurfaceMesh coarser = mesh_from_recipe(v.at("mesh"), ctx.shift - 1);
        Cut cut;
        for (const json& c : v.at("cuts")) {
            if (c.at("name").get<std::string>() == ctx.spectral_cut) {
                cut = cut_from_recipe(coarser, c);
                break;
            }
        }
        const DofMap dofs = build_dof_map(coarser, cut);
        ctx.prev_spectrum = smallest_eigenpairs(assemble_stiffness(coarser, dofs),
                                                assemble_mass(coarser, dofs), ctx.nev,
                                                ctx.solver_tol);
    }
    return ctx.prev_spectrum;
}

const CourantReport& ensure_courant(VariantContext& ctx, int index) {
    auto it = ctx.courant.find(index);
    if (it == ctx.courant.end()) {
        ensure_spectrum(ctx);
        const Cut& cut = cut_by_name(ctx, ctx.spectral_cut);
        it = ctx.courant
                 .emplace(index,
                          is_courant_sharp(ctx.mesh, cut, ctx.spectrum, index, ctx.zero_tol))
                 .first;
    }
    return it->second;
}

const Partition& ensure_nodal(VariantContext& ctx, int index) {
    auto it = ctx.nodal.find(index);
    if (it == ctx.nodal.end()) {
        ensure_spectrum(ctx);
        const Cut& cut = cut_by_name(ctx, ctx.spectral_cut);
        const CornerField field =
            corner_field(ctx.mesh, ctx.dofs,
                         ctx.spectrum.eigenvectors[static_cast<size_t>(index - 1)],
                         ctx.spectrum.eigenvalues[static_cast<size_t>(index - 1)]);
        it = ctx.nodal.emplace(index, nodal_partition(ctx.mesh, cut, field, ctx.zero_tol)).first;
    }
    return it->second;
}

const PartitionEnergy& ensure_nodal_energy(VariantContext& ctx, int index) {
    auto it = ctx.nodal_energy.find(index);
    if (it == ctx.nodal_energy.end()) {
        const Partition& p = ensure_nodal(ctx, index);
        it = ctx.nodal_energy.emplace(index, partition_energy(ctx.mesh, p)).first;
    }
    return it->second;
}

const Partition& ensure_partition(VariantContext& ctx, const std::string& name) {
    auto it = ctx.partitions.find(name);
    if (it == ctx.partitions.end()) {
        const json& v = *ctx.v;
        if (!v.contains("partitions"))
            throw InvalidArgument("check references partition '" + name +
                                  "' but the variant defines none");
        for (const json& r : v.at("partitions")) {
            if (r.at("name").get<std::string>() == name) {
                it = ctx.partitions.emplace(name, partition_from_recipe(ctx.mesh, r)).first;
                return it->second;
            }
        }
        throw InvalidArgument("check references unknown partition '" + name + "'");
    }
    return it->second;
}

const PartitionEnergy& ensure_partition_energy(VariantContext& ctx, const std::string& name) {
    auto it = ctx.partition_energies.find(name);
    if (it == ctx.partition_energies.end()) {
        const Partition& p = ensure_partition(ctx, name);
        it = ctx.partition_energies.emplace(name, partition_energy(ctx.mesh, p)).first;
    }
    return it->second;
}

double ensure_other_lambda1(VariantContext& ctx, const std::string& name) {
    auto it = ctx.other_lambda1.find(name);
    if (it == ctx.other_lambda1.end()) {
        const Cut& cut = cut_by_name(ctx, name);
        const DofMap dofs = build_dof_map(ctx.mesh, cut);
        const Spectrum s = smallest_eigenpairs(assemble_stiffness(ctx.mesh, dofs),
                                               assemble_mass(ctx.mesh, dofs), 2, ctx.solver_tol);
        it = ctx.other_lambda1.emplace(name, s.eigenvalues[0]).first;
    }
    return it->second;
}

std::string describe_positions(const SurfaceMesh& mesh, const std::vector<int>& vertices) {
    std::ostringstream os;
    os.precision(4);
    for (size_t i = 0; i < vertices.size() && i < 4; ++i) {
        const Vec3& p = mesh.vertices[static_cast<size_t>(vertices[i])];
        os << (i ? ", " : "") << "(" << p.x << ", " << p.y << ", " << p.z << ")";
    }
    if (vertices.size() > 4) os << ", ...";
    return os.str();
}

ScenarioCheck eval_check(VariantContext& ctx, const json& c, const std::string& prefix) {
    const std::string type = c.at("type").get<std::string>();
    ScenarioCheck out;
    out.measured = kNaN;
    out.reference = kNaN;
    out.tolerance = kNaN;

    if (type == "odd-points") {
        const std::string cut_name = c.at("cut").get<std::string>();
        out.name = prefix + "odd-points(" + cut_name + ")";
        const std::vector<int> odd = odd_points(ctx.mesh, cut_by_name(ctx, cut_name));
        const int expected = c.at("expected_count").get<int>();
        out.measured = static_cast<double>(odd.size());
        out.reference = static_cast<double>(expected);
        bool ok = static_cast<int>(odd.size()) == expected;
        if (c.contains("positions")) {
            for (int v : odd) {
                const Vec3& p = ctx.mesh.vertices[static_cast<size_t>(v)];
                bool matched = false;
                for (const json& q : c.at("positions")) {
                    const Vec3 target{q.at(0).get<double>(), q.at(1).get<double>(),
                                      q.size() > 2 ? q.at(2).get<double>() : 0.0};
                    if ((p - target).norm() <= 1e-6) matched = true;
                }
                ok = ok && matched;
            }
        }
        if (c.contains("forbidden_positions")) {
            for (int v : odd) {
                const Vec3& p = ctx.mesh.vertices[static_cast<size_t>(v)];
                for (const json& q : c.at("forbidden_positions")) {
                    const Vec3 target{q.at(0).get<double>(), q.at(1).get<double>(),
                                      q.size() > 2 ? q.at(2).get<double>() : 0.0};
                    if ((p - target).norm() <= 1e-6) ok = false;
                }
            }
        }
        out.passed = ok;
        out.detail = std::to_string(odd.size()) + " odd point(s)" +
                     (odd.empty() ? "" : " at " + describe_positions(ctx.mesh, odd));
        return out;
    }

    if (type == "null-homologous") {
        const std::string cut_name = c.at("cut").get<std::string>();
        out.name = prefix + "null-homologous(" + cut_name + ")";
        const bool expected = c.at("expected").get<bool>();
        const HomologyCertificate cert = null_homologous(ctx.mesh, cut_by_name(ctx, cut_name));
        out.passed = cert.verdict == expected;
        out.measured = cert.verdict ? 1.0 : 0.0;
        out.reference = expected ? 1.0 : 0.0;
        out.detail = cert.verdict ? "bounds; witness chain of " +
                                        std::to_string(cert.chain ? cert.chain->triangles.size()
                                                                  : 0) +
                                        " triangles"
                                  : "does not bound: " + cert.obstruction_note;
        return out;
    }

    if (type == "homologous") {
        const std::string a = c.at("cut").get<std::string>();
        const std::string b = c.at("other").get<std::string>();
        out.name = prefix + "homologous(" + a + "," + b + ")";
        const bool expected = c.at("expected").get<bool>();
        const HomologyCertificate cert =
            are_homologous(ctx.mesh, cut_by_name(ctx, a), cut_by_name(ctx, b));
        out.passed = cert.verdict == expected;
        out.measured = cert.verdict ? 1.0 : 0.0;
        out.reference = expected ? 1.0 : 0.0;
        out.detail = cert.verdict
                         ? "homologous; difference bounds " +
                               std::to_string(cert.chain ? cert.chain->triangles.size() : 0) +
                               " triangles"
                         : "not homologous: " + cert.obstruction_note;
        return out;
    }

    if (type == "eigenvalue") {
        const int index = c.at("index").get<int>();
        out.name = prefix + "lambda[" + std::to_string(index) + "]";
        ensure_spectrum(ctx);
        const double lambda = ctx.spectrum.eigenvalues.at(static_cast<size_t>(index - 1));
        const double reference = c.at("reference").get<double>();
        const double rel_tol = c.at("rel_tol").get<double>();
        const double rel_err = std::abs(lambda - reference) / std::abs(reference);
        out.measured = lambda;
        out.reference = reference;
        out.tolerance = rel_tol;
        out.passed = rel_err <= rel_tol;
        out.detail = "lambda = " + fmt(lambda) + ", reference " + fmt(reference) + " (rel err " +
                     fmt(rel_err) + ")";
        if (c.contains("derivation"))
            out.detail += "; reference: " + c.at("derivation").get<std::string>();
        if (ctx.shift >= 1) {
            const std::optional<Spectrum>& prev = ensure_prev_spectrum(ctx);
            if (prev) {
                const double prev_dist =
                    std::abs(prev->eigenvalues.at(static_cast<size_t>(index - 1)) - reference);
                const double cur_dist = std::abs(lambda - reference);
                if (cur_dist > 1.5 * prev_dist + 1e-12 * std::max(1.0, std::abs(reference))) {
                    out.flagged = true;
                    out.detail += "; drift flag: distance " + fmt(cur_dist) +
                                  " vs coarser " + fmt(prev_dist);
                }
            }
        }
        return out;
    }

    if (type == "position") {
        const int index = c.at("index").get<int>();
        out.name = prefix + "position[" + std::to_string(index) + "]";
        ensure_spectrum(ctx);
        const int expected = c.at("expected").get<int>();
        const int pos = spectral_position(ctx.spectrum,
                                          ctx.spectrum.eigenvalues.at(static_cast<size_t>(index - 1)));
        out.measured = pos;
        out.reference = expected;
        out.passed = pos == expected;
        out.detail = "spectral position " + std::to_string(pos);
        return out;
    }

    if (type == "nodal-count") {
        const int index = c.at("index").get<int>();
        out.name = prefix + "nodal-count[" + std::to_string(index) + "]";
        const CourantReport& r = ensure_courant(ctx, index);
        const int expected = c.at("expected").get<int>();
        out.measured = r.nodal_count;
        out.reference = expected;
        out.passed = r.nodal_count == expected;
        out.detail = std::to_string(r.nodal_count) + " nodal domain(s)";
        return out;
    }

    if (type == "courant-sharp") {
        const int index = c.at("index").get<int>();
        out.name = prefix + "courant-sharp[" + std::to_string(index) + "]";
        const CourantReport& r = ensure_courant(ctx, index);
        const bool expected = c.at("expected").get<bool>();
        out.measured = r.sharp ? 1.0 : 0.0;
        out.reference = expected ? 1.0 : 0.0;
        out.passed = r.sharp == expected;
        out.detail = std::string(r.sharp ? "sharp" : "not sharp") + " (count " +
                     std::to_string(r.nodal_count) + ", position " + std::to_string(r.position) +
                     ")";
        return out;
    }

    if (type == "part-areas") {
        const int index = c.at("index").get<int>();
        out.name = prefix + "areas[" + std::to_string(index) + "]";
        const Partition& p = ensure_nodal(ctx, index);
        const int count = c.at("count").get<int>();
        const double rel_tol = c.at("rel_tol").get<double>();
        out.tolerance = rel_tol;
        if (p.k != count) {
            out.passed = false;
            out.detail = "expected " + std::to_string(count) + " parts, found " +
                         std::to_string(p.k);
            return out;
        }
        const std::vector<double> areas = part_areas(ctx.mesh, p);
        const double amin = *std::min_element(areas.begin(), areas.end());
        const double amax = *std::max_element(areas.begin(), areas.end());
        double mean = 0.0;
        for (double a : areas) mean += a;
        mean /= static_cast<double>(areas.size());
        const double spread = (amax - amin) / mean;
        out.measured = spread;
        out.reference = 0.0;
        out.passed = spread <= rel_tol;
        std::string list;
        for (double a : areas) list += (list.empty() ? "" : ", ") + fmt(a);
        out.detail = "areas " + list + " (spread " + fmt(spread) + ")";
        return out;
    }

    if (type == "nodal-energy") {
        const int index = c.at("index").get<int>();
        out.name = prefix + "nodal-energy[" + std::to_string(index) + "]";
        ensure_spectrum(ctx);
        const double lambda = ctx.spectrum.eigenvalues.at(static_cast<size_t>(index - 1));
        const PartitionEnergy& pe = ensure_nodal_energy(ctx, index);
        const double rel_tol = c.at("rel_tol").get<double>();
        const double rel = std::abs(pe.max_energy - lambda) / std::abs(lambda);
        out.measured = pe.max_energy;
        out.reference = lambda;
        out.tolerance = rel_tol;
        out.passed = std::isfinite(pe.max_energy) && rel <= rel_tol;
        out.detail = "max part energy " + fmt(pe.max_energy) + " vs lambda " + fmt(lambda) +
                     " (rel " + fmt(rel) + ")";
        return out;
    }

    if (type == "partition-energy") {
        const std::string pname = c.at("partition").get<std::string>();
        out.name = prefix + "Lambda(" + pname + ")";
        const PartitionEnergy& pe = ensure_partition_energy(ctx, pname);
        const double reference = c.at("reference").get<double>();
        const double rel_tol = c.at("rel_tol").get<double>();
        const double rel = std::abs(pe.max_energy - reference) / std::abs(reference);
        out.measured = pe.max_energy;
        out.reference = reference;
        out.tolerance = rel_tol;
        out.passed = std::isfinite(pe.max_energy) && rel <= rel_tol;
        out.detail = "max part energy " + fmt(pe.max_energy) + ", reference " + fmt(reference) +
                     " (rel err " + fmt(rel) + ")";
        if (c.contains("derivation"))
            out.detail += "; reference: " + c.at("derivation").get<std::string>();
        return out;
    }

    if (type == "energy-vs-eigenvalue") {
        const std::string pname = c.at("partition").get<std::string>();
        const int index = c.at("index").get<int>();
        out.name = prefix + "Lambda-vs-lambda[" + std::to_string(index) + "](" + pname + ")";
        ensure_spectrum(ctx);
        const double lambda = ctx.spectrum.eigenvalues.at(static_cast<size_t>(index - 1));
        const PartitionEnergy& pe = ensure_partition_energy(ctx, pname);
        const double rel_tol = c.at("rel_tol").get<double>();
        const double rel = std::abs(pe.max_energy - lambda) / std::abs(lambda);
        out.measured = pe.max_energy;
        out.reference = lambda;
        out.tolerance = rel_tol;
        out.passed = std::isfinite(pe.max_energy) && rel <= rel_tol;
        out.detail = "|Lambda - lambda| / lambda = " + fmt(rel);
        return out;
    }

    if (type == "lambda1-separation") {
        const std::string other = c.at("other").get<std::string>();
        out.name = prefix + "separation(" + ctx.spectral_cut + "," + other + ")";
        ensure_spectrum(ctx);
        const double a = ctx.spectrum.eigenvalues.at(0);
        const double b = ensure_other_lambda1(ctx, other);
        const double min_rel = c.at("min_rel").get<double>();
        const double sep = std::abs(a - b) / std::min(std::abs(a), std::abs(b));
        out.measured = sep;
        out.reference = min_rel;
        out.tolerance = min_rel;
        out.passed = sep >= min_rel;
        out.detail = "lambda1 " + fmt(a) + " vs " + fmt(b) + " (separation " + fmt(sep) + ")";
        return out;
    }

    throw InvalidArgument("unknown check type '" + type + "'");
}

std::string sanitize_filename(const std::string& raw) {
    std::string out;
    for (char ch : raw) {
        if (std::isalnum(static_cast<unsigned char>(ch)) || ch == '-' || ch == '_' || ch == '.')
            out += ch;
        else
            out += '-';
    }
    return out;
}

// Mesh + computed fields of one variant as VTK (always) and SVG (planar
// charts only).  Returns the files written.
std::vector<std::string> export_variant(VariantContext& ctx, const std::string& scenario_name,
                                        const std::string& label, const std::string& export_dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> written;
    if (!ctx.spectral_ready) return written;
    fs::create_directories(export_dir);
    const std::string stem =
        (fs::path(export_dir) /
         sanitize_filename(label.empty() ? scenario_name : scenario_name + "-" + label))
            .string();

    std::vector<std::pair<int, CornerField>> fields;
    for (const auto& [index, unused] : ctx.nodal) {
        (void)unused;
        fields.emplace_back(index,
                            corner_field(ctx.mesh, ctx.dofs,
                                         ctx.spectrum.eigenvectors[static_cast<size_t>(index - 1)],
                                         ctx.spectrum.eigenvalues[static_cast<size_t>(index - 1)]));
    }
    if (fields.empty())
        fields.emplace_back(1, corner_field(ctx.mesh, ctx.dofs, ctx.spectrum.eigenvectors[0],
                                            ctx.spectrum.eigenvalues[0]));

    std::vector<VtkPointField> point_fields;
    for (const auto& [index, field] : fields)
        point_fields.push_back({"mode_" + std::to_string(index), &field});
    std::vector<VtkCellField> cell_fields;
    for (const auto& [index, p] : ctx.nodal)
        cell_fields.push_back({"nodal_" + std::to_string(index), &p.label});
    const std::string vtk_path = stem + ".vtk";
    write_vtk_file(vtk_path, ctx.mesh, point_fields, cell_fields, scenario_name);
    written.push_back(vtk_path);

    bool planar = true;
    for (const Vec3& v : ctx.mesh.vertices) planar = planar && std::abs(v.z) <= 1e-9;
    if (planar) {
        std::vector<SvgLayer> layers;
        SvgLayer cut_layer;
        cut_layer.edges = cut_by_name(ctx, ctx.spectral_cut).edges;
        cut_layer.stroke = "#d62728";
        cut_layer.width_px = 3.0;
        if (!ctx.nodal.empty()) {
            SvgLayer nodal_layer;
            nodal_layer.edges = ctx.nodal.begin()->second.boundary_edges(ctx.mesh);
            nodal_layer.stroke = "#000000";
            nodal_layer.width_px = 1.5;
            layers.push_back(std::move(nodal_layer));
        }
        layers.push_back(std::move(cut_layer));
        const std::string svg_path = stem + ".svg";
        write_svg_file(svg_path, ctx.mesh, layers);
        written.push_back(svg_path);
    }
    return written;
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
    std::vector<ScenarioInfo> out;
    for (const json& s : catalog().at("scenarios")) {
        out.push_back({s.at("name").get<std::string>(), s.at("description").get<std::string>(),
                       s.at("statement").get<std::string>()});
    }
    return out;
}

bool is_registered_scenario(const std::string& name) { return find_scenario(name) != nullptr; }

const char* scenarios_config_text() { return embedded::kScenariosJson; }

ScenarioReport run_scenario(const std::string& name, int refinement_shift,
                            const std::string& export_dir) {
    const json* scenario = find_scenario(name);
    if (scenario == nullptr) throw InvalidArgument("unknown scenario '" + name + "'");

    ScenarioReport report;
    report.name = name;
    report.refinement_shift = refinement_shift;
    report.passed = true;

    for (const json& variant : scenario->at("variants")) {
        const std::string label = variant.value("label", std::string());
        const std::string prefix = label.empty() ? std::string() : label + ":";

        VariantContext ctx;
        ctx.v = &variant;
        ctx.shift = refinement_shift;
        try {
            ctx.mesh = mesh_from_recipe(variant.at("mesh"), refinement_shift);
            for (const json& c : variant.at("cuts"))
                ctx.cuts.emplace(c.at("name").get<std::string>(), cut_from_recipe(ctx.mesh, c));
            ctx.spectral_cut = variant.contains("spectral_cut")
                                   ? variant.at("spectral_cut").get<std::string>()
                                   : variant.at("cuts").at(0).at("name").get<std::string>();
            ctx.lock = variant.value("lock", false);
            ctx.lock_rel_gap = variant.value("lock_rel_gap", 0.005);
            ctx.zero_tol = variant.value("zero_tol", 0.02);
            int max_index = 1;
            for (const json& c : variant.at("checks"))
                if (c.contains("index")) max_index = std::max(max_index, c.at("index").get<int>());
            ctx.nev = std::max(variant.value("k", 1), max_index) + 4;
        } catch (const std::exception& e) {
            ScenarioCheck setup;
            setup.name = prefix + "setup";
            setup.passed = false;
            setup.measured = setup.reference = setup.tolerance = kNaN;
            setup.detail = e.what();
            report.checks.push_back(std::move(setup));
            report.passed = false;
            continue;
        }

        for (const json& c : variant.at("checks")) {
            ScenarioCheck result;
            try {
                result = eval_check(ctx, c, prefix);
            } catch (const std::exception& e) {
                result.name = prefix + c.value("type", std::string("check"));
                result.passed = false;
                result.measured = result.reference = result.tolerance = kNaN;
                result.detail = std::string("error: ") + e.what();
            }
            report.passed = report.passed && result.passed;
            report.checks.push_back(std::move(result));
        }

        if (!export_dir.empty()) {
            try {
                export_variant(ctx, name, label, export_dir);
            } catch (const std::exception& e) {
                ScenarioCheck exp;
                exp.name = prefix + "export";
                exp.passed = false;
                exp.measured = exp.reference = exp.tolerance = kNaN;
                exp.detail = std::string("export failed: ") + e.what();
                report.checks.push_back(std::move(exp));
                report.passed = false;
            }
        }
    }
    return report;
}

namespace {

json parse_recipe(const std::string& recipe) {
    try {
        return json::parse(recipe);
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("malformed recipe JSON: ") + e.what());
    }
}

}  // namespace

SurfaceMesh mesh_from_recipe_text(const std::string& recipe) {
    return mesh_from_recipe(parse_recipe(recipe), 0);
}

Cut cut_from_recipe_text(const SurfaceMesh& mesh, const std::string& recipe) {
    return cut_from_recipe(mesh, parse_recipe(recipe));
}

Partition partition_from_recipe_text(const SurfaceMesh& mesh, const std::string& recipe) {
    return partition_from_recipe(mesh, parse_recipe(recipe));
}

}  // namespace cutlap

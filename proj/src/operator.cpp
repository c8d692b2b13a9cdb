#include "cutlap/operator.hpp"

#include <algorithm>
#include <queue>
#include <string>

#include "cutlap/errors.hpp"

namespace cutlap {

void SparseSym::add(int i, int j, double value) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_) throw InvalidArgument("matrix index out of range");
    if (i < j) std::swap(i, j);
    entries_.push_back({i, j, value});
    compressed_ = false;
}

void SparseSym::compress() {
    if (compressed_) return;
    // Stable sort keeps duplicate accumulation in insertion (triangle) order,
    // making the compressed values bitwise deterministic.
    std::stable_sort(entries_.begin(), entries_.end(), [](const Entry& a, const Entry& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    std::vector<Entry> merged;
    merged.reserve(entries_.size());
    for (const Entry& e : entries_) {
        if (!merged.empty() && merged.back().row == e.row && merged.back().col == e.col)
            merged.back().value += e.value;
        else
            merged.push_back(e);
    }
    entries_ = std::move(merged);
    compressed_ = true;
}

const std::vector<SparseSym::Entry>& SparseSym::entries() const {
    if (!compressed_) throw InvalidArgument("matrix must be compressed before reading entries");
    return entries_;
}

std::vector<double> SparseSym::apply(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != n_) throw InvalidArgument("vector size does not match matrix");
    std::vector<double> y(static_cast<size_t>(n_), 0.0);
    for (const Entry& e : entries()) {
        y[static_cast<size_t>(e.row)] += e.value * x[static_cast<size_t>(e.col)];
        if (e.row != e.col) y[static_cast<size_t>(e.col)] += e.value * x[static_cast<size_t>(e.row)];
    }
    return y;
}

DofMap build_dof_map(const SurfaceMesh& mesh, const Cut& cut) {
    DofMap map;
    const int nt = mesh.n_triangles();
    map.corner_dof.assign(static_cast<size_t>(nt), {DofMap::kPinned, DofMap::kPinned, DofMap::kPinned});
    map.corner_sign.assign(static_cast<size_t>(nt), {0, 0, 0});

    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (!mesh.is_interior_vertex(v)) {
            map.pin_reasons.emplace(v, DofMap::PinReason::dirichlet_boundary);
            continue;
        }
        const VertexFan fan = vertex_fan(mesh, v);
        int n_cut = 0;
        for (int e : fan.crossed_edge)
            if (cut.contains(e)) ++n_cut;
        if (n_cut % 2 != 0) {
            map.pin_reasons.emplace(v, DofMap::PinReason::odd_point);
            continue;
        }
        const int dof = map.n_dofs++;
        map.dof_vertex.push_back(v);
        int sign = 1;  // first-visited sector is positive
        for (size_t i = 0; i < fan.tris.size(); ++i) {
            const int t = fan.tris[i];
            const int c = mesh.corner_of(t, v);
            map.corner_dof[static_cast<size_t>(t)][static_cast<size_t>(c)] = dof;
            map.corner_sign[static_cast<size_t>(t)][static_cast<size_t>(c)] = sign;
            if (i + 1 < fan.tris.size() && cut.contains(fan.crossed_edge[i])) sign = -sign;
        }
        // Even crossing count guarantees the walk returns to the starting
        // sign, so the assignment is independent of the fan's start triangle
        // up to a global flip per dof.
    }
    return map;
}

std::array<std::array<double, 3>, 3> stiffness_element(const SurfaceMesh& mesh, int t) {
    const auto& p = mesh.corner_pos[static_cast<size_t>(t)];
    const std::array<Vec3, 3> e = {p[2] - p[1], p[0] - p[2], p[1] - p[0]};
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0)) throw MeshError("degenerate triangle in stiffness assembly");
    std::array<std::array<double, 3>, 3> k{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            k[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                e[static_cast<size_t>(i)].dot(e[static_cast<size_t>(j)]) / (4.0 * area);
    return k;
}

std::array<std::array<double, 3>, 3> mass_element(const SurfaceMesh& mesh, int t) {
    const double area = mesh.triangle_area(t);
    if (!(area > 0.0)) throw MeshError("degenerate triangle in mass assembly");
    std::array<std::array<double, 3>, 3> m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            m[static_cast<size_t>(i)][static_cast<size_t>(j)] = area / 12.0 * (i == j ? 2.0 : 1.0);
    return m;
}

namespace {

template <typename Element>
SparseSym assemble(const SurfaceMesh& mesh, const DofMap& dofs, Element element) {
    SparseSym matrix(dofs.n_dofs);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& cd = dofs.corner_dof[static_cast<size_t>(t)];
        if (cd[0] == DofMap::kPinned && cd[1] == DofMap::kPinned && cd[2] == DofMap::kPinned)
            continue;
        const auto k = element(mesh, t);
        const auto& cs = dofs.corner_sign[static_cast<size_t>(t)];
        for (int i = 0; i < 3; ++i) {
            if (cd[static_cast<size_t>(i)] == DofMap::kPinned) continue;
            for (int j = 0; j <= i; ++j) {
                if (cd[static_cast<size_t>(j)] == DofMap::kPinned) continue;
                const double value = cs[static_cast<size_t>(i)] * cs[static_cast<size_t>(j)] *
                                     k[static_cast<size_t>(i)][static_cast<size_t>(j)];
                // Both (i,j) and (j,i) contribute to one stored entry for
                // distinct dofs; equal dofs (same vertex seen twice) never
                // happen within one triangle.
                matrix.add(cd[static_cast<size_t>(i)], cd[static_cast<size_t>(j)], value);
            }
        }
    }
    matrix.compress();
    return matrix;
}

}  // namespace

SparseSym assemble_stiffness(const SurfaceMesh& mesh, const DofMap& dofs) {
    return assemble(mesh, dofs, [](const SurfaceMesh& m, int t) { return stiffness_element(m, t); });
}

SparseSym assemble_mass(const SurfaceMesh& mesh, const DofMap& dofs) {
    return assemble(mesh, dofs, [](const SurfaceMesh& m, int t) { return mass_element(m, t); });
}

DirichletSystem assemble_dirichlet(const SurfaceMesh& mesh, const std::vector<int>& subdomain) {
    if (subdomain.empty()) throw InvalidArgument("subdomain must not be empty");
    std::vector<char> inside(static_cast<size_t>(mesh.n_triangles()), 0);
    for (int t : subdomain) {
        if (t < 0 || t >= mesh.n_triangles())
            throw InvalidArgument("subdomain triangle id " + std::to_string(t) + " out of range");
        if (inside[static_cast<size_t>(t)])
            throw InvalidArgument("duplicate subdomain triangle " + std::to_string(t));
        inside[static_cast<size_t>(t)] = 1;
    }

    // Dual connectivity within the subdomain.
    std::vector<char> seen(static_cast<size_t>(mesh.n_triangles()), 0);
    std::queue<int> frontier;
    frontier.push(subdomain.front());
    seen[static_cast<size_t>(subdomain.front())] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        const int t = frontier.front();
        frontier.pop();
        for (int e : mesh.tri_edges[static_cast<size_t>(t)]) {
            if (!mesh.is_interior_edge(e)) continue;
            const auto& et = mesh.edge_tris[static_cast<size_t>(e)];
            const int u = et[0] == t ? et[1] : et[0];
            if (!inside[static_cast<size_t>(u)] || seen[static_cast<size_t>(u)]) continue;
            seen[static_cast<size_t>(u)] = 1;
            ++reached;
            frontier.push(u);
        }
    }
    if (reached != static_cast<int>(subdomain.size()))
        throw InvalidArgument("subdomain is not connected in the dual graph");

    // Free vertices: interior to the mesh, with the entire full-mesh triangle
    // star inside the subdomain (this pins both sides of any slit).
    std::vector<int> star_total(static_cast<size_t>(mesh.n_vertices()), 0);
    std::vector<int> star_inside(static_cast<size_t>(mesh.n_vertices()), 0);
    for (int t = 0; t < mesh.n_triangles(); ++t)
        for (int v : mesh.triangles[static_cast<size_t>(t)]) {
            ++star_total[static_cast<size_t>(v)];
            if (inside[static_cast<size_t>(t)]) ++star_inside[static_cast<size_t>(v)];
        }

    DirichletSystem system;
    DofMap& map = system.dofs;
    map.corner_dof.assign(static_cast<size_t>(mesh.n_triangles()),
                          {DofMap::kPinned, DofMap::kPinned, DofMap::kPinned});
    map.corner_sign.assign(static_cast<size_t>(mesh.n_triangles()), {0, 0, 0});
    std::vector<int> vertex_dof(static_cast<size_t>(mesh.n_vertices()), DofMap::kPinned);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (star_inside[static_cast<size_t>(v)] == 0) continue;  // not part of the subdomain
        const bool free = mesh.is_interior_vertex(v) &&
                          star_inside[static_cast<size_t>(v)] == star_total[static_cast<size_t>(v)];
        if (free) {
            vertex_dof[static_cast<size_t>(v)] = map.n_dofs++;
            map.dof_vertex.push_back(v);
        } else {
            map.pin_reasons.emplace(v, DofMap::PinReason::dirichlet_boundary);
        }
    }
    for (int t : subdomain)
        for (int c = 0; c < 3; ++c) {
            const int v = mesh.triangles[static_cast<size_t>(t)][static_cast<size_t>(c)];
            const int d = vertex_dof[static_cast<size_t>(v)];
            if (d == DofMap::kPinned) continue;
            map.corner_dof[static_cast<size_t>(t)][static_cast<size_t>(c)] = d;
            map.corner_sign[static_cast<size_t>(t)][static_cast<size_t>(c)] = 1;
        }

    system.stiffness = assemble_stiffness(mesh, map);
    system.mass = assemble_mass(mesh, map);
    return system;
}

}  // namespace cutlap

#pragma once

// Shared helpers for the spectral test suites: independent construction of
// the standard cuts (loops, spokes, meridians) directly from vertex
// coordinates, plus small matrix builders.  These deliberately do not reuse
// any cut-construction code from the library so that tests cross-check it.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "cutlap/geometry.hpp"
#include "cutlap/operator.hpp"

namespace testsupport {

// Edges whose endpoints both satisfy `pred`.
template <typename Pred>
std::vector<int> edges_where(const cutlap::SurfaceMesh& mesh, Pred pred) {
    std::vector<int> out;
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const auto& [a, b] = mesh.edges[static_cast<size_t>(e)];
        if (pred(mesh.vertices[static_cast<size_t>(a)]) &&
            pred(mesh.vertices[static_cast<size_t>(b)]))
            out.push_back(e);
    }
    return out;
}

// Vertical run of edges at x == x0 (a loop on torus/cylinder meshes).
inline std::vector<int> vertical_loop(const cutlap::SurfaceMesh& mesh, double x0,
                                      double tol = 1e-9) {
    auto on_column = [&](const cutlap::Vec3& p) { return std::abs(p.x - x0) < tol; };
    std::vector<int> out;
    for (int e : edges_where(mesh, on_column)) {
        const auto& [a, b] = mesh.edges[static_cast<size_t>(e)];
        if (std::abs(mesh.vertices[static_cast<size_t>(a)].y -
                     mesh.vertices[static_cast<size_t>(b)].y) > tol)
            out.push_back(e);
    }
    if (out.empty()) throw std::runtime_error("no vertical edges at requested column");
    return out;
}

// Edges lying on the closed ray from the origin at `angle` (planar meshes).
inline std::vector<int> radial_spoke(const cutlap::SurfaceMesh& mesh, double angle,
                                     double tol = 1e-9) {
    const double c = std::cos(angle), s = std::sin(angle);
    auto on_ray = [&](const cutlap::Vec3& p) {
        return std::abs(p.x * s - p.y * c) < tol && p.x * c + p.y * s > -tol;
    };
    std::vector<int> out = edges_where(mesh, on_ray);
    if (out.empty()) throw std::runtime_error("no edges on requested ray");
    return out;
}

// Half great circle x >= 0 in the plane y == 0, pole to pole on the sphere.
inline std::vector<int> sphere_meridian(const cutlap::SurfaceMesh& mesh, double tol = 1e-9) {
    auto on_meridian = [&](const cutlap::Vec3& p) { return std::abs(p.y) < tol && p.x > -tol; };
    std::vector<int> out = edges_where(mesh, on_meridian);
    if (out.empty()) throw std::runtime_error("no meridian edges found");
    return out;
}

inline cutlap::SparseSym identity_matrix(int n) {
    cutlap::SparseSym m(n);
    for (int i = 0; i < n; ++i) m.add(i, i, 1.0);
    m.compress();
    return m;
}

// 1-D chain stiffness tridiag(-1, 2, -1) / h^2 on n interior nodes.
inline cutlap::SparseSym path_graph_stiffness(int n, double h) {
    cutlap::SparseSym k(n);
    const double w = 1.0 / (h * h);
    for (int i = 0; i < n; ++i) {
        k.add(i, i, 2.0 * w);
        if (i > 0) k.add(i, i - 1, -w);
    }
    k.compress();
    return k;
}

}  // namespace testsupport

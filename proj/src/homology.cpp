#include "cutlap/homology.hpp"

#include <algorithm>
#include <queue>
#include <string>
#include <utility>

#include "cutlap/errors.hpp"

namespace cutlap {

namespace {

void require_valid_edges(const SurfaceMesh& mesh, const std::vector<int>& edges) {
    int prev = -1;
    for (int e : edges) {
        if (e < 0 || e >= mesh.n_edges())
            throw InvalidArgument("cut edge id " + std::to_string(e) + " out of range");
        if (!mesh.is_interior_edge(e))
            throw InvalidArgument("cut may not contain mesh boundary edge " + std::to_string(e));
        if (e == prev) throw InvalidArgument("duplicate cut edge " + std::to_string(e));
        prev = e;
    }
}

// Row index per interior edge; -1 for boundary edges (quotiented away).
std::vector<int> interior_edge_rows(const SurfaceMesh& mesh, int* n_rows) {
    std::vector<int> row(static_cast<size_t>(mesh.n_edges()), -1);
    int next = 0;
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (mesh.is_interior_edge(e)) row[static_cast<size_t>(e)] = next++;
    *n_rows = next;
    return row;
}

// Relative boundary of a triangle set: interior edges covered an odd number
// of times.
std::vector<char> relative_boundary(const SurfaceMesh& mesh, const std::vector<int>& triangles) {
    std::vector<char> parity(static_cast<size_t>(mesh.n_edges()), 0);
    for (int t : triangles)
        for (int e : mesh.tri_edges[static_cast<size_t>(t)]) parity[static_cast<size_t>(e)] ^= 1;
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (!mesh.is_interior_edge(e)) parity[static_cast<size_t>(e)] = 0;
    return parity;
}

bool boundary_matches_cut(const SurfaceMesh& mesh, const std::vector<int>& triangles,
                          const std::vector<char>& cut_mask) {
    const std::vector<char> parity = relative_boundary(mesh, triangles);
    for (int e = 0; e < mesh.n_edges(); ++e)
        if (mesh.is_interior_edge(e) && parity[static_cast<size_t>(e)] != cut_mask[static_cast<size_t>(e)])
            return false;
    return true;
}

std::vector<char> edge_mask(const SurfaceMesh& mesh, const std::vector<int>& edges) {
    std::vector<char> mask(static_cast<size_t>(mesh.n_edges()), 0);
    for (int e : edges) mask[static_cast<size_t>(e)] = 1;
    return mask;
}

}  // namespace

Cut::Cut(const SurfaceMesh& mesh, std::vector<int> edge_ids) : edges(std::move(edge_ids)) {
    std::sort(edges.begin(), edges.end());
    require_valid_edges(mesh, edges);
}

bool Cut::contains(int edge) const {
    return std::binary_search(edges.begin(), edges.end(), edge);
}

Cut Cut::symmetric_difference(const SurfaceMesh& mesh, const Cut& a, const Cut& b) {
    std::vector<int> out;
    std::set_symmetric_difference(a.edges.begin(), a.edges.end(), b.edges.begin(), b.edges.end(),
                                  std::back_inserter(out));
    return Cut(mesh, std::move(out));
}

GF2Matrix boundary_matrix(const SurfaceMesh& mesh, int dim) {
    if (dim == 2) {
        GF2Matrix m(mesh.n_edges(), mesh.n_triangles());
        for (int t = 0; t < mesh.n_triangles(); ++t)
            for (int e : mesh.tri_edges[static_cast<size_t>(t)]) m.flip(e, t);
        return m;
    }
    if (dim == 1) {
        GF2Matrix m(mesh.n_vertices(), mesh.n_edges());
        for (int e = 0; e < mesh.n_edges(); ++e)
            for (int v : mesh.edges[static_cast<size_t>(e)]) m.flip(v, e);
        return m;
    }
    throw InvalidArgument("boundary_matrix dimension must be 1 or 2");
}

std::vector<int> odd_points(const SurfaceMesh& mesh, const Cut& cut) {
    require_valid_edges(mesh, cut.edges);
    std::vector<int> degree(static_cast<size_t>(mesh.n_vertices()), 0);
    for (int e : cut.edges)
        for (int v : mesh.edges[static_cast<size_t>(e)]) ++degree[static_cast<size_t>(v)];
    std::vector<int> odd;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (mesh.is_interior_vertex(v) && (degree[static_cast<size_t>(v)] & 1)) odd.push_back(v);
    return odd;
}

bool is_relative_cycle(const SurfaceMesh& mesh, const Cut& a, const Cut& b) {
    return odd_points(mesh, a) == odd_points(mesh, b);
}

HomologyCertificate null_homologous(const SurfaceMesh& mesh, const Cut& cut) {
    HomologyCertificate cert;
    if (!odd_points(mesh, cut).empty()) {
        cert.obstruction_note = "not a relative cycle";
        return cert;
    }

    int n_rows = 0;
    const std::vector<int> row = interior_edge_rows(mesh, &n_rows);
    GF2Matrix system(n_rows, mesh.n_triangles() + 1);
    for (int t = 0; t < mesh.n_triangles(); ++t)
        for (int e : mesh.tri_edges[static_cast<size_t>(t)])
            if (row[static_cast<size_t>(e)] >= 0) system.flip(row[static_cast<size_t>(e)], t);
    for (int e : cut.edges) system.flip(row[static_cast<size_t>(e)], mesh.n_triangles());

    GF2Elimination elim(std::move(system), mesh.n_triangles());
    if (!elim.solvable(0)) {
        cert.obstruction_note = "no triangle chain bounds the cut relative to the mesh boundary";
        return cert;
    }
    Chain2 witness;
    witness.triangles = elim.solution(0);
    if (!boundary_matches_cut(mesh, witness.triangles, edge_mask(mesh, cut.edges)))
        throw SolverError("null-homology witness failed substitution check");
    cert.verdict = true;
    cert.chain = std::move(witness);

    // The chain doubles as a sign pattern: minus on chain triangles, plus
    // elsewhere changes sign exactly across the cut edges.
    TriangleColoring coloring;
    coloring.color.assign(static_cast<size_t>(mesh.n_triangles()), 1);
    for (int t : cert.chain->triangles) coloring.color[static_cast<size_t>(t)] = -1;
    cert.coloring = std::move(coloring);
    return cert;
}

HomologyCertificate two_coloring(const SurfaceMesh& mesh, const Cut& cut) {
    require_valid_edges(mesh, cut.edges);
    HomologyCertificate cert;
    TriangleColoring coloring;
    coloring.color.assign(static_cast<size_t>(mesh.n_triangles()), 0);

    for (int seed = 0; seed < mesh.n_triangles(); ++seed) {
        if (coloring.color[static_cast<size_t>(seed)] != 0) continue;
        coloring.color[static_cast<size_t>(seed)] = 1;  // first triangle of each component: plus
        std::queue<int> frontier;
        frontier.push(seed);
        while (!frontier.empty()) {
            const int t = frontier.front();
            frontier.pop();
            const int ct = coloring.color[static_cast<size_t>(t)];
            for (int e : mesh.tri_edges[static_cast<size_t>(t)]) {
                if (!mesh.is_interior_edge(e)) continue;
                const auto& et = mesh.edge_tris[static_cast<size_t>(e)];
                const int u = et[0] == t ? et[1] : et[0];
                const int want = cut.contains(e) ? -ct : ct;
                int& cu = coloring.color[static_cast<size_t>(u)];
                if (cu == 0) {
                    cu = want;
                    frontier.push(u);
                } else if (cu != want) {
                    cert.obstruction_note =
                        "coloring conflict across edge " + std::to_string(e) +
                        ": the cut is not the boundary of a two-coloring";
                    return cert;
                }
            }
        }
    }
    cert.verdict = true;
    cert.coloring = std::move(coloring);
    return cert;
}

HomologyCertificate are_homologous(const SurfaceMesh& mesh, const Cut& a, const Cut& b) {
    HomologyCertificate cert = null_homologous(mesh, Cut::symmetric_difference(mesh, a, b));
    if (!cert.verdict && !cert.obstruction_note.empty())
        cert.obstruction_note = "symmetric difference: " + cert.obstruction_note;
    return cert;
}

int h1_rank(const SurfaceMesh& mesh) {
    int n_edge_rows = 0;
    const std::vector<int> edge_row = interior_edge_rows(mesh, &n_edge_rows);

    std::vector<int> vertex_row(static_cast<size_t>(mesh.n_vertices()), -1);
    int n_vertex_rows = 0;
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (mesh.is_interior_vertex(v)) vertex_row[static_cast<size_t>(v)] = n_vertex_rows++;

    // Relative d1: interior-vertex rows by interior-edge columns.
    GF2Matrix d1(n_vertex_rows, n_edge_rows);
    for (int e = 0; e < mesh.n_edges(); ++e) {
        const int col = edge_row[static_cast<size_t>(e)];
        if (col < 0) continue;
        for (int v : mesh.edges[static_cast<size_t>(e)])
            if (vertex_row[static_cast<size_t>(v)] >= 0) d1.flip(vertex_row[static_cast<size_t>(v)], col);
    }

    // Relative d2: interior-edge rows by triangle columns.
    GF2Matrix d2(n_edge_rows, mesh.n_triangles());
    for (int t = 0; t < mesh.n_triangles(); ++t)
        for (int e : mesh.tri_edges[static_cast<size_t>(t)])
            if (edge_row[static_cast<size_t>(e)] >= 0) d2.flip(edge_row[static_cast<size_t>(e)], t);

    const int rank_d1 = gf2_rank(std::move(d1));
    const int rank_d2 = gf2_rank(std::move(d2));
    return (n_edge_rows - rank_d1) - rank_d2;
}

std::optional<Cut> exists_homologous_subset(const SurfaceMesh& mesh,
                                            const std::vector<int>& candidate_edges,
                                            const Cut& target) {
    std::vector<int> candidates = candidate_edges;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    require_valid_edges(mesh, candidates);
    require_valid_edges(mesh, target.edges);

    int n_rows = 0;
    const std::vector<int> row = interior_edge_rows(mesh, &n_rows);
    const int nt = mesh.n_triangles();
    const int nc = static_cast<int>(candidates.size());

    // Variables: triangle chain first, then candidate edges; one RHS column.
    GF2Matrix system(n_rows, nt + nc + 1);
    for (int t = 0; t < nt; ++t)
        for (int e : mesh.tri_edges[static_cast<size_t>(t)])
            if (row[static_cast<size_t>(e)] >= 0) system.flip(row[static_cast<size_t>(e)], t);
    for (int i = 0; i < nc; ++i) system.flip(row[static_cast<size_t>(candidates[static_cast<size_t>(i)])], nt + i);
    for (int e : target.edges) system.flip(row[static_cast<size_t>(e)], nt + nc);

    GF2Elimination elim(std::move(system), nt + nc);
    if (!elim.solvable(0)) return std::nullopt;

    std::vector<int> chosen;
    for (int var : elim.solution(0))
        if (var >= nt) chosen.push_back(candidates[static_cast<size_t>(var - nt)]);
    Cut subset(mesh, std::move(chosen));
    if (!are_homologous(mesh, subset, target).verdict)
        throw SolverError("homologous-subset witness failed verification");
    return subset;
}

}  // namespace cutlap

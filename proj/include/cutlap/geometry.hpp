#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace cutlap {

// Shift delta by multiples of period into [-period/2, period/2] (identity for
// period <= 0); the displacement convention for periodic coordinates.
double min_image(double delta, double period);

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3() = default;
    Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    Vec3 cross(const Vec3& o) const {
        return {y * o.z - z * o.y, z * o.x - x * o.z, x * o.y - y * o.x};
    }
    double norm() const { return std::sqrt(dot(*this)); }
};

// Oriented manifold triangle mesh with optional boundary.
//
// `vertices`/`triangles` are the defining data; everything else is derived by
// finalize(), which also validates manifoldness and orientation consistency.
//
// Flat quotient surfaces (flat torus/cylinder built by identifying rectangle
// sides) store fundamental-domain coordinates in `vertices` and the period(s)
// in `period_x`/`period_y`; `corner_pos` then holds per-triangle minimum-image
// ("unwrapped") corner positions, which are the authoritative geometry for all
// metric computations.  A 3-space embedding of the flat torus would not be
// flat, so seam triangles must be measured in the unwrapped chart.
struct SurfaceMesh {
    std::string surface_tag = "custom";  // disk|sphere|torus|cylinder|rectangle|custom
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;  // consistently oriented vertex triples
    double period_x = 0.0;                      // 0 = not periodic in x
    double period_y = 0.0;

    // Derived by finalize():
    std::vector<std::array<int, 2>> edges;      // vertex pairs, u < v, deterministic order
    std::vector<std::array<int, 3>> tri_edges;  // tri_edges[t][c] joins corners c and c+1 (mod 3)
    std::vector<std::array<int, 2>> edge_tris;  // incident triangles; [1] = -1 on boundary
    std::vector<char> boundary_edge;
    std::vector<char> boundary_vertex;
    std::vector<std::array<Vec3, 3>> corner_pos;
    std::unordered_map<uint64_t, int> edge_lookup;  // packed (u,v) -> edge id
    std::vector<int> vertex_tri;                    // one incident triangle per vertex

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_edges() const { return static_cast<int>(edges.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
    bool is_interior_edge(int e) const { return !boundary_edge[static_cast<size_t>(e)]; }
    bool is_interior_vertex(int v) const { return !boundary_vertex[static_cast<size_t>(v)]; }

    // Edge id joining vertices u,v or -1 if absent.
    int find_edge(int u, int v) const;

    // Corner (0..2) of vertex v within triangle t, or -1.
    int corner_of(int t, int v) const;

    // Builds edges/incidence/boundary/corner_pos and validates:
    // every edge has 1 or 2 incident triangles, shared edges are traversed in
    // opposite directions, triangle areas are positive, vertex stars are
    // single fans (no bowties).  Throws MeshError on violation.
    void finalize();

    double triangle_area(int t) const;
    double total_area() const;
    double edge_length(int e) const;
};

// Ordered triangle fan around a vertex.  For an interior vertex the fan is
// cyclic: crossed_edge[i] joins tris[i] and tris[i+1 mod size], always through
// vertex v.  For a boundary vertex the fan is an open strip and crossed_edge
// has size()-1 entries.
struct VertexFan {
    std::vector<int> tris;
    std::vector<int> crossed_edge;
    bool closed = false;
};

VertexFan vertex_fan(const SurfaceMesh& mesh, int v);

// Connected walk of mesh edges: either closed or open with two endpoints.
struct EdgePath {
    std::vector<int> edges;
    std::array<int, 2> endpoints = {-1, -1};  // {-1,-1} when closed
    bool closed = false;
};

// Validates that `edge_ids` forms a connected walk and derives endpoints.
EdgePath make_edge_path(const SurfaceMesh& mesh, const std::vector<int>& edge_ids);

struct MeshStats {
    int n_vertices = 0;
    int n_edges = 0;
    int n_triangles = 0;
    int euler = 0;
    int boundary_loops = 0;
    double area = 0.0;
};

MeshStats mesh_stats(const SurfaceMesh& mesh);

// Boundary loops as cyclically ordered vertex lists (empty for closed surfaces).
std::vector<std::vector<int>> boundary_loops(const SurfaceMesh& mesh);

// Expected Euler characteristic for a canonical surface tag, or INT_MIN for custom.
int expected_euler(const std::string& surface_tag);

}  // namespace cutlap

#include "cutlap/geometry.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstddef>
#include <unordered_map>

#include "cutlap/errors.hpp"

namespace cutlap {

namespace {

uint64_t edge_key(int u, int v) {
    if (u > v) std::swap(u, v);
    return (static_cast<uint64_t>(static_cast<uint32_t>(u)) << 32) | static_cast<uint32_t>(v);
}

}  // namespace

double min_image(double delta, double period) {
    if (period > 0.0) delta -= period * std::round(delta / period);
    return delta;
}

int SurfaceMesh::find_edge(int u, int v) const {
    auto it = edge_lookup.find(edge_key(u, v));
    return it == edge_lookup.end() ? -1 : it->second;
}

int SurfaceMesh::corner_of(int t, int v) const {
    const auto& tri = triangles[static_cast<size_t>(t)];
    for (int c = 0; c < 3; ++c)
        if (tri[static_cast<size_t>(c)] == v) return c;
    return -1;
}

void SurfaceMesh::finalize() {
    const int nv = n_vertices();
    const int nt = n_triangles();
    if (nv < 3 || nt < 1) throw MeshError("mesh needs at least 3 vertices and 1 triangle");

    for (const auto& tri : triangles) {
        for (int c = 0; c < 3; ++c) {
            int v = tri[static_cast<size_t>(c)];
            if (v < 0 || v >= nv) throw MeshError("triangle references vertex out of range");
        }
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            throw MeshError("degenerate triangle with repeated vertex");
    }

    edges.clear();
    tri_edges.assign(static_cast<size_t>(nt), {-1, -1, -1});
    edge_tris.clear();

    edge_lookup.clear();
    auto& edge_id = edge_lookup;
    edge_id.reserve(static_cast<size_t>(nt) * 2);
    // Directed half-edge occupancy: a consistently oriented manifold mesh uses
    // each direction of an edge at most once.
    std::unordered_map<uint64_t, int> directed_count;
    directed_count.reserve(static_cast<size_t>(nt) * 3);

    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles[static_cast<size_t>(t)];
        for (int c = 0; c < 3; ++c) {
            int a = tri[static_cast<size_t>(c)];
            int b = tri[static_cast<size_t>((c + 1) % 3)];
            uint64_t dkey = (static_cast<uint64_t>(static_cast<uint32_t>(a)) << 32) |
                            static_cast<uint32_t>(b);
            if (++directed_count[dkey] > 1)
                throw MeshError("non-manifold or inconsistently oriented mesh: directed edge " +
                                std::to_string(a) + "->" + std::to_string(b) + " reused");
            uint64_t key = edge_key(a, b);
            auto it = edge_id.find(key);
            int e;
            if (it == edge_id.end()) {
                e = static_cast<int>(edges.size());
                edge_id.emplace(key, e);
                edges.push_back({std::min(a, b), std::max(a, b)});
                edge_tris.push_back({t, -1});
            } else {
                e = it->second;
                auto& inc = edge_tris[static_cast<size_t>(e)];
                if (inc[1] != -1)
                    throw MeshError("non-manifold mesh: edge " + std::to_string(edges[static_cast<size_t>(e)][0]) +
                                    "-" + std::to_string(edges[static_cast<size_t>(e)][1]) +
                                    " has more than 2 incident triangles");
                inc[1] = t;
            }
            tri_edges[static_cast<size_t>(t)][static_cast<size_t>(c)] = e;
        }
    }

    const int ne = n_edges();
    boundary_edge.assign(static_cast<size_t>(ne), 0);
    boundary_vertex.assign(static_cast<size_t>(nv), 0);
    for (int e = 0; e < ne; ++e) {
        if (edge_tris[static_cast<size_t>(e)][1] == -1) {
            boundary_edge[static_cast<size_t>(e)] = 1;
            boundary_vertex[static_cast<size_t>(edges[static_cast<size_t>(e)][0])] = 1;
            boundary_vertex[static_cast<size_t>(edges[static_cast<size_t>(e)][1])] = 1;
        }
    }

    corner_pos.assign(static_cast<size_t>(nt), {});
    for (int t = 0; t < nt; ++t) {
        const auto& tri = triangles[static_cast<size_t>(t)];
        Vec3 base = vertices[static_cast<size_t>(tri[0])];
        corner_pos[static_cast<size_t>(t)][0] = base;
        for (int c = 1; c < 3; ++c) {
            Vec3 p = vertices[static_cast<size_t>(tri[static_cast<size_t>(c)])];
            Vec3 d = p - base;
            d.x = min_image(d.x, period_x);
            d.y = min_image(d.y, period_y);
            corner_pos[static_cast<size_t>(t)][static_cast<size_t>(c)] = base + d;
        }
    }

    for (int t = 0; t < nt; ++t) {
        if (triangle_area(t) <= 0.0)
            throw MeshError("triangle " + std::to_string(t) + " has nonpositive area");
    }

    vertex_tri.assign(static_cast<size_t>(nv), -1);
    std::vector<int> incident_count(static_cast<size_t>(nv), 0);
    for (int t = 0; t < nt; ++t) {
        for (int c = 0; c < 3; ++c) {
            int v = triangles[static_cast<size_t>(t)][static_cast<size_t>(c)];
            ++incident_count[static_cast<size_t>(v)];
            if (vertex_tri[static_cast<size_t>(v)] < 0) vertex_tri[static_cast<size_t>(v)] = t;
        }
    }
    // Vertex-manifoldness: the incident triangles of each vertex form a single fan.
    for (int v = 0; v < nv; ++v) {
        if (incident_count[static_cast<size_t>(v)] == 0)
            throw MeshError("isolated vertex " + std::to_string(v));
        VertexFan fan = vertex_fan(*this, v);
        if (static_cast<int>(fan.tris.size()) != incident_count[static_cast<size_t>(v)])
            throw MeshError("non-manifold vertex star at vertex " + std::to_string(v));
    }
}

double SurfaceMesh::triangle_area(int t) const {
    const auto& p = corner_pos[static_cast<size_t>(t)];
    return 0.5 * (p[1] - p[0]).cross(p[2] - p[0]).norm();
}

double SurfaceMesh::total_area() const {
    double a = 0.0;
    for (int t = 0; t < n_triangles(); ++t) a += triangle_area(t);
    return a;
}

double SurfaceMesh::edge_length(int e) const {
    int t = edge_tris[static_cast<size_t>(e)][0];
    const auto& tri = triangles[static_cast<size_t>(t)];
    const auto& te = tri_edges[static_cast<size_t>(t)];
    for (int c = 0; c < 3; ++c) {
        if (te[static_cast<size_t>(c)] == e) {
            (void)tri;
            const auto& p = corner_pos[static_cast<size_t>(t)];
            return (p[static_cast<size_t>((c + 1) % 3)] - p[static_cast<size_t>(c)]).norm();
        }
    }
    throw MeshError("edge/triangle incidence out of sync");
}

VertexFan vertex_fan(const SurfaceMesh& mesh, int v) {
    if (v < 0 || v >= mesh.n_vertices()) throw InvalidArgument("vertex_fan: vertex id out of range");
    int start = v < static_cast<int>(mesh.vertex_tri.size()) ? mesh.vertex_tri[static_cast<size_t>(v)] : -1;
    if (start < 0)
        for (int t = 0; t < mesh.n_triangles() && start < 0; ++t)
            if (mesh.corner_of(t, v) >= 0) start = t;
    if (start < 0) throw MeshError("vertex_fan: vertex has no incident triangle");

    auto neighbor_across = [&](int t, int e) -> int {
        const auto& inc = mesh.edge_tris[static_cast<size_t>(e)];
        return inc[0] == t ? inc[1] : inc[0];
    };
    // In triangle t with corners (v, p, q) in orientation order, the fan
    // continues counterclockwise across edge (v, q) and clockwise across (v, p).
    auto edge_at = [&](int t, bool ccw) -> int {
        int c = mesh.corner_of(t, v);
        const auto& te = mesh.tri_edges[static_cast<size_t>(t)];
        // edge (corner c, corner c+1) = edge (v, p); edge (corner c+2, corner c) = edge (q, v)
        return ccw ? te[static_cast<size_t>((c + 2) % 3)] : te[static_cast<size_t>(c)];
    };

    VertexFan fan;
    fan.tris.push_back(start);
    int t = start;
    while (true) {
        int e = edge_at(t, /*ccw=*/true);
        int nxt = neighbor_across(t, e);
        if (nxt == -1) break;  // hit boundary going ccw
        if (nxt == start) {
            fan.crossed_edge.push_back(e);
            fan.closed = true;
            return fan;
        }
        fan.crossed_edge.push_back(e);
        fan.tris.push_back(nxt);
        t = nxt;
        if (static_cast<int>(fan.tris.size()) > mesh.n_triangles())
            throw MeshError("vertex_fan: walk does not terminate (corrupt incidence)");
    }
    // Open fan: extend clockwise from the start triangle to the other boundary edge.
    t = start;
    while (true) {
        int e = edge_at(t, /*ccw=*/false);
        int nxt = neighbor_across(t, e);
        if (nxt == -1) break;
        fan.tris.insert(fan.tris.begin(), nxt);
        fan.crossed_edge.insert(fan.crossed_edge.begin(), e);
        t = nxt;
        if (static_cast<int>(fan.tris.size()) > mesh.n_triangles())
            throw MeshError("vertex_fan: walk does not terminate (corrupt incidence)");
    }
    fan.closed = false;
    return fan;
}

EdgePath make_edge_path(const SurfaceMesh& mesh, const std::vector<int>& edge_ids) {
    EdgePath path;
    path.edges = edge_ids;
    if (edge_ids.empty()) throw InvalidArgument("edge path must contain at least one edge");
    for (int e : edge_ids)
        if (e < 0 || e >= mesh.n_edges()) throw InvalidArgument("edge path references invalid edge id");

    if (edge_ids.size() == 1) {
        path.endpoints = {mesh.edges[static_cast<size_t>(edge_ids[0])][0],
                          mesh.edges[static_cast<size_t>(edge_ids[0])][1]};
        path.closed = false;
        return path;
    }

    // Reconstruct the vertex chain: orient the first edge so that it connects
    // to the second, then follow shared vertices.
    auto ends = [&](int e) { return mesh.edges[static_cast<size_t>(e)]; };
    auto shares = [&](int e, int v) { return ends(e)[0] == v || ends(e)[1] == v; };

    int first = edge_ids[0], second = edge_ids[1];
    int v0, v1;
    if (shares(second, ends(first)[1])) {
        v0 = ends(first)[0];
        v1 = ends(first)[1];
    } else if (shares(second, ends(first)[0])) {
        v0 = ends(first)[1];
        v1 = ends(first)[0];
    } else {
        throw InvalidArgument("edge path is not a connected walk (edges 0 and 1 disjoint)");
    }
    int cur = v1;
    for (size_t i = 1; i < edge_ids.size(); ++i) {
        auto e = ends(edge_ids[i]);
        if (e[0] == cur) {
            cur = e[1];
        } else if (e[1] == cur) {
            cur = e[0];
        } else {
            throw InvalidArgument("edge path is not a connected walk at position " + std::to_string(i));
        }
    }
    if (cur == v0) {
        path.closed = true;
        path.endpoints = {-1, -1};
    } else {
        path.closed = false;
        path.endpoints = {v0, cur};
    }
    return path;
}

std::vector<std::vector<int>> boundary_loops(const SurfaceMesh& mesh) {
    // Directed boundary traversal: each boundary edge appears in exactly one
    // triangle as a directed pair (a,b); following b's outgoing boundary edge
    // closes the loops.
    std::unordered_map<int, int> next_vertex;  // a -> b along the boundary orientation
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[static_cast<size_t>(t)];
        const auto& te = mesh.tri_edges[static_cast<size_t>(t)];
        for (int c = 0; c < 3; ++c) {
            int e = te[static_cast<size_t>(c)];
            if (!mesh.boundary_edge[static_cast<size_t>(e)]) continue;
            int a = tri[static_cast<size_t>(c)];
            int b = tri[static_cast<size_t>((c + 1) % 3)];
            if (next_vertex.count(a))
                throw MeshError("boundary is not a disjoint union of simple loops");
            next_vertex[a] = b;
        }
    }
    std::vector<std::vector<int>> loops;
    std::unordered_map<int, char> visited;
    // Deterministic loop order: scan vertices in index order.
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (!next_vertex.count(v) || visited.count(v)) continue;
        std::vector<int> loop;
        int cur = v;
        do {
            loop.push_back(cur);
            visited[cur] = 1;
            auto it = next_vertex.find(cur);
            if (it == next_vertex.end()) throw MeshError("boundary loop does not close");
            cur = it->second;
        } while (cur != v);
        loops.push_back(std::move(loop));
    }
    return loops;
}

MeshStats mesh_stats(const SurfaceMesh& mesh) {
    MeshStats s;
    s.n_vertices = mesh.n_vertices();
    s.n_edges = mesh.n_edges();
    s.n_triangles = mesh.n_triangles();
    s.euler = s.n_vertices - s.n_edges + s.n_triangles;
    s.boundary_loops = static_cast<int>(boundary_loops(mesh).size());
    s.area = mesh.total_area();
    return s;
}

int expected_euler(const std::string& surface_tag) {
    if (surface_tag == "disk" || surface_tag == "rectangle") return 1;
    if (surface_tag == "sphere") return 2;
    if (surface_tag == "torus" || surface_tag == "cylinder") return 0;
    return INT_MIN;
}

}  // namespace cutlap

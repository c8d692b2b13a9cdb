#include "cutlap/builders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <tuple>

#include "cutlap/errors.hpp"

namespace cutlap {

namespace {

constexpr double kPi = std::numbers::pi;

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

double wrap_coordinate(double x, double period) {
    if (period <= 0.0) return x;
    double y = std::fmod(x, period);
    if (y < 0.0) y += period;
    if (y >= period) y = 0.0;
    return y;
}

}  // namespace

SurfaceMesh build_rectangle(double width, double height, int nx, int ny, Identify identify) {
    if (!positive_finite(width) || !positive_finite(height))
        throw InvalidArgument("build_rectangle: width and height must be positive finite lengths");
    if (nx < 2 || ny < 2) throw InvalidArgument("build_rectangle: nx and ny must be at least 2");
    const bool wrap_x = identify != Identify::none;
    const bool wrap_y = identify == Identify::both;
    // A 2-cell identified direction would need two distinct edges between the
    // same vertex pair, which a simplicial mesh cannot represent.
    if ((wrap_x && nx < 3) || (wrap_y && ny < 3))
        throw InvalidArgument("build_rectangle: identified directions need at least 3 cells");

    SurfaceMesh m;
    m.surface_tag = identify == Identify::none ? "rectangle"
                    : identify == Identify::horizontal ? "cylinder"
                                                       : "torus";
    m.period_x = wrap_x ? width : 0.0;
    m.period_y = wrap_y ? height : 0.0;

    const int ncols = wrap_x ? nx : nx + 1;
    const int nrows = wrap_y ? ny : ny + 1;
    m.vertices.reserve(static_cast<size_t>(ncols) * nrows);
    for (int j = 0; j < nrows; ++j)
        for (int i = 0; i < ncols; ++i)
            m.vertices.push_back({width * i / nx, height * j / ny, 0.0});

    auto vid = [&](int i, int j) {
        if (wrap_x) i %= nx;
        if (wrap_y) j %= ny;
        return j * ncols + i;
    };
    m.triangles.reserve(static_cast<size_t>(2) * nx * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int v00 = vid(i, j), v10 = vid(i + 1, j);
            int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
            // Mirror-symmetric diagonal pattern about the x = 0 seam (and the
            // midline): cells i and nx-1-i hold mirrored splits.
            if (2 * i + 1 <= nx) {
                m.triangles.push_back({v00, v10, v11});
                m.triangles.push_back({v00, v11, v01});
            } else {
                m.triangles.push_back({v00, v10, v01});
                m.triangles.push_back({v10, v11, v01});
            }
        }
    }
    m.finalize();
    return m;
}

SurfaceMesh build_disk(int refinement, int graded_rings) {
    if (refinement < 0) throw InvalidArgument("build_disk: refinement must be >= 0");
    if (graded_rings < 0) throw InvalidArgument("build_disk: graded_rings must be >= 0");

    SurfaceMesh m;
    m.surface_tag = "disk";

    auto add_ring = [&m](double radius, int count) {
        int first = static_cast<int>(m.vertices.size());
        for (int k = 0; k < count; ++k) {
            double a = 2.0 * kPi * k / count;
            m.vertices.push_back({radius * std::cos(a), radius * std::sin(a), 0.0});
        }
        return first;
    };
    // Annular band between two rings with equal vertex counts; the diagonal
    // flips at the half turn so the band is mirror symmetric about the x-axis.
    auto quad_band = [&m](int outer_first, int inner_first, int count) {
        for (int k = 0; k < count; ++k) {
            int o0 = outer_first + k, o1 = outer_first + (k + 1) % count;
            int i0 = inner_first + k, i1 = inner_first + (k + 1) % count;
            if (2 * k < count) {
                m.triangles.push_back({o0, o1, i1});
                m.triangles.push_back({o0, i1, i0});
            } else {
                m.triangles.push_back({o0, o1, i0});
                m.triangles.push_back({o1, i1, i0});
            }
        }
    };
    // Band halving the angular count: three triangles per coarse sector, the
    // middle fine vertex as apex; symmetric within each sector.
    auto doubling_band = [&m](int fine_first, int fine_count, int coarse_first) {
        int nc = fine_count / 2;
        for (int i = 0; i < nc; ++i) {
            int c0 = coarse_first + i, c1 = coarse_first + (i + 1) % nc;
            int f0 = fine_first + 2 * i;
            int f1 = fine_first + (2 * i + 1) % fine_count;
            int f2 = fine_first + (2 * i + 2) % fine_count;
            m.triangles.push_back({c0, f0, f1});
            m.triangles.push_back({c0, f1, c1});
            m.triangles.push_back({c1, f1, f2});
        }
    };
    auto centre_fan = [&m](int ring_first, int count, int centre) {
        for (int k = 0; k < count; ++k)
            m.triangles.push_back({centre, ring_first + k, ring_first + (k + 1) % count});
    };
    auto graded_core = [&](int ring_first, int count, double radius) {
        int prev = ring_first;
        for (int t = 0; t < graded_rings; ++t) {
            radius *= 0.5;
            int next = add_ring(radius, count);
            quad_band(prev, next, count);
            prev = next;
        }
        int centre = static_cast<int>(m.vertices.size());
        m.vertices.push_back({0.0, 0.0, 0.0});
        centre_fan(prev, count, centre);
    };

    if (refinement <= 1) {
        int n = refinement == 0 ? 3 : 6;
        graded_core(add_ring(1.0, n), n, 1.0);
        m.finalize();
        return m;
    }

    const int r = refinement;
    const double spacing = std::ldexp(1.0, 1 - r);  // uniform radial step 2^(1-r)
    // Zone j covers radii [2^-(j+1), 2^-j] with rings of 3*2^(r-j) vertices;
    // counts halve zone by zone down to a 12-gon, so every spoke at a
    // multiple of 30 degrees stays an exact edge path into the core.
    int prev_first = add_ring(1.0, 3 << r);
    int prev_count = 3 << r;
    for (int j = 0; j <= r - 2; ++j) {
        const int count = 3 << (r - j);
        const int layers = count / 12;
        const double outer_radius = std::ldexp(1.0, -j);
        for (int t = 1; t <= layers; ++t) {
            int first = add_ring(outer_radius - t * spacing, count);
            if (j > 0 && t == 1)
                doubling_band(prev_first, prev_count, first);
            else
                quad_band(prev_first, first, count);
            prev_first = first;
            prev_count = count;
        }
    }
    graded_core(prev_first, 12, std::ldexp(1.0, 1 - r));
    m.finalize();
    return m;
}

SurfaceMesh build_sphere(int refinement) {
    if (refinement < 0) throw InvalidArgument("build_sphere: refinement must be >= 0");
    SurfaceMesh m;
    m.surface_tag = "sphere";
    m.vertices.push_back({0.0, 0.0, 1.0});   // north pole
    m.vertices.push_back({0.0, 0.0, -1.0});  // south pole
    for (int k = 0; k < 6; ++k) {
        double a = kPi * k / 3.0;
        m.vertices.push_back({std::cos(a), std::sin(a), 0.0});
    }
    for (int k = 0; k < 6; ++k) {
        int e0 = 2 + k, e1 = 2 + (k + 1) % 6;
        m.triangles.push_back({0, e0, e1});
        m.triangles.push_back({1, e1, e0});
    }
    m.finalize();
    for (int t = 0; t < refinement; ++t) m = refine(m);
    return m;
}

SurfaceMesh build_annulus(double r_inner, double r_outer, int n_theta, int n_radial) {
    if (!positive_finite(r_inner) || !positive_finite(r_outer) || r_inner >= r_outer)
        throw InvalidArgument("build_annulus: need 0 < r_inner < r_outer");
    if (n_theta < 3 || n_radial < 1)
        throw InvalidArgument("build_annulus: need n_theta >= 3 and n_radial >= 1");

    SurfaceMesh m;
    m.surface_tag = "custom";
    for (int j = 0; j <= n_radial; ++j) {
        double rho = r_inner + (r_outer - r_inner) * j / n_radial;
        for (int i = 0; i < n_theta; ++i) {
            double a = 2.0 * kPi * i / n_theta;
            m.vertices.push_back({rho * std::cos(a), rho * std::sin(a), 0.0});
        }
    }
    auto vid = [&](int i, int j) { return j * n_theta + (i % n_theta); };
    for (int j = 0; j < n_radial; ++j) {
        for (int i = 0; i < n_theta; ++i) {
            // Outer ring is j+1; mirror-symmetric diagonals about the x-axis.
            int o0 = vid(i, j + 1), o1 = vid(i + 1, j + 1);
            int i0 = vid(i, j), i1 = vid(i + 1, j);
            if (2 * i < n_theta) {
                m.triangles.push_back({o0, o1, i1});
                m.triangles.push_back({o0, i1, i0});
            } else {
                m.triangles.push_back({o0, o1, i0});
                m.triangles.push_back({o1, i1, i0});
            }
        }
    }
    m.finalize();
    return m;
}

RefineResult refine_with_map(const SurfaceMesh& mesh) {
    RefineResult out;
    SurfaceMesh& child = out.mesh;
    child.surface_tag = mesh.surface_tag;
    child.period_x = mesh.period_x;
    child.period_y = mesh.period_y;
    child.vertices = mesh.vertices;

    const int nv = mesh.n_vertices();
    const bool periodic = mesh.period_x > 0.0 || mesh.period_y > 0.0;
    const bool on_sphere = mesh.surface_tag == "sphere";
    const bool on_disk = mesh.surface_tag == "disk";

    out.edge_midpoint.resize(mesh.edges.size());
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        const Vec3& pu = mesh.vertices[static_cast<size_t>(mesh.edges[e][0])];
        const Vec3& pv = mesh.vertices[static_cast<size_t>(mesh.edges[e][1])];
        Vec3 mid;
        if (periodic) {
            double dx = pv.x - pu.x, dy = pv.y - pu.y;
            if (mesh.period_x > 0.0) dx = min_image(dx, mesh.period_x);
            if (mesh.period_y > 0.0) dy = min_image(dy, mesh.period_y);
            mid = {wrap_coordinate(pu.x + 0.5 * dx, mesh.period_x),
                   wrap_coordinate(pu.y + 0.5 * dy, mesh.period_y), 0.5 * (pu.z + pv.z)};
        } else {
            mid = {0.5 * (pu.x + pv.x), 0.5 * (pu.y + pv.y), 0.5 * (pu.z + pv.z)};
        }
        if (on_sphere) {
            double n = mid.norm();
            if (n <= 0.0) throw MeshError("refine: degenerate sphere edge midpoint");
            mid = {mid.x / n, mid.y / n, mid.z / n};
        } else if (on_disk && mesh.boundary_edge[e]) {
            double n = std::hypot(mid.x, mid.y);
            if (n <= 0.0) throw MeshError("refine: degenerate disk boundary midpoint");
            mid = {mid.x / n, mid.y / n, 0.0};
        }
        out.edge_midpoint[e] = nv + static_cast<int>(e);
        child.vertices.push_back(mid);
    }

    child.triangles.reserve(mesh.triangles.size() * 4);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        int a = mesh.triangles[static_cast<size_t>(t)][0];
        int b = mesh.triangles[static_cast<size_t>(t)][1];
        int c = mesh.triangles[static_cast<size_t>(t)][2];
        int m0 = out.edge_midpoint[static_cast<size_t>(mesh.tri_edges[static_cast<size_t>(t)][0])];
        int m1 = out.edge_midpoint[static_cast<size_t>(mesh.tri_edges[static_cast<size_t>(t)][1])];
        int m2 = out.edge_midpoint[static_cast<size_t>(mesh.tri_edges[static_cast<size_t>(t)][2])];
        child.triangles.push_back({a, m0, m2});
        child.triangles.push_back({m0, b, m1});
        child.triangles.push_back({m2, m1, c});
        child.triangles.push_back({m0, m1, m2});
    }
    child.finalize();

    out.edge_children.resize(mesh.edges.size());
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        int u = mesh.edges[e][0], v = mesh.edges[e][1], mid = out.edge_midpoint[e];
        int c0 = child.find_edge(u, mid), c1 = child.find_edge(mid, v);
        if (c0 < 0 || c1 < 0) throw MeshError("refine: split edge missing in refined mesh");
        out.edge_children[e] = {c0, c1};
    }
    return out;
}

SurfaceMesh refine(const SurfaceMesh& mesh) { return refine_with_map(mesh).mesh; }

std::vector<int> lift_edges(const RefineResult& refined, const std::vector<int>& parent_edges) {
    std::vector<int> out;
    out.reserve(parent_edges.size() * 2);
    for (int e : parent_edges) {
        if (e < 0 || e >= static_cast<int>(refined.edge_children.size()))
            throw InvalidArgument("lift_edges: parent edge id out of range");
        out.push_back(refined.edge_children[static_cast<size_t>(e)][0]);
        out.push_back(refined.edge_children[static_cast<size_t>(e)][1]);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int nearest_vertex(const SurfaceMesh& mesh, const Vec3& p) {
    if (mesh.n_vertices() == 0) throw InvalidArgument("nearest_vertex: empty mesh");
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        const Vec3& q = mesh.vertices[static_cast<size_t>(v)];
        double dx = q.x - p.x, dy = q.y - p.y, dz = q.z - p.z;
        if (mesh.period_x > 0.0) dx = min_image(dx, mesh.period_x);
        if (mesh.period_y > 0.0) dy = min_image(dy, mesh.period_y);
        double d2 = dx * dx + dy * dy + dz * dz;
        if (d2 < best_d2) {
            best_d2 = d2;
            best = v;
        }
    }
    return best;
}

std::vector<int> shortest_edge_path(const SurfaceMesh& mesh, int from_vertex, int to_vertex) {
    if (from_vertex < 0 || from_vertex >= mesh.n_vertices() || to_vertex < 0 ||
        to_vertex >= mesh.n_vertices())
        throw InvalidArgument("shortest_edge_path: vertex id out of range");
    if (from_vertex == to_vertex) return {};

    std::vector<std::vector<std::pair<int, int>>> adj(static_cast<size_t>(mesh.n_vertices()));
    for (size_t e = 0; e < mesh.edges.size(); ++e) {
        int u = mesh.edges[e][0], v = mesh.edges[e][1];
        adj[static_cast<size_t>(u)].push_back({v, static_cast<int>(e)});
        adj[static_cast<size_t>(v)].push_back({u, static_cast<int>(e)});
    }

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(static_cast<size_t>(mesh.n_vertices()), inf);
    std::vector<int> pred_edge(static_cast<size_t>(mesh.n_vertices()), -1);
    std::vector<int> pred_vertex(static_cast<size_t>(mesh.n_vertices()), -1);
    using Item = std::tuple<double, int>;  // (distance, vertex): vertex id breaks ties
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> queue;
    dist[static_cast<size_t>(from_vertex)] = 0.0;
    queue.push({0.0, from_vertex});
    while (!queue.empty()) {
        auto [d, u] = queue.top();
        queue.pop();
        if (d > dist[static_cast<size_t>(u)]) continue;
        if (u == to_vertex) break;
        for (auto [v, e] : adj[static_cast<size_t>(u)]) {
            double nd = d + mesh.edge_length(e);
            if (nd < dist[static_cast<size_t>(v)]) {
                dist[static_cast<size_t>(v)] = nd;
                pred_edge[static_cast<size_t>(v)] = e;
                pred_vertex[static_cast<size_t>(v)] = u;
                queue.push({nd, v});
            }
        }
    }
    if (dist[static_cast<size_t>(to_vertex)] == inf)
        throw MeshError("shortest_edge_path: mesh is not edge-connected");

    std::vector<int> path;
    for (int v = to_vertex; v != from_vertex; v = pred_vertex[static_cast<size_t>(v)])
        path.push_back(pred_edge[static_cast<size_t>(v)]);
    std::reverse(path.begin(), path.end());
    return path;
}

EdgePath snap_curve(const SurfaceMesh& mesh, const std::vector<Vec3>& polyline) {
    if (polyline.empty()) throw InvalidArgument("snap_curve: empty polyline");
    std::vector<int> anchors;
    for (const Vec3& p : polyline) {
        int v = nearest_vertex(mesh, p);
        if (anchors.empty() || anchors.back() != v) anchors.push_back(v);
    }
    if (anchors.size() < 2)
        throw InvalidArgument("snap_curve: polyline snaps to a single vertex (no edges)");
    std::vector<int> edges;
    for (size_t i = 0; i + 1 < anchors.size(); ++i) {
        std::vector<int> leg = shortest_edge_path(mesh, anchors[i], anchors[i + 1]);
        edges.insert(edges.end(), leg.begin(), leg.end());
    }
    return make_edge_path(mesh, edges);
}

}  // namespace cutlap

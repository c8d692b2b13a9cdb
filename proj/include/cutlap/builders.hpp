#pragma once

// Canonical surface constructors, uniform refinement, and curve snapping.
//
// All builders produce finalized SurfaceMesh objects whose special curves
// (grid lines, radial spokes at multiples of 30 degrees for refinement >= 2,
// meridians at multiples of 60 degrees) are exact edge paths, so that cuts
// used elsewhere in the toolkit are exact edge sets rather than
// approximations.  Meshes are mirror symmetric about their canonical axis
// (x = 0 seam for rectangle-family meshes, the 0-degree ray for disk and
// annulus), which keeps symmetry-split eigenpairs aligned with mesh lines.

#include <array>
#include <vector>

#include "cutlap/geometry.hpp"

namespace cutlap {

enum class Identify { none, horizontal, both };

// Structured grid on [0,width] x [0,height], nx-by-ny cells, each split into
// two triangles.  `horizontal` glues x=0 to x=width (cylinder, tag
// "cylinder"); `both` additionally glues y=0 to y=height (torus, tag
// "torus"); `none` keeps the full boundary (tag "rectangle").
// Identified directions need at least 3 cells (a simplicial complex cannot
// represent a 2-cell periodic direction: it would need parallel edges).
SurfaceMesh build_rectangle(double width, double height, int nx, int ny, Identify identify);

// Unit disk centred at the origin.  Boundary is a regular 3*2^r polygon with
// a vertex at angle 0; ring vertex counts halve toward the centre down to a
// 12-gon (refinement >= 2), so every spoke at a multiple of 30 degrees is an
// exact edge path from the origin to the boundary.  `graded_rings` extra
// 12-gon rings with geometrically halving radii (ratio 0.5) are inserted
// around the origin to resolve the r^(1/2) behaviour of eigenfunctions at an
// odd point there.
SurfaceMesh build_disk(int refinement, int graded_rings = 0);

// Unit sphere: hexagonal bipyramid (poles + 6 equator vertices) uniformly
// refined `refinement` times with all vertices projected to the unit sphere.
// Meridians at all multiples of 60 degrees longitude are exact edge paths
// through both poles; pole fans keep degree 6.
SurfaceMesh build_sphere(int refinement);

// Planar annulus with radii [r_inner, r_outer]: an (n_theta x n_radial)
// periodic grid in (theta, rho) mapped to the plane.  Tagged "custom" (the
// embedding is injective; no periodic coordinate handling is needed).
// Radial grid lines at angles 2*pi*i/n_theta are exact edge paths.
SurfaceMesh build_annulus(double r_inner, double r_outer, int n_theta, int n_radial);

// Uniform 1:4 refinement.  Child vertex ids: parent vertices keep their ids;
// the midpoint of parent edge e becomes vertex n_parent_vertices + e.
// Sphere meshes have every midpoint re-projected to the unit sphere; disk
// meshes have boundary-edge midpoints re-projected to the unit circle;
// periodic meshes split edges through the shorter periodic image.
struct RefineResult {
    SurfaceMesh mesh;
    // Per parent edge: the two child edges (halves of the parent edge).
    std::vector<std::array<int, 2>> edge_children;
    // Per parent edge: the child vertex at its midpoint.
    std::vector<int> edge_midpoint;
};
RefineResult refine_with_map(const SurfaceMesh& mesh);
SurfaceMesh refine(const SurfaceMesh& mesh);

// Map a set of parent edges to the set of all their child halves.
std::vector<int> lift_edges(const RefineResult& refined, const std::vector<int>& parent_edges);

// Vertex of the mesh closest to p (shorter periodic image distance on
// identified meshes; first index wins ties).
int nearest_vertex(const SurfaceMesh& mesh, const Vec3& p);

// Shortest edge walk (Dijkstra on mesh edges weighted by length,
// deterministic tie-breaking by vertex id) visiting the nearest mesh
// vertices to the polyline samples in order.
EdgePath snap_curve(const SurfaceMesh& mesh, const std::vector<Vec3>& polyline);

// Shortest vertex-to-vertex edge walk; building block of snap_curve.
std::vector<int> shortest_edge_path(const SurfaceMesh& mesh, int from_vertex, int to_vertex);

}  // namespace cutlap

#pragma once

// Discrete operator assembly: the sign-gauged P1 Laplacian pair (K, M) of a
// cut surface, and plain Dirichlet pairs on triangle subdomains.
//
// The cut operator realizes anti-continuity as a sign gauge: every free
// vertex keeps a single degree of freedom, but each triangle corner carries a
// sign, and signs alternate across each cut edge around the vertex star.
// This is exactly the anti-symmetric subspace of the discrete double cover,
// with no duplicated vertices or constraint elimination.  Vertices of the
// mesh boundary are pinned to zero (Dirichlet), as are odd points of the cut
// (an odd sign monodromy around the star forces the value to vanish).

#include <array>
#include <map>
#include <vector>

#include "cutlap/geometry.hpp"
#include "cutlap/homology.hpp"

namespace cutlap {

// Per-corner assignment of degrees of freedom and signs.
struct DofMap {
    static constexpr int kPinned = -1;

    enum class PinReason { dirichlet_boundary, odd_point };

    std::vector<std::array<int, 3>> corner_dof;   // dof index or kPinned
    std::vector<std::array<int, 3>> corner_sign;  // +1 / -1; 0 when pinned
    int n_dofs = 0;
    std::map<int, PinReason> pin_reasons;  // pinned vertex -> reason
    std::vector<int> dof_vertex;           // dof index -> vertex id

    // Value of dof vector x at a triangle corner (0 when pinned).
    double corner_value(int t, int c, const std::vector<double>& x) const {
        const int d = corner_dof[static_cast<size_t>(t)][static_cast<size_t>(c)];
        if (d == kPinned) return 0.0;
        return corner_sign[static_cast<size_t>(t)][static_cast<size_t>(c)] * x[static_cast<size_t>(d)];
    }
};

// Symmetric sparse matrix: accumulated as triplets, then compressed into a
// deterministic lower-triangle entry list (row >= col, sorted, duplicates
// summed in insertion order).
class SparseSym {
public:
    struct Entry {
        int row = 0, col = 0;  // row >= col
        double value = 0.0;
    };

    SparseSym() = default;
    explicit SparseSym(int n) : n_(n) {}

    int size() const { return n_; }
    bool compressed() const { return compressed_; }

    // Accumulate value at (i, j) = (j, i).
    void add(int i, int j, double value);
    void compress();

    // Compressed lower-triangle entries; requires compress().
    const std::vector<Entry>& entries() const;

    // y = A x with the full symmetric matrix; requires compress().
    std::vector<double> apply(const std::vector<double>& x) const;

private:
    int n_ = 0;
    bool compressed_ = false;
    std::vector<Entry> entries_;
};

// Sector decomposition of each interior vertex star: even cut-incidence
// yields one dof with alternating sector signs (first-visited sector +1, so
// the result is deterministic); odd incidence pins the vertex as odd point;
// mesh boundary vertices are always pinned.
DofMap build_dof_map(const SurfaceMesh& mesh, const Cut& cut);

// P1 element matrices of triangle t (corner order = mesh corner order).
std::array<std::array<double, 3>, 3> stiffness_element(const SurfaceMesh& mesh, int t);
std::array<std::array<double, 3>, 3> mass_element(const SurfaceMesh& mesh, int t);

// Global pair over the dof space of `dofs`: K[a][b] += s_i s_j k_ij over all
// triangles (pinned corners skipped).  K is positive semidefinite, M positive
// definite on the dof space.
SparseSym assemble_stiffness(const SurfaceMesh& mesh, const DofMap& dofs);
SparseSym assemble_mass(const SurfaceMesh& mesh, const DofMap& dofs);

// Plain Dirichlet pair of a triangle subdomain: free dofs are the vertices
// not on the mesh boundary whose full-mesh triangle star lies inside the
// subdomain; every other vertex of the subdomain is pinned.  A subdomain
// touching itself across a slit therefore pins both slit sides.  Throws
// InvalidArgument when the subdomain is empty, out of range, or not
// connected in the dual graph.
struct DirichletSystem {
    SparseSym stiffness;
    SparseSym mass;
    DofMap dofs;
};
DirichletSystem assemble_dirichlet(const SurfaceMesh& mesh, const std::vector<int>& subdomain);

}  // namespace cutlap

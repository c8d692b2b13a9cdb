#pragma once

// Interpretation of eigenvectors on a cut surface: corner fields, nodal
// partitions under the trace merge rule, spectral positions, Courant
// sharpness, partition ground energies, the sign-flip gauge transform, and
// the lower-bound check relating cut eigenvalues to partition energies.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cutlap/eigensolver.hpp"
#include "cutlap/geometry.hpp"
#include "cutlap/homology.hpp"
#include "cutlap/operator.hpp"

namespace cutlap {

// Eigenvector pushed to triangle corners through the sign gauge: value
// sign * x[dof] per (triangle, corner), 0 at pinned corners.  The result is
// anti-continuous across cut edges (equal magnitude, opposite value) and
// continuous across every other interior edge.
struct CornerField {
    std::vector<std::array<double, 3>> values;  // [triangle][corner]
    double eigenvalue = 0.0;

    double max_abs() const;
};

CornerField corner_field(const SurfaceMesh& mesh, const DofMap& dofs,
                         const std::vector<double>& vector, double eigenvalue = 0.0);

// Triangle labeling into parts 1..k; label 0 marks triangles that stay
// unassigned because the field is below tolerance on all three corners.
// Parts are numbered by their smallest triangle index, so labelings are
// deterministic.
struct Partition {
    std::vector<int> label;  // per triangle, 0..k
    int k = 0;

    // Interior edges whose two triangles carry different labels.
    std::vector<int> boundary_edges(const SurfaceMesh& mesh) const;
};

// Sum of triangle areas per part (index 0 = part 1).
std::vector<double> part_areas(const SurfaceMesh& mesh, const Partition& partition);

// Nodal components of a corner field.  Two triangles sharing an interior
// edge merge iff at one shared endpoint both one-sided values exceed
// zero_tol * max|field| in magnitude and, on non-cut edges only, agree in
// sign; across cut edges sign is ignored (anti-continuity flips it inside a
// single component).  Triangles entirely under tolerance stay unassigned.
// Throws InvalidArgument when the field vanishes identically.
Partition nodal_partition(const SurfaceMesh& mesh, const Cut& cut, const CornerField& field,
                          double zero_tol = 1e-6);

// 1-based index of the first eigenvalue matching lambda, with eigenvalues
// within a relative gap of rel_gap treated as one multiplicity group.
// Throws InvalidArgument when lambda matches nothing or lies above the
// computed range.
int spectral_position(const Spectrum& spectrum, double lambda, double rel_gap = 1e-6);

struct CourantReport {
    bool sharp = false;
    int nodal_count = 0;
    int position = 0;
};

// Does the eigenvector at 1-based `index` have exactly as many nodal domains
// as its spectral position?  The report carries both numbers either way.
CourantReport is_courant_sharp(const SurfaceMesh& mesh, const Cut& cut, const Spectrum& spectrum,
                               int index, double zero_tol = 1e-6);

struct PartitionEnergy {
    double max_energy = 0.0;           // max over parts; +infinity when a part has no dofs
    std::vector<double> per_part;      // ground energy per part, index 0 = part 1
    std::vector<std::string> diagnostics;
};

// Ground Dirichlet energy of every part and their maximum.  A part too small
// to contain a free vertex gets infinite energy plus a diagnostic rather
// than an error.
PartitionEnergy partition_energy(const SurfaceMesh& mesh, const Partition& partition,
                                 double tol = 1e-8, uint64_t seed = 20240901);

// Sign flip on the minus color class; an involution that preserves zero sets
// pointwise.  Requires a total coloring of the mesh.
CornerField gauge_transform(const SurfaceMesh& mesh, const TriangleColoring& coloring,
                            const CornerField& field);

struct MinInequalityReport {
    struct Entry {
        bool member = false;                 // boundary set admits a subset homologous to the cut
        std::optional<Cut> certificate;      // the witnessing subset when member
        double energy = 0.0;                 // max part energy of the partition
        double margin = 0.0;                 // energy - lambda_k
        bool violation = false;              // member and margin below -slack * scale
        std::vector<std::string> diagnostics;
    };
    double lambda_k = 0.0;
    std::vector<Entry> entries;
};

// Check that every admissible k-partition among `partitions` has max part
// energy at least lambda_k(cut), within a relative slack for discretization.
// Non-member partitions are flagged in their entry, never dropped.
MinInequalityReport verify_min_inequality(const SurfaceMesh& mesh, const Cut& cut, int k,
                                          const std::vector<Partition>& partitions,
                                          double slack = 0.01, double tol = 1e-8,
                                          uint64_t seed = 20240901);

// Rotate the multiplicity cluster containing 1-based `index` into the basis
// that diagonalizes the mean-square trace along the cut, and store the
// member with the smallest trace at `index`.  With a simple eigenvalue this
// is a no-op.  Inside a numerically degenerate cluster the solver's basis is
// arbitrary; this restores the deterministic representative that vanishes on
// the cut (when the cluster contains one), which is the member whose nodal
// set aligns with the mesh in the reference problems.  Stored eigenvalues
// and residuals are left untouched; for near-degenerate (not exactly
// degenerate) clusters the rotated vectors are eigenvectors only up to the
// cluster spread.
Spectrum lock_cluster_to_cut(const SurfaceMesh& mesh, const Cut& cut, const DofMap& dofs,
                             const SparseSym& mass, Spectrum spectrum, int index,
                             double rel_gap = 1e-6);

}  // namespace cutlap

#include "cutlap/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <Eigen/Dense>

#include "cutlap/errors.hpp"

namespace cutlap {

namespace {

struct UnionFind {
    std::vector<int> parent;

    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    int find(int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
    }
};

void require_partition_shape(const SurfaceMesh& mesh, const Partition& partition) {
    if (static_cast<int>(partition.label.size()) != mesh.n_triangles())
        throw InvalidArgument("partition labels do not cover the mesh");
    if (partition.k < 1) throw InvalidArgument("partition must have at least one part");
    std::vector<bool> seen(static_cast<size_t>(partition.k), false);
    for (int l : partition.label) {
        if (l < 0 || l > partition.k) throw InvalidArgument("partition label out of range");
        if (l > 0) seen[static_cast<size_t>(l - 1)] = true;
    }
    for (int i = 0; i < partition.k; ++i)
        if (!seen[static_cast<size_t>(i)])
            throw InvalidArgument("partition part " + std::to_string(i + 1) + " is empty");
}

}  // namespace

double CornerField::max_abs() const {
    double m = 0.0;
    for (const auto& tri : values)
        for (double v : tri) m = std::max(m, std::abs(v));
    return m;
}

CornerField corner_field(const SurfaceMesh& mesh, const DofMap& dofs,
                         const std::vector<double>& vector, double eigenvalue) {
    if (static_cast<int>(dofs.corner_dof.size()) != mesh.n_triangles())
        throw InvalidArgument("dof map does not match the mesh");
    if (static_cast<int>(vector.size()) != dofs.n_dofs)
        throw InvalidArgument("vector length does not match the dof count");
    CornerField field;
    field.eigenvalue = eigenvalue;
    field.values.resize(static_cast<size_t>(mesh.n_triangles()));
    for (int t = 0; t < mesh.n_triangles(); ++t)
        for (int c = 0; c < 3; ++c)
            field.values[static_cast<size_t>(t)][static_cast<size_t>(c)] =
                dofs.corner_value(t, c, vector);
    return field;
}

std::vector<int> Partition::boundary_edges(const SurfaceMesh& mesh) const {
    std::vector<int> out;
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (!mesh.is_interior_edge(e)) continue;
        const auto& [t1, t2] = mesh.edge_tris[static_cast<size_t>(e)];
        if (label[static_cast<size_t>(t1)] != label[static_cast<size_t>(t2)]) out.push_back(e);
    }
    return out;
}

std::vector<double> part_areas(const SurfaceMesh& mesh, const Partition& partition) {
    require_partition_shape(mesh, partition);
    std::vector<double> areas(static_cast<size_t>(partition.k), 0.0);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const int l = partition.label[static_cast<size_t>(t)];
        if (l > 0) areas[static_cast<size_t>(l - 1)] += mesh.triangle_area(t);
    }
    return areas;
}

Partition nodal_partition(const SurfaceMesh& mesh, const Cut& cut, const CornerField& field,
                          double zero_tol) {
    if (static_cast<int>(field.values.size()) != mesh.n_triangles())
        throw InvalidArgument("corner field does not match the mesh");
    if (!(zero_tol >= 0.0)) throw InvalidArgument("zero tolerance must be nonnegative");
    const double scale = field.max_abs();
    if (scale == 0.0) throw InvalidArgument("cannot partition an identically zero field");
    const double tau = zero_tol * scale;

    std::vector<bool> assigned(static_cast<size_t>(mesh.n_triangles()));
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& v = field.values[static_cast<size_t>(t)];
        assigned[static_cast<size_t>(t)] =
            std::abs(v[0]) > tau || std::abs(v[1]) > tau || std::abs(v[2]) > tau;
    }

    UnionFind uf(mesh.n_triangles());
    for (int e = 0; e < mesh.n_edges(); ++e) {
        if (!mesh.is_interior_edge(e)) continue;
        const auto& [t1, t2] = mesh.edge_tris[static_cast<size_t>(e)];
        if (!assigned[static_cast<size_t>(t1)] || !assigned[static_cast<size_t>(t2)]) continue;
        const bool on_cut = cut.contains(e);
        // Merge when, at some shared endpoint, both one-sided traces are
        // solidly nonzero and (off the cut) agree in sign.
        bool merge = false;
        for (int end = 0; end < 2 && !merge; ++end) {
            const int v = mesh.edges[static_cast<size_t>(e)][static_cast<size_t>(end)];
            const double a =
                field.values[static_cast<size_t>(t1)][static_cast<size_t>(mesh.corner_of(t1, v))];
            const double b =
                field.values[static_cast<size_t>(t2)][static_cast<size_t>(mesh.corner_of(t2, v))];
            if (std::min(std::abs(a), std::abs(b)) > tau && (on_cut || a * b > 0.0)) merge = true;
        }
        if (merge) uf.unite(t1, t2);
    }

    Partition partition;
    partition.label.assign(static_cast<size_t>(mesh.n_triangles()), 0);
    std::vector<int> root_label(static_cast<size_t>(mesh.n_triangles()), 0);
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        if (!assigned[static_cast<size_t>(t)]) continue;
        const int root = uf.find(t);
        // Roots are component minima, so ascending t visits each root first.
        if (root_label[static_cast<size_t>(root)] == 0) root_label[static_cast<size_t>(root)] = ++partition.k;
        partition.label[static_cast<size_t>(t)] = root_label[static_cast<size_t>(root)];
    }
    if (partition.k == 0) throw InvalidArgument("no triangle rises above the zero tolerance");
    return partition;
}

int spectral_position(const Spectrum& spectrum, double lambda, double rel_gap) {
    const auto& ev = spectrum.eigenvalues;
    if (ev.empty()) throw InvalidArgument("spectral position of an empty spectrum");
    auto matches = [&](double a, double b) {
        return std::abs(a - b) <= rel_gap * std::max({1.0, std::abs(a), std::abs(b)});
    };
    if (lambda > ev.back() && !matches(lambda, ev.back()))
        throw InvalidArgument("eigenvalue lies above the computed spectral range");
    for (size_t i = 0; i < ev.size(); ++i) {
        if (!matches(ev[i], lambda)) continue;
        // Walk back through the multiplicity chain containing i.
        size_t start = i;
        while (start > 0 &&
               ev[start] - ev[start - 1] <= rel_gap * std::max(1.0, std::abs(ev[start])))
            --start;
        return static_cast<int>(start) + 1;
    }
    throw InvalidArgument("no computed eigenvalue matches the requested value");
}

CourantReport is_courant_sharp(const SurfaceMesh& mesh, const Cut& cut, const Spectrum& spectrum,
                               int index, double zero_tol) {
    if (index < 1 || index > static_cast<int>(spectrum.eigenvectors.size()))
        throw InvalidArgument("eigenpair index out of range");
    const DofMap dofs = build_dof_map(mesh, cut);
    const CornerField field =
        corner_field(mesh, dofs, spectrum.eigenvectors[static_cast<size_t>(index - 1)],
                     spectrum.eigenvalues[static_cast<size_t>(index - 1)]);
    CourantReport report;
    report.nodal_count = nodal_partition(mesh, cut, field, zero_tol).k;
    report.position = spectral_position(spectrum, spectrum.eigenvalues[static_cast<size_t>(index - 1)]);
    report.sharp = report.nodal_count == report.position;
    return report;
}

PartitionEnergy partition_energy(const SurfaceMesh& mesh, const Partition& partition, double tol,
                                 uint64_t seed) {
    require_partition_shape(mesh, partition);
    PartitionEnergy result;
    result.max_energy = 0.0;
    for (int part = 1; part <= partition.k; ++part) {
        std::vector<int> tris;
        for (int t = 0; t < mesh.n_triangles(); ++t)
            if (partition.label[static_cast<size_t>(t)] == part) tris.push_back(t);
        const DirichletSystem system = assemble_dirichlet(mesh, tris);
        double energy;
        if (system.dofs.n_dofs == 0) {
            energy = std::numeric_limits<double>::infinity();
            result.diagnostics.push_back(
                "part " + std::to_string(part) +
                " contains no free vertex; its ground energy is reported as infinite");
        } else {
            const Spectrum s = smallest_eigenpairs(system.stiffness, system.mass, 1, tol, seed);
            energy = s.eigenvalues[0];
        }
        result.per_part.push_back(energy);
        result.max_energy = std::max(result.max_energy, energy);
    }
    return result;
}

CornerField gauge_transform(const SurfaceMesh& mesh, const TriangleColoring& coloring,
                            const CornerField& field) {
    if (static_cast<int>(coloring.color.size()) != mesh.n_triangles())
        throw InvalidArgument("coloring does not cover the mesh");
    if (static_cast<int>(field.values.size()) != mesh.n_triangles())
        throw InvalidArgument("corner field does not match the mesh");
    CornerField out = field;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const int c = coloring.color[static_cast<size_t>(t)];
        if (c != 1 && c != -1) throw InvalidArgument("coloring must be total with values +1/-1");
        if (c == -1)
            for (double& v : out.values[static_cast<size_t>(t)]) v = -v;
    }
    return out;
}

MinInequalityReport verify_min_inequality(const SurfaceMesh& mesh, const Cut& cut, int k,
                                          const std::vector<Partition>& partitions, double slack,
                                          double tol, uint64_t seed) {
    if (k < 1) throw InvalidArgument("partition size k must be positive");
    const DofMap dofs = build_dof_map(mesh, cut);
    const SparseSym stiffness = assemble_stiffness(mesh, dofs);
    const SparseSym mass = assemble_mass(mesh, dofs);
    const Spectrum spectrum = smallest_eigenpairs(stiffness, mass, k, tol, seed);

    MinInequalityReport report;
    report.lambda_k = spectrum.eigenvalues[static_cast<size_t>(k - 1)];
    const double allowance = slack * std::max(1.0, std::abs(report.lambda_k));

    for (const Partition& partition : partitions) {
        MinInequalityReport::Entry entry;
        if (partition.k != k)
            entry.diagnostics.push_back("partition has " + std::to_string(partition.k) +
                                        " parts, expected " + std::to_string(k));
        const std::vector<int> boundary = partition.boundary_edges(mesh);
        entry.certificate = exists_homologous_subset(mesh, boundary, cut);
        entry.member = entry.certificate.has_value() && partition.k == k;
        if (!entry.certificate.has_value())
            entry.diagnostics.push_back(
                "no subset of the partition boundary is homologous to the cut");
        const PartitionEnergy energy = partition_energy(mesh, partition, tol, seed);
        entry.energy = energy.max_energy;
        entry.margin = entry.energy - report.lambda_k;
        for (const std::string& d : energy.diagnostics) entry.diagnostics.push_back(d);
        entry.violation = entry.member && std::isfinite(entry.margin) && entry.margin < -allowance;
        report.entries.push_back(std::move(entry));
    }
    return report;
}

Spectrum lock_cluster_to_cut(const SurfaceMesh& mesh, const Cut& cut, const DofMap& dofs,
                             const SparseSym& mass, Spectrum spectrum, int index, double rel_gap) {
    if (index < 1 || index > static_cast<int>(spectrum.eigenvectors.size()))
        throw InvalidArgument("eigenpair index out of range");
    const auto groups = group_multiplicities(spectrum.eigenvalues, rel_gap);
    int lo = index - 1, hi = index - 1;
    for (const auto& [a, b] : groups)
        if (a <= index - 1 && index - 1 <= b) {
            lo = a;
            hi = b;
        }
    const int m = hi - lo + 1;
    if (m == 1) return spectrum;

    // Mean-square trace of each cluster member along the cut.
    std::vector<CornerField> fields;
    fields.reserve(static_cast<size_t>(m));
    for (int j = 0; j < m; ++j)
        fields.push_back(
            corner_field(mesh, dofs, spectrum.eigenvectors[static_cast<size_t>(lo + j)]));
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(m, m);
    for (int e : cut.edges) {
        for (int side = 0; side < 2; ++side) {
            const int t = mesh.edge_tris[static_cast<size_t>(e)][static_cast<size_t>(side)];
            for (int end = 0; end < 2; ++end) {
                const int v = mesh.edges[static_cast<size_t>(e)][static_cast<size_t>(end)];
                const int c = mesh.corner_of(t, v);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j <= i; ++j)
                        gram(i, j) +=
                            fields[static_cast<size_t>(i)].values[static_cast<size_t>(t)][static_cast<size_t>(c)] *
                            fields[static_cast<size_t>(j)].values[static_cast<size_t>(t)][static_cast<size_t>(c)];
            }
        }
    }
    gram = gram.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(gram);
    if (solver.info() != Eigen::Success)
        throw SolverError("trace alignment of the degenerate cluster failed");

    // Orthogonal recombination: stays M-orthonormal, ascending trace order.
    const int n = static_cast<int>(spectrum.eigenvectors[static_cast<size_t>(lo)].size());
    std::vector<std::vector<double>> rotated(static_cast<size_t>(m),
                                             std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
            const double c = solver.eigenvectors()(i, j);
            const auto& src = spectrum.eigenvectors[static_cast<size_t>(lo + i)];
            for (int a = 0; a < n; ++a)
                rotated[static_cast<size_t>(j)][static_cast<size_t>(a)] += c * src[static_cast<size_t>(a)];
        }
    for (auto& w : rotated) {
        const std::vector<double> mw = mass.apply(w);
        double norm2 = 0.0;
        for (int a = 0; a < n; ++a) norm2 += w[static_cast<size_t>(a)] * mw[static_cast<size_t>(a)];
        if (!(norm2 > 0.0)) throw SolverError("cluster member collapsed during trace alignment");
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& x : w) x *= inv;
    }

    // The minimal-trace member goes to `index`; the rest fill the remaining
    // cluster slots in ascending trace order.
    std::vector<int> slots;
    for (int j = lo; j <= hi; ++j)
        if (j != index - 1) slots.push_back(j);
    spectrum.eigenvectors[static_cast<size_t>(index - 1)] = std::move(rotated[0]);
    for (int j = 1; j < m; ++j)
        spectrum.eigenvectors[static_cast<size_t>(slots[static_cast<size_t>(j - 1)])] =
            std::move(rotated[static_cast<size_t>(j)]);
    return spectrum;
}

}  // namespace cutlap

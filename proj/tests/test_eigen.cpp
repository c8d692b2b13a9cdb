#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cutlap/builders.hpp"
#include "cutlap/eigensolver.hpp"
#include "cutlap/errors.hpp"
#include "cutlap/homology.hpp"
#include "cutlap/operator.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "support.hpp"

using namespace cutlap;
namespace ts = testsupport;

namespace {

constexpr double kPi = std::numbers::pi;

struct AssembledProblem {
    DofMap dofs;
    SparseSym stiffness;
    SparseSym mass;
};

AssembledProblem assemble_cut_problem(const SurfaceMesh& mesh, const std::vector<int>& cut_edges) {
    AssembledProblem p{build_dof_map(mesh, Cut(mesh, cut_edges)), SparseSym(0), SparseSym(0)};
    p.stiffness = assemble_stiffness(mesh, p.dofs);
    p.mass = assemble_mass(mesh, p.dofs);
    return p;
}

Eigen::MatrixXd to_dense(const SparseSym& a) {
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(a.size(), a.size());
    for (const auto& e : a.entries()) {
        d(e.row, e.col) = e.value;
        d(e.col, e.row) = e.value;
    }
    return d;
}

}  // namespace

TEST_SUITE("eigen") {

TEST_CASE("closed-form oracle constants are pinned") {
    // First Bessel zeros; the half-integer ones are roots of elementary
    // equations (j_{1/2,n} = n pi, j_{3/2,1} solves tan x = x).
    CHECK(oracle::bessel_zero(0.0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-13));
    CHECK(oracle::bessel_zero(0.5, 1) == doctest::Approx(kPi).epsilon(1e-13));
    CHECK(oracle::bessel_zero(0.5, 2) == doctest::Approx(2.0 * kPi).epsilon(1e-13));
    CHECK(oracle::bessel_zero(1.5, 1) == doctest::Approx(4.493409457909064).epsilon(1e-13));
    CHECK(oracle::bessel_zero(2.5, 1) == doctest::Approx(5.763459196894550).epsilon(1e-13));

    CHECK(oracle::disk_lambda1_nocut() == doctest::Approx(5.783185962946785).epsilon(1e-12));

    const auto disk = oracle::disk_cut_spectrum(6);
    const std::vector<double> disk_expected = {kPi * kPi,          kPi * kPi,
                                               20.190728556426629, 20.190728556426629,
                                               33.217461914268370, 33.217461914268370};
    REQUIRE(disk.size() == disk_expected.size());
    for (size_t i = 0; i < disk.size(); ++i)
        CHECK(disk[i] == doctest::Approx(disk_expected[i]).epsilon(1e-12));

    const auto sphere = oracle::sphere_cut_spectrum(6);
    const std::vector<double> sphere_expected = {0.75, 0.75, 3.75, 3.75, 3.75, 3.75};
    REQUIRE(sphere.size() == sphere_expected.size());
    for (size_t i = 0; i < sphere.size(); ++i)
        CHECK(sphere[i] == doctest::Approx(sphere_expected[i]).epsilon(1e-12));

    // (1,2) annulus: cross-product roots.  Order 1/2 collapses to sin(mu).
    CHECK(oracle::annulus_lambda1_nocut() == doctest::Approx(9.7533221247507083).epsilon(1e-12));
    const auto annulus = oracle::annulus_cut_spectrum(6);
    const std::vector<double> annulus_expected = {kPi * kPi,          kPi * kPi,
                                                  10.797839372011286, 10.797839372011286,
                                                  12.643629147737078, 12.643629147737078};
    REQUIRE(annulus.size() == annulus_expected.size());
    for (size_t i = 0; i < annulus.size(); ++i)
        CHECK(annulus[i] == doctest::Approx(annulus_expected[i]).epsilon(1e-12));

    // Cut torus, height 0.65: ground pair pi^2, then 9 pi^2 in positions 3-4.
    const auto t65 = oracle::torus_spectrum(0.65, true, 6);
    CHECK(t65[0] == doctest::Approx(kPi * kPi).epsilon(1e-12));
    CHECK(t65[1] == doctest::Approx(kPi * kPi).epsilon(1e-12));
    CHECK(t65[2] == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-12));
    CHECK(t65[3] == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-12));

    // Height 0.75: the mixed mode (1/2, 1) undercuts 9 pi^2 and fills
    // positions 3-6 with a four-dimensional cluster.
    const auto t75 = oracle::torus_spectrum(0.75, true, 8);
    const double mixed75 = kPi * kPi * (1.0 + 64.0 / 9.0);
    for (int i = 2; i < 6; ++i) CHECK(t75[static_cast<size_t>(i)] == doctest::Approx(mixed75).epsilon(1e-12));
    CHECK(t75[6] == doctest::Approx(9.0 * kPi * kPi).epsilon(1e-12));

    // Cut torus, height 0.38 vs 0.44: the fifth eigenvalue flips between the
    // pure mode 25 pi^2 and the mixed pair.
    const auto t38 = oracle::torus_spectrum(0.38, true, 6);
    CHECK(t38[4] == doctest::Approx(25.0 * kPi * kPi).epsilon(1e-12));
    CHECK(t38[5] == doctest::Approx(25.0 * kPi * kPi).epsilon(1e-12));
    const auto t44 = oracle::torus_spectrum(0.44, true, 6);
    const double mixed44 = kPi * kPi + std::pow(2.0 * kPi / 0.44, 2);
    CHECK(t44[4] == doctest::Approx(mixed44).epsilon(1e-12));
    CHECK(t44[4] < 25.0 * kPi * kPi);

    // Cut cylinder, heights 0.55 / 0.65: third eigenvalue switches between
    // the (3/2, 1) and (1/2, 2) branches.
    const auto c55 = oracle::cylinder_spectrum(0.55, true, 4);
    CHECK(c55[0] == doctest::Approx(kPi * kPi * (1.0 + 1.0 / 0.3025)).epsilon(1e-12));
    CHECK(c55[2] == doctest::Approx(kPi * kPi * (9.0 + 1.0 / 0.3025)).epsilon(1e-12));
    const auto c65 = oracle::cylinder_spectrum(0.65, true, 4);
    CHECK(c65[2] == doctest::Approx(kPi * kPi * (1.0 + 4.0 / 0.4225)).epsilon(1e-12));
    CHECK(c65[2] < kPi * kPi * (9.0 + 1.0 / 0.4225));

    // Uncut spectra for reference problems.
    const auto t_nocut = oracle::torus_spectrum(0.65, false, 3);
    CHECK(t_nocut[0] == doctest::Approx(0.0).epsilon(1e-12));
    const auto c_nocut = oracle::cylinder_spectrum(1.0, false, 2);
    CHECK(c_nocut[0] == doctest::Approx(kPi * kPi).epsilon(1e-12));
}

TEST_CASE("diagonal system is solved exactly by the dense path") {
    SparseSym k(3), m(3);
    for (int i = 0; i < 3; ++i) {
        k.add(i, i, static_cast<double>(i + 1));
        m.add(i, i, 1.0);
    }
    k.compress();
    m.compress();
    const Spectrum s = smallest_eigenpairs(k, m, 3);
    REQUIRE(s.eigenvalues.size() == 3);
    CHECK(s.stats.method == "dense");
    for (int i = 0; i < 3; ++i) {
        CHECK(s.eigenvalues[static_cast<size_t>(i)] == doctest::Approx(i + 1.0).epsilon(1e-12));
        CHECK(s.residuals[static_cast<size_t>(i)] < 1e-10);
    }
}

TEST_CASE("path graph matches the closed form on both solver paths") {
    SUBCASE("large instance uses the iterative path") {
        const int n = 60;
        const double h = 0.1;
        const SparseSym k = ts::path_graph_stiffness(n, h);
        const SparseSym m = ts::identity_matrix(n);
        const Spectrum s = smallest_eigenpairs(k, m, 10);
        CHECK(s.stats.method == "shift-invert-lanczos");
        CHECK(s.stats.shift < 0.0);
        CHECK(s.stats.n_operator_applies > 0);
        const auto exact = oracle::path_graph_eigenvalues(n, h);
        for (int i = 0; i < 10; ++i)
            CHECK(s.eigenvalues[static_cast<size_t>(i)] ==
                  doctest::Approx(exact[static_cast<size_t>(i)]).epsilon(1e-9));
    }
    SUBCASE("small instance uses the dense path") {
        const int n = 12;
        const double h = 0.25;
        const Spectrum s =
            smallest_eigenpairs(ts::path_graph_stiffness(n, h), ts::identity_matrix(n), 5);
        CHECK(s.stats.method == "dense");
        const auto exact = oracle::path_graph_eigenvalues(n, h);
        for (int i = 0; i < 5; ++i)
            CHECK(s.eigenvalues[static_cast<size_t>(i)] ==
                  doctest::Approx(exact[static_cast<size_t>(i)]).epsilon(1e-11));
    }
}

TEST_CASE("iterative path agrees with a dense reference on assembled systems") {
    // Dirichlet square and a cut cylinder, both below dimension 200.
    std::vector<AssembledProblem> problems;
    {
        const SurfaceMesh square = build_rectangle(1.0, 1.0, 8, 8, Identify::none);
        problems.push_back(assemble_cut_problem(square, {}));
    }
    {
        const SurfaceMesh cyl = build_rectangle(1.0, 1.0, 12, 11, Identify::horizontal);
        problems.push_back(assemble_cut_problem(cyl, ts::vertical_loop(cyl, 0.0)));
    }
    for (const auto& p : problems) {
        const int n = p.stiffness.size();
        REQUIRE(n >= 25);
        REQUIRE(n <= 200);
        const int count = 8;
        const Spectrum s = smallest_eigenpairs(p.stiffness, p.mass, count, 1e-10);
        CHECK(s.stats.method == "shift-invert-lanczos");

        Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> dense(to_dense(p.stiffness),
                                                                        to_dense(p.mass));
        REQUIRE(dense.info() == Eigen::Success);
        for (int i = 0; i < count; ++i)
            CHECK(s.eigenvalues[static_cast<size_t>(i)] ==
                  doctest::Approx(dense.eigenvalues()(i)).epsilon(1e-9));
    }
}

TEST_CASE("rayleigh quotients and orthonormality back the reported pairs") {
    const SurfaceMesh disk = build_disk(4);
    const auto p = assemble_cut_problem(disk, ts::radial_spoke(disk, 0.0));
    const Spectrum s = smallest_eigenpairs(p.stiffness, p.mass, 6);
    REQUIRE(s.eigenvalues.size() == 6);
    REQUIRE(s.eigenvectors.size() == 6);
    REQUIRE(s.residuals.size() == 6);

    const int n = p.stiffness.size();
    for (size_t i = 0; i < 6; ++i) {
        REQUIRE(static_cast<int>(s.eigenvectors[i].size()) == n);
        const std::vector<double> kx = p.stiffness.apply(s.eigenvectors[i]);
        const std::vector<double> mx = p.mass.apply(s.eigenvectors[i]);
        double xkx = 0.0, xmx = 0.0;
        for (int j = 0; j < n; ++j) {
            xkx += s.eigenvectors[i][static_cast<size_t>(j)] * kx[static_cast<size_t>(j)];
            xmx += s.eigenvectors[i][static_cast<size_t>(j)] * mx[static_cast<size_t>(j)];
        }
        const double rayleigh = xkx / xmx;
        CHECK(std::abs(rayleigh - s.eigenvalues[i]) <=
              10.0 * std::max(s.residuals[i], 1e-14) * std::max(1.0, std::abs(s.eigenvalues[i])));
        CHECK(std::abs(xmx - 1.0) < 1e-10);
        // Pairwise M-orthogonality.
        for (size_t l = 0; l < i; ++l) {
            double cross = 0.0;
            for (int j = 0; j < n; ++j)
                cross += s.eigenvectors[l][static_cast<size_t>(j)] * mx[static_cast<size_t>(j)];
            CHECK(std::abs(cross) < 1e-8);
        }
        // Residual contract: scaled residual stays within the tolerance.
        CHECK(s.residuals[i] <= 1e-8 * std::max(1.0, std::abs(s.eigenvalues[i])));
    }
}

TEST_CASE("fixed seed reproduces the spectrum bit for bit") {
    const SurfaceMesh cyl = build_rectangle(1.0, 0.8, 14, 11, Identify::horizontal);
    const auto p = assemble_cut_problem(cyl, ts::vertical_loop(cyl, 0.0));
    const Spectrum a = smallest_eigenpairs(p.stiffness, p.mass, 5, 1e-8, 1234);
    const Spectrum b = smallest_eigenpairs(p.stiffness, p.mass, 5, 1e-8, 1234);
    REQUIRE(a.eigenvalues.size() == b.eigenvalues.size());
    for (size_t i = 0; i < a.eigenvalues.size(); ++i) {
        CHECK(a.eigenvalues[i] == b.eigenvalues[i]);
        REQUIRE(a.eigenvectors[i].size() == b.eigenvectors[i].size());
        for (size_t j = 0; j < a.eigenvectors[i].size(); ++j)
            CHECK(a.eigenvectors[i][j] == b.eigenvectors[i][j]);
    }
    CHECK(a.stats.seed == 1234);
}

TEST_CASE("restricting the trial space pushes eigenvalues up") {
    // The half-domain Dirichlet system uses a subset of the full system's
    // hat-function space, so by min-max every eigenvalue can only rise.
    const SurfaceMesh square = build_rectangle(1.0, 1.0, 10, 10, Identify::none);
    const auto full = assemble_cut_problem(square, {});

    std::vector<int> left_half;
    for (int t = 0; t < square.n_triangles(); ++t) {
        double cx = 0.0;
        for (int c = 0; c < 3; ++c)
            cx += square.vertices[static_cast<size_t>(square.triangles[static_cast<size_t>(t)][c])].x;
        if (cx / 3.0 < 0.5) left_half.push_back(t);
    }
    const DirichletSystem half = assemble_dirichlet(square, left_half);
    REQUIRE(half.dofs.n_dofs > 0);
    REQUIRE(half.dofs.n_dofs < full.dofs.n_dofs);

    const Spectrum sf = smallest_eigenpairs(full.stiffness, full.mass, 5);
    const Spectrum sh = smallest_eigenpairs(half.stiffness, half.mass, 5);
    for (size_t i = 0; i < 5; ++i)
        CHECK(sh.eigenvalues[i] >= sf.eigenvalues[i] - 1e-9);
    // Strict rise for the ground state: the half square is a proper subdomain.
    CHECK(sh.eigenvalues[0] > sf.eigenvalues[0] + 1.0);
}

TEST_CASE("assembled torus spectrum approaches the separated-variables values") {
    const SurfaceMesh torus = build_rectangle(1.0, 0.65, 48, 31, Identify::both);
    const auto p = assemble_cut_problem(torus, ts::vertical_loop(torus, 0.0));
    const Spectrum s = smallest_eigenpairs(p.stiffness, p.mass, 6);
    const auto exact = oracle::torus_spectrum(0.65, true, 6);
    for (size_t i = 0; i < 6; ++i) {
        // Conforming discretization: one-sided convergence from above.
        CHECK(s.eigenvalues[i] >= exact[i] - 1e-9);
        CHECK(s.eigenvalues[i] <= exact[i] * 1.02);
    }
    // Eigenvalue counting below thresholds between clusters.
    CHECK(eigenvalue_count_below(p.stiffness, p.mass, 5.0 * kPi * kPi) == 2);
    const double mid = 0.5 * (s.eigenvalues[1] + s.eigenvalues[2]);
    CHECK(eigenvalue_count_below(p.stiffness, p.mass, mid) == 2);
    const double mid4 = 0.5 * (s.eigenvalues[3] + s.eigenvalues[4]);
    CHECK(eigenvalue_count_below(p.stiffness, p.mass, mid4) == 4);
}

TEST_CASE("uncut cylinder ground state converges at second order") {
    const double height = 0.55;
    const double exact = std::pow(kPi / height, 2);
    std::vector<double> errors;
    for (int scale : {12, 24, 48}) {
        const int ny = static_cast<int>(std::lround(scale * height));
        const SurfaceMesh cyl = build_rectangle(1.0, height, scale, ny, Identify::horizontal);
        const auto p = assemble_cut_problem(cyl, {});
        const Spectrum s = smallest_eigenpairs(p.stiffness, p.mass, 1);
        errors.push_back(s.eigenvalues[0] - exact);
        CHECK(s.eigenvalues[0] >= exact - 1e-9);
    }
    CHECK(errors[2] / exact < 0.01);
    // Roughly quartering per refinement.
    CHECK(errors[0] / errors[1] > 3.0);
    CHECK(errors[1] / errors[2] > 3.0);
}

TEST_CASE("count below a threshold widens away from exact eigenvalues") {
    SparseSym k(3), m(3);
    for (int i = 0; i < 3; ++i) {
        k.add(i, i, static_cast<double>(i + 1));
        m.add(i, i, 1.0);
    }
    k.compress();
    m.compress();
    CHECK(eigenvalue_count_below(k, m, 1.5) == 1);
    CHECK(eigenvalue_count_below(k, m, 3.5) == 3);
    CHECK(eigenvalue_count_below(k, m, 0.5) == 0);
    // Threshold exactly on an eigenvalue: the routine must nudge and say so.
    double used = 0.0;
    const int n_below = eigenvalue_count_below(k, m, 2.0, &used);
    CHECK(used != 2.0);
    CHECK(std::abs(used - 2.0) < 1e-6);
    CHECK(n_below >= 1);
    CHECK(n_below <= 2);
}

TEST_CASE("multiplicity grouping splits at relative gaps") {
    const std::vector<double> values = {1.0, 1.0 + 1e-9, 2.0, 2.0, 2.0, 5.0};
    const auto groups = group_multiplicities(values, 1e-6);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0] == std::pair<int, int>{0, 1});
    CHECK(groups[1] == std::pair<int, int>{2, 4});
    CHECK(groups[2] == std::pair<int, int>{5, 5});
    CHECK(group_multiplicities({}, 1e-6).empty());
    const auto single = group_multiplicities({3.25}, 1e-6);
    REQUIRE(single.size() == 1);
    CHECK(single[0] == std::pair<int, int>{0, 0});
}

TEST_CASE("invalid eigensolver requests are rejected") {
    SparseSym k(3), m(3), m4(4);
    for (int i = 0; i < 3; ++i) {
        k.add(i, i, 1.0);
        m.add(i, i, 1.0);
    }
    for (int i = 0; i < 4; ++i) m4.add(i, i, 1.0);
    k.compress();
    m.compress();
    m4.compress();
    CHECK_THROWS_AS((void)smallest_eigenpairs(k, m, 0), InvalidArgument);
    CHECK_THROWS_AS((void)smallest_eigenpairs(k, m, 4), InvalidArgument);
    CHECK_THROWS_AS((void)smallest_eigenpairs(k, m, 2, -1.0), InvalidArgument);
    CHECK_THROWS_AS((void)smallest_eigenpairs(k, m4, 2), InvalidArgument);
    CHECK_THROWS_AS((void)eigenvalue_count_below(k, m4, 1.0), InvalidArgument);
}

}  // TEST_SUITE

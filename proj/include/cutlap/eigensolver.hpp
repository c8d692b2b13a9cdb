#pragma once

// Smallest eigenpairs of the sparse symmetric generalized problem
// K x = lambda M x (K positive semidefinite, M positive definite).
//
// The workhorse is shift-invert Lanczos (ARPACK) on OP = (K - sigma*M)^-1 M
// with a negative shift, backed by a sparse LDLT factorization; problems too
// small for a Krylov basis fall back to a dense solver.  Every returned pair
// carries an explicitly recomputed residual, and the solver re-orthonormalizes
// vectors in the M inner product; contract violations raise SolverError
// rather than returning silently degraded results.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cutlap/operator.hpp"

namespace cutlap {

struct SolverStats {
    std::string method;        // "shift-invert-lanczos" or "dense"
    int iterations = 0;        // Arnoldi updates (0 for dense)
    int n_operator_applies = 0;
    uint64_t seed = 0;
    double shift = 0.0;
};

struct Spectrum {
    std::vector<double> eigenvalues;             // ascending, with multiplicity
    std::vector<std::vector<double>> eigenvectors;  // M-orthonormal dof vectors
    std::vector<double> residuals;               // ||K x - lambda M x|| / ||M x||
    SolverStats stats;
};

// k smallest eigenpairs.  `tol` bounds the relative residual
// ||Kx - lambda Mx|| / (||Mx|| * max(1, |lambda|)); vectors satisfy
// |x^T M x - 1| <= 1e-10 and pairwise |x^T M y| <= 1e-8.  Deterministic for a
// fixed seed.  Throws SolverError with diagnostics on factorization or
// convergence failure, InvalidArgument on bad sizes.
Spectrum smallest_eigenpairs(const SparseSym& stiffness, const SparseSym& mass, int k,
                             double tol = 1e-8, uint64_t seed = 20240901);

// Exact number of eigenvalues strictly below `threshold`, via the inertia of
// K - threshold*M.  When the factorization hits a near-zero pivot (threshold
// too close to an eigenvalue), the threshold is nudged upward by 3e-9
// relative steps; the value actually used is reported through
// `used_threshold` when given.
int eigenvalue_count_below(const SparseSym& stiffness, const SparseSym& mass, double threshold,
                           double* used_threshold = nullptr);

// Group indices of an ascending eigenvalue list into multiplicity clusters:
// consecutive values belong to one cluster when their gap is at most
// rel_gap * max(1, |value|).  Returns [first, last] index pairs.
std::vector<std::pair<int, int>> group_multiplicities(const std::vector<double>& eigenvalues,
                                                      double rel_gap = 1e-6);

}  // namespace cutlap

#pragma once

// Internal Eigen interop; not installed with the public headers.

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "cutlap/operator.hpp"

namespace cutlap {

// Full symmetric Eigen sparse matrix from the lower-triangle entry list.
inline Eigen::SparseMatrix<double> to_eigen(const SparseSym& a) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(a.entries().size() * 2);
    for (const auto& e : a.entries()) {
        triplets.emplace_back(e.row, e.col, e.value);
        if (e.row != e.col) triplets.emplace_back(e.col, e.row, e.value);
    }
    Eigen::SparseMatrix<double> m(a.size(), a.size());
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

inline Eigen::MatrixXd to_eigen_dense(const SparseSym& a) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.size(), a.size());
    for (const auto& e : a.entries()) {
        m(e.row, e.col) = e.value;
        if (e.row != e.col) m(e.col, e.row) = e.value;
    }
    return m;
}

}  // namespace cutlap

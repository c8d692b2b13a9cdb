#pragma once

// Dense bit-packed linear algebra over GF(2) = Z/2Z.
//
// Matrices store rows as contiguous 64-bit words, so row operations are
// word-parallel.  The elimination keeps pivots in the leftmost possible
// columns (classic leading-bit bucketing), which makes extracted solutions
// deterministic: free variables are zero, so the solution is the
// lexicographically first one for the given column order.

#include <cstdint>
#include <vector>

namespace cutlap {

class GF2Matrix {
public:
    GF2Matrix() = default;
    GF2Matrix(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    bool get(int r, int c) const {
        return (bits_[word_index(r, c)] >> (static_cast<unsigned>(c) & 63u)) & 1u;
    }
    void set(int r, int c, bool value) {
        const uint64_t mask = uint64_t{1} << (static_cast<unsigned>(c) & 63u);
        if (value)
            bits_[word_index(r, c)] |= mask;
        else
            bits_[word_index(r, c)] &= ~mask;
    }
    void flip(int r, int c) { bits_[word_index(r, c)] ^= uint64_t{1} << (static_cast<unsigned>(c) & 63u); }

    // row[target] ^= row[source]
    void xor_rows(int target, int source);

    // First set column of row r at index >= from, restricted to columns
    // < limit; returns limit when none.
    int first_set(int r, int from, int limit) const;

    // Parity of the AND of row r (columns [0, limit)) with the packed bit
    // vector x (which must have at least words_for(limit) words).
    bool dot_with(int r, const std::vector<uint64_t>& x, int limit) const;

    static int words_for(int bits) { return (bits + 63) / 64; }

private:
    size_t word_index(int r, int c) const {
        return static_cast<size_t>(r) * static_cast<size_t>(words_) + (static_cast<size_t>(c) >> 6);
    }

    int rows_ = 0, cols_ = 0;
    int words_ = 0;  // words per row
    std::vector<uint64_t> bits_;
};

// Row echelon form of the leading `solve_cols` columns; trailing columns ride
// along as right-hand sides.  The input matrix is consumed.
class GF2Elimination {
public:
    GF2Elimination(GF2Matrix matrix, int solve_cols);

    int rank() const { return static_cast<int>(pivot_col_.size()); }

    // Right-hand sides are indexed 0 .. cols() - solve_cols - 1.
    bool solvable(int rhs_index) const { return !inconsistent_[static_cast<size_t>(rhs_index)]; }

    // Solution over the leading solve_cols variables with all free variables
    // zero; requires solvable(rhs_index).  Indices of the set variables.
    std::vector<int> solution(int rhs_index) const;

private:
    GF2Matrix m_;
    int solve_cols_ = 0;
    std::vector<int> pivot_col_;   // ascending
    std::vector<int> pivot_row_;   // parallel to pivot_col_
    std::vector<char> inconsistent_;
};

int gf2_rank(GF2Matrix matrix);

}  // namespace cutlap

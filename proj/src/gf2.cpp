#include "cutlap/gf2.hpp"

#include <algorithm>
#include <bit>

#include "cutlap/errors.hpp"

namespace cutlap {

GF2Matrix::GF2Matrix(int rows, int cols) : rows_(rows), cols_(cols), words_(words_for(cols)) {
    if (rows < 0 || cols < 0) throw InvalidArgument("matrix dimensions must be nonnegative");
    bits_.assign(static_cast<size_t>(rows_) * static_cast<size_t>(words_), 0);
}

void GF2Matrix::xor_rows(int target, int source) {
    uint64_t* t = bits_.data() + static_cast<size_t>(target) * static_cast<size_t>(words_);
    const uint64_t* s = bits_.data() + static_cast<size_t>(source) * static_cast<size_t>(words_);
    for (int w = 0; w < words_; ++w) t[w] ^= s[w];
}

int GF2Matrix::first_set(int r, int from, int limit) const {
    if (from >= limit) return limit;
    const uint64_t* row = bits_.data() + static_cast<size_t>(r) * static_cast<size_t>(words_);
    const int last_word = (limit - 1) >> 6;
    int w = from >> 6;
    uint64_t word = row[w] & (~uint64_t{0} << (static_cast<unsigned>(from) & 63u));
    while (true) {
        if (w == last_word) {
            const unsigned tail = static_cast<unsigned>(limit) & 63u;
            if (tail != 0) word &= (uint64_t{1} << tail) - 1;
        }
        if (word != 0) {
            const int c = (w << 6) + std::countr_zero(word);
            return c < limit ? c : limit;
        }
        if (++w > last_word) return limit;
        word = row[w];
    }
}

bool GF2Matrix::dot_with(int r, const std::vector<uint64_t>& x, int limit) const {
    const uint64_t* row = bits_.data() + static_cast<size_t>(r) * static_cast<size_t>(words_);
    const int nw = words_for(limit);
    uint64_t acc = 0;
    for (int w = 0; w < nw; ++w) {
        uint64_t word = row[w] & x[static_cast<size_t>(w)];
        if (w == nw - 1) {
            const unsigned tail = static_cast<unsigned>(limit) & 63u;
            if (tail != 0) word &= (uint64_t{1} << tail) - 1;
        }
        acc ^= word;
    }
    return std::popcount(acc) & 1;
}

GF2Elimination::GF2Elimination(GF2Matrix matrix, int solve_cols)
    : m_(std::move(matrix)), solve_cols_(solve_cols) {
    if (solve_cols_ < 0 || solve_cols_ > m_.cols())
        throw InvalidArgument("solve_cols out of range");
    const int n_rhs = m_.cols() - solve_cols_;

    // Bucket rows by their leading set column; consume buckets left to right.
    // XOR-ing a row against the pivot of its leading column strictly
    // increases its lead, so each row is re-bucketed only rightward.
    std::vector<std::vector<int>> bucket(static_cast<size_t>(solve_cols_) + 1);
    for (int r = 0; r < m_.rows(); ++r)
        bucket[static_cast<size_t>(m_.first_set(r, 0, solve_cols_))].push_back(r);

    for (int col = 0; col < solve_cols_; ++col) {
        auto& rows_here = bucket[static_cast<size_t>(col)];
        if (rows_here.empty()) continue;
        const int pivot = rows_here.front();
        pivot_col_.push_back(col);
        pivot_row_.push_back(pivot);
        for (size_t i = 1; i < rows_here.size(); ++i) {
            const int r = rows_here[i];
            m_.xor_rows(r, pivot);
            bucket[static_cast<size_t>(m_.first_set(r, col + 1, solve_cols_))].push_back(r);
        }
        rows_here.clear();
    }

    // Rows with no lead in the solve region witness inconsistency for every
    // right-hand side they still touch.
    inconsistent_.assign(static_cast<size_t>(n_rhs > 0 ? n_rhs : 0), 0);
    for (int r : bucket[static_cast<size_t>(solve_cols_)])
        for (int k = 0; k < n_rhs; ++k)
            if (m_.get(r, solve_cols_ + k)) inconsistent_[static_cast<size_t>(k)] = 1;
}

std::vector<int> GF2Elimination::solution(int rhs_index) const {
    if (rhs_index < 0 || rhs_index >= m_.cols() - solve_cols_)
        throw InvalidArgument("right-hand side index out of range");
    if (!solvable(rhs_index)) throw InvalidArgument("system is inconsistent for this right-hand side");

    // Back-substitute bottom-up; free variables stay zero.
    std::vector<uint64_t> x(static_cast<size_t>(GF2Matrix::words_for(solve_cols_)), 0);
    std::vector<int> set_vars;
    for (int i = static_cast<int>(pivot_col_.size()) - 1; i >= 0; --i) {
        const int r = pivot_row_[static_cast<size_t>(i)];
        const int c = pivot_col_[static_cast<size_t>(i)];
        // Row r has its lead at c, so the dot over [0, solve_cols) only sees
        // columns > c (bit c of x is still zero here).
        bool val = m_.get(r, solve_cols_ + rhs_index);
        if (m_.dot_with(r, x, solve_cols_)) val = !val;
        if (val) {
            x[static_cast<size_t>(c) >> 6] |= uint64_t{1} << (static_cast<unsigned>(c) & 63u);
            set_vars.push_back(c);
        }
    }
    std::sort(set_vars.begin(), set_vars.end());
    return set_vars;
}

int gf2_rank(GF2Matrix matrix) {
    const int n = matrix.cols();
    return GF2Elimination(std::move(matrix), n).rank();
}

}  // namespace cutlap

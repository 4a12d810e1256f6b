#include "lsss/matrix.hpp"

#include <algorithm>
#include <utility>

#include "lsss/errors.hpp"

namespace lsss {

namespace {

// Reduced row echelon form, in place. Rows/columns are scanned in ascending
// order and the pivot is the first nonzero candidate, so the result (and
// everything derived from it) is deterministic. Returns (pivot row, pivot
// column) pairs in the order found; `ncols` may be smaller than the row
// width to leave trailing columns (e.g. an augmented right-hand side)
// passive during pivot selection.
std::vector<std::pair<std::size_t, std::size_t>> rref_in_place(
    const Field& f, std::vector<std::vector<Int>>& m, std::size_t ncols) {
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    std::size_t next_row = 0;
    const std::size_t width = m.empty() ? 0 : m[0].size();
    for (std::size_t col = 0; col < ncols && next_row < m.size(); ++col) {
        std::size_t piv = next_row;
        while (piv < m.size() && m[piv][col] == 0) ++piv;
        if (piv == m.size()) continue;
        std::swap(m[piv], m[next_row]);
        const Int scale = f.inv(m[next_row][col]);
        for (std::size_t c = col; c < width; ++c) {
            m[next_row][c] = f.mul(m[next_row][c], scale);
        }
        for (std::size_t r = 0; r < m.size(); ++r) {
            if (r == next_row || m[r][col] == 0) continue;
            const Int factor = m[r][col];
            for (std::size_t c = col; c < width; ++c) {
                m[r][c] = f.sub(m[r][c], f.mul(factor, m[next_row][c]));
            }
        }
        pivots.emplace_back(next_row, col);
        ++next_row;
    }
    return pivots;
}

std::vector<std::vector<Int>> to_row_vectors(const Matrix& m) {
    std::vector<std::vector<Int>> rows(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) rows[r] = m.row(r);
    return rows;
}

}  // namespace

Matrix::Matrix(Field field, std::size_t rows, std::size_t cols)
    : field_(std::move(field)), rows_(rows), cols_(cols), a_(rows * cols, Int(0)) {}

Matrix Matrix::identity(const Field& field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
    return m;
}

Matrix Matrix::from_rows(const Field& field, std::size_t cols,
                         const std::vector<std::vector<Int>>& rows) {
    Matrix m(field, rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) {
            throw validation_error("matrix row has wrong length");
        }
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
}

void Matrix::set(std::size_t r, std::size_t c, const Int& v) {
    a_[r * cols_ + c] = field_.reduce(v);
}

std::vector<Int> Matrix::row(std::size_t r) const {
    return std::vector<Int>(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_);
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
    Matrix m(field_, idx.size(), cols_);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx[i] >= rows_) throw validation_error("row index out of range");
        for (std::size_t c = 0; c < cols_; ++c) m.set(i, c, at(idx[i], c));
    }
    return m;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
    Matrix m(field_, rows_, idx.size());
    for (std::size_t j = 0; j < idx.size(); ++j) {
        if (idx[j] >= cols_) throw validation_error("column index out of range");
        for (std::size_t r = 0; r < rows_; ++r) m.set(r, j, at(r, idx[j]));
    }
    return m;
}

Matrix Matrix::mul(const Matrix& rhs) const {
    if (cols_ != rhs.rows_ || !(field_ == rhs.field_)) {
        throw validation_error("matrix product dimension/field mismatch");
    }
    Matrix out(field_, rows_, rhs.cols_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < rhs.cols_; ++c) {
            Int acc = 0;
            for (std::size_t k = 0; k < cols_; ++k) {
                acc += at(r, k) * rhs.at(k, c);
            }
            out.set(r, c, acc);
        }
    }
    return out;
}

std::vector<Int> Matrix::mul_vec(const std::vector<Int>& x) const {
    if (x.size() != cols_) throw validation_error("matrix-vector dimension mismatch");
    std::vector<Int> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        Int acc = 0;
        for (std::size_t c = 0; c < cols_; ++c) acc += at(r, c) * x[c];
        out[r] = field_.reduce(acc);
    }
    return out;
}

bool Matrix::operator==(const Matrix& other) const {
    return field_ == other.field_ && rows_ == other.rows_ && cols_ == other.cols_ &&
           a_ == other.a_;
}

std::size_t Matrix::rank() const {
    if (empty()) return 0;
    auto rows = to_row_vectors(*this);
    return rref_in_place(field_, rows, cols_).size();
}

std::optional<std::vector<Int>> Matrix::solve_in_span(const std::vector<Int>& target) const {
    if (target.size() != cols_) {
        throw validation_error("span target has wrong length");
    }
    // alpha^T · M = target^T  <=>  M^T · alpha = target.
    Matrix t(field_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) t.set(c, r, at(r, c));
    }
    return linear_solve(t, target);
}

Matrix Matrix::inverse() const {
    if (rows_ != cols_) throw validation_error("inverse of non-square matrix");
    const std::size_t n = rows_;
    std::vector<std::vector<Int>> aug(n, std::vector<Int>(2 * n, Int(0)));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) aug[r][c] = at(r, c);
        aug[r][n + r] = 1;
    }
    const auto pivots = rref_in_place(field_, aug, n);
    if (pivots.size() != n) throw validation_error("matrix is singular");
    Matrix inv(field_, n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) inv.set(r, c, aug[r][n + c]);
    }
    return inv;
}

std::optional<std::vector<Int>> linear_solve(const Matrix& a, const std::vector<Int>& b) {
    if (b.size() != a.rows()) throw validation_error("linear system dimension mismatch");
    std::vector<std::vector<Int>> aug(a.rows(), std::vector<Int>(a.cols() + 1));
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) aug[r][c] = a.at(r, c);
        aug[r][a.cols()] = a.field().reduce(b[r]);
    }
    const auto pivots = rref_in_place(a.field(), aug, a.cols());
    // Inconsistent iff some row reduced to (0,...,0 | nonzero).
    for (std::size_t r = pivots.size(); r < aug.size(); ++r) {
        if (aug[r][a.cols()] != 0) return std::nullopt;
    }
    std::vector<Int> x(a.cols(), Int(0));
    for (const auto& [row, col] : pivots) x[col] = aug[row][a.cols()];
    return x;
}

InvertibleSubmatrix find_invertible_submatrix(const Matrix& rows, std::size_t excluded_col) {
    const Field& f = rows.field();
    if (!rows.empty() && excluded_col >= rows.cols()) {
        throw validation_error("excluded column out of range");
    }
    // Eliminate over the allowed columns only, tracking original row
    // indices so W reflects the first-nonzero-in-scan-order rule.
    std::vector<std::vector<Int>> work = [&] {
        std::vector<std::vector<Int>> w(rows.rows());
        for (std::size_t r = 0; r < rows.rows(); ++r) w[r] = rows.row(r);
        return w;
    }();
    std::vector<std::size_t> orig(rows.rows());
    for (std::size_t r = 0; r < orig.size(); ++r) orig[r] = r;

    std::vector<std::size_t> w_idx, k_idx;
    std::size_t next_row = 0;
    for (std::size_t col = 0; col < rows.cols(); ++col) {
        if (col == excluded_col) continue;
        // Candidate with the smallest original index.
        std::size_t piv = rows.rows();
        for (std::size_t r = next_row; r < rows.rows(); ++r) {
            if (work[r][col] != 0 && (piv == rows.rows() || orig[r] < orig[piv])) piv = r;
        }
        if (piv == rows.rows()) continue;
        std::swap(work[piv], work[next_row]);
        std::swap(orig[piv], orig[next_row]);
        const Int scale = f.inv(work[next_row][col]);
        for (auto& v : work[next_row]) v = f.mul(v, scale);
        for (std::size_t r = 0; r < rows.rows(); ++r) {
            if (r == next_row || work[r][col] == 0) continue;
            const Int factor = work[r][col];
            for (std::size_t c = 0; c < rows.cols(); ++c) {
                work[r][c] = f.sub(work[r][c], f.mul(factor, work[next_row][c]));
            }
        }
        w_idx.push_back(orig[next_row]);
        k_idx.push_back(col);
        ++next_row;
    }

    if (w_idx.size() != rows.rank()) {
        throw unauthorized_error("row not unauthorized-consistent");
    }
    std::sort(w_idx.begin(), w_idx.end());
    const Matrix u = rows.select_rows(w_idx).select_cols(k_idx);
    return InvertibleSubmatrix{std::move(w_idx), std::move(k_idx), u.inverse()};
}

}  // namespace lsss

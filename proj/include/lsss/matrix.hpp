#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lsss/field.hpp"

namespace lsss {

/// Dense matrix over a prime field, row-major, entries canonical in [0, p).
class Matrix {
  public:
    Matrix(Field field, std::size_t rows, std::size_t cols);
    static Matrix identity(const Field& field, std::size_t n);
    static Matrix from_rows(const Field& field, std::size_t cols,
                            const std::vector<std::vector<Int>>& rows);

    const Field& field() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    const Int& at(std::size_t r, std::size_t c) const { return a_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, const Int& v);

    std::vector<Int> row(std::size_t r) const;
    Matrix select_rows(const std::vector<std::size_t>& idx) const;
    Matrix select_cols(const std::vector<std::size_t>& idx) const;

    Matrix mul(const Matrix& rhs) const;
    /// this · x for a column vector x.
    std::vector<Int> mul_vec(const std::vector<Int>& x) const;

    bool operator==(const Matrix& other) const;

    std::size_t rank() const;

    /// Coefficients alpha with alpha^T · this = target^T, or nullopt when
    /// target is outside the row span. Deterministic: reduced echelon form,
    /// free variables zero.
    std::optional<std::vector<Int>> solve_in_span(const std::vector<Int>& target) const;

    /// Inverse of a square matrix; throws validation_error when singular.
    Matrix inverse() const;

  private:
    Field field_;
    std::size_t rows_, cols_;
    std::vector<Int> a_;
};

/// Solve a · x = b with free variables set to zero; nullopt when inconsistent.
std::optional<std::vector<Int>> linear_solve(const Matrix& a, const std::vector<Int>& b);

/// Row/column index sets W, K (ascending) picking an invertible square
/// submatrix of maximal rank that avoids one column, plus the inverse of
/// that submatrix.
struct InvertibleSubmatrix {
    std::vector<std::size_t> row_idx;  // W
    std::vector<std::size_t> col_idx;  // K
    Matrix u_inverse;
};

/// For the rows assigned to an unauthorized set, selects pivot rows W and
/// pivot columns K of Gaussian elimination restricted to the columns other
/// than excluded_col, scanning rows and columns in ascending order, with
/// |W| = |K| = rank(rows). Throws unauthorized_error("row not
/// unauthorized-consistent") when no such selection reaches full rank,
/// which happens exactly when the rows span a vector supported only on the
/// excluded column (the set is authorized, or the scheme is degenerate).
InvertibleSubmatrix find_invertible_submatrix(const Matrix& rows, std::size_t excluded_col);

}  // namespace lsss

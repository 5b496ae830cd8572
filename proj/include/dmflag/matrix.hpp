#pragma once

#include "dmflag/ring.hpp"

#include <string>
#include <vector>

namespace dmflag {

using Vec = std::vector<Poly>;

/// Dense row-major matrix of polynomials; columns are images of basis vectors.
class Matrix {
public:
    Matrix() = default;
    Matrix(RingPtr ring, int rows, int cols);

    static Matrix identity(RingPtr ring, int n);
    static Matrix from_columns(RingPtr ring, int rows, const std::vector<Vec>& cols);
    /// Entries given row by row in polynomial syntax.
    static Matrix parse(RingPtr ring, const std::vector<std::vector<std::string>>& rows);

    const RingPtr& ring() const { return ring_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Poly& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Poly& at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

    Vec col(int c) const;
    void set_col(int c, const Vec& v);

    Matrix operator*(const Matrix& o) const;
    Vec operator*(const Vec& v) const;
    Matrix operator+(const Matrix& o) const;
    Matrix operator-(const Matrix& o) const;
    Matrix operator-() const;
    Matrix& operator+=(const Matrix& o) { return *this = *this + o; }
    Matrix& operator-=(const Matrix& o) { return *this = *this - o; }
    Matrix scale(const mpq_class& c) const;
    Matrix transpose() const;
    Matrix frobenius(unsigned e) const;

    /// Submatrix on the given row and column index lists.
    Matrix select(const std::vector<int>& rows, const std::vector<int>& cols) const;
    Matrix block(int r0, int c0, int nr, int nc) const;
    void set_block(int r0, int c0, const Matrix& b);
    /// Scatter b into the given row/column index lists.
    void set_select(const std::vector<int>& rows, const std::vector<int>& cols, const Matrix& b);

    static Matrix hstack(const Matrix& a, const Matrix& b);
    static Matrix vstack(const Matrix& a, const Matrix& b);
    static Matrix blockdiag(const Matrix& a, const Matrix& b);

    bool is_zero() const;
    bool has_unit_entry() const;
    bool operator==(const Matrix& o) const;
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    std::vector<std::vector<std::string>> to_strings() const;
    std::string to_string() const;

private:
    RingPtr ring_;
    int rows_ = 0, cols_ = 0;
    std::vector<Poly> data_;
};

Vec zero_vec(const RingPtr& ring, int n);
Vec unit_vec(const RingPtr& ring, int n, int k);
bool is_zero(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, const Poly& c);

/// Sequence 0..n-1 shifted by start.
std::vector<int> iota_range(int start, int n);

}  // namespace dmflag

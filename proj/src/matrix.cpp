#include "dmflag/matrix.hpp"

#include <numeric>
#include <sstream>

namespace dmflag {

Matrix::Matrix(RingPtr ring, int rows, int cols)
    : ring_(std::move(ring)), rows_(rows), cols_(cols),
      data_(static_cast<std::size_t>(rows) * cols, Poly(ring_)) {
    if (rows < 0 || cols < 0) throw RingError("negative matrix size");
}

Matrix Matrix::identity(RingPtr ring, int n) {
    Matrix m(ring, n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = Poly::constant(ring, 1);
    return m;
}

Matrix Matrix::from_columns(RingPtr ring, int rows, const std::vector<Vec>& cols) {
    Matrix m(ring, rows, static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols_; ++c) m.set_col(c, cols[c]);
    return m;
}

Matrix Matrix::parse(RingPtr ring, const std::vector<std::vector<std::string>>& rows) {
    int nr = static_cast<int>(rows.size());
    int nc = nr ? static_cast<int>(rows[0].size()) : 0;
    Matrix m(ring, nr, nc);
    for (int r = 0; r < nr; ++r) {
        if (static_cast<int>(rows[r].size()) != nc) throw RingError("ragged matrix rows");
        for (int c = 0; c < nc; ++c) m.at(r, c) = Poly::parse(ring, rows[r][c]);
    }
    return m;
}

Vec Matrix::col(int c) const {
    Vec v;
    v.reserve(rows_);
    for (int r = 0; r < rows_; ++r) v.push_back(at(r, c));
    return v;
}

void Matrix::set_col(int c, const Vec& v) {
    if (static_cast<int>(v.size()) != rows_) throw RingError("column length mismatch");
    for (int r = 0; r < rows_; ++r) at(r, c) = v[r];
}

Matrix Matrix::operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw RingError("matrix product shape mismatch");
    Matrix m(ring_, rows_, o.cols_);
    for (int r = 0; r < rows_; ++r)
        for (int k = 0; k < cols_; ++k) {
            const Poly& a = at(r, k);
            if (a.is_zero()) continue;
            for (int c = 0; c < o.cols_; ++c) {
                const Poly& b = o.at(k, c);
                if (!b.is_zero()) m.at(r, c) += a * b;
            }
        }
    return m;
}

Vec Matrix::operator*(const Vec& v) const {
    if (static_cast<int>(v.size()) != cols_) throw RingError("matrix-vector shape mismatch");
    Vec out = zero_vec(ring_, rows_);
    for (int k = 0; k < cols_; ++k) {
        if (v[k].is_zero()) continue;
        for (int r = 0; r < rows_; ++r)
            if (!at(r, k).is_zero()) out[r] += at(r, k) * v[k];
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw RingError("matrix sum shape mismatch");
    Matrix m(*this);
    for (std::size_t i = 0; i < data_.size(); ++i)
        if (!o.data_[i].is_zero()) m.data_[i] += o.data_[i];
    return m;
}

Matrix Matrix::operator-() const {
    Matrix m(*this);
    for (auto& p : m.data_) p = -p;
    return m;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + (-o); }

Matrix Matrix::scale(const mpq_class& c) const {
    Matrix m(*this);
    for (auto& p : m.data_) p = p.scale(c);
    return m;
}

Matrix Matrix::transpose() const {
    Matrix m(ring_, cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
}

Matrix Matrix::frobenius(unsigned e) const {
    Matrix m(*this);
    for (auto& p : m.data_) p = p.frobenius(e);
    return m;
}

Matrix Matrix::select(const std::vector<int>& rs, const std::vector<int>& cs) const {
    Matrix m(ring_, static_cast<int>(rs.size()), static_cast<int>(cs.size()));
    for (int i = 0; i < m.rows_; ++i)
        for (int j = 0; j < m.cols_; ++j) m.at(i, j) = at(rs[i], cs[j]);
    return m;
}

Matrix Matrix::block(int r0, int c0, int nr, int nc) const {
    return select(iota_range(r0, nr), iota_range(c0, nc));
}

void Matrix::set_block(int r0, int c0, const Matrix& b) {
    set_select(iota_range(r0, b.rows_), iota_range(c0, b.cols_), b);
}

void Matrix::set_select(const std::vector<int>& rs, const std::vector<int>& cs, const Matrix& b) {
    if (static_cast<int>(rs.size()) != b.rows_ || static_cast<int>(cs.size()) != b.cols_)
        throw RingError("block shape mismatch");
    for (int i = 0; i < b.rows_; ++i)
        for (int j = 0; j < b.cols_; ++j) at(rs[i], cs[j]) = b.at(i, j);
}

Matrix Matrix::hstack(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) throw RingError("hstack row mismatch");
    Matrix m(a.ring_ ? a.ring_ : b.ring_, a.rows_, a.cols_ + b.cols_);
    m.set_block(0, 0, a);
    m.set_block(0, a.cols_, b);
    return m;
}

Matrix Matrix::vstack(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.cols_) throw RingError("vstack column mismatch");
    Matrix m(a.ring_ ? a.ring_ : b.ring_, a.rows_ + b.rows_, a.cols_);
    m.set_block(0, 0, a);
    m.set_block(a.rows_, 0, b);
    return m;
}

Matrix Matrix::blockdiag(const Matrix& a, const Matrix& b) {
    Matrix m(a.ring_ ? a.ring_ : b.ring_, a.rows_ + b.rows_, a.cols_ + b.cols_);
    m.set_block(0, 0, a);
    m.set_block(a.rows_, a.cols_, b);
    return m;
}

bool Matrix::is_zero() const {
    for (const auto& p : data_)
        if (!p.is_zero()) return false;
    return true;
}

bool Matrix::has_unit_entry() const {
    for (const auto& p : data_)
        if (p.is_unit()) return true;
    return false;
}

bool Matrix::operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
}

std::vector<std::vector<std::string>> Matrix::to_strings() const {
    std::vector<std::vector<std::string>> out(rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) out[r].push_back(at(r, c).to_string());
    return out;
}

std::string Matrix::to_string() const {
    std::ostringstream os;
    os << '[';
    for (int r = 0; r < rows_; ++r) {
        os << (r ? ", [" : "[");
        for (int c = 0; c < cols_; ++c) os << (c ? ", " : "") << at(r, c).to_string();
        os << ']';
    }
    os << ']';
    return os.str();
}

Vec zero_vec(const RingPtr& ring, int n) { return Vec(n, Poly(ring)); }

Vec unit_vec(const RingPtr& ring, int n, int k) {
    Vec v = zero_vec(ring, n);
    v[k] = Poly::constant(ring, 1);
    return v;
}

bool is_zero(const Vec& v) {
    for (const auto& p : v)
        if (!p.is_zero()) return false;
    return true;
}

Vec add(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    Vec r(a);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
    return r;
}

Vec scale(const Vec& a, const Poly& c) {
    Vec r(a);
    for (auto& p : r) p *= c;
    return r;
}

std::vector<int> iota_range(int start, int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), start);
    return v;
}

}  // namespace dmflag

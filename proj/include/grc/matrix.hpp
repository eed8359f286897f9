#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "grc/field.hpp"

namespace grc {

/// Dense row-major matrix over GF(p). Value semantics throughout;
/// elimination uses the first nonzero pivot in column order, which keeps
/// every factorization and basis deterministic.
class Matrix {
  public:
    Matrix(const PrimeField& f, std::size_t rows, std::size_t cols)
        : f_(f), rows_(rows), cols_(cols), e_(rows * cols, 0) {}

    Matrix(const PrimeField& f, std::size_t rows, std::size_t cols, std::vector<u64> entries)
        : f_(f), rows_(rows), cols_(cols), e_(std::move(entries)) {
        if (e_.size() != rows_ * cols_) throw std::invalid_argument("Matrix: entry count mismatch");
        for (auto& v : e_) v %= f_.modulus();
    }

    static Matrix identity(const PrimeField& f, std::size_t n) {
        Matrix m(f, n, n);
        for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    /// Row i = (1, x_i, x_i^2, ..., x_i^{cols-1}). Points must be distinct
    /// and nonzero.
    static Matrix vandermonde(const PrimeField& f, const std::vector<u64>& points, std::size_t cols) {
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (points[i] % f.modulus() == 0) throw std::invalid_argument("vandermonde: zero point");
            for (std::size_t j = i + 1; j < points.size(); ++j) {
                if (points[i] % f.modulus() == points[j] % f.modulus()) {
                    throw std::invalid_argument("vandermonde: duplicate point");
                }
            }
        }
        Matrix m(f, points.size(), cols);
        for (std::size_t i = 0; i < points.size(); ++i) {
            u64 v = 1;
            for (std::size_t j = 0; j < cols; ++j) {
                m.at(i, j) = v;
                v = f.mul(v, points[i]);
            }
        }
        return m;
    }

    const PrimeField& field() const { return f_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    u64& at(std::size_t r, std::size_t c) { return e_[r * cols_ + c]; }
    u64 at(std::size_t r, std::size_t c) const { return e_[r * cols_ + c]; }
    u64 operator()(std::size_t r, std::size_t c) const { return at(r, c); }

    bool operator==(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_ && e_ == o.e_; }
    bool operator!=(const Matrix& o) const { return !(*this == o); }

    Matrix operator*(const Matrix& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("Matrix: product dimension mismatch");
        Matrix r(f_, rows_, o.cols_);
        for (std::size_t i = 0; i < rows_; ++i) {
            for (std::size_t k = 0; k < cols_; ++k) {
                u64 a = at(i, k);
                if (a == 0) continue;
                for (std::size_t j = 0; j < o.cols_; ++j) {
                    r.at(i, j) = f_.add(r.at(i, j), f_.mul(a, o.at(k, j)));
                }
            }
        }
        return r;
    }

    Matrix operator+(const Matrix& o) const {
        require_same_shape(o, "sum");
        Matrix r(f_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_.add(e_[i], o.e_[i]);
        return r;
    }

    Matrix operator-(const Matrix& o) const {
        require_same_shape(o, "difference");
        Matrix r(f_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_.sub(e_[i], o.e_[i]);
        return r;
    }

    Matrix scaled(u64 c) const {
        Matrix r(f_, rows_, cols_);
        for (std::size_t i = 0; i < e_.size(); ++i) r.e_[i] = f_.mul(e_[i], c);
        return r;
    }

    Matrix transpose() const {
        Matrix r(f_, cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
        return r;
    }

    std::vector<u64> operator*(const std::vector<u64>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("Matrix: vector length mismatch");
        std::vector<u64> r(rows_, 0);
        for (std::size_t i = 0; i < rows_; ++i) {
            u64 acc = 0;
            for (std::size_t j = 0; j < cols_; ++j) acc = f_.add(acc, f_.mul(at(i, j), v[j]));
            r[i] = acc;
        }
        return r;
    }

    std::vector<u64> row(std::size_t i) const {
        return std::vector<u64>(e_.begin() + i * cols_, e_.begin() + (i + 1) * cols_);
    }

    std::vector<u64> col(std::size_t j) const {
        std::vector<u64> r(rows_);
        for (std::size_t i = 0; i < rows_; ++i) r[i] = at(i, j);
        return r;
    }

    Matrix columns(const std::vector<std::size_t>& idx) const {
        Matrix r(f_, rows_, idx.size());
        for (std::size_t j = 0; j < idx.size(); ++j)
            for (std::size_t i = 0; i < rows_; ++i) r.at(i, j) = at(i, idx[j]);
        return r;
    }

    static Matrix hstack(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("Matrix: hstack row mismatch");
        Matrix r(a.f_, a.rows_, a.cols_ + b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
            for (std::size_t j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
        }
        return r;
    }

    static Matrix vstack(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("Matrix: vstack column mismatch");
        Matrix r(a.f_, a.rows_ + b.rows_, a.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
        return r;
    }

    bool is_zero() const {
        for (u64 v : e_)
            if (v != 0) return false;
        return true;
    }

    /// Reduced row echelon form together with the pivot column indices.
    std::pair<Matrix, std::vector<std::size_t>> rref() const {
        Matrix m = *this;
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols_ && r < rows_; ++c) {
            std::size_t sel = r;
            while (sel < rows_ && m.at(sel, c) == 0) ++sel;
            if (sel == rows_) continue;
            if (sel != r) m.swap_rows(sel, r);
            u64 inv = f_.inv(m.at(r, c));
            for (std::size_t j = c; j < cols_; ++j) m.at(r, j) = f_.mul(m.at(r, j), inv);
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || m.at(i, c) == 0) continue;
                u64 factor = m.at(i, c);
                for (std::size_t j = c; j < cols_; ++j) {
                    m.at(i, j) = f_.sub(m.at(i, j), f_.mul(factor, m.at(r, j)));
                }
            }
            pivots.push_back(c);
            ++r;
        }
        return {std::move(m), std::move(pivots)};
    }

    std::size_t rank() const { return rref().second.size(); }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("Matrix: inverse of non-square matrix");
        auto [m, pivots] = Matrix::hstack(*this, identity(f_, rows_)).rref();
        for (std::size_t i = 0; i < rows_; ++i) {
            if (i >= pivots.size() || pivots[i] != i) throw std::domain_error("Matrix: singular matrix");
        }
        Matrix r(f_, rows_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < rows_; ++j) r.at(i, j) = m.at(i, rows_ + j);
        return r;
    }

    /// Columns spanning the kernel, one per free column of the RREF, in
    /// ascending free-column order.
    Matrix nullspace() const {
        auto [m, pivots] = rref();
        std::vector<bool> is_pivot(cols_, false);
        for (auto c : pivots) is_pivot[c] = true;
        std::vector<std::size_t> free_cols;
        for (std::size_t c = 0; c < cols_; ++c)
            if (!is_pivot[c]) free_cols.push_back(c);
        Matrix basis(f_, cols_, free_cols.size());
        for (std::size_t k = 0; k < free_cols.size(); ++k) {
            std::size_t fc = free_cols[k];
            basis.at(fc, k) = 1;
            for (std::size_t i = 0; i < pivots.size(); ++i) {
                basis.at(pivots[i], k) = f_.neg(m.at(i, fc));
            }
        }
        return basis;
    }

    /// CR factorization: A = C * R with C the pivot columns of A and R the
    /// nonzero rows of rref(A). Inner dimension equals rank(A).
    std::pair<Matrix, Matrix> rank_factorize() const {
        auto [m, pivots] = rref();
        Matrix c = columns(pivots);
        Matrix r(f_, pivots.size(), cols_);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            for (std::size_t j = 0; j < cols_; ++j) r.at(i, j) = m.at(i, j);
        return {std::move(c), std::move(r)};
    }

    /// One solution X of (*this) X = B with free variables set to zero.
    /// Throws if the system is inconsistent.
    Matrix solve(const Matrix& b) const {
        if (b.rows_ != rows_) throw std::invalid_argument("Matrix: solve dimension mismatch");
        auto [m, pivots] = Matrix::hstack(*this, b).rref();
        for (std::size_t i = pivots.size(); i > 0; --i) {
            if (pivots[i - 1] >= cols_) throw std::domain_error("Matrix: inconsistent linear system");
        }
        Matrix x(f_, cols_, b.cols_);
        for (std::size_t i = 0; i < pivots.size(); ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) x.at(pivots[i], j) = m.at(i, cols_ + j);
        return x;
    }

    std::vector<u64> solve(const std::vector<u64>& b) const {
        Matrix rhs(f_, b.size(), 1, std::vector<u64>(b));
        return solve(rhs).col(0);
    }

  private:
    void swap_rows(std::size_t a, std::size_t b) {
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }

    void require_same_shape(const Matrix& o, const char* what) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument(std::string("Matrix: ") + what + " shape mismatch");
        }
    }

    PrimeField f_;
    std::size_t rows_, cols_;
    std::vector<u64> e_;
};

namespace vec {

inline std::vector<u64> add(const PrimeField& f, const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec::add: length mismatch");
    std::vector<u64> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.add(a[i], b[i]);
    return r;
}

inline std::vector<u64> sub(const PrimeField& f, const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec::sub: length mismatch");
    std::vector<u64> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.sub(a[i], b[i]);
    return r;
}

inline std::vector<u64> scale(const PrimeField& f, const std::vector<u64>& a, u64 c) {
    std::vector<u64> r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = f.mul(a[i], c);
    return r;
}

inline u64 dot(const PrimeField& f, const std::vector<u64>& a, const std::vector<u64>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec::dot: length mismatch");
    u64 acc = 0;
    for (std::size_t i = 0; i < a.size(); ++i) acc = f.add(acc, f.mul(a[i], b[i]));
    return acc;
}

}  // namespace vec

}  // namespace grc

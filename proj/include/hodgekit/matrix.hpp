#pragma once

#include "rational.hpp"

#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace hodgekit {

using Vec = std::vector<Scalar>;

/// Dense matrix over Gaussian rationals. Acts on column vectors:
/// an (r x c) matrix maps Q^c -> Q^r.
class Matrix {
  public:
    Matrix() : rows_(0), cols_(0) {}
    Matrix(int rows, int cols) : rows_(rows), cols_(cols), e_(size_t(rows) * cols) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("negative matrix dimension");
    }

    static Matrix identity(int n) {
        Matrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = Scalar(1);
        return m;
    }
    static Matrix zero(int rows, int cols) { return Matrix(rows, cols); }

    static Matrix from_rows(const std::vector<Vec>& rows, int cols) {
        Matrix m(int(rows.size()), cols);
        for (size_t i = 0; i < rows.size(); ++i) {
            if (int(rows[i].size()) != cols) throw std::invalid_argument("ragged row list");
            for (int j = 0; j < cols; ++j) m.at(int(i), j) = rows[i][j];
        }
        return m;
    }

    /// Column j of the result is f(e_j); f maps Q^cols -> Q^rows.
    static Matrix from_action(int rows, int cols, const std::function<Vec(const Vec&)>& f) {
        Matrix m(rows, cols);
        for (int j = 0; j < cols; ++j) {
            Vec ej(cols, Scalar(0));
            ej[j] = Scalar(1);
            Vec img = f(ej);
            if (int(img.size()) != rows) throw std::invalid_argument("action has wrong dimension");
            for (int i = 0; i < rows; ++i) m.at(i, j) = img[i];
        }
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Scalar& at(int i, int j) { return e_[size_t(i) * cols_ + j]; }
    const Scalar& at(int i, int j) const { return e_[size_t(i) * cols_ + j]; }

    Vec col(int j) const {
        Vec v(rows_);
        for (int i = 0; i < rows_; ++i) v[i] = at(i, j);
        return v;
    }
    Vec row(int i) const {
        Vec r(cols_);
        for (int j = 0; j < cols_; ++j) r[j] = at(i, j);
        return r;
    }

    bool is_zero() const {
        for (const auto& s : e_)
            if (!s.is_zero()) return false;
        return true;
    }
    bool is_rational() const {
        for (const auto& s : e_)
            if (!s.is_rational()) return false;
        return true;
    }

    Matrix transpose() const {
        Matrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }
    Matrix conjugate() const {
        Matrix c(rows_, cols_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) c.at(i, j) = at(i, j).conj();
        return c;
    }

    friend Matrix operator+(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        Matrix r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] + b.e_[k];
        return r;
    }
    friend Matrix operator-(const Matrix& a, const Matrix& b) {
        check_same(a, b);
        Matrix r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = a.e_[k] - b.e_[k];
        return r;
    }
    friend Matrix operator*(const Scalar& s, const Matrix& a) {
        Matrix r(a.rows_, a.cols_);
        for (size_t k = 0; k < a.e_.size(); ++k) r.e_[k] = s * a.e_[k];
        return r;
    }
    friend Matrix operator*(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product dimension mismatch");
        Matrix r(a.rows_, b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int k = 0; k < a.cols_; ++k) {
                if (a.at(i, k).is_zero()) continue;
                for (int j = 0; j < b.cols_; ++j) r.at(i, j) += a.at(i, k) * b.at(k, j);
            }
        return r;
    }
    friend Vec operator*(const Matrix& a, const Vec& v) {
        if (a.cols_ != int(v.size())) throw std::invalid_argument("matrix-vector mismatch");
        Vec r(a.rows_, Scalar(0));
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j)
                if (!a.at(i, j).is_zero()) r[i] += a.at(i, j) * v[j];
        return r;
    }
    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.e_ == b.e_;
    }
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

    Matrix pow(int k) const {
        if (rows_ != cols_) throw std::invalid_argument("power of non-square matrix");
        if (k < 0) throw std::invalid_argument("negative matrix power");
        Matrix r = identity(rows_);
        for (int i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    /// In-place reduced row echelon form; returns pivot column indices.
    std::vector<int> rref() {
        std::vector<int> pivots;
        int r = 0;
        for (int c = 0; c < cols_ && r < rows_; ++c) {
            int p = -1;
            for (int i = r; i < rows_; ++i)
                if (!at(i, c).is_zero()) { p = i; break; }
            if (p < 0) continue;
            if (p != r)
                for (int j = 0; j < cols_; ++j) std::swap(at(p, j), at(r, j));
            Scalar inv = Scalar(1) / at(r, c);
            for (int j = c; j < cols_; ++j) at(r, j) *= inv;
            for (int i = 0; i < rows_; ++i) {
                if (i == r || at(i, c).is_zero()) continue;
                Scalar f = at(i, c);
                for (int j = c; j < cols_; ++j) at(i, j) -= f * at(r, j);
            }
            pivots.push_back(c);
            ++r;
        }
        return pivots;
    }

    int rank() const {
        Matrix c = *this;
        return int(c.rref().size());
    }

    /// Basis rows for { v in Q^cols : A v = 0 }.
    Matrix kernel() const {
        Matrix a = *this;
        std::vector<int> pivots = a.rref();
        std::vector<bool> is_pivot(cols_, false);
        for (int p : pivots) is_pivot[p] = true;
        std::vector<Vec> basis;
        for (int c = 0; c < cols_; ++c) {
            if (is_pivot[c]) continue;
            Vec v(cols_, Scalar(0));
            v[c] = Scalar(1);
            for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -a.at(int(r), c);
            basis.push_back(std::move(v));
        }
        return from_rows(basis, cols_);
    }

    /// One solution x of A x = b, if any.
    std::optional<Vec> solve(const Vec& b) const {
        if (int(b.size()) != rows_) throw std::invalid_argument("solve: rhs dimension mismatch");
        Matrix aug(rows_, cols_ + 1);
        for (int i = 0; i < rows_; ++i) {
            for (int j = 0; j < cols_; ++j) aug.at(i, j) = at(i, j);
            aug.at(i, cols_) = b[i];
        }
        std::vector<int> pivots = aug.rref();
        if (!pivots.empty() && pivots.back() == cols_) return std::nullopt;
        Vec x(cols_, Scalar(0));
        for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug.at(int(r), cols_);
        return x;
    }

    /// Horizontal concatenation [A | B].
    static Matrix hcat(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_) throw std::invalid_argument("hcat row mismatch");
        Matrix r(a.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
            for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
        }
        return r;
    }
    /// Vertical stack.
    static Matrix vcat(const Matrix& a, const Matrix& b) {
        if (a.cols_ != b.cols_) throw std::invalid_argument("vcat column mismatch");
        Matrix r(a.rows_ + b.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
        return r;
    }

    static Matrix kronecker(const Matrix& a, const Matrix& b) {
        Matrix r(a.rows_ * b.rows_, a.cols_ * b.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j)
                for (int k = 0; k < b.rows_; ++k)
                    for (int l = 0; l < b.cols_; ++l)
                        r.at(i * b.rows_ + k, j * b.cols_ + l) = a.at(i, j) * b.at(k, l);
        return r;
    }

    /// Determinant by fraction-producing Gaussian elimination.
    Scalar det() const {
        if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
        Matrix a = *this;
        Scalar d(1);
        for (int c = 0; c < cols_; ++c) {
            int p = -1;
            for (int i = c; i < rows_; ++i)
                if (!a.at(i, c).is_zero()) { p = i; break; }
            if (p < 0) return Scalar(0);
            if (p != c) {
                for (int j = 0; j < cols_; ++j) std::swap(a.at(p, j), a.at(c, j));
                d = -d;
            }
            d *= a.at(c, c);
            Scalar inv = Scalar(1) / a.at(c, c);
            for (int i = c + 1; i < rows_; ++i) {
                if (a.at(i, c).is_zero()) continue;
                Scalar f = a.at(i, c) * inv;
                for (int j = c; j < cols_; ++j) a.at(i, j) -= f * a.at(c, j);
            }
        }
        return d;
    }

    bool is_invertible() const { return rows_ == cols_ && rank() == rows_; }

    Matrix inverse() const {
        if (rows_ != cols_) throw std::invalid_argument("inverse of non-square matrix");
        Matrix aug = hcat(*this, identity(rows_));
        aug.rref();
        for (int i = 0; i < rows_; ++i)
            if (aug.at(i, i) != Scalar(1)) throw std::domain_error("matrix not invertible");
        Matrix inv(rows_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < rows_; ++j) inv.at(i, j) = aug.at(i, rows_ + j);
        return inv;
    }

    /// Smallest e with A^e = 0, or -1 if A is not nilpotent.
    int nilpotency_index() const {
        if (rows_ != cols_) return -1;
        Matrix p = identity(rows_);
        for (int e = 0; e <= rows_; ++e) {
            if (p.is_zero()) return e;
            p = p * *this;
        }
        return -1;
    }
    bool is_nilpotent() const { return nilpotency_index() >= 0; }

    bool commutes_with(const Matrix& o) const { return *this * o == o * *this; }

  private:
    static void check_same(const Matrix& a, const Matrix& b) {
        if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
            throw std::invalid_argument("matrix dimension mismatch");
    }

    int rows_, cols_;
    std::vector<Scalar> e_;
};

inline Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector sum mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}
inline Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector difference mismatch");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}
inline Vec conj_vec(Vec v) {
    for (Scalar& s : v) s = s.conj();
    return v;
}

inline Vec operator*(const Scalar& s, const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}
inline bool is_zero_vec(const Vec& v) {
    for (const auto& s : v)
        if (!s.is_zero()) return false;
    return true;
}

} // namespace hodgekit

#pragma once

#include "matrix.hpp"

#include <algorithm>
#include <vector>

namespace hodgekit {

/// Linear subspace of Q(i)^n in canonical form: the basis matrix is the
/// reduced row echelon form of any spanning set, so two equal subspaces
/// compare equal entry for entry.
class Subspace {
  public:
    Subspace() : ambient_(0) {}

    explicit Subspace(int ambient_dim) : ambient_(ambient_dim), basis_(0, ambient_dim) {
        if (ambient_dim < 0) throw std::invalid_argument("negative ambient dimension");
    }

    static Subspace zero(int ambient_dim) { return Subspace(ambient_dim); }

    static Subspace full(int ambient_dim) {
        return span(Matrix::identity(ambient_dim), ambient_dim);
    }

    /// Span of the rows of m inside Q(i)^ambient_dim.
    static Subspace span(Matrix m, int ambient_dim) {
        if (m.cols() != ambient_dim)
            throw std::invalid_argument("spanning rows have wrong ambient dimension");
        Subspace s(ambient_dim);
        std::vector<int> pivots = m.rref();
        Matrix b(int(pivots.size()), ambient_dim);
        for (size_t i = 0; i < pivots.size(); ++i)
            for (int j = 0; j < ambient_dim; ++j) b.at(int(i), j) = m.at(int(i), j);
        s.basis_ = std::move(b);
        s.pivots_ = std::move(pivots);
        return s;
    }

    static Subspace span_vec(const std::vector<Vec>& rows, int ambient_dim) {
        return span(Matrix::from_rows(rows, ambient_dim), ambient_dim);
    }

    static Subspace line(const Vec& v) {
        return span_vec({v}, int(v.size()));
    }

    int ambient_dim() const { return ambient_; }
    int dim() const { return basis_.rows(); }
    const Matrix& basis() const { return basis_; }
    const std::vector<int>& pivots() const { return pivots_; }
    Vec basis_row(int i) const { return basis_.row(i); }

    bool is_zero() const { return dim() == 0; }
    bool is_full() const { return dim() == ambient_; }

    bool contains(const Vec& v) const {
        if (int(v.size()) != ambient_) throw std::invalid_argument("vector dimension mismatch");
        return is_zero_vec(reduce(v));
    }
    bool contains(const Subspace& other) const {
        check_ambient(other);
        for (int i = 0; i < other.dim(); ++i)
            if (!contains(other.basis_row(i))) return false;
        return true;
    }

    /// v minus its projection onto this subspace along the pivot coordinates;
    /// zero iff v lies in the subspace.
    Vec reduce(Vec v) const {
        for (size_t r = 0; r < pivots_.size(); ++r) {
            Scalar c = v[pivots_[r]];
            if (c.is_zero()) continue;
            for (int j = 0; j < ambient_; ++j) v[j] -= c * basis_.at(int(r), j);
        }
        return v;
    }

    friend Subspace operator+(const Subspace& a, const Subspace& b) {
        a.check_ambient(b);
        return span(Matrix::vcat(a.basis_, b.basis_), a.ambient_);
    }

    friend Subspace intersect(const Subspace& a, const Subspace& b) {
        a.check_ambient(b);
        if (a.is_zero() || b.is_zero()) return zero(a.ambient_);
        // (u, v) with u A + v B = 0 gives u A = -v B in the intersection.
        Matrix sys = Matrix::hcat(a.basis_.transpose(), b.basis_.transpose());
        Matrix ker = sys.kernel();
        std::vector<Vec> rows;
        for (int i = 0; i < ker.rows(); ++i) {
            Vec w(a.ambient_, Scalar(0));
            for (int r = 0; r < a.dim(); ++r)
                for (int j = 0; j < a.ambient_; ++j)
                    w[j] += ker.at(i, r) * a.basis_.at(r, j);
            rows.push_back(std::move(w));
        }
        return span_vec(rows, a.ambient_);
    }

    friend bool operator==(const Subspace& a, const Subspace& b) {
        return a.ambient_ == b.ambient_ && a.basis_ == b.basis_;
    }
    friend bool operator!=(const Subspace& a, const Subspace& b) { return !(a == b); }

    /// Annihilator { phi : phi(v) = 0 for v here } in the dual space Q(i)^n.
    Subspace annihilator() const {
        if (is_zero()) return full(ambient_);
        return span(basis_.kernel(), ambient_);
    }

    /// Image under the linear map m : Q^ambient -> Q^(m.rows()).
    Subspace image_under(const Matrix& m) const {
        if (m.cols() != ambient_) throw std::invalid_argument("transport dimension mismatch");
        std::vector<Vec> rows;
        for (int i = 0; i < dim(); ++i) rows.push_back(m * basis_row(i));
        return span_vec(rows, m.rows());
    }

    /// Full preimage m^{-1}(this); contains Ker m.
    Subspace preimage_under(const Matrix& m) const {
        if (m.rows() != ambient_) throw std::invalid_argument("transport dimension mismatch");
        Subspace ann = annihilator();
        if (ann.is_zero()) return full(m.cols());
        return span((ann.basis() * m).kernel(), m.cols());
    }

    Subspace conjugate() const {
        return span(basis_.conjugate(), ambient_);
    }

    bool is_rational() const { return basis_.is_rational(); }

    /// Coordinates of v in this subspace's basis (v must lie in the subspace).
    Vec coords(const Vec& v) const {
        if (!contains(v)) throw std::invalid_argument("coords of vector outside subspace");
        Vec c(dim());
        for (int r = 0; r < dim(); ++r) c[r] = v[pivots_[r]];
        return c;
    }

    /// dim x ambient matrix computing coords (valid on vectors of the subspace).
    Matrix coord_map() const {
        Matrix p(dim(), ambient_);
        for (int r = 0; r < dim(); ++r) p.at(r, pivots_[r]) = Scalar(1);
        return p;
    }
    /// ambient x dim matrix embedding coordinates back into the ambient space.
    Matrix embed_map() const { return basis_.transpose(); }

  private:
    void check_ambient(const Subspace& o) const {
        if (ambient_ != o.ambient_) throw std::invalid_argument("ambient dimension mismatch");
    }

    int ambient_;
    Matrix basis_;
    std::vector<int> pivots_;
};

/// Coordinates for a quotient V / A: `proj` is a (q x n) matrix with
/// proj * section = id, q = n - dim A, and Ker proj = A.
struct QuotientMap {
    Subspace denom;
    Matrix proj;
    Matrix section;

    explicit QuotientMap(const Subspace& a) : denom(a) {
        int n = a.ambient_dim();
        int q = n - a.dim();
        std::vector<bool> is_pivot(n, false);
        for (int p : a.pivots()) is_pivot[p] = true;
        std::vector<int> free_cols;
        for (int j = 0; j < n; ++j)
            if (!is_pivot[j]) free_cols.push_back(j);
        proj = Matrix(q, n);
        for (int j = 0; j < n; ++j) {
            Vec ej(n, Scalar(0));
            ej[j] = Scalar(1);
            Vec r = a.reduce(ej);
            for (int k = 0; k < q; ++k) proj.at(k, j) = r[free_cols[k]];
        }
        section = Matrix(n, q);
        for (int k = 0; k < q; ++k) section.at(free_cols[k], k) = Scalar(1);
    }

    int quot_dim() const { return proj.rows(); }

    Subspace push(const Subspace& s) const { return s.image_under(proj); }
    Subspace pull(const Subspace& s) const { return s.preimage_under(proj); }

    /// Map induced on the quotient by n : V -> V with n(A) <= A.
    Matrix induced(const Matrix& n) const {
        if (!(denom.image_under(n)).image_under(proj).is_zero())
            throw std::invalid_argument("operator does not preserve the denominator");
        return proj * n * section;
    }
};

/// Coordinates of a subspace A as a space in its own right.
struct SubspaceMap {
    Subspace sub;
    Matrix to_coords;   // dim x ambient (valid on vectors of A)
    Matrix from_coords; // ambient x dim

    explicit SubspaceMap(const Subspace& a)
        : sub(a), to_coords(a.coord_map()), from_coords(a.embed_map()) {}

    int sub_dim() const { return sub.dim(); }

    /// B <= A expressed in A's coordinates.
    Subspace restrict(const Subspace& b) const {
        if (!sub.contains(b)) throw std::invalid_argument("restrict: not a subspace of A");
        return b.image_under(to_coords);
    }
    Subspace unrestrict(const Subspace& b_in_coords) const {
        return b_in_coords.image_under(from_coords);
    }

    /// Map induced on A's coordinates by n : V -> V with n(A) <= A.
    Matrix induced(const Matrix& n) const {
        if (!sub.contains(sub.image_under(n)))
            throw std::invalid_argument("operator does not preserve the subspace");
        return to_coords * n * from_coords;
    }
};

/// Coordinates on a subquotient K / I of an ambient space (I <= K).
struct Subquotient {
    SubspaceMap g;
    QuotientMap q;
    Matrix to_h;   // h_dim x ambient, valid on vectors of K
    Matrix from_h; // ambient x h_dim, section picking representatives in K

    Subquotient(const Subspace& kernel, const Subspace& image)
        : g(kernel), q(g.restrict(image)),
          to_h(q.proj * g.to_coords), from_h(g.from_coords * q.section) {}

    int dim() const { return q.quot_dim(); }
};

} // namespace hodgekit

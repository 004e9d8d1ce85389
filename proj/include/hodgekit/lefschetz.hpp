#pragma once

#include "hodge.hpp"

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hodgekit {

using BiKey = std::pair<int, int>;

inline std::string bd(int i, int j) {
    return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

/// One bigraded summand: a based space in its own coordinates carrying a pure
/// Hodge structure (decreasing F accessed through at_dec, Fbar defaulting to
/// the conjugate of F).
struct HLPiece {
    int dim = 0;
    int weight = 0;
    Filtration f{0};
    std::optional<Filtration> fbar_user;

    HLPiece() = default;
    HLPiece(int d, int wgt, Filtration ff) : dim(d), weight(wgt), f(std::move(ff)) {}

    Filtration fbar() const { return fbar_user ? *fbar_user : f.conjugate(); }
};

/// Bigraded structure with commuting operators l1 of bidegree (2,0) and l2 of
/// bidegree (0,2), an optional pairing S coupling (i,j) with (-i,-j), and an
/// optional differential d of bidegree (1,1). Operator maps are keyed by the
/// source bidegree; a missing entry is the zero map.
struct BigradedHL {
    std::map<BiKey, HLPiece> pieces;
    std::map<BiKey, Matrix> l1, l2, d;
    std::map<BiKey, Matrix> s; // s[{i,j}] is dim(i,j) x dim(-i,-j); S(x,y) = x^T s y
    bool has_s = false;
    bool has_d = false;

    int dim(int i, int j) const {
        auto it = pieces.find({i, j});
        return it == pieces.end() ? 0 : it->second.dim;
    }
    const HLPiece* piece(int i, int j) const {
        auto it = pieces.find({i, j});
        return it == pieces.end() ? nullptr : &it->second;
    }

    Matrix op_at(const std::map<BiKey, Matrix>& ops, int i, int j, int di, int dj) const {
        auto it = ops.find({i, j});
        if (it != ops.end()) return it->second;
        return Matrix(dim(i + di, j + dj), dim(i, j));
    }
    Matrix l1_at(int i, int j) const { return op_at(l1, i, j, 2, 0); }
    Matrix l2_at(int i, int j) const { return op_at(l2, i, j, 0, 2); }
    Matrix d_at(int i, int j) const { return op_at(d, i, j, 1, 1); }
    Matrix s_at(int i, int j) const {
        auto it = s.find({i, j});
        if (it != s.end()) return it->second;
        return Matrix(dim(i, j), dim(-i, -j));
    }

    /// l1^a l2^b as a single matrix from (i,j) to (i+2a, j+2b).
    Matrix power_map(int i, int j, int a, int b) const {
        Matrix m = Matrix::identity(dim(i, j));
        int ci = i, cj = j;
        for (int t = 0; t < a; ++t) {
            m = l1_at(ci, cj) * m;
            ci += 2;
        }
        for (int t = 0; t < b; ++t) {
            m = l2_at(ci, cj) * m;
            cj += 2;
        }
        return m;
    }

    std::set<BiKey> support() const {
        std::set<BiKey> out;
        for (const auto& [k, p] : pieces)
            if (p.dim > 0) out.insert(k);
        return out;
    }
};

inline void add_piece(BigradedHL& x, int i, int j, int d, int weight, Filtration f) {
    x.pieces[{i, j}] = HLPiece(d, weight, std::move(f));
}

/// Lefschetz + Hodge axioms: operators commute, l1^i : L^{-i,j} -> L^{i,j} and
/// l2^j : L^{i,-j} -> L^{i,j} are isomorphisms, every piece carries a pure
/// Hodge structure of its declared weight, and l1, l2 are morphisms of type
/// (1,1) for those structures.
inline Report validate_hl(const BigradedHL& x) {
    Report rep;
    std::set<BiKey> supp = x.support();

    // shapes: declared operator blocks must match piece dimensions
    auto check_shapes = [&](const std::map<BiKey, Matrix>& ops, int di, int dj,
                            const std::string& name) {
        for (const auto& [k, m] : ops) {
            rep.require(m.rows() == x.dim(k.first + di, k.second + dj) &&
                            m.cols() == x.dim(k.first, k.second),
                        name + "-shape", bd(k.first, k.second));
            rep.require(m.is_rational(), name + "-real", bd(k.first, k.second));
        }
    };
    check_shapes(x.l1, 2, 0, "l1");
    check_shapes(x.l2, 0, 2, "l2");
    if (!rep.pass()) return rep;

    // commutation l1 l2 = l2 l1 out of every occupied bidegree
    for (const BiKey& k : supp) {
        auto [i, j] = k;
        Matrix a = x.l2_at(i + 2, j) * x.l1_at(i, j);
        Matrix b = x.l1_at(i, j + 2) * x.l2_at(i, j);
        rep.require(a == b, "l1-l2-commute", bd(i, j));
    }

    // power isomorphisms
    std::set<std::pair<int, int>> rows, cols; // (|i|, j) and (i, |j|)
    for (const BiKey& k : supp) {
        if (k.first != 0) rows.insert({std::abs(k.first), k.second});
        if (k.second != 0) cols.insert({k.first, std::abs(k.second)});
    }
    for (const auto& [i, j] : rows) {
        Matrix m = x.power_map(-i, j, i, 0);
        bool iso = x.dim(-i, j) == x.dim(i, j) && m.rank() == x.dim(i, j);
        rep.require(iso, "l1-power-iso",
                    bd(-i, j) + " -> " + bd(i, j));
    }
    for (const auto& [i, j] : cols) {
        Matrix m = x.power_map(i, -j, 0, j);
        bool iso = x.dim(i, -j) == x.dim(i, j) && m.rank() == x.dim(i, j);
        rep.require(iso, "l2-power-iso",
                    bd(i, -j) + " -> " + bd(i, j));
    }

    // Hodge structures on pieces, and compatibility of the operators
    for (const BiKey& k : supp) {
        const HLPiece& p = *x.piece(k.first, k.second);
        rep.require(p.f.ambient_dim() == p.dim, "piece-filtration-dim",
                    bd(k.first, k.second));
        if (p.f.ambient_dim() != p.dim) continue;
        rep.absorb(is_pure_hs(p.f, p.fbar(), p.weight), "piece " + bd(k.first, k.second));
    }
    auto check_morphism = [&](const std::map<BiKey, Matrix>& ops, int di, int dj,
                              const std::string& name) {
        for (const auto& [k, m] : ops) {
            if (m.is_zero()) continue;
            const HLPiece* src = x.piece(k.first, k.second);
            const HLPiece* tgt = x.piece(k.first + di, k.second + dj);
            if (!src || !tgt) continue;
            rep.require(tgt->weight == src->weight + 2, name + "-weight",
                        bd(k.first, k.second));
            for (const auto& [lev, sp] : src->f.jumps()) {
                // stored level lev holds F^{-lev}; a type (1,1) morphism sends
                // it into F^{-lev+1}, stored at level lev - 1
                rep.require(tgt->f.at(lev - 1).contains(sp.image_under(m)),
                            name + "-hodge-type",
                            bd(k.first, k.second) + " F^" + std::to_string(-lev));
            }
        }
    };
    check_morphism(x.l1, 2, 0, "l1");
    check_morphism(x.l2, 0, 2, "l2");
    return rep;
}

/// Primitive subspaces: at bidegree (-i,-j) with i,j >= 0 the intersection of
/// the kernels of l1^{i+1} and l2^{j+1}, expressed in piece coordinates.
/// The report additionally verifies that shifted primitives reconstruct the
/// dimension of every piece.
struct PrimitiveDecomp {
    std::map<BiKey, Subspace> parts;
    Report report;
};

inline PrimitiveDecomp primitive_bidecomposition(const BigradedHL& x) {
    PrimitiveDecomp out;
    out.report.absorb(validate_hl(x), "lefschetz");
    if (!out.report.pass()) return out;

    for (const BiKey& k : x.support()) {
        auto [a, b] = k;
        if (a > 0 || b > 0) continue;
        int i = -a, j = -b;
        Matrix m1 = x.power_map(a, b, i + 1, 0);
        Matrix m2 = x.power_map(a, b, 0, j + 1);
        Subspace k1 = Subspace::span(m1.kernel(), x.dim(a, b));
        Subspace k2 = Subspace::span(m2.kernel(), x.dim(a, b));
        Subspace prim = intersect(k1, k2);
        if (!prim.is_zero()) out.parts[{a, b}] = prim;
    }

    for (const BiKey& k : x.support()) {
        auto [i, j] = k;
        int expected = 0;
        for (const auto& [pk, sp] : out.parts) {
            int r = (i - pk.first) / 2, ss = (j - pk.second) / 2;
            if ((i - pk.first) % 2 != 0 || (j - pk.second) % 2 != 0) continue;
            // l1^r l2^s on a primitive at (-a,-b) survives only for r <= a, s <= b
            if (r >= 0 && ss >= 0 && r <= -pk.first && ss <= -pk.second)
                expected += sp.dim();
        }
        out.report.require(expected == x.dim(i, j), "primitive-reconstruction",
                           bd(i, j),
                           "expected " + std::to_string(expected) + ", have " +
                               std::to_string(x.dim(i, j)));
    }
    return out;
}

/// Polarization axioms on top of validate_hl: S nondegenerate block by block,
/// (-1)^{w0}-symmetric for the central weight w0 = weight - i - j (required
/// constant), infinitesimally isotropic for l1 and l2, compatible with the
/// Hodge structures, and positive definite (after the Weil twist) on every
/// primitive subspace, checked through exact leading principal minors of the
/// Hermitian Gram matrix of S(x, C l1^i l2^j conj y).
inline Report validate_polarized_hl(const BigradedHL& x) {
    Report rep = validate_hl(x);
    if (!rep.pass()) return rep;
    if (!x.has_s) {
        rep.fail("pairing-missing");
        return rep;
    }
    std::set<BiKey> supp = x.support();

    // central weight
    bool have_w0 = false;
    int w0 = 0;
    for (const BiKey& k : supp) {
        int c = x.piece(k.first, k.second)->weight - k.first - k.second;
        if (!have_w0) {
            w0 = c;
            have_w0 = true;
        } else {
            rep.require(c == w0, "central-weight", bd(k.first, k.second));
        }
    }

    for (const BiKey& k : supp) {
        auto [i, j] = k;
        Matrix blk = x.s_at(i, j);
        rep.require(blk.rows() == x.dim(i, j) && blk.cols() == x.dim(-i, -j),
                    "pairing-shape", bd(i, j));
        rep.require(blk.is_rational(), "pairing-real", bd(i, j));
        bool nondeg = x.dim(i, j) == x.dim(-i, -j) && blk.rank() == x.dim(i, j);
        rep.require(nondeg, "nondegenerate", bd(i, j));
        Matrix opp = x.s_at(-i, -j).transpose();
        Matrix expect = (w0 % 2 == 0) ? opp : Scalar(-1) * opp;
        rep.require(blk == expect, "symmetry", bd(i, j));
    }
    if (!rep.pass()) return rep;

    // infinitesimal isotropy S(l x, y) + S(x, l y) = 0
    for (const BiKey& k : supp) {
        auto [i, j] = k;
        Matrix a1 = x.l1_at(i, j).transpose() * x.s_at(i + 2, j) +
                    x.s_at(i, j) * x.l1_at(-i - 2, -j);
        rep.require(a1.is_zero(), "l1-isotropy", bd(i, j));
        Matrix a2 = x.l2_at(i, j).transpose() * x.s_at(i, j + 2) +
                    x.s_at(i, j) * x.l2_at(-i, -j - 2);
        rep.require(a2.is_zero(), "l2-isotropy", bd(i, j));
    }

    // Hodge compatibility: S(F^p, conj Fbar^q) = 0 once p + q > w0
    for (const BiKey& k : supp) {
        auto [i, j] = k;
        const HLPiece& p = *x.piece(i, j);
        const HLPiece* opp = x.piece(-i, -j);
        if (!opp) continue;
        Matrix blk = x.s_at(i, j);
        for (const auto& [lev, sp] : p.f.jumps()) {
            // this jump is F^{-lev}; the complementary level is q = w0 + 1 + lev
            Subspace b = opp->fbar().at_dec(w0 + 1 + lev).conjugate();
            if (sp.is_zero() || b.is_zero()) continue;
            Matrix prod = sp.basis() * blk * b.basis().transpose();
            rep.require(prod.is_zero(), "F-orthogonality",
                        bd(i, j) + " p=" + std::to_string(-lev));
        }
    }
    if (!rep.pass()) return rep;

    // positivity on primitives
    PrimitiveDecomp prim = primitive_bidecomposition(x);
    rep.absorb(prim.report, "primitive");
    if (!rep.pass()) return rep;
    for (const auto& [pk, sub] : prim.parts) {
        auto [a, b] = pk;
        int i = -a, j = -b;
        const HLPiece& p = *x.piece(a, b);
        Matrix pw = x.power_map(a, b, i, j); // into (i,j) = (-a,-b)
        Matrix blk = x.s_at(a, b);
        Bigrading bg = hodge_bigrading(p.f, p.fbar(), p.weight);
        rep.absorb(bg.report, "primitive " + bd(a, b));
        if (!bg.pass()) continue;
        int covered = 0;
        for (const auto& [pq, hp] : bg.pieces) {
            Subspace v = intersect(hp, sub);
            covered += v.dim();
            if (v.is_zero()) continue;
            Scalar twist = ipow(pq.first - pq.second);
            int t = v.dim();
            Matrix gram(t, t);
            for (int r = 0; r < t; ++r) {
                for (int c = 0; c < t; ++c) {
                    Vec rhs = pw * conj_vec(v.basis_row(c));
                    Scalar acc(0);
                    Vec lhs = v.basis_row(r);
                    Vec mid(blk.cols(), Scalar(0));
                    for (int u = 0; u < blk.rows(); ++u)
                        for (int w = 0; w < blk.cols(); ++w) mid[w] += lhs[u] * blk.at(u, w);
                    for (int w = 0; w < blk.cols(); ++w) acc += mid[w] * rhs[w];
                    gram.at(r, c) = twist * acc;
                }
            }
            bool hermitian = (gram == gram.conjugate().transpose());
            rep.require(hermitian, "gram-hermitian", bd(a, b) + " " + bd(pq.first, pq.second));
            if (!hermitian) continue;
            for (int lead = 1; lead <= t; ++lead) {
                Matrix minor(lead, lead);
                for (int r = 0; r < lead; ++r)
                    for (int c = 0; c < lead; ++c) minor.at(r, c) = gram.at(r, c);
                Scalar dmin = minor.det();
                rep.require(dmin.im == 0 && dmin.re > 0, "positivity",
                            bd(a, b) + " " + bd(pq.first, pq.second) + ", minor " +
                                std::to_string(lead));
            }
        }
        rep.require(covered == sub.dim(), "primitive-sub-hodge", bd(a, b));
    }
    return rep;
}

/// Euler characteristic along each line preserved by the differential: the
/// differential has bidegree (1,1), so i - j is constant along it; the
/// alternating sign is (-1)^j.
inline std::map<int, int> euler_characteristics(const BigradedHL& x) {
    std::map<int, int> out;
    for (const auto& [k, p] : x.pieces) {
        if (p.dim == 0) continue;
        int sign = (((k.second % 2) + 2) % 2 == 0) ? 1 : -1;
        out[k.first - k.second] += sign * p.dim;
    }
    return out;
}

namespace detail {

inline Filtration induce_on_subquotient(const Filtration& f, const Subquotient& sq,
                                        const Subspace& kernel) {
    std::map<int, Subspace> lv;
    for (const auto& [p, s] : f.jumps()) lv[p] = intersect(s, kernel).image_under(sq.to_h);
    int top = f.max_weight();
    if (lv.empty() || !lv.rbegin()->second.is_full()) lv[top] = Subspace::full(sq.dim());
    return Filtration::from_levels(sq.dim(), lv);
}

} // namespace detail

/// d-cohomology: checks the differential axioms (bidegree (1,1), d^2 = 0,
/// commutation with l1 and l2, Hodge type (1,1), self-adjointness for S),
/// computes Ker d / Im d per bidegree with the induced operators, pairing and
/// filtrations, and finally validates the result as a (polarized, when S is
/// present) structure -- the content of the inheritance theorem.
struct DCohomology {
    BigradedHL h;
    Report report;
};

inline DCohomology d_cohomology(const BigradedHL& x) {
    DCohomology out;
    Report& rep = out.report;
    if (!x.has_d) {
        rep.fail("differential-missing");
        return out;
    }
    std::set<BiKey> supp = x.support();

    for (const auto& [k, m] : x.d) {
        rep.require(m.rows() == x.dim(k.first + 1, k.second + 1) &&
                        m.cols() == x.dim(k.first, k.second),
                    "d-shape", bd(k.first, k.second));
        rep.require(m.is_rational(), "d-real", bd(k.first, k.second));
    }
    if (!rep.pass()) return out;
    for (const BiKey& k : supp) {
        auto [i, j] = k;
        rep.require((x.d_at(i + 1, j + 1) * x.d_at(i, j)).is_zero(), "d-squared", bd(i, j));
        Matrix c1 = x.d_at(i + 2, j) * x.l1_at(i, j) - x.l1_at(i + 1, j + 1) * x.d_at(i, j);
        rep.require(c1.is_zero(), "d-l1-commute", bd(i, j));
        Matrix c2 = x.d_at(i, j + 2) * x.l2_at(i, j) - x.l2_at(i + 1, j + 1) * x.d_at(i, j);
        rep.require(c2.is_zero(), "d-l2-commute", bd(i, j));
        if (x.has_s) {
            Matrix adj = x.d_at(i, j).transpose() * x.s_at(i + 1, j + 1) -
                         x.s_at(i, j) * x.d_at(-i - 1, -j - 1);
            rep.require(adj.is_zero(), "d-self-adjoint", bd(i, j));
        }
    }
    // Hodge compatibility of d
    for (const auto& [k, m] : x.d) {
        if (m.is_zero()) continue;
        const HLPiece* src = x.piece(k.first, k.second);
        const HLPiece* tgt = x.piece(k.first + 1, k.second + 1);
        if (!src || !tgt) continue;
        rep.require(tgt->weight == src->weight + 2, "d-weight", bd(k.first, k.second));
        for (const auto& [lev, sp] : src->f.jumps())
            rep.require(tgt->f.at(lev - 1).contains(sp.image_under(m)), "d-hodge-type",
                        bd(k.first, k.second) + " F^" + std::to_string(-lev));
    }
    if (!rep.pass()) return out;

    // subquotients
    std::map<BiKey, Subquotient> sq;
    std::map<BiKey, Subspace> kernels;
    for (const BiKey& k : supp) {
        auto [i, j] = k;
        Matrix dmat = x.d_at(i, j);
        Subspace ker = Subspace::span(dmat.kernel(), x.dim(i, j));
        Subspace img =
            Subspace::span(x.d_at(i - 1, j - 1).transpose(), x.dim(i, j));
        kernels.emplace(k, ker);
        sq.emplace(k, Subquotient(ker, img));
    }

    BigradedHL& h = out.h;
    h.has_s = x.has_s;
    for (const BiKey& k : supp) {
        const Subquotient& s = sq.at(k);
        if (s.dim() == 0) continue;
        const HLPiece& p = *x.piece(k.first, k.second);
        HLPiece np(s.dim(), p.weight,
                   detail::induce_on_subquotient(p.f, s, kernels.at(k)));
        np.fbar_user = detail::induce_on_subquotient(p.fbar(), s, kernels.at(k));
        h.pieces[k] = np;
    }
    auto induce_op = [&](const std::map<BiKey, Matrix>& ops, int di, int dj,
                         std::map<BiKey, Matrix>& tgt_ops) {
        for (const auto& [k, m] : ops) {
            BiKey t{k.first + di, k.second + dj};
            if (h.dim(k.first, k.second) == 0 || h.dim(t.first, t.second) == 0) continue;
            tgt_ops[k] = sq.at(t).to_h * m * sq.at(k).from_h;
        }
    };
    induce_op(x.l1, 2, 0, h.l1);
    induce_op(x.l2, 0, 2, h.l2);
    if (x.has_s) {
        for (const auto& [k, p] : h.pieces) {
            BiKey o{-k.first, -k.second};
            if (h.dim(o.first, o.second) == 0) continue;
            h.s[k] = sq.at(k).from_h.transpose() * x.s_at(k.first, k.second) *
                     sq.at(o).from_h;
        }
    }

    rep.absorb(x.has_s ? validate_polarized_hl(h) : validate_hl(h), "cohomology");
    return out;
}

// ---------------------------------------------------------------------------
// Fixture generators
// ---------------------------------------------------------------------------
namespace hl_fixtures {

/// Irreducible two-variable string: one-dimensional pieces at (i,j) with
/// |i| <= a, |j| <= b, both steps of 2, piece weight w0 + i + j (Tate type),
/// l1 = l2 = 1 on basis vectors, and pairing c(i,j) with the sign alternation
/// c(i+2,j) = -c(i,j), c(i,j+2) = -c(i,j), normalized to +1 at (-a,-b).
inline BigradedHL hl_string(int a, int b, int w0) {
    if ((w0 + a + b) % 2 != 0)
        throw std::invalid_argument("hl_string: piece weights must be even");
    BigradedHL x;
    x.has_s = true;
    for (int i = -a; i <= a; i += 2) {
        for (int j = -b; j <= b; j += 2) {
            int wgt = w0 + i + j;
            std::map<int, Subspace> lv;
            lv[-wgt / 2] = Subspace::full(1);
            add_piece(x, i, j, 1, wgt, Filtration::from_levels(1, lv));
            if (i + 2 <= a) x.l1[{i, j}] = Matrix::identity(1);
            if (j + 2 <= b) x.l2[{i, j}] = Matrix::identity(1);
            Matrix blk(1, 1);
            int e = ((i + a) / 2 + (j + b) / 2) % 2;
            blk.at(0, 0) = Scalar(e == 0 ? 1 : -1);
            x.s[{i, j}] = blk;
        }
    }
    return x;
}

/// Blockwise direct sum; overlapping bidegrees must agree in weight.
inline BigradedHL direct_sum(const BigradedHL& x, const BigradedHL& y) {
    BigradedHL out;
    out.has_s = x.has_s || y.has_s;
    out.has_d = x.has_d || y.has_d;
    std::set<BiKey> keys;
    for (const auto& [k, p] : x.pieces) keys.insert(k);
    for (const auto& [k, p] : y.pieces) keys.insert(k);
    for (const BiKey& k : keys) {
        int dx = x.dim(k.first, k.second), dy = y.dim(k.first, k.second);
        if (dx + dy == 0) continue;
        const HLPiece* px = x.piece(k.first, k.second);
        const HLPiece* py = y.piece(k.first, k.second);
        int wgt = px && px->dim ? px->weight : py->weight;
        if (px && px->dim && py && py->dim && px->weight != py->weight)
            throw std::invalid_argument("direct_sum: weight mismatch");
        // block-embedded filtration levels
        Matrix ex(dx + dy, dx), ey(dx + dy, dy);
        for (int r = 0; r < dx; ++r) ex.at(r, r) = Scalar(1);
        for (int r = 0; r < dy; ++r) ey.at(dx + r, r) = Scalar(1);
        std::map<int, Subspace> lv, lvb;
        auto merge = [&](const Filtration& f, const Matrix& e, std::map<int, Subspace>& into) {
            for (const auto& [p, sset] : f.jumps()) {
                Subspace emb = Subspace::span(sset.basis() * e.transpose(), dx + dy);
                auto it = into.find(p);
                into[p] = (it == into.end()) ? emb : it->second + emb;
            }
        };
        if (px && px->dim) {
            merge(px->f, ex, lv);
            merge(px->fbar(), ex, lvb);
        }
        if (py && py->dim) {
            merge(py->f, ey, lv);
            merge(py->fbar(), ey, lvb);
        }
        // merged levels must be cumulative
        auto cumulate = [&](std::map<int, Subspace>& m) {
            Subspace acc = Subspace::zero(dx + dy);
            for (auto& [p, sset] : m) {
                acc = acc + sset;
                sset = acc;
            }
        };
        cumulate(lv);
        cumulate(lvb);
        HLPiece np(dx + dy, wgt, Filtration::from_levels(dx + dy, lv));
        np.fbar_user = Filtration::from_levels(dx + dy, lvb);
        out.pieces[k] = np;
    }
    auto merge_ops = [&](const std::map<BiKey, Matrix>& ax, const std::map<BiKey, Matrix>& ay,
                         int di, int dj, std::map<BiKey, Matrix>& into) {
        std::set<BiKey> ks;
        for (const auto& [k, m] : ax) ks.insert(k);
        for (const auto& [k, m] : ay) ks.insert(k);
        for (const BiKey& k : ks) {
            auto [i, j] = k;
            int sx = x.dim(i, j), sy = y.dim(i, j);
            int tx = x.dim(i + di, j + dj), ty = y.dim(i + di, j + dj);
            Matrix m(tx + ty, sx + sy);
            auto put = [&](const Matrix& blk, int ro, int co) {
                for (int r = 0; r < blk.rows(); ++r)
                    for (int c = 0; c < blk.cols(); ++c) m.at(ro + r, co + c) = blk.at(r, c);
            };
            auto fx = ax.find(k);
            if (fx != ax.end()) put(fx->second, 0, 0);
            auto fy = ay.find(k);
            if (fy != ay.end()) put(fy->second, tx, sx);
            into[k] = m;
        }
    };
    merge_ops(x.l1, y.l1, 2, 0, out.l1);
    merge_ops(x.l2, y.l2, 0, 2, out.l2);
    merge_ops(x.d, y.d, 1, 1, out.d);
    // pairing blocks: rows split by (x,y) at (i,j), cols at (-i,-j)
    std::set<BiKey> skeys;
    for (const auto& [k, m] : x.s) skeys.insert(k);
    for (const auto& [k, m] : y.s) skeys.insert(k);
    for (const BiKey& k : skeys) {
        auto [i, j] = k;
        int rx = x.dim(i, j), ry = y.dim(i, j);
        int cx = x.dim(-i, -j), cy = y.dim(-i, -j);
        Matrix m(rx + ry, cx + cy);
        auto fx = x.s.find(k);
        if (fx != x.s.end())
            for (int r = 0; r < fx->second.rows(); ++r)
                for (int c = 0; c < fx->second.cols(); ++c) m.at(r, c) = fx->second.at(r, c);
        auto fy = y.s.find(k);
        if (fy != y.s.end())
            for (int r = 0; r < fy->second.rows(); ++r)
                for (int c = 0; c < fy->second.cols(); ++c)
                    m.at(rx + r, cx + c) = fy->second.at(r, c);
        out.s[k] = m;
    }
    return out;
}

/// Shift every bidegree by (1,1) and Tate-adjust: weight + 2, F^p -> F^{p+1}.
inline BigradedHL shift_twist(const BigradedHL& x) {
    BigradedHL out;
    out.has_s = false;
    out.has_d = false;
    for (const auto& [k, p] : x.pieces) {
        HLPiece np(p.dim, p.weight + 2, p.f.shifted(-1));
        if (p.fbar_user) np.fbar_user = p.fbar_user->shifted(-1);
        out.pieces[{k.first + 1, k.second + 1}] = np;
    }
    for (const auto& [k, m] : x.l1) out.l1[{k.first + 1, k.second + 1}] = m;
    for (const auto& [k, m] : x.l2) out.l2[{k.first + 1, k.second + 1}] = m;
    return out;
}

/// Acyclic fixture: x plus its shifted copy, with d the identity from each
/// piece of x onto the shifted copy. The supports must be disjoint (true for
/// strings). S is kept on the x-part only, where the self-adjointness of d is
/// vacuous; the cohomology is zero in every bidegree.
inline BigradedHL acyclic_cone(const BigradedHL& x) {
    BigradedHL shifted = shift_twist(x);
    for (const auto& [k, p] : x.pieces)
        if (shifted.dim(k.first, k.second) > 0)
            throw std::invalid_argument("acyclic_cone: supports overlap");
    BigradedHL base = x;
    base.s.clear();
    base.has_s = false;
    BigradedHL out = direct_sum(base, shifted);
    out.has_d = true;
    for (const auto& [k, p] : x.pieces)
        if (p.dim > 0) out.d[k] = Matrix::identity(p.dim);
    return out;
}

/// Tensor product with the Leibniz action of the operators and the product
/// pairing S(x (x) x', y (x) y') = S(x,y) S'(x',y').
inline BigradedHL tensor_hl(const BigradedHL& x, const BigradedHL& y) {
    BigradedHL out;
    out.has_s = x.has_s && y.has_s;
    // components of each result bidegree, in deterministic order with offsets
    struct Comp {
        BiKey kx, ky;
        int offset, dim;
    };
    std::map<BiKey, std::vector<Comp>> comps;
    for (const auto& [kx, px] : x.pieces) {
        if (px.dim == 0) continue;
        for (const auto& [ky, py] : y.pieces) {
            if (py.dim == 0) continue;
            BiKey k{kx.first + ky.first, kx.second + ky.second};
            comps[k].push_back({kx, ky, 0, px.dim * py.dim});
        }
    }
    for (auto& [k, v] : comps) {
        int off = 0;
        for (Comp& c : v) {
            c.offset = off;
            off += c.dim;
        }
        int total = off;
        int wgt = x.piece(v[0].kx.first, v[0].kx.second)->weight +
                  y.piece(v[0].ky.first, v[0].ky.second)->weight;
        std::map<int, Subspace> lv, lvb;
        for (const Comp& c : v) {
            const HLPiece& px = *x.piece(c.kx.first, c.kx.second);
            const HLPiece& py = *y.piece(c.ky.first, c.ky.second);
            if (px.weight + py.weight != wgt)
                throw std::invalid_argument("tensor_hl: inconsistent weights");
            Matrix embed(total, c.dim); // component embedding
            for (int r = 0; r < c.dim; ++r) embed.at(c.offset + r, r) = Scalar(1);
            auto convolve = [&](const Filtration& fa, const Filtration& fb,
                               std::map<int, Subspace>& into) {
                for (const auto& [pa, sa] : fa.jumps()) {
                    for (const auto& [pb, sb] : fb.jumps()) {
                        if (sa.is_zero() || sb.is_zero()) continue;
                        Subspace t = Subspace::span(
                            Matrix::kronecker(sa.basis(), sb.basis()), c.dim);
                        Subspace emb = Subspace::span(t.basis() * embed.transpose(), total);
                        int p = pa + pb;
                        auto it = into.find(p);
                        into[p] = (it == into.end()) ? emb : it->second + emb;
                    }
                }
            };
            convolve(px.f, py.f, lv);
            convolve(px.fbar(), py.fbar(), lvb);
        }
        auto cumulate = [&](std::map<int, Subspace>& m) {
            Subspace acc = Subspace::zero(total);
            for (auto& [p, sset] : m) {
                acc = acc + sset;
                sset = acc;
            }
        };
        cumulate(lv);
        cumulate(lvb);
        HLPiece np(total, wgt, Filtration::from_levels(total, lv));
        np.fbar_user = Filtration::from_levels(total, lvb);
        out.pieces[k] = np;
    }
    auto find_comp = [&](const BiKey& k, const BiKey& kx, const BiKey& ky) -> const Comp* {
        auto it = comps.find(k);
        if (it == comps.end()) return nullptr;
        for (const Comp& c : it->second)
            if (c.kx == kx && c.ky == ky) return &c;
        return nullptr;
    };
    auto total_dim = [&](const BiKey& k) {
        auto it = comps.find(k);
        int t = 0;
        if (it != comps.end())
            for (const Comp& c : it->second) t += c.dim;
        return t;
    };
    auto build_op = [&](bool use_l1) {
        int di = use_l1 ? 2 : 0, dj = use_l1 ? 0 : 2;
        for (const auto& [k, v] : comps) {
            BiKey t{k.first + di, k.second + dj};
            int td = total_dim(t);
            if (td == 0) continue;
            Matrix m(td, total_dim(k));
            bool any = false;
            for (const Comp& c : v) {
                const HLPiece& px = *x.piece(c.kx.first, c.kx.second);
                const HLPiece& py = *y.piece(c.ky.first, c.ky.second);
                // operator acting on the x factor
                {
                    BiKey nkx{c.kx.first + di, c.kx.second + dj};
                    const Comp* tc = find_comp(t, nkx, c.ky);
                    if (tc) {
                        Matrix blk = Matrix::kronecker(
                            use_l1 ? x.l1_at(c.kx.first, c.kx.second)
                                   : x.l2_at(c.kx.first, c.kx.second),
                            Matrix::identity(py.dim));
                        for (int r = 0; r < blk.rows(); ++r)
                            for (int cc = 0; cc < blk.cols(); ++cc)
                                if (!(blk.at(r, cc) == Scalar(0))) {
                                    m.at(tc->offset + r, c.offset + cc) += blk.at(r, cc);
                                    any = true;
                                }
                    }
                }
                // operator acting on the y factor
                {
                    BiKey nky{c.ky.first + di, c.ky.second + dj};
                    const Comp* tc = find_comp(t, c.kx, nky);
                    if (tc) {
                        Matrix blk = Matrix::kronecker(
                            Matrix::identity(px.dim),
                            use_l1 ? y.l1_at(c.ky.first, c.ky.second)
                                   : y.l2_at(c.ky.first, c.ky.second));
                        for (int r = 0; r < blk.rows(); ++r)
                            for (int cc = 0; cc < blk.cols(); ++cc)
                                if (!(blk.at(r, cc) == Scalar(0))) {
                                    m.at(tc->offset + r, c.offset + cc) += blk.at(r, cc);
                                    any = true;
                                }
                    }
                }
            }
            if (any) (use_l1 ? out.l1 : out.l2)[k] = m;
        }
    };
    build_op(true);
    build_op(false);
    if (out.has_s) {
        for (const auto& [k, v] : comps) {
            BiKey o{-k.first, -k.second};
            int cd = total_dim(o);
            if (cd == 0) continue;
            Matrix m(total_dim(k), cd);
            for (const Comp& c : v) {
                const Comp* oc = find_comp(o, {-c.kx.first, -c.kx.second},
                                           {-c.ky.first, -c.ky.second});
                if (!oc) continue;
                Matrix blk = Matrix::kronecker(x.s_at(c.kx.first, c.kx.second),
                                               y.s_at(c.ky.first, c.ky.second));
                for (int r = 0; r < blk.rows(); ++r)
                    for (int cc = 0; cc < blk.cols(); ++cc)
                        m.at(c.offset + r, oc->offset + cc) = blk.at(r, cc);
            }
            out.s[k] = m;
        }
    }
    return out;
}

} // namespace hl_fixtures

} // namespace hodgekit

#pragma once

#include "filtration_ops.hpp"

#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hodgekit {

/// Cochain complex of finite dimensional spaces with differentials of
/// degree +1. Terms are plain coordinate spaces; absent degrees are zero.
struct ChainComplex {
    std::map<int, int> dims;          // degree -> dimension (only nonzero entries)
    std::map<int, Matrix> diff;       // degree n -> matrix of d : C^n -> C^{n+1}

    int dim(int n) const {
        auto it = dims.find(n);
        return it == dims.end() ? 0 : it->second;
    }

    Matrix d_at(int n) const {
        auto it = diff.find(n);
        return it == diff.end() ? Matrix(dim(n + 1), dim(n)) : it->second;
    }

    int min_degree() const { return dims.empty() ? 0 : dims.begin()->first; }
    int max_degree() const { return dims.empty() ? 0 : dims.rbegin()->first; }

    Report validate() const {
        Report rep;
        for (const auto& [n, m] : diff) {
            if (m.rows() != dim(n + 1) || m.cols() != dim(n))
                rep.fail("shape", "degree " + std::to_string(n));
        }
        if (!rep.pass()) return rep;
        for (const auto& [n, m] : diff)
            rep.require((d_at(n + 1) * m).is_zero(), "d-squared",
                        "degrees " + std::to_string(n) + "," + std::to_string(n + 2));
        return rep;
    }

    std::map<int, int> cohomology_dims() const {
        std::map<int, int> h;
        for (const auto& [n, d] : dims) {
            int v = d - d_at(n).rank() - d_at(n - 1).rank();
            if (v != 0) h[n] = v;
        }
        return h;
    }

    int euler() const {
        int e = 0;
        for (const auto& [n, d] : dims) e += (n % 2 == 0) ? d : -d;
        return e;
    }
};

/// Cube-shaped complex attached to a commuting nilpotent family: one term
/// per subset J of the index set, placed in degree |J|, with the maps N_i
/// signed by the number of indices of J below i. Terms are subspaces L_J of
/// a common ambient space, subject to N_i(L_J) <= L_{J u i}.
struct CubeComplex {
    int ambient = 0;
    int m = 0;                          // number of operators
    NilpotentFamily fam;
    std::map<unsigned, Subspace> terms; // bitmask J -> L_J
    std::map<unsigned, int> offsets;    // start column of the J-block in degree |J|
    ChainComplex cx;

    int term_dim(unsigned mask) const { return terms.at(mask).dim(); }
};

namespace detail {

inline int popcount(unsigned x) {
    int c = 0;
    for (; x; x &= x - 1) ++c;
    return c;
}

inline std::string mask_str(unsigned mask, int m) {
    std::string s = "{";
    bool first = true;
    for (int i = 0; i < m; ++i)
        if (mask & (1u << i)) {
            if (!first) s += ",";
            s += std::to_string(i + 1);
            first = false;
        }
    return s + "}";
}

} // namespace detail

/// Builds the cube with L_J = selector(J). Throws if the family is invalid
/// or the selected terms are not stable under the operators.
inline CubeComplex build_cube(int dim, const NilpotentFamily& fam,
                              const std::function<Subspace(unsigned)>& selector) {
    if (fam.dim != dim) throw std::invalid_argument("cube: family dimension mismatch");
    if (!validate_family(fam).pass())
        throw std::invalid_argument("cube: operators must be commuting and nilpotent");
    CubeComplex c;
    c.ambient = dim;
    c.m = int(fam.size());
    c.fam = fam;
    unsigned full = (c.m >= 32) ? 0u : (1u << c.m);
    if (c.m >= 16) throw std::invalid_argument("cube: too many operators");

    std::map<unsigned, SubspaceMap> coords;
    for (unsigned mask = 0; mask < full; ++mask) {
        Subspace s = selector(mask);
        if (s.ambient_dim() != dim)
            throw std::invalid_argument("cube: term has wrong ambient dimension");
        c.terms.emplace(mask, s);
        coords.emplace(mask, SubspaceMap(s));
    }
    for (unsigned mask = 0; mask < full; ++mask)
        for (int i = 0; i < c.m; ++i) {
            if (mask & (1u << i)) continue;
            Subspace img = c.terms.at(mask).image_under(fam.operators[size_t(i)]);
            if (!c.terms.at(mask | (1u << i)).contains(img))
                throw std::invalid_argument("cube: terms not stable under operator " +
                                            std::to_string(i + 1));
        }

    // degreewise layout: blocks ordered by ascending mask
    std::map<int, int> deg_dim;
    for (unsigned mask = 0; mask < full; ++mask) {
        int p = detail::popcount(mask);
        c.offsets[mask] = deg_dim[p];
        deg_dim[p] += c.terms.at(mask).dim();
    }
    for (const auto& [p, d] : deg_dim)
        if (d > 0) c.cx.dims[p] = d;
    for (int p = 0; p < c.m; ++p) {
        int rows = deg_dim.count(p + 1) ? deg_dim.at(p + 1) : 0;
        int cols = deg_dim.count(p) ? deg_dim.at(p) : 0;
        Matrix d(rows, cols);
        for (unsigned mask = 0; mask < full; ++mask) {
            if (detail::popcount(mask) != p || c.terms.at(mask).is_zero()) continue;
            for (int i = 0; i < c.m; ++i) {
                if (mask & (1u << i)) continue;
                unsigned tgt = mask | (1u << i);
                int sign = detail::popcount(mask & ((1u << i) - 1)) % 2 ? -1 : 1;
                Matrix block = coords.at(tgt).to_coords * fam.operators[size_t(i)] *
                               coords.at(mask).from_coords;
                for (int r = 0; r < block.rows(); ++r)
                    for (int cc = 0; cc < block.cols(); ++cc)
                        d.at(c.offsets.at(tgt) + r, c.offsets.at(mask) + cc) =
                            Scalar(sign) * block.at(r, cc);
            }
        }
        if (rows > 0 && cols > 0) c.cx.diff[p] = d;
    }
    return c;
}

/// Full cube: every term is the whole space.
inline CubeComplex koszul(int dim, const NilpotentFamily& fam) {
    return build_cube(dim, fam, [&](unsigned) { return Subspace::full(dim); });
}

/// Image cube: term J is the image of the product of the operators in J.
inline CubeComplex ic(int dim, const NilpotentFamily& fam) {
    return build_cube(dim, fam, [&](unsigned mask) {
        return Subspace::span(fam.product(mask).transpose(), dim);
    });
}

/// Partial image cube for a split of the index set: the axes in m1 keep the
/// full space, the others contribute their image factors. Term J is the
/// image of the product of the operators in J minus m1. Equals `koszul` when
/// m1 is everything and `ic` when m1 is empty.
inline CubeComplex omega_partial(int dim, const NilpotentFamily& fam,
                                 const std::set<int>& m1) {
    unsigned m1mask = 0;
    for (int i : m1) {
        if (i < 0 || i >= int(fam.size()))
            throw std::invalid_argument("omega_partial: axis index out of range");
        m1mask |= (1u << i);
    }
    return build_cube(dim, fam, [&, m1mask](unsigned mask) {
        return Subspace::span(fam.product(mask & ~m1mask).transpose(), dim);
    });
}

/// Termwise containment of sub in sup (same cube shape required).
inline bool subcomplex_of(const CubeComplex& sub, const CubeComplex& sup) {
    if (sub.m != sup.m || sub.ambient != sup.ambient) return false;
    for (const auto& [mask, s] : sub.terms)
        if (!sup.terms.at(mask).contains(s)) return false;
    return true;
}

/// Complex together with named filtrations on each term. A filtration must
/// be given in every degree where the term is nonzero, and the differential
/// must respect every level.
struct FilteredComplex {
    ChainComplex cx;
    std::map<std::string, std::map<int, Filtration>> filts;

    const Filtration& filt(const std::string& name, int degree) const {
        return filts.at(name).at(degree);
    }

    Report validate() const {
        Report rep;
        rep.absorb(cx.validate(), "complex");
        if (!rep.pass()) return rep;
        for (const auto& [name, per_deg] : filts) {
            size_t before = rep.failures.size();
            for (const auto& [n, d] : cx.dims) {
                auto it = per_deg.find(n);
                if (it == per_deg.end()) {
                    rep.fail("coverage", name + " degree " + std::to_string(n));
                    continue;
                }
                if (it->second.ambient_dim() != d)
                    rep.fail("dimension", name + " degree " + std::to_string(n));
            }
            if (rep.failures.size() > before) continue;
            for (const auto& [n, f] : per_deg) {
                if (cx.dim(n) == 0 || cx.dim(n + 1) == 0) continue;
                Matrix d = cx.d_at(n);
                const Filtration& g = per_deg.at(n + 1);
                for (const auto& [k, s] : f.jumps())
                    rep.require(g.at(k).contains(s.image_under(d)), "d-stability",
                                name + " degree " + std::to_string(n) + " level " +
                                    std::to_string(k));
            }
        }
        return rep;
    }
};

/// Weight data on the full cube of an admissible instance: the J-block of
/// level k in degree |J| is the iterated-star filtration for J at level
/// k - |J|.
struct CubeWeight {
    CubeComplex cube;
    std::map<unsigned, Filtration> wj; // iterated-star filtration per subset
    std::map<int, Filtration> levels;  // total-complex filtration per degree
    Report report;
    bool ok = false;
};

inline CubeWeight weight_on_koszul(int dim, const Filtration& w,
                                   const NilpotentFamily& fam) {
    CubeWeight out;
    out.cube = koszul(dim, fam);
    unsigned full = 1u << out.cube.m;
    for (unsigned mask = 0; mask < full; ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < out.cube.m; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        IteratedResult r = iterated(fam, idx, w, IterMode::star);
        if (!r.ok()) {
            out.report.fail("iterated-filtration",
                            "J=" + detail::mask_str(mask, out.cube.m), r.detail);
            return out;
        }
        out.wj.emplace(mask, *r.filtration);
    }

    // assemble the blockwise filtration in each degree
    for (int p = 0; p <= out.cube.m; ++p) {
        int dp = out.cube.cx.dim(p);
        if (dp == 0) continue;
        std::set<int> keys;
        for (unsigned mask = 0; mask < full; ++mask) {
            if (detail::popcount(mask) != p) continue;
            for (const auto& [k, s] : out.wj.at(mask).jumps()) keys.insert(k + p);
        }
        std::map<int, Subspace> lv;
        for (int k : keys) {
            Subspace acc = Subspace::zero(dp);
            for (unsigned mask = 0; mask < full; ++mask) {
                if (detail::popcount(mask) != p) continue;
                const Subspace& s = out.wj.at(mask).at(k - p);
                Matrix rows(s.dim(), dp);
                for (int r = 0; r < s.dim(); ++r)
                    for (int c = 0; c < dim; ++c)
                        rows.at(r, out.cube.offsets.at(mask) + c) = s.basis().at(r, c);
                acc = acc + Subspace::span(rows, dp);
            }
            lv[k] = acc;
        }
        out.levels.emplace(p, Filtration::from_levels(dp, lv));
    }

    FilteredComplex fc;
    fc.cx = out.cube.cx;
    fc.filts["w"] = out.levels;
    out.report.absorb(fc.validate(), "total");
    out.ok = out.report.pass();
    return out;
}

/// Coordinates on the graded piece Gr^W_k of a filtration, with class and
/// lift maps between the piece and the ambient space.
struct GrPiece {
    QuotientMap q;
    SubspaceMap g;

    GrPiece(const Filtration& w, int k) : q(w.at(k - 1)), g(q.push(w.at(k))) {}

    int dim() const { return g.sub_dim(); }
    Vec cls(const Vec& v) const { return g.to_coords * (q.proj * v); }
    Vec lift(const Vec& c) const { return q.section * (g.from_coords * c); }
};

/// Matrix of the map Gr(src) -> Gr(dst) induced by the ambient operator n.
/// n must carry the numerator of src into the numerator of dst and the
/// denominator into the denominator.
inline Matrix graded_map(const GrPiece& src, const GrPiece& dst, const Matrix& n) {
    Matrix out(dst.dim(), src.dim());
    for (int c = 0; c < src.dim(); ++c) {
        Vec e(size_t(src.dim()), Scalar(0));
        e[size_t(c)] = Scalar(1);
        Vec w = n * src.lift(e);
        Vec proj = dst.q.proj * w;
        if (!dst.g.sub.contains(proj))
            throw std::logic_error("graded_map: operator does not respect the levels");
        Vec cl = dst.g.to_coords * proj;
        for (int r = 0; r < dst.dim(); ++r) out.at(r, c) = cl[size_t(r)];
    }
    return out;
}

enum class PQMode { p, q };

/// The space P^J_k (mode p) or Q^J_k (mode q) inside the graded piece of the
/// iterated filtration for J, expressed in that piece's coordinates.
///
/// P^J_k lives in Gr_k of the iterated-star filtration W^J and is the joint
/// kernel of the graded maps induced by the identity into Gr_{k+|J-K|} of
/// W^K, over the proper subsets K of J. Q^J_k is the shriek-side analogue:
/// the joint kernel of the graded maps induced by the products N_{J-K} into
/// Gr_{k-|J-K|} of the iterated-shriek filtrations.
inline Subspace pq_space(const Filtration& w, const NilpotentFamily& fam,
                         unsigned jmask, int k, PQMode mode) {
    int m = int(fam.size());
    auto iter_filt = [&](unsigned mask) {
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        IteratedResult r = iterated(fam, idx, w,
                                    mode == PQMode::p ? IterMode::star : IterMode::shriek);
        if (!r.ok())
            throw std::domain_error("pq_space: iterated filtration missing for J=" +
                                    detail::mask_str(mask, m));
        return *r.filtration;
    };

    Filtration wj = iter_filt(jmask);
    GrPiece gj(wj, k);
    Subspace out = Subspace::full(gj.dim());
    if (jmask != 0)
        for (unsigned kmask = (jmask - 1) & jmask;; kmask = (kmask - 1) & jmask) {
            unsigned amask = jmask & ~kmask;
            int asz = detail::popcount(amask);
            Filtration wk = iter_filt(kmask);
            Matrix mp =
                (mode == PQMode::p)
                    ? graded_map(gj, GrPiece(wk, k + asz), Matrix::identity(w.ambient_dim()))
                    : graded_map(gj, GrPiece(wk, k - asz), fam.product(amask));
            out = intersect(out, Subspace::span(mp.kernel(), gj.dim()));
            if (kmask == 0) break;
        }
    return out;
}

/// Structural checks on the graded pieces of the cube weight data:
///  - per pair K < J and each level, the graded piece of W^J splits as the
///    image of the induced product map plus the kernel of the induced
///    identity map (direct sum);
///  - per subset J and level k, Gr_k of W^J is the direct sum over K <= J of
///    the images of the transverse products applied to the spaces P^K;
///  - degreewise, the graded dimensions of the total weight filtration match
///    the cube built from the P-spaces: level k in degree p receives
///    contributions from each K and each transverse axis set of size p-|K|.
inline Report graded_check(int dim, const Filtration& w, const NilpotentFamily& fam) {
    Report rep;
    int m = int(fam.size());
    unsigned full = 1u << m;

    std::map<unsigned, Filtration> wj;
    for (unsigned mask = 0; mask < full; ++mask) {
        std::vector<int> idx;
        for (int i = 0; i < m; ++i)
            if (mask & (1u << i)) idx.push_back(i);
        IteratedResult r = iterated(fam, idx, w, IterMode::star);
        if (!r.ok()) {
            rep.fail("iterated-filtration", "J=" + detail::mask_str(mask, m), r.detail);
            return rep;
        }
        wj.emplace(mask, *r.filtration);
    }

    auto level_keys = [&](unsigned mask) {
        std::set<int> ks;
        for (const auto& [k, s] : wj.at(mask).jumps()) ks.insert(k);
        return ks;
    };

    // image/kernel splitting per pair K < J
    for (unsigned jm = 0; jm < full; ++jm)
        for (unsigned km = (jm - 1) & jm;; km = (km - 1) & jm) {
            if (jm != 0) {
                unsigned am = jm & ~km;
                int asz = detail::popcount(am);
                std::set<int> ks = level_keys(jm);
                for (int k : level_keys(km)) ks.insert(k - asz);
                for (int k : ks) {
                    GrPiece gj(wj.at(jm), k);
                    if (gj.dim() == 0) continue;
                    GrPiece gk_src(wj.at(km), k + asz);
                    Matrix img_map = graded_map(gk_src, gj, fam.product(am));
                    Matrix ker_map =
                        graded_map(gj, GrPiece(wj.at(km), k + asz), Matrix::identity(dim));
                    Subspace im = Subspace::span(img_map.transpose(), gj.dim());
                    Subspace ke = Subspace::span(ker_map.kernel(), gj.dim());
                    bool split = intersect(im, ke).is_zero() &&
                                 (im.dim() + ke.dim() == gj.dim());
                    rep.require(split, "image-kernel-splitting",
                                "J=" + detail::mask_str(jm, m) +
                                    " K=" + detail::mask_str(km, m) +
                                    " k=" + std::to_string(k));
                }
            }
            if (km == 0) break;
        }

    // the P-spaces, kept with their graded coordinates
    std::map<unsigned, std::map<int, Subspace>> pk;
    for (unsigned mask = 0; mask < full; ++mask)
        for (int k : level_keys(mask)) {
            Subspace p = pq_space(w, fam, mask, k, PQMode::p);
            if (!p.is_zero()) pk[mask][k] = p;
        }

    // reconstruction of each graded piece from the P-spaces below it
    for (unsigned jm = 0; jm < full; ++jm) {
        std::set<int> ks = level_keys(jm);
        for (const auto& [km, per_k] : pk)
            if ((km & jm) == km)
                for (const auto& [k, s] : per_k) ks.insert(k - detail::popcount(jm & ~km));
        for (int k : ks) {
            GrPiece gj(wj.at(jm), k);
            Subspace acc = Subspace::zero(gj.dim());
            int expected = 0;
            bool direct = true;
            for (unsigned km = jm;; km = (km - 1) & jm) {
                unsigned am = jm & ~km;
                int asz = detail::popcount(am);
                auto itp = pk.find(km);
                if (itp != pk.end() && itp->second.count(k + asz)) {
                    const Subspace& p = itp->second.at(k + asz);
                    GrPiece gk(wj.at(km), k + asz);
                    Matrix mp = graded_map(gk, gj, fam.product(am));
                    Subspace img = p.image_under(mp);
                    if (intersect(acc, img).dim() != 0) direct = false;
                    acc = acc + img;
                    expected += img.dim();
                }
                if (km == 0) break;
            }
            rep.require(direct && acc.dim() == expected && acc.dim() == gj.dim(),
                        "graded-reconstruction",
                        "J=" + detail::mask_str(jm, m) + " k=" + std::to_string(k),
                        "have " + std::to_string(acc.dim()) + " of " +
                            std::to_string(gj.dim()));
        }
    }

    // degreewise graded dimensions of the total filtration against the
    // image cubes of the P-spaces over the transverse axes: P^K at level k0
    // contributes its image under each transverse product N_A to the block
    // K u A in degree |K|+|A| at total level k0+|K|.
    CubeWeight cw = weight_on_koszul(dim, w, fam);
    if (!cw.ok) {
        rep.absorb(cw.report, "weight");
        return rep;
    }
    std::map<std::pair<int, int>, int> rhs; // (degree, level) -> dimension
    for (const auto& [km, per_k] : pk) {
        int ksz = detail::popcount(km);
        unsigned tmask = (full - 1) & ~km;
        for (const auto& [k0, p] : per_k) {
            GrPiece gk(wj.at(km), k0);
            for (unsigned am = tmask;; am = (am - 1) & tmask) {
                int asz = detail::popcount(am);
                GrPiece gt(wj.at(km | am), k0 - asz);
                int d = (gt.dim() == 0)
                            ? 0
                            : p.image_under(graded_map(gk, gt, fam.product(am))).dim();
                rhs[{ksz + asz, k0 + ksz}] += d;
                if (am == 0) break;
            }
        }
    }
    std::set<std::pair<int, int>> slots;
    for (const auto& [p, f] : cw.levels)
        for (const auto& [k, s] : f.jumps()) slots.insert({p, k});
    for (const auto& [pk_key, d] : rhs) slots.insert(pk_key);
    for (const auto& [p, k] : slots) {
        int lhs = cw.levels.count(p) ? cw.levels.at(p).graded_dim(k) : 0;
        int r = rhs.count({p, k}) ? rhs.at({p, k}) : 0;
        rep.require(lhs == r, "graded-cube-dimensions",
                    "degree " + std::to_string(p) + " level " + std::to_string(k),
                    std::to_string(lhs) + " vs " + std::to_string(r));
    }
    return rep;
}

} // namespace hodgekit

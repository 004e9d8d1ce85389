#pragma once

#include "complexes.hpp"
#include "hodge.hpp"

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace hodgekit {

namespace detail {

/// Subquotient U/L of a complex, degree by degree, with the induced
/// differential. Both families of subspaces must be d-stable.
struct SubqComplex {
    ChainComplex cx;
    std::map<int, Subquotient> coords; // per degree of the ambient complex

    const Subquotient& at(int n) const { return coords.at(n); }
};

inline SubqComplex subquotient_complex(const ChainComplex& big,
                                       const std::function<Subspace(int)>& upper,
                                       const std::function<Subspace(int)>& lower) {
    SubqComplex out;
    for (const auto& [n, d] : big.dims) {
        Subspace u = upper(n), l = lower(n);
        if (!u.contains(l))
            throw std::invalid_argument("subquotient: layers not nested");
        out.coords.emplace(n, Subquotient(u, l));
        int hd = out.coords.at(n).dim();
        if (hd > 0) out.cx.dims[n] = hd;
    }
    for (const auto& [n, d] : big.dims) {
        if (big.dim(n + 1) == 0) continue;
        Matrix dm = big.d_at(n);
        if (!upper(n + 1).contains(upper(n).image_under(dm)) ||
            !lower(n + 1).contains(lower(n).image_under(dm)))
            throw std::invalid_argument("subquotient: layers not d-stable");
        Matrix ind = out.coords.at(n + 1).to_h * dm * out.coords.at(n).from_h;
        if (out.cx.dim(n) > 0 && out.cx.dim(n + 1) > 0) out.cx.diff[n] = ind;
    }
    return out;
}

} // namespace detail

/// One cohomology space of a subquotient U/L of a filtered complex, together
/// with the filtrations of the ambient complex induced on it.
struct InducedCohomology {
    int dim = 0;
    std::map<std::string, Filtration> filts;
};

inline InducedCohomology
subq_cohomology(const ChainComplex& big, const std::function<Subspace(int)>& upper,
                const std::function<Subspace(int)>& lower, int degree,
                const std::map<std::string, std::map<int, Filtration>>& amb_filts) {
    detail::SubqComplex sq = detail::subquotient_complex(big, upper, lower);
    InducedCohomology out;
    if (big.dim(degree) == 0) {
        for (const auto& [name, per_deg] : amb_filts) out.filts[name] = Filtration();
        return out;
    }
    const Subquotient& here = sq.coords.at(degree);
    int hd = here.dim();
    Subspace ker = (sq.cx.dim(degree + 1) == 0)
                       ? Subspace::full(hd)
                       : Subspace::span(sq.cx.d_at(degree).kernel(), hd);
    Subspace im = (sq.cx.dim(degree - 1) == 0)
                      ? Subspace::zero(hd)
                      : Subspace::span(sq.cx.d_at(degree - 1).transpose(), hd);
    if (!ker.contains(im)) throw std::logic_error("subq_cohomology: d-squared breach");
    Subquotient h(ker, im);
    out.dim = h.dim();
    for (const auto& [name, per_deg] : amb_filts) {
        if (out.dim == 0) {
            out.filts[name] = Filtration();
            continue;
        }
        std::map<int, Subspace> lv;
        for (const auto& [k, s] : per_deg.at(degree).jumps()) {
            Subspace in_h = intersect(s, upper(degree)).image_under(here.to_h);
            lv[k] = intersect(in_h, ker).image_under(h.to_h);
        }
        out.filts[name] = Filtration::from_levels(out.dim, lv);
    }
    return out;
}

/// Spectral sequence of a filtered complex in the named filtration, read in
/// decreasing indexing: the page index p refers to level -p of the stored
/// increasing filtration. Pages start at r = 1. Every page is computed twice
/// — by the classical cycle/boundary construction and as the graded piece
/// Gr_{-p} of the cohomology of the level subquotients — and the two counts
/// are required to agree.
struct SpectralSequence {
    using Key = std::pair<int, int>; // (p, q)
    std::vector<std::map<Key, int>> pages;   // pages[r-1] for r = 1..
    std::vector<std::map<Key, int>> d_ranks; // rank of d_r out of (p,q)
    std::map<Key, int> einf;
    std::map<int, int> h_dims;
    Report report;

    int page_dim(int r, int p, int q) const {
        const auto& pg = pages.at(size_t(r - 1));
        auto it = pg.find({p, q});
        return it == pg.end() ? 0 : it->second;
    }

    int last_page() const { return int(pages.size()); }

    /// True when page r already has the limit dimensions everywhere.
    bool degenerates_at(int r) const {
        std::map<Key, int> pg = pages.at(size_t(r - 1));
        for (auto it = pg.begin(); it != pg.end();)
            it = (it->second == 0) ? pg.erase(it) : std::next(it);
        std::map<Key, int> lim = einf;
        for (auto it = lim.begin(); it != lim.end();)
            it = (it->second == 0) ? lim.erase(it) : std::next(it);
        return pg == lim;
    }
};

inline SpectralSequence spectral_sequence(const FilteredComplex& fc,
                                          const std::string& which) {
    if (!fc.filts.count(which))
        throw std::invalid_argument("spectral_sequence: unknown filtration " + which);
    {
        FilteredComplex only;
        only.cx = fc.cx;
        only.filts[which] = fc.filts.at(which);
        Report v = only.validate();
        if (!v.pass())
            throw std::invalid_argument("spectral_sequence: filtration is not by subcomplexes");
    }
    const auto& per_deg = fc.filts.at(which);
    SpectralSequence ss;

    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [n, f] : per_deg) {
        if (fc.cx.dim(n) == 0) continue;
        if (first) {
            lo = f.min_weight();
            hi = f.max_weight();
            first = false;
        }
        lo = std::min(lo, f.min_weight());
        hi = std::max(hi, f.max_weight());
    }
    int span = hi - lo;
    int rmax = span + 2;

    // decreasing levels: F^p in degree n
    auto fp = [&](int p, int n) {
        if (fc.cx.dim(n) == 0) return Subspace::zero(0);
        return per_deg.at(n).at_dec(p);
    };
    // Z_r^{p,q} = F^p K^n cap d^{-1} F^{p+r} K^{n+1}
    auto zr = [&](int r, int p, int n) {
        Subspace z = fp(p, n);
        if (fc.cx.dim(n) == 0) return z;
        if (fc.cx.dim(n + 1) == 0) return z;
        return intersect(z, fp(p + r, n + 1).preimage_under(fc.cx.d_at(n)));
    };
    // denominator B_r^{p,q} = Z_{r-1}^{p+1,q-1} + d Z_{r-1}^{p-r+1,q+r-2}
    auto br = [&](int r, int p, int n) {
        Subspace b = zr(r - 1, p + 1, n);
        if (fc.cx.dim(n - 1) > 0 && fc.cx.dim(n) > 0)
            b = b + zr(r - 1, p - r + 1, n - 1).image_under(fc.cx.d_at(n - 1));
        return b;
    };

    // cohomology dims for the abutment
    ss.h_dims = fc.cx.cohomology_dims();

    std::set<std::pair<int, int>> slots; // (p, n)
    for (const auto& [n, d] : fc.cx.dims)
        for (int p = -hi; p <= -lo; ++p) slots.insert({p, n});

    for (int r = 1; r <= rmax; ++r) {
        std::map<SpectralSequence::Key, int> page, ranks;
        for (const auto& [p, n] : slots) {
            Subspace z = zr(r, p, n), b = br(r, p, n);
            int e = z.dim() - b.dim();
            if (e < 0 || !z.contains(b))
                throw std::logic_error("spectral_sequence: boundary escapes cycles");
            if (e != 0) page[{p, n - p}] = e;
            // rank of d_r : E_r^{p,q} -> E_r^{p+r, q-r+1}
            if (fc.cx.dim(n + 1) > 0 && fc.cx.dim(n) > 0) {
                Subspace dz = z.image_under(fc.cx.d_at(n));
                Subspace tb = br(r, p + r, n + 1);
                int rk = (dz + tb).dim() - tb.dim();
                if (rk != 0) ranks[{p, n - p}] = rk;
            }
        }
        ss.pages.push_back(page);
        ss.d_ranks.push_back(ranks);
    }

    // limit term: Gr_F^p of the cohomology in each degree
    for (const auto& [n, d] : fc.cx.dims) {
        Subspace kerd = (fc.cx.dim(n + 1) == 0)
                            ? Subspace::full(d)
                            : Subspace::span(fc.cx.d_at(n).kernel(), d);
        Subspace imd = (fc.cx.dim(n - 1) == 0)
                           ? Subspace::zero(d)
                           : Subspace::span(fc.cx.d_at(n - 1).transpose(), d);
        for (int p = -hi; p <= -lo; ++p) {
            int a = (intersect(fp(p, n), kerd) + imd).dim();
            int b = (intersect(fp(p + 1, n), kerd) + imd).dim();
            if (a - b != 0) ss.einf[{p, n - p}] = a - b;
        }
    }

    // page transition: dim E_{r+1} = dim E_r - rank(out) - rank(in)
    for (int r = 1; r < rmax; ++r)
        for (const auto& [p, n] : slots) {
            int e = ss.page_dim(r, p, n - p);
            auto rk = [&](int pp, int qq) {
                auto it = ss.d_ranks[size_t(r - 1)].find({pp, qq});
                return it == ss.d_ranks[size_t(r - 1)].end() ? 0 : it->second;
            };
            int expect = e - rk(p, n - p) - rk(p - r, n - p + r - 1);
            ss.report.require(ss.page_dim(r + 1, p, n - p) == expect, "page-transition",
                              "r=" + std::to_string(r) + " (p,q)=(" + std::to_string(p) +
                                  "," + std::to_string(n - p) + ")");
        }

    // the last computed page must already be the limit
    ss.report.require(ss.degenerates_at(rmax), "stabilization");

    // abutment: limit gradeds sum to the cohomology dimension
    for (const auto& [n, hd] : ss.h_dims) {
        int total = 0;
        for (int p = -hi; p <= -lo; ++p) {
            auto it = ss.einf.find({p, n - p});
            if (it != ss.einf.end()) total += it->second;
        }
        ss.report.require(total == hd, "abutment", "degree " + std::to_string(n),
                          std::to_string(total) + " vs " + std::to_string(hd));
    }

    // second route: E_r^{p,q} = Gr_{-p} H^{p+q} of the subquotient
    // level(-p+r-1) / level(-p-r)
    std::map<std::string, std::map<int, Filtration>> just_f;
    just_f["f"] = per_deg;
    for (int r = 1; r <= rmax; ++r)
        for (const auto& [p, n] : slots) {
            auto upper = [&](int m) {
                return fc.cx.dim(m) == 0 ? Subspace::zero(0)
                                         : per_deg.at(m).at(-p + r - 1);
            };
            auto lower = [&](int m) {
                return fc.cx.dim(m) == 0 ? Subspace::zero(0) : per_deg.at(m).at(-p - r);
            };
            InducedCohomology h = subq_cohomology(fc.cx, upper, lower, n, just_f);
            int formula = (h.dim == 0) ? 0 : h.filts.at("f").graded_dim(-p);
            ss.report.require(formula == ss.page_dim(r, p, n - p), "page-formula",
                              "r=" + std::to_string(r) + " (p,q)=(" + std::to_string(p) +
                                  "," + std::to_string(n - p) + ")",
                              std::to_string(formula) + " vs " +
                                  std::to_string(ss.page_dim(r, p, n - p)));
        }

    return ss;
}

enum class HCMode { fmhc, lmhc };

/// Mixed-Hodge-complex axioms for a complex with filtrations "wf" (finite),
/// "w" (weight) and "f" (decreasing, stored by negated level): for every
/// pair i > j of finite levels, each cohomology of wf_i / wf_j carries a
/// mixed Hodge structure for the induced (w, f), with weights offset by the
/// cohomological degree. The lmhc mode additionally requires the spectral
/// sequence of "wf" to have its second page equal to the limit.
inline Report fmhc_lmhc_validate(const FilteredComplex& fc, HCMode mode) {
    Report rep;
    for (const char* name : {"wf", "w", "f"})
        if (!fc.filts.count(name)) rep.fail("missing-filtration", name);
    if (!rep.pass()) return rep;
    rep.absorb(fc.validate(), "complex");
    if (!rep.pass()) return rep;

    const auto& wf = fc.filts.at("wf");
    int lo = 0, hi = 0;
    bool first = true;
    for (const auto& [n, f] : wf) {
        if (fc.cx.dim(n) == 0) continue;
        if (first) {
            lo = f.min_weight();
            hi = f.max_weight();
            first = false;
        }
        lo = std::min(lo, f.min_weight());
        hi = std::max(hi, f.max_weight());
    }

    std::map<std::string, std::map<int, Filtration>> induce;
    induce["w"] = fc.filts.at("w");
    induce["f"] = fc.filts.at("f");
    for (int i = lo; i <= hi; ++i)
        for (int j = lo - 1; j < i; ++j) {
            auto upper = [&](int m) {
                return fc.cx.dim(m) == 0 ? Subspace::zero(0) : wf.at(m).at(i);
            };
            auto lower = [&](int m) {
                return fc.cx.dim(m) == 0 ? Subspace::zero(0) : wf.at(m).at(j);
            };
            for (const auto& [n, d] : fc.cx.dims) {
                InducedCohomology h = subq_cohomology(fc.cx, upper, lower, n, induce);
                if (h.dim == 0) continue;
                Report m = is_mhs(h.filts.at("w"), h.filts.at("f"),
                                  h.filts.at("f").conjugate(), n);
                rep.absorb(m, "(i,j)=(" + std::to_string(i) + "," + std::to_string(j) +
                                  ") H^" + std::to_string(n));
            }
        }

    if (mode == HCMode::lmhc) {
        SpectralSequence ss = spectral_sequence(fc, "wf");
        rep.absorb(ss.report, "spectral");
        rep.require(ss.degenerates_at(std::min(2, ss.last_page())), "degeneration", "",
                    "second page differs from the limit");
    }
    return rep;
}

/// A finite cosimplicial diagram of filtered complexes: complexes K_0..K_P
/// and coface maps delta[p][i] : K_p -> K_{p+1} for 0 <= i <= p+1, given
/// degreewise.
struct CosimplicialData {
    std::vector<FilteredComplex> complexes;
    std::vector<std::vector<std::map<int, Matrix>>> cofaces;
};

struct DiagonalImage {
    FilteredComplex total;
    std::map<int, std::map<int, int>> offsets; // degree -> row p -> block offset
    Report report;
};

/// Total complex of a cosimplicial diagram: degree n collects the degree
/// n - p part of K_p; the differential is the inner one plus the alternating
/// coface sum, with a sign (-1)^q on the coface part so that the square
/// vanishes. Filtrations named "w" and "wf" are shifted diagonally (level n
/// picks level n + p on the row p block); every other filtration is taken
/// levelwise.
inline DiagonalImage diagonal_image(const CosimplicialData& data) {
    DiagonalImage out;
    Report& rep = out.report;
    int rows = int(data.complexes.size());
    if (rows == 0) {
        rep.fail("empty");
        return out;
    }
    if (int(data.cofaces.size()) + 1 < rows) {
        rep.fail("missing-cofaces");
        return out;
    }
    for (int p = 0; p < rows; ++p)
        rep.absorb(data.complexes[p].validate(), "row " + std::to_string(p));
    if (!rep.pass()) return out;

    auto delta = [&](int p, int i, int n) -> Matrix {
        const auto& per_deg = data.cofaces[size_t(p)][size_t(i)];
        auto it = per_deg.find(n);
        int r = data.complexes[size_t(p + 1)].cx.dim(n);
        int c = data.complexes[size_t(p)].cx.dim(n);
        if (it == per_deg.end()) return Matrix(r, c);
        if (it->second.rows() != r || it->second.cols() != c)
            throw std::invalid_argument("diagonal_image: coface block shape");
        return it->second;
    };

    // coface axioms: chain maps, filtered, cosimplicial identities
    for (int p = 0; p + 1 < rows; ++p) {
        const auto& src = data.complexes[size_t(p)];
        const auto& dst = data.complexes[size_t(p + 1)];
        if (int(data.cofaces[size_t(p)].size()) != p + 2) {
            rep.fail("coface-count", "row " + std::to_string(p));
            continue;
        }
        for (int i = 0; i <= p + 1; ++i) {
            for (const auto& [n, d] : src.cx.dims) {
                if (dst.cx.dim(n + 1) > 0 && src.cx.dim(n) > 0)
                    rep.require((dst.cx.d_at(n) * delta(p, i, n) -
                                 delta(p, i, n + 1) * src.cx.d_at(n))
                                    .is_zero(),
                                "chain-map",
                                "delta_" + std::to_string(i) + " row " +
                                    std::to_string(p) + " degree " + std::to_string(n));
                for (const auto& [name, per_deg] : src.filts) {
                    if (!dst.filts.count(name)) continue;
                    for (const auto& [k, s] : per_deg.at(n).jumps())
                        rep.require(dst.filts.at(name).at(n).at(k).contains(
                                        s.image_under(delta(p, i, n))),
                                    "filtered-coface",
                                    name + " delta_" + std::to_string(i) + " row " +
                                        std::to_string(p) + " level " +
                                        std::to_string(k));
                }
            }
        }
    }
    for (int p = 0; p + 2 < rows; ++p)
        for (int i = 0; i <= p + 1; ++i)
            for (int j = i + 1; j <= p + 2; ++j)
                for (const auto& [n, d] : data.complexes[size_t(p)].cx.dims)
                    rep.require((delta(p + 1, j, n) * delta(p, i, n) -
                                 delta(p + 1, i, n) * delta(p, j - 1, n))
                                    .is_zero(),
                                "cosimplicial-identity",
                                "(i,j)=(" + std::to_string(i) + "," + std::to_string(j) +
                                    ") row " + std::to_string(p) + " degree " +
                                    std::to_string(n));
    if (!rep.pass()) return out;

    // layout of the total complex
    std::set<int> degrees;
    for (int p = 0; p < rows; ++p)
        for (const auto& [n, d] : data.complexes[size_t(p)].cx.dims)
            degrees.insert(n + p);
    for (int n : degrees) {
        int off = 0;
        for (int p = 0; p < rows; ++p) {
            int d = data.complexes[size_t(p)].cx.dim(n - p);
            if (d > 0) out.offsets[n][p] = off;
            off += d;
        }
        if (off > 0) out.total.cx.dims[n] = off;
    }
    auto offset = [&](int n, int p) { return out.offsets.at(n).at(p); };

    for (int n : degrees) {
        int rows_out = out.total.cx.dim(n + 1);
        int cols = out.total.cx.dim(n);
        if (rows_out == 0 || cols == 0) continue;
        Matrix d(rows_out, cols);
        for (int p = 0; p < rows; ++p) {
            int q = n - p;
            const auto& kp = data.complexes[size_t(p)];
            if (kp.cx.dim(q) == 0) continue;
            // inner differential into (p, q+1)
            if (kp.cx.dim(q + 1) > 0) {
                Matrix b = kp.cx.d_at(q);
                for (int r = 0; r < b.rows(); ++r)
                    for (int c = 0; c < b.cols(); ++c)
                        d.at(offset(n + 1, p) + r, offset(n, p) + c) = b.at(r, c);
            }
            // coface sum into (p+1, q) with the Koszul sign (-1)^q
            if (p + 1 < rows && data.complexes[size_t(p + 1)].cx.dim(q) > 0) {
                Matrix b(data.complexes[size_t(p + 1)].cx.dim(q), kp.cx.dim(q));
                for (int i = 0; i <= p + 1; ++i) {
                    Matrix blk = delta(p, i, q);
                    Scalar s((i % 2) ? -1 : 1);
                    for (int r = 0; r < b.rows(); ++r)
                        for (int c = 0; c < b.cols(); ++c) b.at(r, c) += s * blk.at(r, c);
                }
                Scalar sq((((q % 2) + 2) % 2) ? -1 : 1);
                for (int r = 0; r < b.rows(); ++r)
                    for (int c = 0; c < b.cols(); ++c)
                        d.at(offset(n + 1, p + 1) + r, offset(n, p) + c) = sq * b.at(r, c);
            }
        }
        out.total.cx.diff[n] = d;
    }

    // assemble the filtrations
    std::set<std::string> names;
    for (int p = 0; p < rows; ++p)
        for (const auto& [name, f] : data.complexes[size_t(p)].filts) names.insert(name);
    for (const std::string& name : names) {
        bool diagonal = (name == "w" || name == "wf");
        for (int n : degrees) {
            int dn = out.total.cx.dim(n);
            if (dn == 0) continue;
            std::set<int> keys;
            for (int p = 0; p < rows; ++p) {
                const auto& kp = data.complexes[size_t(p)];
                if (kp.cx.dim(n - p) == 0 || !kp.filts.count(name)) continue;
                for (const auto& [k, s] : kp.filts.at(name).at(n - p).jumps())
                    keys.insert(diagonal ? k - p : k);
            }
            if (keys.empty()) keys.insert(0);
            std::map<int, Subspace> lv;
            for (int k : keys) {
                Subspace acc = Subspace::zero(dn);
                for (int p = 0; p < rows; ++p) {
                    const auto& kp = data.complexes[size_t(p)];
                    int bd = kp.cx.dim(n - p);
                    if (bd == 0) continue;
                    Subspace s = kp.filts.count(name)
                                     ? kp.filts.at(name).at(n - p).at(diagonal ? k + p : k)
                                     : Subspace::full(bd);
                    Matrix rowsm(s.dim(), dn);
                    for (int r = 0; r < s.dim(); ++r)
                        for (int c = 0; c < bd; ++c)
                            rowsm.at(r, offset(n, p) + c) = s.basis().at(r, c);
                    acc = acc + Subspace::span(rowsm, dn);
                }
                lv[k] = acc;
            }
            if (!lv.rbegin()->second.is_full()) lv[lv.rbegin()->first + 1] = Subspace::full(dn);
            out.total.filts[name][n] = Filtration::from_levels(dn, lv);
        }
    }

    // levelwise identity: each assembled level is the direct sum of the
    // block levels it collects
    for (const auto& [name, per_deg] : out.total.filts) {
        bool diagonal = (name == "w" || name == "wf");
        for (const auto& [n, f] : per_deg)
            for (const auto& [k, s] : f.jumps()) {
                int expect = 0;
                for (int p = 0; p < rows; ++p) {
                    const auto& kp = data.complexes[size_t(p)];
                    int bd = kp.cx.dim(n - p);
                    if (bd == 0) continue;
                    expect += kp.filts.count(name)
                                  ? kp.filts.at(name).at(n - p).at(diagonal ? k + p : k).dim()
                                  : bd;
                }
                rep.require(s.dim() == expect, "diagonal-levels",
                            name + " degree " + std::to_string(n) + " level " +
                                std::to_string(k));
            }
    }

    rep.absorb(out.total.validate(), "total");
    return out;
}

/// Limit mixed Hodge object: (V, W, F) a mixed Hodge structure, the finite
/// filtration wf given by sub-mixed-Hodge-structures, N an endomorphism of
/// type (-1,-1) preserving wf, and W the relative monodromy filtration of N
/// along wf.
inline Report limit_object_validate(const Filtration& wf, const Filtration& w,
                                    const Filtration& f, const Matrix& n) {
    Report rep;
    int dim = w.ambient_dim();
    if (wf.ambient_dim() != dim || f.ambient_dim() != dim || n.rows() != dim ||
        n.cols() != dim) {
        rep.fail("dimension");
        return rep;
    }
    rep.absorb(is_mhs(w, f, f.conjugate(), 0), "ambient");
    for (const auto& [i, s] : wf.jumps()) {
        if (s.is_zero()) continue;
        SubspaceMap a(s);
        rep.absorb(is_mhs(w.induced_sub(a), f.induced_sub(a),
                          f.conjugate().induced_sub(a), 0),
                   "wf_" + std::to_string(i));
    }
    for (const auto& [k, s] : w.jumps())
        rep.require(w.at(k - 2).contains(s.image_under(n)), "n-weight",
                    "k=" + std::to_string(k));
    Filtration fbar = f.conjugate();
    for (const auto& [k, s] : f.jumps())
        rep.require(f.at(k + 1).contains(s.image_under(n)), "n-hodge",
                    "k=" + std::to_string(k));
    for (const auto& [k, s] : fbar.jumps())
        rep.require(fbar.at(k + 1).contains(s.image_under(n)), "n-hodge-conjugate",
                    "k=" + std::to_string(k));
    for (const auto& [i, s] : wf.jumps())
        rep.require(s.contains(s.image_under(n)), "n-preserves-wf",
                    "i=" + std::to_string(i));
    rep.absorb(verify_relative_monodromy(w, n, wf), "relative-monodromy");
    return rep;
}

} // namespace hodgekit

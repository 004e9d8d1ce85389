#pragma once

#include "filtration_ops.hpp"
#include "monodromy.hpp"
#include "report.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace hodgekit {

/// i^e as an exact scalar.
inline Scalar ipow(int e) {
    switch (((e % 4) + 4) % 4) {
        case 0: return Scalar(1);
        case 1: return Scalar::i();
        case 2: return Scalar(-1);
        default: return Scalar(0) - Scalar::i();
    }
}

/// Bilinear pairing S(x, y) = x^T s y with a declared symmetry parity:
/// S(x, conj y) = (-1)^parity conj S(y, conj x).
struct Pairing {
    Matrix s;
    int parity = 0;

    Scalar eval(const Vec& x, const Vec& y) const {
        Vec sy = s * y;
        Scalar r(0);
        for (size_t i = 0; i < x.size(); ++i) r += x[i] * sy[i];
        return r;
    }

    Report validate() const {
        Report rep;
        rep.require(s.rows() == s.cols(), "pairing-square");
        Scalar sign((parity % 2) ? -1 : 1);
        rep.require(s == sign * s.conjugate().transpose(), "pairing-symmetry",
                    "parity " + std::to_string(parity));
        rep.require(s.is_invertible(), "pairing-nondegenerate");
        return rep;
    }
};

/// Infinitesimal isotropy S(Nx, y) + S(x, Ny) = 0.
inline bool infinitesimally_isotropic(const Matrix& n, const Pairing& s) {
    return (n.transpose() * s.s + s.s * n).is_zero();
}

/// A filtered rational structure with commuting nilpotent operators and
/// optional graded polarizations. F and Fbar are decreasing (accessed through
/// Filtration::at_dec); Fbar defaults to the conjugate of F.
struct HodgeData {
    int dim = 0;
    Filtration w;                       // increasing, rational
    Filtration f;                       // decreasing Hodge filtration
    std::optional<Filtration> fbar_user;
    NilpotentFamily nilpotents;
    std::map<int, Pairing> polarizations; // W-weight -> pairing on that graded piece
    int weight_offset = 0;

    Filtration fbar() const { return fbar_user ? *fbar_user : f.conjugate(); }

    Report validate_basics() const {
        Report rep;
        rep.require(w.ambient_dim() == dim && f.ambient_dim() == dim, "dimension");
        rep.require(w.is_rational(), "rational-weight-filtration");
        if (fbar_user) rep.require(fbar_user->ambient_dim() == dim, "dimension", "Fbar");
        rep.absorb(validate_family(nilpotents), "nilpotents");
        for (const Matrix& n : nilpotents.operators)
            rep.require(n.is_rational() && preserves_filtration(n, w),
                        "nilpotent-preserves-W");
        return rep;
    }
};

/// Hodge bigrading attempt: pieces L^{p,q} = F^p cap Fbar^q over p+q = k.
struct Bigrading {
    Report report;
    std::map<std::pair<int, int>, Subspace> pieces;

    bool pass() const { return report.pass(); }
};

inline Bigrading hodge_bigrading(const Filtration& f, const Filtration& fbar, int k) {
    Bigrading out;
    int n = f.ambient_dim();
    if (fbar.ambient_dim() != n) {
        out.report.fail("dimension");
        return out;
    }
    if (n == 0) return out;
    int pmin = -f.max_weight() - 1, pmax = -f.min_weight() + 1;
    Subspace sum = Subspace::zero(n);
    int total = 0;
    for (int p = pmin; p <= pmax; ++p) {
        Subspace piece = intersect(f.at_dec(p), fbar.at_dec(k - p));
        if (piece.is_zero()) continue;
        out.pieces[{p, k - p}] = piece;
        sum = sum + piece;
        total += piece.dim();
        out.report.note("type", "(" + std::to_string(p) + "," + std::to_string(k - p) + ")",
                        "dim " + std::to_string(piece.dim()));
    }
    out.report.require(sum.is_full(), "bigrading-spans",
                       "weight " + std::to_string(k));
    out.report.require(total == n, "bigrading-direct",
                       "weight " + std::to_string(k),
                       "sum of piece dims " + std::to_string(total));
    return out;
}

/// Pure Hodge structure of weight k: the (p,q) pieces with p+q = k span
/// directly.
inline Report is_pure_hs(const Filtration& f, const Filtration& fbar, int k) {
    return hodge_bigrading(f, fbar, k).report;
}

namespace detail {

/// Filtration induced on the graded piece sub/W_{k-1} of a subquotient:
/// level p is the image of (F_p cap sub) in the piece's own coordinates.
inline Filtration induce_on_piece(const Filtration& f, const QuotientMap& q,
                                  const SubspaceMap& g, const Subspace& sub) {
    std::map<int, Subspace> lv;
    for (const auto& [p, s] : f.jumps()) lv[p] = g.restrict(q.push(intersect(s, sub)));
    int top = f.max_weight();
    if (lv.empty() || !lv.rbegin()->second.is_full()) lv[top] = Subspace::full(g.sub_dim());
    return Filtration::from_levels(g.sub_dim(), lv);
}

} // namespace detail

/// Graded data of a mixed structure at one W-weight.
struct GradedPiece {
    int weight = 0;
    QuotientMap q;      // V / W_{k-1}
    SubspaceMap g;      // Gr^W_k inside the quotient
    Filtration f, fbar; // induced filtrations in graded coordinates

    GradedPiece(int k, const Filtration& w, const Filtration& f_, const Filtration& fbar_)
        : weight(k), q(w.at(k - 1)), g(q.push(w.at(k))),
          f(detail::induce_on_piece(f_, q, g, w.at(k))),
          fbar(detail::induce_on_piece(fbar_, q, g, w.at(k))) {}

    int dim() const { return g.sub_dim(); }
    Matrix induce(const Matrix& n) const { return g.induced(q.induced(n)); }
};

/// Mixed Hodge structure: every Gr^W_k with induced F, Fbar is pure of
/// weight k (+ offset).
inline Report is_mhs(const Filtration& w, const Filtration& f, const Filtration& fbar,
                     int weight_offset = 0) {
    Report rep;
    if (!w.is_rational()) rep.fail("rational-weight-filtration");
    for (const auto& [k, s] : w.jumps()) {
        GradedPiece gp(k, w, f, fbar);
        if (gp.dim() == 0) continue;
        Report sub = is_pure_hs(gp.f, gp.fbar, k + weight_offset);
        rep.absorb(sub, "weight " + std::to_string(k));
    }
    return rep;
}

inline Report is_mhs(const HodgeData& h) {
    return is_mhs(h.w, h.f, h.fbar(), h.weight_offset);
}

/// Polarization of a pure structure of weight k: symmetry sign, orthogonality
/// S(F^p, conj Fbar^q) = 0 for p+q = k+1, and exact positivity of the
/// Weil-twisted Hermitian form on each (p,q) piece via leading principal
/// minors.
inline Report check_polarization(const Filtration& f, const Filtration& fbar, int k,
                                 const Pairing& s) {
    Report rep = s.validate();
    rep.require(s.parity % 2 == k % 2, "pairing-parity",
                "weight " + std::to_string(k));
    Bigrading bg = hodge_bigrading(f, fbar, k);
    rep.absorb(bg.report, "purity");
    if (!rep.pass()) return rep;

    for (const auto& [p, fp] : f.jumps()) {
        // stored decreasing: this jump is F^{-p}
        Subspace a = fp;
        Subspace b = fbar.at_dec(k + 1 + p).conjugate(); // conj Fbar^q, q = k+1-(-p)
        if (a.is_zero() || b.is_zero()) continue;
        Matrix prod = a.basis() * s.s * b.basis().transpose();
        rep.require(prod.is_zero(), "F-orthogonality",
                    "p=" + std::to_string(-p) + ", q=" + std::to_string(k + 1 + p));
    }

    for (const auto& [pq, piece] : bg.pieces) {
        Scalar twist = ipow(pq.first - pq.second);
        int t = piece.dim();
        Matrix gram(t, t);
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b)
                gram.at(a, b) = twist * s.eval(piece.basis_row(a),
                                               conj_vec(piece.basis_row(b)));
        bool hermitian = (gram == gram.conjugate().transpose());
        rep.require(hermitian, "gram-hermitian",
                    "(p,q)=(" + std::to_string(pq.first) + "," +
                        std::to_string(pq.second) + ")");
        if (!hermitian) continue;
        for (int lead = 1; lead <= t; ++lead) {
            Matrix minor(lead, lead);
            for (int a = 0; a < lead; ++a)
                for (int b = 0; b < lead; ++b) minor.at(a, b) = gram.at(a, b);
            Scalar dmin = minor.det();
            rep.require(dmin.im == 0 && dmin.re > 0, "positivity",
                        "(p,q)=(" + std::to_string(pq.first) + "," +
                            std::to_string(pq.second) + "), minor " +
                            std::to_string(lead));
        }
    }
    return rep;
}

/// Nilpotent orbit of weight w: cone-independence of the weight filtration
/// (all-ones against seeded positive rational samples, reported as sampled),
/// (M, F) a mixed Hodge structure, and S(x, N^k y) polarizing each primitive
/// part of Gr^M_{w+k}.
inline Report is_nilpotent_orbit(const HodgeData& h, int w, const Pairing* s,
                                 uint64_t seed = 2026, int samples = 8) {
    Report rep = h.validate_basics();
    if (s) {
        rep.absorb(s->validate(), "pairing");
        if (!rep.pass()) return rep;
        for (size_t j = 0; j < h.nilpotents.size(); ++j)
            rep.require(infinitesimally_isotropic(h.nilpotents.operators[j], *s),
                        "infinitesimal-isotropy", "operator " + std::to_string(j + 1));
    }
    if (!rep.pass()) return rep;

    unsigned all = h.nilpotents.size() ? (1u << h.nilpotents.size()) - 1 : 0u;
    Matrix nsum = h.nilpotents.sum(all);
    if (!nsum.is_nilpotent()) {
        rep.fail("nilpotence", "sum of operators");
        return rep;
    }
    Filtration m = monodromy_filtration(nsum, w);

    // sampled cone-independence
    uint64_t state = seed ? seed : 1;
    auto next = [&]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return state;
    };
    bool cone_ok = true;
    for (int it = 0; it < samples && h.nilpotents.size() > 0; ++it) {
        std::vector<Scalar> t;
        for (size_t j = 0; j < h.nilpotents.size(); ++j)
            t.push_back(Scalar(Rat(1 + long(next() % 7), 1 + long(next() % 5))));
        Filtration mt = monodromy_filtration(h.nilpotents.sum(all, &t), w);
        if (mt != m) cone_ok = false;
    }
    rep.require(cone_ok, "cone-independence", "", "sampled");
    rep.note("cone-independence", "", "sampled: all-ones plus " +
                                           std::to_string(samples) + " random tuples");

    Filtration fbar = h.fbar();
    rep.absorb(is_mhs(m, h.f, fbar), "limit-mhs");
    if (!rep.pass() || !s) return rep;

    // graded polarizations on primitive parts
    auto prim = primitive_parts(nsum, m, w);
    for (const auto& [k, pp] : prim) {
        if (pp.dim == 0) continue;
        Subspace mlow = m.at(w + k - 1);
        std::vector<Vec> reps = detail::complement_rows(pp.representatives, mlow);
        int t = int(reps.size());
        Matrix nk = nsum.pow(k);

        // coordinates of the primitive part inside Gr^M_{w+k}
        GradedPiece gp(w + k, m, h.f, fbar);
        Matrix r_t(h.dim, t);
        for (int a = 0; a < t; ++a)
            for (int row = 0; row < h.dim; ++row) r_t.at(row, a) = reps[a][row];
        Matrix phi = gp.g.to_coords * (gp.q.proj * r_t); // Q^t -> graded coords
        Subspace pgr = Subspace::full(t).image_under(phi);

        std::map<int, Subspace> fp, fbp;
        for (const auto& [p, sgr] : gp.f.jumps())
            fp[p] = intersect(sgr, pgr).preimage_under(phi);
        fp[gp.f.max_weight()] = Subspace::full(t);
        for (const auto& [p, sgr] : gp.fbar.jumps())
            fbp[p] = intersect(sgr, pgr).preimage_under(phi);
        fbp[gp.fbar.max_weight()] = Subspace::full(t);
        Filtration f_p = Filtration::from_levels(t, fp);
        Filtration fb_p = Filtration::from_levels(t, fbp);

        Pairing sk;
        sk.parity = w + k;
        sk.s = Matrix(t, t);
        for (int a = 0; a < t; ++a)
            for (int b = 0; b < t; ++b) sk.s.at(a, b) = s->eval(reps[a], nk * reps[b]);
        rep.absorb(check_polarization(f_p, fb_p, w + k, sk),
                   "primitive k=" + std::to_string(k));
    }
    return rep;
}

inline Report is_nilpotent_orbit(const HodgeData& h, int w, const Pairing& s,
                                 uint64_t seed = 2026, int samples = 8) {
    return is_nilpotent_orbit(h, w, &s, seed, samples);
}

/// Restriction of the full data to one W-graded piece, in graded coordinates.
inline HodgeData graded_data(const HodgeData& h, int k) {
    GradedPiece gp(k, h.w, h.f, h.fbar());
    HodgeData out;
    out.dim = gp.dim();
    out.w = Filtration::trivial(out.dim, k);
    out.f = gp.f;
    out.fbar_user = gp.fbar;
    out.weight_offset = h.weight_offset;
    out.nilpotents.dim = out.dim;
    for (const Matrix& n : h.nilpotents.operators)
        out.nilpotents.operators.push_back(gp.induce(n));
    return out;
}

/// Mixed nilpotent orbit: each W-graded piece, with its declared pairing, is
/// a nilpotent orbit of that weight.
inline Report is_mixed_nilpotent_orbit(const HodgeData& h, uint64_t seed = 2026,
                                       int samples = 8,
                                       bool require_polarizations = true) {
    Report rep = h.validate_basics();
    if (!rep.pass()) return rep;
    for (const auto& [k, wk] : h.w.jumps()) {
        HodgeData g = graded_data(h, k);
        if (g.dim == 0) continue;
        auto it = h.polarizations.find(k);
        const Pairing* s = nullptr;
        if (it == h.polarizations.end()) {
            if (require_polarizations) {
                rep.fail("missing-polarization", "weight " + std::to_string(k));
                continue;
            }
            rep.note("missing-polarization", "weight " + std::to_string(k),
                     "positivity not checked");
        } else if (it->second.s.rows() != g.dim) {
            rep.fail("polarization-dimension", "weight " + std::to_string(k));
            continue;
        } else {
            s = &it->second;
        }
        rep.absorb(is_nilpotent_orbit(g, k + h.weight_offset, s, seed, samples),
                   "weight " + std::to_string(k));
    }
    return rep;
}

/// Relative weight filtrations M(J) for every nonempty subset of operators.
/// Missing filtrations are reported, not thrown.
inline std::map<unsigned, RelMonodromyResult> all_relative_filtrations(const HodgeData& h) {
    std::map<unsigned, RelMonodromyResult> out;
    unsigned full = h.nilpotents.size() ? (1u << h.nilpotents.size()) - 1 : 0u;
    for (unsigned mask = 1; mask <= full && full; ++mask)
        out[mask] = relative_monodromy(h.nilpotents.sum(mask), h.w);
    return out;
}

/// Infinitesimal mixed Hodge structure: mixed nilpotent orbit, all M(J)
/// exist with N_j M(J)-shift -2 for j in J, (M(I), F, Fbar) a MHS, each N_j
/// of type (-1,-1), and W and every M(J) filter by sub-MHS.
inline Report is_imhs(const HodgeData& h, uint64_t seed = 2026, int samples = 8,
                      bool require_polarizations = true) {
    Report rep;
    rep.absorb(is_mixed_nilpotent_orbit(h, seed, samples, require_polarizations),
               "mixed-orbit");
    Filtration fbar = h.fbar();
    size_t mops = h.nilpotents.size();
    if (mops == 0) {
        // no operators: the axioms reduce to the graded-polarized MHS itself
        rep.absorb(is_mhs(h.w, h.f, fbar, h.weight_offset), "mhs");
        return rep;
    }

    auto rel = all_relative_filtrations(h);
    unsigned full = (1u << mops) - 1;
    for (auto& [mask, r] : rel) {
        std::string jname = "J={";
        for (size_t j = 0; j < mops; ++j)
            if (mask & (1u << j)) jname += std::to_string(j + 1) + ",";
        jname.back() = '}';
        if (!r.exists()) {
            rep.fail("relative-filtration-exists", jname);
            continue;
        }
        const Filtration& mj = *r.filtration;
        for (size_t j = 0; j < mops; ++j) {
            if (!(mask & (1u << j))) continue;
            bool shifts = true;
            for (const auto& [i, s] : mj.jumps())
                if (!mj.at(i - 2).contains(s.image_under(h.nilpotents.operators[j])))
                    shifts = false;
            rep.require(shifts, "member-shifts-M", jname + " operator " + std::to_string(j + 1));
        }
    }
    if (!rel.count(full) || !rel.at(full).exists()) return rep;
    const Filtration& mi = *rel.at(full).filtration;

    rep.absorb(is_mhs(mi, h.f, fbar, h.weight_offset), "total-limit-mhs");

    for (size_t j = 0; j < mops; ++j) {
        const Matrix& n = h.nilpotents.operators[j];
        bool fdrop = true, fbdrop = true;
        for (const auto& [p, s] : h.f.jumps())
            if (!h.f.at(p + 1).contains(s.image_under(n))) fdrop = false; // F^{-p-1} = at(p+1)
        for (const auto& [p, s] : fbar.jumps())
            if (!fbar.at(p + 1).contains(s.image_under(n))) fbdrop = false;
        rep.require(fdrop, "type-(-1,-1)", "operator " + std::to_string(j + 1), "F shift");
        rep.require(fbdrop, "type-(-1,-1)", "operator " + std::to_string(j + 1), "Fbar shift");
    }

    // W and each M(J) filter the total limit structure by sub-MHS
    auto sub_mhs = [&](const Subspace& a, const std::string& loc) {
        if (a.is_zero() || a.is_full()) return;
        SubspaceMap sm(a);
        rep.absorb(is_mhs(mi.induced_sub(sm), h.f.induced_sub(sm), fbar.induced_sub(sm),
                          h.weight_offset),
                   loc);
    };
    for (const auto& [k, s] : h.w.jumps()) sub_mhs(s, "sub-mhs W_" + std::to_string(k));
    for (auto& [mask, r] : rel) {
        if (!r.exists() || mask == full) continue;
        for (const auto& [k, s] : r.filtration->jumps())
            sub_mhs(s, "sub-mhs M(" + std::to_string(mask) + ")_" + std::to_string(k));
    }
    return rep;
}

struct LimitMhsResult {
    Report report;
    std::optional<HodgeData> data;

    bool ok() const { return report.pass(); }
};

/// Deligne's limit mixed Hodge structure of a pre-admissible degeneration:
/// requires N F^p <= F^{p-1} and existence of M(N, W); returns (L, M, F)
/// verified as a MHS with N of type (-1,-1).
inline LimitMhsResult limit_mhs(const Filtration& w0, const Filtration& f0,
                                const Matrix& n) {
    LimitMhsResult res;
    int d = w0.ambient_dim();
    if (!n.is_nilpotent()) {
        res.report.fail("precondition", "", "N is not nilpotent");
        return res;
    }
    if (!preserves_filtration(n, w0)) {
        res.report.fail("precondition", "", "N does not preserve W");
        return res;
    }
    for (const auto& [p, s] : f0.jumps())
        res.report.require(f0.at(p + 1).contains(s.image_under(n)), "transversality",
                           "F^" + std::to_string(-p));
    if (!res.report.pass()) return res;

    RelMonodromyResult r = relative_monodromy(n, w0);
    if (!r.exists()) {
        res.report.fail("pre-admissibility", "", "M(N, W) does not exist");
        return res;
    }
    HodgeData out;
    out.dim = d;
    out.w = *r.filtration;
    out.f = f0;
    out.nilpotents.dim = d;
    out.nilpotents.operators.push_back(n);
    res.report.absorb(is_mhs(out), "limit-mhs");
    for (const auto& [i, s] : out.w.jumps())
        res.report.require(out.w.at(i - 2).contains(s.image_under(n)), "type-(-1,-1)",
                           "M_" + std::to_string(i));
    if (res.report.pass()) res.data = std::move(out);
    return res;
}

/// Tate twist by b: weights drop by 2b, Hodge indices by b.
inline HodgeData tate_twist(const HodgeData& h, int b) {
    HodgeData out = h;
    out.w = h.w.shifted(-2 * b);
    out.f = h.f.shifted(b); // at_dec(p) becomes the old F^{p+b}
    if (h.fbar_user) out.fbar_user = h.fbar_user->shifted(b);
    std::map<int, Pairing> pol;
    for (const auto& [k, s] : h.polarizations) pol[k - 2 * b] = s;
    out.polarizations = std::move(pol);
    return out;
}

enum class HomTensorMode { hom, tensor };

/// Hom and tensor structures. Tensor: W_k = sum of W_i (x) W'_{k-i},
/// F^p = sum of F^i (x) F'^{p-i}, operators N (x) 1 + 1 (x) N'. Hom: a map f
/// lies in W_k when f(W_i) <= W'_{i+k} for all i (same pattern for F), with
/// operator f -> N' f - f N. Flattening is row-major on target x source.
inline HodgeData hom_tensor(const HodgeData& a, const HodgeData& b, HomTensorMode mode) {
    HodgeData out;
    long big = long(a.dim) * b.dim;
    if (big > 4096) throw std::invalid_argument("hom/tensor dimension too large");
    out.dim = int(big);
    Filtration afb = a.fbar(), bfb = b.fbar();

    auto combine = [&](const Filtration& fa, const Filtration& fb) {
        std::map<int, Subspace> lv;
        std::vector<int> keys;
        for (const auto& [i, s] : fa.jumps())
            for (const auto& [j, t] : fb.jumps()) keys.push_back(i + j);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (int k : keys) {
            Subspace acc = Subspace::zero(out.dim);
            for (const auto& [i, s] : fa.jumps()) {
                Subspace t = fb.at(k - i);
                if (s.is_zero() || t.is_zero()) continue;
                acc = acc + Subspace::span(Matrix::kronecker(s.basis(), t.basis()), out.dim);
            }
            lv[k] = acc;
        }
        return Filtration::from_levels(out.dim, lv);
    };

    auto hom_filt = [&](const Filtration& fa, const Filtration& fb) {
        // flattened f has index r * a.dim + c for the (r, c) entry
        std::map<int, Subspace> lv;
        std::vector<int> keys;
        for (const auto& [i, s] : fa.jumps())
            for (const auto& [j, t] : fb.jumps()) keys.push_back(j - i);
        keys.push_back(fb.max_weight() - fa.min_weight());
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        for (int k : keys) {
            std::vector<Vec> rows;
            for (const auto& [i, s] : fa.jumps()) {
                Subspace ann = fb.at(i + k).annihilator();
                if (ann.is_zero()) continue;
                for (int vi = 0; vi < s.dim(); ++vi) {
                    Vec v = s.basis_row(vi);
                    for (int ai = 0; ai < ann.dim(); ++ai) {
                        Vec phi = ann.basis_row(ai);
                        Vec row(size_t(out.dim), Scalar(0));
                        for (int r = 0; r < b.dim; ++r)
                            for (int c = 0; c < a.dim; ++c)
                                row[size_t(r) * a.dim + c] = phi[r] * v[c];
                        rows.push_back(std::move(row));
                    }
                }
            }
            lv[k] = Subspace::span(Matrix::from_rows(rows, out.dim).kernel(), out.dim);
        }
        return Filtration::from_levels(out.dim, lv);
    };

    size_t mops = std::max(a.nilpotents.size(), b.nilpotents.size());
    auto op_of = [&](const HodgeData& h, size_t j) {
        return j < h.nilpotents.size() ? h.nilpotents.operators[j]
                                       : Matrix::zero(h.dim, h.dim);
    };
    out.nilpotents.dim = out.dim;
    if (mode == HomTensorMode::tensor) {
        out.w = combine(a.w, b.w);
        out.f = combine(a.f, b.f);
        out.fbar_user = combine(afb, bfb);
        for (size_t j = 0; j < mops; ++j)
            out.nilpotents.operators.push_back(
                Matrix::kronecker(op_of(a, j), Matrix::identity(b.dim)) +
                Matrix::kronecker(Matrix::identity(a.dim), op_of(b, j)));
        out.weight_offset = a.weight_offset + b.weight_offset;
    } else {
        out.w = hom_filt(a.w, b.w);
        // decreasing filtrations: f(F^i) <= F'^{i+p} reads at(-i) -> at(-i-p),
        // which is the same increasing-index rule with k = -p
        out.f = hom_filt(a.f, b.f);
        out.fbar_user = hom_filt(afb, bfb);
        for (size_t j = 0; j < mops; ++j)
            out.nilpotents.operators.push_back(
                Matrix::kronecker(op_of(b, j), Matrix::identity(a.dim)) -
                Matrix::kronecker(Matrix::identity(b.dim), op_of(a, j).transpose()));
        out.weight_offset = b.weight_offset - a.weight_offset;
    }
    return out;
}

struct MorphismData {
    Matrix f;
    HodgeData source;
    HodgeData target;
};

struct MorphismAnalysis {
    Report report;
    HodgeData kernel;
    HodgeData cokernel;
    bool strict_w = false, strict_f = false, strict_fbar = false;
};

/// Compatibility, strictness, and kernel/cokernel with induced structures.
inline MorphismAnalysis morphism_analyze(const MorphismData& m) {
    MorphismAnalysis out;
    const HodgeData& a = m.source;
    const HodgeData& b = m.target;
    if (m.f.cols() != a.dim || m.f.rows() != b.dim) {
        out.report.fail("dimension", "morphism matrix");
        return out;
    }
    Filtration afb = a.fbar(), bfb = b.fbar();

    auto compat = [&](const Filtration& fa, const Filtration& fb, const std::string& name) {
        bool ok = true;
        for (const auto& [k, s] : fa.jumps())
            if (!fb.at(k).contains(s.image_under(m.f))) {
                out.report.fail("compatibility", name + " at " + std::to_string(k));
                ok = false;
            }
        return ok;
    };
    bool cw = compat(a.w, b.w, "W");
    bool cf = compat(a.f, b.f, "F");
    bool cfb = compat(afb, bfb, "Fbar");
    size_t mops = std::min(a.nilpotents.size(), b.nilpotents.size());
    out.report.require(a.nilpotents.size() == b.nilpotents.size(), "operator-count");
    bool inter = true;
    for (size_t j = 0; j < mops; ++j)
        if (!(m.f * a.nilpotents.operators[j] == b.nilpotents.operators[j] * m.f)) {
            out.report.fail("intertwining", "operator " + std::to_string(j + 1));
            inter = false;
        }
    if (!(cw && cf && cfb)) return out;

    Subspace image = Subspace::full(a.dim).image_under(m.f);
    auto strict = [&](const Filtration& fa, const Filtration& fb) {
        for (const auto& [k, s] : fa.jumps())
            if (s.image_under(m.f) != intersect(image, fb.at(k))) return false;
        for (const auto& [k, s] : fb.jumps())
            if (fa.at(k).image_under(m.f) != intersect(image, s)) return false;
        return true;
    };
    out.strict_w = strict(a.w, b.w);
    out.strict_f = strict(a.f, b.f);
    out.strict_fbar = strict(afb, bfb);
    out.report.require(out.strict_w, "strictness", "W");
    out.report.require(out.strict_f, "strictness", "F");
    out.report.require(out.strict_fbar, "strictness", "Fbar");

    // kernel with induced structure
    Subspace ker = Subspace::span(m.f.kernel(), a.dim);
    out.kernel.dim = ker.dim();
    out.kernel.weight_offset = a.weight_offset;
    out.kernel.nilpotents.dim = ker.dim();
    if (ker.dim() > 0) {
        SubspaceMap sm(ker);
        out.kernel.w = a.w.induced_sub(sm);
        out.kernel.f = a.f.induced_sub(sm);
        out.kernel.fbar_user = afb.induced_sub(sm);
        if (inter)
            for (size_t j = 0; j < a.nilpotents.size(); ++j)
                out.kernel.nilpotents.operators.push_back(sm.induced(a.nilpotents.operators[j]));
    } else {
        out.kernel.w = Filtration();
        out.kernel.f = Filtration();
    }

    // cokernel with induced structure
    QuotientMap q(image);
    out.cokernel.dim = q.quot_dim();
    out.cokernel.weight_offset = b.weight_offset;
    out.cokernel.nilpotents.dim = q.quot_dim();
    if (q.quot_dim() > 0) {
        out.cokernel.w = b.w.induced_quot(q);
        out.cokernel.f = b.f.induced_quot(q);
        out.cokernel.fbar_user = bfb.induced_quot(q);
        if (inter)
            for (size_t j = 0; j < b.nilpotents.size(); ++j)
                out.cokernel.nilpotents.operators.push_back(q.induced(b.nilpotents.operators[j]));
    } else {
        out.cokernel.w = Filtration();
        out.cokernel.f = Filtration();
    }
    return out;
}

} // namespace hodgekit

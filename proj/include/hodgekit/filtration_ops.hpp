#pragma once

#include "filtration.hpp"
#include "monodromy.hpp"
#include "report.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hodgekit {

/// Weight filtration of a nilpotent N centered at `center`: the unique M with
/// N M_i <= M_{i-2} and N^k : Gr^M_{center+k} ~ Gr^M_{center-k}, via
/// M_{center+k} = sum over j >= max(0,-k) of Ker N^{k+j+1} cap Im N^j.
inline Filtration monodromy_filtration(const Matrix& n, int center) {
    int d = n.rows();
    if (d == 0) return Filtration();
    int nu = n.nilpotency_index();
    if (nu < 0) throw std::invalid_argument("monodromy filtration of non-nilpotent matrix");
    std::vector<Subspace> ker(nu + 2), im(nu + 2);
    for (int e = 0; e <= nu + 1; ++e) {
        Matrix p = n.pow(e);
        ker[e] = Subspace::span(p.kernel(), d);
        im[e] = Subspace::full(d).image_under(p);
    }
    std::map<int, Subspace> lv;
    for (int k = -nu; k <= nu; ++k) {
        Subspace s = Subspace::zero(d);
        for (int j = std::max(0, -k); k + j + 1 <= nu + 1; ++j)
            s = s + intersect(ker[std::min(k + j + 1, nu)], im[std::min(j, nu + 1)]);
        lv[center + k] = s;
    }
    lv[center + nu] = Subspace::full(d);
    return Filtration::from_levels(d, lv);
}

inline bool preserves_filtration(const Matrix& n, const Filtration& w) {
    for (const auto& [l, s] : w.jumps())
        if (!s.contains(s.image_under(n))) return false;
    return true;
}

namespace detail {

/// Row vectors of `big` extending a basis of `small` to one of `big`.
inline std::vector<Vec> complement_rows(const Subspace& big, const Subspace& small) {
    std::vector<Vec> out;
    Subspace cur = small;
    for (int i = 0; i < big.dim(); ++i) {
        Vec v = big.basis_row(i);
        if (cur.contains(v)) continue;
        out.push_back(v);
        cur = cur + Subspace::line(v);
    }
    return out;
}

/// Filtration M restricted to Gr^W_l in that graded piece's own coordinates:
/// weight j piece is the image of M_j cap W_l. Returned as a level map.
struct GradedSlice {
    QuotientMap q;     // V / W_{l-1}
    SubspaceMap g;     // image of W_l inside the quotient
    Matrix n_gr;       // induced endomorphism on the graded piece

    GradedSlice(const Matrix& n, const Subspace& wl, const Subspace& wprev)
        : q(wprev), g(q.push(wl)), n_gr(g.induced(q.induced(n))) {}

    int dim() const { return g.sub_dim(); }

    Subspace slice(const Subspace& mj, const Subspace& wl) const {
        return g.restrict(q.push(intersect(mj, wl)));
    }
};

} // namespace detail

/// Checks that M is the relative monodromy filtration of N with respect to W:
/// (a) N M_i <= M_{i-2}; (b) on every graded piece Gr^W_l the induced N gives
/// isomorphisms N^k : Gr^M_{l+k} ~ Gr^M_{l-k}. Findings carry (k,l) locations.
inline Report verify_relative_monodromy(const Filtration& m, const Matrix& n,
                                        const Filtration& w) {
    Report rep;
    int d = w.ambient_dim();
    if (m.ambient_dim() != d || n.rows() != d || n.cols() != d) {
        rep.fail("dimension", "", "ambient dimensions disagree");
        return rep;
    }
    if (!n.is_nilpotent()) rep.fail("precondition", "", "N is not nilpotent");
    if (!preserves_filtration(n, w)) rep.fail("precondition", "", "N does not preserve W");
    if (!rep.pass()) return rep;

    for (const auto& [i, mi] : m.jumps())
        rep.require(m.at(i - 2).contains(mi.image_under(n)), "shift-by-two",
                    "i=" + std::to_string(i));

    for (const auto& [l, wl] : w.jumps()) {
        detail::GradedSlice gr(n, wl, w.at(l - 1));
        if (gr.dim() == 0) continue;
        auto mbar = [&](int j) { return gr.slice(m.at(j), wl); };
        int spread = gr.dim();
        for (const auto& [j, s] : m.jumps()) spread = std::max(spread, std::abs(j - l));
        for (int k = 1; k <= spread + 1; ++k) {
            Matrix nk = gr.n_gr.pow(k);
            Subspace top = mbar(l + k), below_top = mbar(l + k - 1);
            Subspace bot = mbar(l - k), below_bot = mbar(l - k - 1);
            bool inj = below_top.contains(intersect(below_bot.preimage_under(nk), top));
            bool sur = (top.image_under(nk) + below_bot).contains(bot);
            rep.require(inj && sur, "graded-isomorphism",
                        "(k,l)=(" + std::to_string(k) + "," + std::to_string(l) + ")",
                        inj ? "not surjective" : "not injective");
        }
    }
    return rep;
}

struct RelMonodromyResult {
    enum class Status { exists, not_exists };
    Status status = Status::not_exists;
    std::optional<Filtration> filtration;
    Report certificate;

    bool exists() const { return status == Status::exists; }
};

/// Relative monodromy filtration M(N, W), or not_exists. Levelwise
/// lift-correction: walk the W-jumps bottom-up keeping M' = M cap W_{l-1};
/// on Gr^W_l compute the centered filtration, lift a graded basis to W_l and
/// solve one exact linear system for correction vectors in W_{l-1} making
/// N drop each lift by two weights modulo M'. Infeasibility at some level is
/// exactly non-existence. The result is post-verified.
inline RelMonodromyResult relative_monodromy(const Matrix& n, const Filtration& w) {
    int d = w.ambient_dim();
    if (n.rows() != d || n.cols() != d)
        throw std::invalid_argument("relative monodromy: dimension mismatch");
    if (!n.is_nilpotent())
        throw std::invalid_argument("relative monodromy: N is not nilpotent");
    if (!preserves_filtration(n, w))
        throw std::invalid_argument("relative monodromy: N does not preserve W");

    RelMonodromyResult res;
    std::map<int, Subspace> mlevels; // subspaces of V, supported inside processed part
    auto mprime_at = [&](int j) {
        Subspace cur = Subspace::zero(d);
        for (const auto& [jw, s] : mlevels) {
            if (jw > j) break;
            cur = s;
        }
        return cur;
    };

    for (const auto& [l, wl] : w.jumps()) {
        Subspace wprev = w.at(l - 1);
        detail::GradedSlice gr(n, wl, wprev);
        int g = gr.dim();
        if (g == 0) continue;
        Filtration mcentered = monodromy_filtration(gr.n_gr, l);

        // graded basis of the centered filtration, with each vector's weight
        std::vector<Vec> ubasis;     // in Gr^W_l coordinates
        std::vector<int> uweight;
        for (const auto& [k, mk] : mcentered.jumps())
            for (const Vec& u : detail::complement_rows(mk, mcentered.at(k - 1))) {
                ubasis.push_back(u);
                uweight.push_back(k);
            }
        Matrix umat = Matrix::from_rows(ubasis, g);
        Matrix uinv_t = umat.transpose().inverse(); // coordinates in the u-basis

        // lifts to V and the graded expansion of N on each basis vector
        Matrix lift = gr.q.section * gr.g.from_coords; // V-dim x g
        std::vector<Vec> v(ubasis.size());
        std::vector<Vec> coeff(ubasis.size()); // u-basis coords of N_gr u
        for (size_t a = 0; a < ubasis.size(); ++a) {
            v[a] = lift * ubasis[a];
            coeff[a] = uinv_t * (gr.n_gr * ubasis[a]);
        }

        // unknowns: one vector of W_{l-1} per lift, in wprev-basis coordinates
        int p = wprev.dim();
        Matrix b_t = wprev.basis().transpose(); // V-dim x p
        int nvars = int(ubasis.size()) * p;
        std::vector<Vec> sysrows;
        Vec rhs;
        for (size_t a = 0; a < ubasis.size(); ++a) {
            Subspace target = mprime_at(uweight[a] - 2);
            Subspace ann = target.annihilator();
            if (ann.is_zero()) continue;
            // residual r_a = N v_a - sum_b coeff[a][b] v_b must land in target
            Vec r = n * v[a];
            for (size_t b = 0; b < ubasis.size(); ++b)
                if (!coeff[a][b].is_zero()) r = r - coeff[a][b] * v[b];
            // phi(r) + phi(N B^T t_a) - sum_b coeff[a][b] phi(B^T t_b) = 0
            Matrix phi_nb = ann.basis() * (n * b_t);
            Matrix phi_b = ann.basis() * b_t;
            Vec phi_r = ann.basis() * r;
            for (int row = 0; row < ann.dim(); ++row) {
                Vec eq(nvars, Scalar(0));
                for (int t = 0; t < p; ++t) {
                    eq[a * p + t] += phi_nb.at(row, t);
                    for (size_t b = 0; b < ubasis.size(); ++b)
                        if (!coeff[a][b].is_zero())
                            eq[b * p + t] -= coeff[a][b] * phi_b.at(row, t);
                }
                sysrows.push_back(std::move(eq));
                rhs.push_back(-phi_r[row]);
            }
        }

        Vec sol(nvars, Scalar(0));
        if (!sysrows.empty()) {
            auto s = Matrix::from_rows(sysrows, nvars).solve(rhs);
            if (!s) {
                res.status = RelMonodromyResult::Status::not_exists;
                res.certificate.note("infeasible-level", "l=" + std::to_string(l),
                                     "no correction in W_{l-1} satisfies the shift");
                return res;
            }
            sol = *s;
        }

        // fold corrected lifts into the filtration levels
        std::map<int, std::vector<Vec>> by_weight;
        for (size_t a = 0; a < ubasis.size(); ++a) {
            Vec corrected = v[a];
            for (int t = 0; t < p; ++t)
                if (!sol[a * p + t].is_zero())
                    corrected = corrected + sol[a * p + t] * b_t.col(t);
            by_weight[uweight[a]].push_back(std::move(corrected));
        }
        std::map<int, Subspace> merged;
        std::vector<int> keys;
        for (const auto& [k, s] : mlevels) keys.push_back(k);
        for (const auto& [k, vs] : by_weight) keys.push_back(k);
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        Subspace acc = Subspace::zero(d);
        for (int k : keys) {
            acc = acc + mprime_at(k);
            auto it = by_weight.find(k);
            if (it != by_weight.end()) acc = acc + Subspace::span_vec(it->second, d);
            merged[k] = acc;
        }
        mlevels = std::move(merged);
    }

    if (mlevels.empty()) {
        res.status = RelMonodromyResult::Status::exists;
        res.filtration = Filtration();
        return res;
    }
    Filtration m = Filtration::from_levels(d, mlevels);
    Report check = verify_relative_monodromy(m, n, w);
    if (!check.pass()) {
        res.status = RelMonodromyResult::Status::not_exists;
        res.certificate.absorb(check, "post-verify");
        return res;
    }
    res.status = RelMonodromyResult::Status::exists;
    res.filtration = std::move(m);
    res.certificate.absorb(check, "post-verify");
    return res;
}

/// Primitive part at each weight: representatives and graded dimension.
struct PrimitivePart {
    Subspace representatives; // X_i = { x in M_i : N^{i+1} x in M_{i-3-...} }
    Subspace in_graded;       // image in Gr^M_i coordinates (quotient by M_{i-1})
    int dim = 0;
};

/// P_{center+i} = Ker(N^{i+1} : Gr^M_{center+i} -> Gr^M_{center-i-2}), i >= 0.
/// Verifies the reconstruction Gr^M_{center+i} = (+)_{k>=0} N^k P_{center+i+2k}
/// at the level of dimensions and throws if M is not the centered filtration.
inline std::map<int, PrimitivePart> primitive_parts(const Matrix& n, const Filtration& m,
                                                    int center = 0) {
    int d = n.rows();
    if (m != monodromy_filtration(n, center))
        throw std::invalid_argument("primitive parts: M is not the centered filtration");
    std::map<int, PrimitivePart> out;
    int nu = std::max(n.nilpotency_index(), 1);
    for (int i = 0; i < nu; ++i) {
        Subspace mi = m.at(center + i), mlow = m.at(center + i - 1);
        Subspace target = m.at(center - i - 3);
        Subspace x = intersect(mi, target.preimage_under(n.pow(i + 1)));
        PrimitivePart pp;
        pp.representatives = x;
        QuotientMap q(mlow);
        pp.in_graded = q.push(x);
        pp.dim = pp.in_graded.dim();
        if (pp.dim > 0 || i == 0) out[i] = pp;
    }
    // reconstruction check on dimensions
    for (int i = -nu; i < nu; ++i) {
        int g = m.graded_dim(center + i);
        int sum = 0;
        for (int k = std::max(0, -i); i + 2 * k < nu; ++k) {
            auto it = out.find(i + 2 * k);
            if (it != out.end()) sum += it->second.dim;
        }
        if (g != sum)
            throw std::logic_error("primitive decomposition does not reconstruct Gr^M");
    }
    return out;
}

/// Multiset of Jordan block sizes of a nilpotent matrix, descending. Computed
/// from the primitive decomposition and cross-checked against the rank
/// sequence of powers.
inline std::vector<int> jordan_type(const Matrix& n) {
    if (!n.is_nilpotent()) throw std::invalid_argument("jordan type of non-nilpotent matrix");
    int d = n.rows();
    std::vector<int> blocks;
    if (d == 0) return blocks;
    Filtration m = monodromy_filtration(n, 0);
    for (auto& [i, pp] : primitive_parts(n, m, 0))
        for (int c = 0; c < pp.dim; ++c) blocks.push_back(i + 1);
    std::sort(blocks.rbegin(), blocks.rend());

    std::vector<int> ranks; // rank N^k for k = 0..d
    for (int k = 0; k <= d; ++k) ranks.push_back(n.pow(k).rank());
    std::vector<int> check;
    for (int s = 1; s <= d; ++s) {
        int mult = ranks[s - 1] - 2 * ranks[s] + (s + 1 <= d ? ranks[s + 1] : 0);
        for (int c = 0; c < mult; ++c) check.push_back(s);
    }
    std::sort(check.rbegin(), check.rend());
    if (blocks != check) throw std::logic_error("jordan type disagrees with rank sequence");
    return blocks;
}

/// (N*W)_k = N W_{k+1} + M_k(N,W) cap W_k.
inline Filtration star(const Matrix& n, const Filtration& w, const Filtration& m) {
    int d = w.ambient_dim();
    if (d == 0) return Filtration();
    std::vector<int> cand;
    for (const auto& [k, s] : w.jumps()) {
        cand.push_back(k - 1);
        cand.push_back(k);
    }
    for (const auto& [k, s] : m.jumps()) cand.push_back(k);
    int top = std::max(w.max_weight(), m.max_weight());
    cand.push_back(top);
    std::map<int, Subspace> lv;
    for (int k : cand)
        lv[k] = w.at(k + 1).image_under(n) + intersect(m.at(k), w.at(k));
    return Filtration::from_levels(d, lv);
}

inline Filtration star(const Matrix& n, const Filtration& w) {
    RelMonodromyResult r = relative_monodromy(n, w);
    if (!r.exists()) throw std::domain_error("star: relative monodromy does not exist");
    return star(n, w, *r.filtration);
}

/// (N!W)_k = W_{k-1} + M_k(N,W) cap N^{-1} W_{k-1}.
inline Filtration shriek(const Matrix& n, const Filtration& w, const Filtration& m) {
    int d = w.ambient_dim();
    if (d == 0) return Filtration();
    std::vector<int> cand;
    for (const auto& [k, s] : w.jumps()) {
        cand.push_back(k);
        cand.push_back(k + 1);
    }
    for (const auto& [k, s] : m.jumps()) cand.push_back(k);
    cand.push_back(std::max(w.max_weight() + 1, m.max_weight()));
    std::map<int, Subspace> lv;
    for (int k : cand)
        lv[k] = w.at(k - 1) + intersect(m.at(k), w.at(k - 1).preimage_under(n));
    return Filtration::from_levels(d, lv);
}

inline Filtration shriek(const Matrix& n, const Filtration& w) {
    RelMonodromyResult r = relative_monodromy(n, w);
    if (!r.exists()) throw std::domain_error("shriek: relative monodromy does not exist");
    return shriek(n, w, *r.filtration);
}

enum class IterMode { star, shriek };

struct IteratedResult {
    enum class Status { ok, not_exists, order_dependent };
    Status status = Status::ok;
    std::optional<Filtration> filtration;
    std::string detail;

    bool ok() const { return status == Status::ok; }
};

/// W^J (star) or the shriek analogue: apply the operation for each index of J
/// in turn. Order independence is checked by also composing in reverse; a
/// mismatch is reported, not resolved.
inline IteratedResult iterated(const NilpotentFamily& fam, std::vector<int> j,
                               const Filtration& w, IterMode mode) {
    IteratedResult res;
    std::sort(j.begin(), j.end());
    j.erase(std::unique(j.begin(), j.end()), j.end());
    for (int idx : j)
        if (idx < 0 || idx >= int(fam.size()))
            throw std::invalid_argument("iterated: operator index out of range");

    auto run = [&](const std::vector<int>& order) -> std::optional<Filtration> {
        Filtration cur = w;
        for (int idx : order) {
            RelMonodromyResult r = relative_monodromy(fam.operators[idx], cur);
            if (!r.exists()) {
                res.detail = "relative monodromy missing at operator " + std::to_string(idx + 1);
                return std::nullopt;
            }
            cur = (mode == IterMode::star) ? star(fam.operators[idx], cur, *r.filtration)
                                           : shriek(fam.operators[idx], cur, *r.filtration);
        }
        return cur;
    };

    auto fwd = run(j);
    if (!fwd) {
        res.status = IteratedResult::Status::not_exists;
        return res;
    }
    std::vector<int> rev(j.rbegin(), j.rend());
    auto bwd = run(rev);
    if (!bwd) {
        res.status = IteratedResult::Status::not_exists;
        return res;
    }
    if (*fwd != *bwd) {
        res.status = IteratedResult::Status::order_dependent;
        res.detail = "composition order changes the result";
        return res;
    }
    res.filtration = *fwd;
    return res;
}

/// Distributivity of a family of filtrations: for every ordered triple and
/// all jump weights, (A + B) cap C = A cap C + B cap C.
inline Report is_distributive(const std::vector<Filtration>& fs) {
    Report rep;
    for (size_t x = 1; x < fs.size(); ++x)
        if (fs[x].ambient_dim() != fs[0].ambient_dim()) {
            rep.fail("dimension", "filtration " + std::to_string(x + 1));
            return rep;
        }
    auto weights = [&](size_t i) {
        std::vector<int> w;
        for (const auto& [k, s] : fs[i].jumps()) w.push_back(k);
        if (w.empty()) w.push_back(0);
        return w;
    };
    for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = 0; j < fs.size(); ++j)
            for (size_t k = 0; k < fs.size(); ++k) {
                if (i == j || j == k || i == k) continue;
                for (int p : weights(i))
                    for (int q : weights(j))
                        for (int r : weights(k)) {
                            Subspace a = fs[i].at(p), b = fs[j].at(q), c = fs[k].at(r);
                            if (intersect(a + b, c) != intersect(a, c) + intersect(b, c))
                                rep.fail("distributivity",
                                         "(" + std::to_string(i + 1) + "," +
                                             std::to_string(j + 1) + "," +
                                             std::to_string(k + 1) + ") at (" +
                                             std::to_string(p) + "," + std::to_string(q) +
                                             "," + std::to_string(r) + ")");
                        }
            }
    return rep;
}

} // namespace hodgekit

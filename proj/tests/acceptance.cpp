// End-to-end acceptance suite: one printed pass/fail line per criterion.
// Exit status is the number of failing criteria.

#include <hodgekit/fixtures.hpp>
#include <hodgekit/json_io.hpp>
#include <hodgekit/spectral.hpp>

#include "test_util.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace hodgekit;
using namespace hodgekit::testutil;
namespace io = hodgekit::json_io;
using nlohmann::json;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& name, bool ok, const std::string& why = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << num << ". " << name;
    if (!ok && !why.empty()) std::cout << "  [" << why << "]";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

// ---- 1. pure monodromy filtration ------------------------------------------

bool pure_monodromy(std::string& why) {
    Rng rng(101);
    for (int t = 0; t < 200; ++t) {
        int d = int(rng.small_int(1, 10));
        int c = int(rng.small_int(-2, 2));
        Matrix n = rng.nilpotent(d);
        Filtration m = monodromy_filtration(n, c);
        if (!verify_relative_monodromy(m, n, Filtration::trivial(d, c)).pass()) {
            why = "verification failed at instance " + std::to_string(t);
            return false;
        }
        // the filtration is concentrated in [c-nu+1, c+nu-1], nu the
        // nilpotency index, as the inductive construction predicts
        int nu = n.nilpotency_index();
        if (m.max_weight() != c + nu - 1 || m.min_weight() != c - nu + 1) {
            why = "support does not match the nilpotency index";
            return false;
        }
        // N^k : Gr_{c+k} -> Gr_{c-k} is an isomorphism, checked exactly
        for (int k = 1; k < nu; ++k) {
            if (m.graded_dim(c + k) != m.graded_dim(c - k)) {
                why = "graded dims not symmetric";
                return false;
            }
            Subspace img = m.at(c + k).image_under(n.pow(k));
            Subspace low = m.at(c - k - 1);
            if (!m.at(c - k).contains(img) ||
                (img + low).dim() - low.dim() != m.graded_dim(c + k)) {
                why = "N^k is not a graded isomorphism";
                return false;
            }
        }
    }
    return true;
}

// ---- 2. Jordan reconstruction ----------------------------------------------

void partitions(int n, int maxpart, std::vector<int>& cur,
                const std::function<void(const std::vector<int>&)>& emit) {
    if (n == 0) {
        emit(cur);
        return;
    }
    for (int p = std::min(n, maxpart); p >= 1; --p) {
        cur.push_back(p);
        partitions(n - p, p, cur, emit);
        cur.pop_back();
    }
}

bool jordan_reconstruction(std::string& why) {
    Rng rng(202);
    bool ok = true;
    for (int n = 1; n <= 8 && ok; ++n) {
        std::vector<int> cur;
        partitions(n, n, cur, [&](const std::vector<int>& part) {
            if (!ok) return;
            Matrix g = rng.invertible(n);
            Matrix nil = g * jordan_blocks(part) * g.inverse();
            // independent oracle: block multiplicities from the rank sequence
            std::vector<int> ranks;
            for (int k = 0; k <= n; ++k) ranks.push_back(nil.pow(k).rank());
            std::vector<int> expect;
            for (int s = 1; s <= n; ++s) {
                int mult = ranks[s - 1] - 2 * ranks[s] + (s + 1 <= n ? ranks[s + 1] : 0);
                for (int c = 0; c < mult; ++c) expect.push_back(s);
            }
            std::sort(expect.rbegin(), expect.rend());
            std::vector<int> sorted_part = part;
            std::sort(sorted_part.rbegin(), sorted_part.rend());
            if (expect != sorted_part || jordan_type(nil) != sorted_part) {
                ok = false;
                why = "mismatch at n=" + std::to_string(n);
            }
        });
    }
    return ok;
}

// ---- 3. relative monodromy vs transported oracle ---------------------------

bool relative_oracle(std::string& why) {
    Rng rng(303);
    for (int t = 0; t < 100; ++t) {
        SplitInstance inst = split_instance(rng, 4, 2);
        RelMonodromyResult r = relative_monodromy(inst.n, inst.w);
        if (!r.exists()) {
            why = "existence failed at instance " + std::to_string(t);
            return false;
        }
        if (*r.filtration != inst.m_oracle) {
            why = "oracle mismatch at instance " + std::to_string(t);
            return false;
        }
    }
    // the 2-dim raising non-example: N e0 = e1 with e1 of lower weight
    Matrix n(2, 2);
    n.at(1, 0) = Scalar(1);
    std::map<int, Subspace> lv{{0, Subspace::line({Scalar(0), Scalar(1)})},
                               {1, Subspace::full(2)}};
    if (relative_monodromy(n, Filtration::from_levels(2, lv)).exists()) {
        why = "non-example not rejected";
        return false;
    }
    return true;
}

// ---- 4. star/shriek algebra ------------------------------------------------

bool star_algebra(std::string& why) {
    Rng rng(404);
    for (int t = 0; t < 100; ++t) {
        SplitInstance inst = split_instance(rng, 3, 3);
        RelMonodromyResult r = relative_monodromy(inst.n, inst.w);
        if (!r.exists()) {
            why = "instance lost existence";
            return false;
        }
        const Filtration& m = *r.filtration;
        const Filtration& w = inst.w;
        const Matrix& n = inst.n;
        Filtration sw = star(n, w, m);
        // M(N, N*W) = M(N, W)
        RelMonodromyResult rs = relative_monodromy(n, sw);
        if (!rs.exists() || *rs.filtration != m) {
            why = "M(N, N*W) != M(N, W)";
            return false;
        }
        // graded distinguished pair: Gr^{N*W}_k = Im(N) (+) Ker(I), with the
        // image part of the same size as the image of Gr^W N at level k+1
        int lo = std::min(sw.min_weight(), w.min_weight()) - 1;
        int hi = std::max(sw.max_weight(), w.max_weight()) + 1;
        for (int k = lo; k <= hi; ++k) {
            Subspace slow = sw.at(k - 1);
            Subspace im_part = n.rows() ? w.at(k + 1).image_under(n) + slow : slow;
            Subspace ker_part = intersect(sw.at(k), w.at(k)) + slow;
            int a = im_part.dim() - slow.dim();
            int b = ker_part.dim() - slow.dim();
            if (a + b != sw.graded_dim(k) ||
                intersect(im_part, ker_part).dim() != slow.dim()) {
                why = "Im/Ker decomposition failed";
                return false;
            }
            int grn = (w.at(k + 1).image_under(n) + w.at(k)).dim() - w.at(k).dim();
            if (a != grn) {
                why = "image part does not match the graded rank of N";
                return false;
            }
        }
        // duality: dual(N*W) is the shriek of the dual data, and conversely
        Matrix ndual = n.transpose();
        if (sw.dual() != shriek(ndual, w.dual()) ||
            shriek(n, w, m).dual() != star(ndual, w.dual())) {
            why = "duality identity failed";
            return false;
        }
    }
    return true;
}

// ---- 5. graded split sequence ----------------------------------------------

bool graded_split(std::string& why) {
    Rng rng(505);
    for (int t = 0; t < 100; ++t) {
        SplitInstance inst = split_instance(rng, 3, 3);
        RelMonodromyResult r = relative_monodromy(inst.n, inst.w);
        if (!r.exists()) {
            why = "instance lost existence";
            return false;
        }
        const Matrix& n = inst.n;
        const Filtration& w = inst.w;
        Filtration sw = star(n, w, *r.filtration);
        Subspace nl = Subspace::full(n.rows()).image_under(n);
        SubspaceMap sub(nl);
        QuotientMap quo(nl);
        Filtration on_sub = sw.induced_sub(sub);
        Filtration on_quot = sw.induced_quot(quo);
        Filtration m_quot = r.filtration->induced_quot(quo);
        int lo = sw.min_weight() - 1, hi = sw.max_weight() + 1;
        for (int k = lo; k <= hi; ++k) {
            if (on_sub.graded_dim(k) + on_quot.graded_dim(k) != sw.graded_dim(k)) {
                why = "graded dims not additive";
                return false;
            }
            int grn = (w.at(k + 1).image_under(n) + w.at(k)).dim() - w.at(k).dim();
            if (on_sub.graded_dim(k) != grn) {
                why = "Gr(NL) does not match the graded rank of N";
                return false;
            }
            if (on_quot.graded_dim(k) != m_quot.graded_dim(k)) {
                why = "Gr(L/NL) does not match Gr^M(L/NL)";
                return false;
            }
        }
    }
    return true;
}

// ---- 6. Koszul / IC local models -------------------------------------------

NilpotentFamily commuting_family(Rng& rng, int d, int m) {
    // commuting nilpotents: polynomials without constant term in one nilpotent
    NilpotentFamily fam;
    fam.dim = d;
    Matrix base = rng.nilpotent(d);
    for (int j = 0; j < m; ++j) {
        Matrix p(d, d);
        Matrix pw = base;
        for (int e = 1; e <= 3; ++e) {
            p = p + Scalar(rng.small_int(-2, 2)) * pw;
            pw = pw * base;
        }
        fam.operators.push_back(p);
    }
    return fam;
}

bool same_complex(const CubeComplex& a, const CubeComplex& b) {
    if (a.cx.dims != b.cx.dims) return false;
    for (const auto& [deg, mtx] : a.cx.diff)
        if (!(b.cx.d_at(deg) == mtx)) return false;
    if (a.terms.size() != b.terms.size()) return false;
    for (const auto& [mask, s] : a.terms)
        if (!(b.terms.at(mask) == s)) return false;
    return true;
}

bool koszul_ic(std::string& why) {
    Rng rng(606);
    for (int t = 0; t < 40; ++t) {
        int d = int(rng.small_int(1, 6));
        int m = int(rng.small_int(1, 3));
        NilpotentFamily fam = commuting_family(rng, d, m);
        CubeComplex kz = koszul(d, fam);
        if (kz.cx.euler() != 0) {
            why = "nonzero Euler characteristic";
            return false;
        }
        if (m == 1) {
            const Matrix& n = fam.operators[0];
            int kdim = d - n.rank();
            auto hk = kz.cx.cohomology_dims();
            auto get = [](const std::map<int, int>& h, int k) {
                auto it = h.find(k);
                return it == h.end() ? 0 : it->second;
            };
            if (get(hk, 0) != kdim || get(hk, 1) != kdim) {
                why = "Koszul cohomology is not (Ker N, Coker N)";
                return false;
            }
            auto hi = ic(d, fam).cx.cohomology_dims();
            if (get(hi, 0) != kdim || get(hi, 1) != 0) {
                why = "IC cohomology is not (Ker N, 0)";
                return false;
            }
        }
        // boundary cases of the partial-image cube
        std::set<int> all;
        for (int j = 0; j < m; ++j) all.insert(j);
        if (!same_complex(omega_partial(d, fam, all), kz) ||
            !same_complex(omega_partial(d, fam, {}), ic(d, fam))) {
            why = "partial cube boundary cases differ";
            return false;
        }
    }
    return true;
}

// ---- 7. graded decomposition on IMHS fixtures ------------------------------

bool graded_decomposition(std::string& why) {
    using fixtures::elliptic;
    using fixtures::hodge_tate_string;
    using fixtures::mixed_sum;
    using fixtures::tensor_orbit;
    struct Case {
        std::string name;
        HodgeData h;
    };
    std::vector<Case> cases;
    cases.push_back({"tate-3", hodge_tate_string(3).h});
    cases.push_back({"elliptic", elliptic().h});
    cases.push_back({"tate2xtate2", tensor_orbit(hodge_tate_string(2), hodge_tate_string(2)).h});
    cases.push_back({"ellxtate2", tensor_orbit(elliptic(), hodge_tate_string(2)).h});
    cases.push_back({"tate2xell", tensor_orbit(hodge_tate_string(2), elliptic()).h});
    cases.push_back({"mixed", mixed_sum({hodge_tate_string(1), elliptic()})});
    for (const Case& c : cases) {
        Report r = graded_check(c.h.dim, c.h.w, c.h.nilpotents);
        if (!r.pass()) {
            why = c.name + ": " + (r.failures.empty() ? "?" : r.failures.front().axiom);
            return false;
        }
    }
    return true;
}

// ---- 8. Hodge-Lefschetz cohomology theorem ---------------------------------

bool hodge_lefschetz(std::string& why) {
    using namespace hl_fixtures;
    std::vector<BigradedHL> xs;
    for (int a = 1; a <= 2; ++a)
        for (int b = 1; b <= 2; ++b)
            for (int dw = 0; dw <= 2; dw += 2) {
                int w0 = ((a + b) % 2 == 0 ? 2 : 3) + dw;
                BigradedHL base = hl_string(a, b, w0);
                BigradedHL zero_d = base;
                zero_d.has_d = true; // absent blocks mean d = 0
                xs.push_back(zero_d);
                xs.push_back(acyclic_cone(base));
                xs.push_back(direct_sum(acyclic_cone(base), base));
                BigradedHL t = tensor_hl(base, hl_string(1, 1, 2));
                xs.push_back(acyclic_cone(t));
                xs.push_back(direct_sum(acyclic_cone(t), t));
            }
    if (xs.size() < 20) {
        why = "not enough fixtures";
        return false;
    }
    for (size_t i = 0; i < xs.size(); ++i) {
        if (!xs[i].has_d) xs[i].has_d = true; // absent blocks mean d = 0
        DCohomology h = d_cohomology(xs[i]);
        if (!h.report.pass()) {
            why = "d-cohomology failed on fixture " + std::to_string(i);
            return false;
        }
        int total = 0;
        for (const auto& [k, p] : h.h.pieces) total += p.dim;
        if (total == 0) h.h.has_s = true; // the zero structure is vacuously polarized
        Report v = validate_polarized_hl(h.h);
        if (!v.pass()) {
            why = "fixture " + std::to_string(i) + ": " +
                  (v.failures.empty() ? "?" : v.failures.front().axiom);
            return false;
        }
    }
    return true;
}

// ---- 9. spectral sequences ---------------------------------------------------

bool spectral(std::string& why) {
    std::vector<FilteredComplex> cases;
    {
        FilteredComplex fc; // acyclic, one level
        fc.cx.dims = {{0, 1}, {1, 1}};
        fc.cx.diff[0] = Matrix::identity(1);
        fc.filts["wf"] = {{0, Filtration::trivial(1, 0)}, {1, Filtration::trivial(1, 0)}};
        cases.push_back(fc);
    }
    {
        FilteredComplex fc; // Jordan block, two-step filtration
        fc.cx.dims = {{0, 2}, {1, 2}};
        fc.cx.diff[0] = jordan_shift(2);
        std::map<int, Subspace> lv0{{0, Subspace::line({Scalar(1), Scalar(0)})},
                                    {1, Subspace::full(2)}};
        std::map<int, Subspace> lv1{{0, Subspace::zero(2)}, {1, Subspace::full(2)}};
        fc.filts["wf"] = {{0, Filtration::from_levels(2, lv0)},
                          {1, Filtration::from_levels(2, lv1)}};
        cases.push_back(fc);
    }
    {
        FilteredComplex fc; // level-crossing differential
        fc.cx.dims = {{0, 2}, {1, 2}};
        fc.cx.diff[0] = jordan_shift(2);
        std::map<int, Subspace> lv0{{0, Subspace::zero(2)}, {1, Subspace::full(2)}};
        std::map<int, Subspace> lv1{{0, Subspace::line({Scalar(1), Scalar(0)})},
                                    {1, Subspace::full(2)}};
        fc.filts["wf"] = {{0, Filtration::from_levels(2, lv0)},
                          {1, Filtration::from_levels(2, lv1)}};
        cases.push_back(fc);
    }
    {
        FilteredComplex fc; // three-term complex with mixed levels
        fc.cx.dims = {{0, 2}, {1, 3}, {2, 1}};
        Matrix d0(3, 2);
        d0.at(0, 0) = Scalar(1);
        Matrix d1(1, 3);
        d1.at(0, 1) = Scalar(1);
        fc.cx.diff[0] = d0;
        fc.cx.diff[1] = d1;
        std::map<int, Subspace> a{{0, Subspace::line({Scalar(1), Scalar(0)})},
                                  {1, Subspace::full(2)}};
        std::map<int, Subspace> b{{0, Subspace::line({Scalar(1), Scalar(0), Scalar(0)})},
                                  {1, Subspace::full(3)}};
        fc.filts["wf"] = {{0, Filtration::from_levels(2, a)},
                          {1, Filtration::from_levels(3, b)},
                          {2, Filtration::trivial(1, 1)}};
        cases.push_back(fc);
    }
    for (size_t i = 0; i < cases.size(); ++i) {
        // report absorbs the dual-route page formula and the abutment checks
        SpectralSequence ss = spectral_sequence(cases[i], "wf");
        if (!ss.report.pass()) {
            why = "case " + std::to_string(i) + ": " +
                  (ss.report.failures.empty() ? "?" : ss.report.failures.front().axiom);
            return false;
        }
        std::map<int, int> sums;
        for (const auto& [k, d] : ss.einf) sums[k.first + k.second] += d;
        if (sums != ss.h_dims) {
            why = "limit gradeds do not sum to cohomology";
            return false;
        }
    }
    // LMHC fixture: degeneration no later than the second page
    HodgeData h = fixtures::mixed_sum({fixtures::hodge_tate_string(1), fixtures::elliptic()});
    FilteredComplex fc;
    fc.cx.dims = {{0, h.dim}};
    fc.filts["w"] = {{0, h.w}};
    fc.filts["wf"] = {{0, h.w}};
    fc.filts["f"] = {{0, h.f}};
    if (!fmhc_lmhc_validate(fc, HCMode::lmhc).pass()) {
        why = "LMHC fixture fails the degeneration axiom";
        return false;
    }
    SpectralSequence ss = spectral_sequence(fc, "wf");
    if (!ss.degenerates_at(std::min(2, ss.last_page()))) {
        why = "LMHC fixture does not have E2 = Einf";
        return false;
    }
    return true;
}

// ---- 10. commuting-family identities ---------------------------------------

bool imhs_identities(std::string& why) {
    using fixtures::elliptic;
    using fixtures::hodge_tate_string;
    using fixtures::tensor_orbit;
    std::vector<HodgeData> cases;
    cases.push_back(tensor_orbit(hodge_tate_string(2), hodge_tate_string(2)).h);
    cases.push_back(tensor_orbit(elliptic(), hodge_tate_string(2)).h);
    cases.push_back(
        tensor_orbit(tensor_orbit(hodge_tate_string(2), hodge_tate_string(2)),
                     hodge_tate_string(2)).h);
    for (const HodgeData& h : cases) {
        const NilpotentFamily& fam = h.nilpotents;
        int m = int(fam.size());
        auto mfilt = [&](unsigned mask) -> std::optional<Filtration> {
            if (mask == 0) return h.w;
            RelMonodromyResult r = relative_monodromy(fam.sum(mask), h.w);
            if (!r.exists()) return std::nullopt;
            return *r.filtration;
        };
        unsigned full = (1u << m) - 1;
        for (unsigned j1 = 0; j1 <= full; ++j1)
            for (unsigned j2 = 0; j2 <= full; ++j2) {
                if (j1 & j2) continue;
                auto lhs = mfilt(j1 | j2);
                auto base = mfilt(j2);
                if (!lhs || !base) {
                    why = "relative filtration missing";
                    return false;
                }
                std::optional<Filtration> rhs = base;
                if (j1 != 0) {
                    RelMonodromyResult r = relative_monodromy(fam.sum(j1), *base);
                    if (!r.exists()) {
                        why = "recursive filtration missing";
                        return false;
                    }
                    rhs = *r.filtration;
                }
                if (*lhs != *rhs) {
                    why = "recursion identity failed";
                    return false;
                }
            }
        // star iteration over the whole index set is order-independent
        std::vector<int> idx;
        for (int j = 0; j < m; ++j) idx.push_back(j);
        IteratedResult it = iterated(fam, idx, h.w, IterMode::star);
        if (it.status != IteratedResult::Status::ok) {
            why = "star iteration not order-independent";
            return false;
        }
        // distributivity of {W, M({0}), M({1})}
        if (m >= 2) {
            std::vector<Filtration> fs{h.w, *mfilt(1u), *mfilt(2u)};
            if (!is_distributive(fs).pass()) {
                why = "distributivity failed on an IMHS fixture";
                return false;
            }
        }
    }
    // three lines in the plane are a non-distributive triple
    std::map<int, Subspace> l1{{0, Subspace::line({Scalar(1), Scalar(0)})},
                               {1, Subspace::full(2)}};
    std::map<int, Subspace> l2{{0, Subspace::line({Scalar(0), Scalar(1)})},
                               {1, Subspace::full(2)}};
    std::map<int, Subspace> l3{{0, Subspace::line({Scalar(1), Scalar(1)})},
                               {1, Subspace::full(2)}};
    std::vector<Filtration> bad{Filtration::from_levels(2, l1),
                                Filtration::from_levels(2, l2),
                                Filtration::from_levels(2, l3)};
    if (is_distributive(bad).pass()) {
        why = "three-line counterexample not detected";
        return false;
    }
    return true;
}

// ---- 11. pre-admissibility and quasi-unipotence ----------------------------

bool limit_structures(std::string& why) {
    auto fx = fixtures::elliptic();
    const Matrix& n = fx.h.nilpotents.operators[0];
    LimitMhsResult res = limit_mhs(Filtration::trivial(2, 1), fx.h.f, n);
    if (!res.ok() || !res.data) {
        why = "elliptic degeneration rejected";
        return false;
    }
    // the non-example: a weight-raising N admits no relative filtration
    Matrix bad(2, 2);
    bad.at(1, 0) = Scalar(1);
    std::map<int, Subspace> lv{{0, Subspace::line({Scalar(0), Scalar(1)})},
                               {1, Subspace::full(2)}};
    if (limit_mhs(Filtration::from_levels(2, lv), fx.h.f, bad).ok()) {
        why = "non-existence fixture accepted";
        return false;
    }
    // quasi-unipotence orders
    Matrix uni = exp_nilpotent(jordan_shift(2));
    auto q1 = quasi_unipotence(uni);
    if (!q1 || q1->a != 1 || q1->b != 2) {
        why = "unipotent Jordan block misclassified";
        return false;
    }
    Matrix rot(2, 2);
    rot.at(0, 1) = Scalar(-1);
    rot.at(1, 0) = Scalar(1);
    auto q2 = quasi_unipotence(rot);
    if (!q2 || q2->a != 4 || q2->b != 1) {
        why = "order-4 rotation misclassified";
        return false;
    }
    Matrix two(1, 1);
    two.at(0, 0) = Scalar(2);
    if (quasi_unipotence(two)) {
        why = "[[2]] misclassified as quasi-unipotent";
        return false;
    }
    return true;
}

// ---- 12. CLI round trips and determinism -----------------------------------

// Round-trip every value in the fixture corpus that carries one of the typed
// shapes; serialization must be the identity on canonical JSON.
bool roundtrip_value(const json& j) {
    if (j.is_object()) {
        if (j.contains("rows") && j.contains("cols") && j.contains("entries")) {
            return io::to_json(io::matrix_from(j)) == j;
        }
        if (j.contains("ambient") && j.contains("jumps")) {
            return io::to_json(io::filtration_from(j)) == j;
        }
        if (j.contains("ambient") && j.contains("basis")) {
            return io::to_json(io::subspace_from(j)) == j;
        }
        for (const auto& [k, v] : j.items())
            if (!roundtrip_value(v)) return false;
        return true;
    }
    if (j.is_array()) {
        for (const json& v : j)
            if (!roundtrip_value(v)) return false;
    }
    return true;
}

bool cli_determinism(std::string& why) {
#if !defined(ACCEPT_CLI_PATH)
    why = "CLI binary not built";
    return false;
#else
    namespace fs = std::filesystem;
    fs::path dir(ACCEPT_FIXTURES_DIR);
    if (!fs::is_directory(dir)) {
        why = "fixture corpus missing";
        return false;
    }
    int nfix = 0;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        ++nfix;
        std::ifstream f(e.path());
        json j = json::parse(f);
        if (!roundtrip_value(j)) {
            why = "round trip failed on " + e.path().filename().string();
            return false;
        }
    }
    if (nfix < 10) {
        why = "fixture corpus too small";
        return false;
    }
    fs::path tmp = fs::temp_directory_path();
    fs::path out1 = tmp / "hodgekit_accept_1.json";
    fs::path out2 = tmp / "hodgekit_accept_2.json";
    std::string base = std::string(ACCEPT_CLI_PATH) + " batch " + dir.string() +
                       " --seed 2026 > ";
    if (std::system((base + out1.string()).c_str()) != 0 ||
        std::system((base + out2.string()).c_str()) != 0) {
        why = "CLI batch run failed";
        return false;
    }
    std::ifstream a(out1), b(out2);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    if (sa.str().empty() || sa.str() != sb.str()) {
        why = "batch reports are not byte-identical";
        return false;
    }
    json rep = json::parse(sa.str());
    if (rep.at("status") != "pass") {
        why = "batch report has failures";
        return false;
    }
    return true;
#endif
}

} // namespace

int main() {
    struct Entry {
        int num;
        const char* name;
        bool (*fn)(std::string&);
    };
    const Entry entries[] = {
        {1, "pure monodromy filtration", pure_monodromy},
        {2, "Jordan reconstruction", jordan_reconstruction},
        {3, "relative monodromy oracle", relative_oracle},
        {4, "star/shriek algebra", star_algebra},
        {5, "graded split sequence", graded_split},
        {6, "Koszul/IC local models", koszul_ic},
        {7, "graded decomposition", graded_decomposition},
        {8, "Hodge-Lefschetz cohomology", hodge_lefschetz},
        {9, "spectral sequences", spectral},
        {10, "commuting-family identities", imhs_identities},
        {11, "limit structures and quasi-unipotence", limit_structures},
        {12, "CLI round trips and determinism", cli_determinism},
    };
    for (const Entry& e : entries) {
        std::string why;
        bool ok = false;
        try {
            ok = e.fn(why);
        } catch (const std::exception& ex) {
            why = std::string("exception: ") + ex.what();
        }
        criterion(e.num, e.name, ok, why);
    }
    return g_failures;
}

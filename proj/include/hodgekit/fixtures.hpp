#pragma once

#include "hodge.hpp"

#include <vector>

namespace hodgekit::fixtures {

/// A polarized pure-weight instance: data with trivial W at `weight` plus the
/// pairing, registered in data.polarizations as well.
struct OrbitFixture {
    HodgeData h;
    Pairing s;
    int weight = 0;
};

/// Hodge-Tate string of length n and weight n-1: basis e_0..e_{n-1} with
/// N e_a = e_{a+1} and e_a in F^{n-1-a}. The limit filtration is centered at
/// n-1 and each graded piece is a Tate class of type (n-1-a, n-1-a).
inline OrbitFixture hodge_tate_string(int n) {
    OrbitFixture fx;
    fx.weight = n - 1;
    HodgeData& h = fx.h;
    h.dim = n;
    h.w = Filtration::trivial(n, n - 1);
    // N e_a = e_{a+1}
    Matrix nmat(n, n);
    for (int a = 0; a + 1 < n; ++a) nmat.at(a + 1, a) = Scalar(1);
    h.nilpotents.dim = n;
    h.nilpotents.operators.push_back(nmat);
    // F^p spanned by e_0..e_{n-1-p}
    std::map<int, Subspace> flv;
    for (int p = 0; p <= n - 1; ++p) {
        Matrix rows(n - p, n);
        for (int a = 0; a <= n - 1 - p; ++a) rows.at(a, a) = Scalar(1);
        flv[-p] = Subspace::span(rows, n);
    }
    h.f = Filtration::from_levels(n, flv);
    // S(e_a, e_{n-1-a}) = (-1)^a
    fx.s.parity = n - 1;
    fx.s.s = Matrix(n, n);
    for (int a = 0; a < n; ++a) fx.s.s.at(a, n - 1 - a) = Scalar((a % 2) ? -1 : 1);
    h.polarizations[n - 1] = fx.s;
    return fx;
}

/// Weight-1 elliptic degeneration: N e1 = e0, F^1 = <e1 + i e0>,
/// S(e1, e0) = 1. The limit filtration is centered at 1 with Tate gradeds of
/// weight 0 and 2.
inline OrbitFixture elliptic() {
    OrbitFixture fx;
    fx.weight = 1;
    HodgeData& h = fx.h;
    h.dim = 2;
    h.w = Filtration::trivial(2, 1);
    Matrix n(2, 2);
    n.at(0, 1) = Scalar(1);
    h.nilpotents.dim = 2;
    h.nilpotents.operators.push_back(n);
    Vec gen{Scalar::i(), Scalar(1)}; // e1 + i e0
    std::map<int, Subspace> flv;
    flv[-1] = Subspace::line(gen);
    flv[0] = Subspace::full(2);
    h.f = Filtration::from_levels(2, flv);
    fx.s.parity = 1;
    fx.s.s = Matrix(2, 2);
    fx.s.s.at(0, 1) = Scalar(-1);
    fx.s.s.at(1, 0) = Scalar(1);
    h.polarizations[1] = fx.s;
    return fx;
}

/// Tensor product of two pure fixtures, keeping the operator families
/// separate: the result has m_a + m_b commuting nilpotents.
inline OrbitFixture tensor_orbit(const OrbitFixture& a, const OrbitFixture& b) {
    OrbitFixture fx;
    fx.weight = a.weight + b.weight;
    HodgeData& h = fx.h;
    int da = a.h.dim, db = b.h.dim;
    h.dim = da * db;
    h.w = Filtration::trivial(h.dim, fx.weight);
    h.nilpotents.dim = h.dim;
    for (const Matrix& n : a.h.nilpotents.operators)
        h.nilpotents.operators.push_back(Matrix::kronecker(n, Matrix::identity(db)));
    for (const Matrix& n : b.h.nilpotents.operators)
        h.nilpotents.operators.push_back(Matrix::kronecker(Matrix::identity(da), n));
    // F^p = sum F^i (x) F'^{p-i}
    std::map<int, Subspace> flv;
    std::vector<int> keys;
    for (const auto& [i, s] : a.h.f.jumps())
        for (const auto& [j, t] : b.h.f.jumps()) keys.push_back(i + j);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    for (int k : keys) {
        Subspace acc = Subspace::zero(h.dim);
        for (const auto& [i, s] : a.h.f.jumps()) {
            Subspace t = b.h.f.at(k - i);
            if (s.is_zero() || t.is_zero()) continue;
            acc = acc + Subspace::span(Matrix::kronecker(s.basis(), t.basis()), h.dim);
        }
        flv[k] = acc;
    }
    h.f = Filtration::from_levels(h.dim, flv);
    fx.s.parity = fx.weight;
    fx.s.s = Matrix::kronecker(a.s.s, b.s.s);
    h.polarizations[fx.weight] = fx.s;
    return fx;
}

/// Direct sum of pure fixtures as a genuinely mixed structure: W jumps at the
/// component weights, one polarization per weight. Components must be ordered
/// by weight; all share the operator count (shorter families padded by zero).
inline HodgeData mixed_sum(const std::vector<OrbitFixture>& parts) {
    HodgeData h;
    for (const auto& p : parts) h.dim += p.h.dim;
    size_t mops = 0;
    for (const auto& p : parts) mops = std::max(mops, p.h.nilpotents.size());
    h.nilpotents.dim = h.dim;
    for (size_t j = 0; j < mops; ++j) h.nilpotents.operators.push_back(Matrix::zero(h.dim, h.dim));

    std::map<int, Subspace> wlv;
    std::map<int, std::vector<const OrbitFixture*>> by_weight;
    std::map<int, Subspace> flv;
    int off = 0;
    Subspace wacc = Subspace::zero(h.dim);
    int prev_weight = parts.empty() ? 0 : parts.front().weight;
    for (const auto& p : parts) {
        if (p.weight < prev_weight)
            throw std::invalid_argument("mixed_sum: components must be sorted by weight");
        prev_weight = p.weight;
        Matrix embed(h.dim, p.h.dim);
        for (int i = 0; i < p.h.dim; ++i) embed.at(off + i, i) = Scalar(1);
        for (size_t j = 0; j < p.h.nilpotents.size(); ++j) {
            const Matrix& n = p.h.nilpotents.operators[j];
            for (int r = 0; r < p.h.dim; ++r)
                for (int c = 0; c < p.h.dim; ++c)
                    h.nilpotents.operators[j].at(off + r, off + c) = n.at(r, c);
        }
        Matrix rows(p.h.dim, h.dim);
        for (int i = 0; i < p.h.dim; ++i) rows.at(i, off + i) = Scalar(1);
        wacc = wacc + Subspace::span(rows, h.dim);
        wlv[p.weight] = wacc;
        for (const auto& [k, s] : p.h.f.jumps()) {
            Subspace emb = s.image_under(embed);
            auto it = flv.find(k);
            flv[k] = (it == flv.end()) ? emb : it->second + emb;
        }
        by_weight[p.weight].push_back(&p);
        off += p.h.dim;
    }
    // make F cumulative across components
    {
        Subspace acc = Subspace::zero(h.dim);
        for (auto& [k, s] : flv) {
            acc = acc + s;
            s = acc;
        }
    }
    h.w = Filtration::from_levels(h.dim, wlv);
    h.f = Filtration::from_levels(h.dim, flv);
    for (const auto& [wgt, comps] : by_weight) {
        int t = 0;
        for (const auto* p : comps) t += p->h.dim;
        Pairing s;
        s.parity = wgt;
        s.s = Matrix(t, t);
        int o = 0;
        for (const auto* p : comps) {
            for (int r = 0; r < p->h.dim; ++r)
                for (int c = 0; c < p->h.dim; ++c) s.s.at(o + r, o + c) = p->s.s.at(r, c);
            o += p->h.dim;
        }
        h.polarizations[wgt] = s;
    }
    return h;
}

} // namespace hodgekit::fixtures

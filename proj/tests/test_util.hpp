#pragma once

#include <hodgekit/matrix.hpp>
#include <hodgekit/subspace.hpp>
#include <hodgekit/filtration.hpp>
#include <hodgekit/filtration_ops.hpp>

#include <map>
#include <random>
#include <vector>

namespace hodgekit::testutil {

inline Matrix mat(int rows, int cols, std::vector<long> entries) {
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar(entries[size_t(i) * cols + j]);
    return m;
}

inline Vec vec(std::vector<long> entries) {
    Vec v;
    for (long e : entries) v.push_back(Scalar(e));
    return v;
}

/// Nilpotent single Jordan block: N e_k = e_{k-1}, N e_0 = 0.
inline Matrix jordan_shift(int n) {
    Matrix m(n, n);
    for (int k = 1; k < n; ++k) m.at(k - 1, k) = Scalar(1);
    return m;
}

/// Block-diagonal nilpotent from a partition of block sizes.
inline Matrix jordan_blocks(const std::vector<int>& sizes) {
    int n = 0;
    for (int s : sizes) n += s;
    Matrix m(n, n);
    int off = 0;
    for (int s : sizes) {
        for (int k = 1; k < s; ++k) m.at(off + k - 1, off + k) = Scalar(1);
        off += s;
    }
    return m;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}

    long small_int(long lo, long hi) {
        return std::uniform_int_distribution<long>(lo, hi)(gen);
    }

    Matrix matrix(int rows, int cols, long lo = -3, long hi = 3) {
        Matrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m.at(i, j) = Scalar(small_int(lo, hi));
        return m;
    }

    /// Random invertible rational matrix (unipotent upper x unipotent lower).
    Matrix invertible(int n) {
        Matrix u = Matrix::identity(n), l = Matrix::identity(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                u.at(i, j) = Scalar(small_int(-2, 2));
                l.at(j, i) = Scalar(small_int(-2, 2));
            }
        return u * l;
    }

    /// Random nilpotent matrix: conjugated Jordan blocks.
    Matrix nilpotent(int n) {
        std::vector<int> sizes;
        int left = n;
        while (left > 0) {
            int s = int(small_int(1, left));
            sizes.push_back(s);
            left -= s;
        }
        Matrix g = invertible(n);
        return g * jordan_blocks(sizes) * g.inverse();
    }

    Subspace subspace(int ambient, int dim) {
        return Subspace::span(matrix(dim, ambient), ambient);
    }
};

/// Instance with known relative monodromy: a W-graded nilpotent (block
/// diagonal along a weight splitting) transported by a random W-preserving
/// unipotent automorphism. The oracle is the transported blockwise sum of
/// centered filtrations.
struct SplitInstance {
    Matrix n;
    Filtration w;
    Filtration m_oracle;
};

inline SplitInstance split_instance(Rng& rng, int max_blocks = 3, int max_block_dim = 3) {
    int nb = int(rng.small_int(1, max_blocks));
    std::vector<int> sizes, weights;
    int wgt = int(rng.small_int(-2, 0));
    int d = 0;
    for (int b = 0; b < nb; ++b) {
        sizes.push_back(int(rng.small_int(1, max_block_dim)));
        weights.push_back(wgt);
        wgt += int(rng.small_int(1, 2));
        d += sizes.back();
    }
    // block-diagonal nilpotent and per-coordinate weights
    Matrix n(d, d);
    std::vector<int> cw(d);
    std::map<int, Subspace> wlv;
    std::map<int, Subspace> mlv;
    int off = 0;
    Subspace wacc = Subspace::zero(d);
    for (int b = 0; b < nb; ++b) {
        Matrix blk = rng.nilpotent(sizes[b]);
        for (int i = 0; i < sizes[b]; ++i) {
            cw[off + i] = weights[b];
            for (int j = 0; j < sizes[b]; ++j) n.at(off + i, off + j) = blk.at(i, j);
        }
        Matrix rows(sizes[b], d);
        for (int i = 0; i < sizes[b]; ++i) rows.at(i, off + i) = Scalar(1);
        wacc = wacc + Subspace::span(rows, d);
        wlv[weights[b]] = wacc;
        // blockwise centered filtration, embedded
        Filtration mb = monodromy_filtration(blk, weights[b]);
        Matrix embed(d, sizes[b]);
        for (int i = 0; i < sizes[b]; ++i) embed.at(off + i, i) = Scalar(1);
        for (const auto& [k, s] : mb.jumps()) {
            Subspace emb = s.image_under(embed);
            auto it = mlv.find(k);
            mlv[k] = (it == mlv.end()) ? emb : it->second + emb;
        }
        off += sizes[b];
    }
    // make each block's contribution cumulative across weights
    {
        Subspace acc = Subspace::zero(d);
        for (auto& [k, s] : mlv) {
            acc = acc + s;
            s = acc;
        }
    }
    // W-preserving unipotent change of basis: entries only where weight drops
    Matrix g = Matrix::identity(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (cw[i] < cw[j]) g.at(i, j) = Scalar(rng.small_int(-2, 2));
    SplitInstance inst;
    inst.n = g * n * g.inverse();
    inst.w = Filtration::from_levels(d, wlv);
    inst.m_oracle = Filtration::from_levels(d, mlv).transported(g);
    return inst;
}

} // namespace hodgekit::testutil

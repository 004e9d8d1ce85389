#pragma once

#include "matrix.hpp"
#include "report.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace hodgekit {

/// Commuting unipotent automorphisms T_1..T_m of Q^dim, one per puncture.
/// The logarithms are stored without the 1/(2*pi*i) factor; that factor is
/// pure bookkeeping handled as a Tate-twist tag on (W, F), never as a scalar.
struct MonodromyFamily {
    int dim = 0;
    std::vector<Matrix> operators;
};

/// Commuting nilpotent endomorphisms N_1..N_m.
struct NilpotentFamily {
    int dim = 0;
    std::vector<Matrix> operators;

    size_t size() const { return operators.size(); }

    /// N_J = product over j in J (J as bitmask). N_emptyset = Id.
    Matrix product(unsigned mask) const {
        Matrix p = Matrix::identity(dim);
        for (size_t j = 0; j < operators.size(); ++j)
            if (mask & (1u << j)) p = p * operators[j];
        return p;
    }

    /// Sum over j in J (J as bitmask), with optional positive weights.
    Matrix sum(unsigned mask, const std::vector<Scalar>* weights = nullptr) const {
        Matrix s = Matrix::zero(dim, dim);
        for (size_t j = 0; j < operators.size(); ++j)
            if (mask & (1u << j))
                s = s + (weights ? (*weights)[j] * operators[j] : operators[j]);
        return s;
    }
};

/// Log of a unipotent matrix: the series sum_{k>=1} (-1)^{k+1} (T-I)^k / k
/// terminates because T - I is nilpotent. exp(log T) = T exactly.
inline Matrix unipotent_log(const Matrix& t) {
    if (t.rows() != t.cols()) throw std::invalid_argument("log of non-square matrix");
    int n = t.rows();
    Matrix e = t - Matrix::identity(n);
    if (!e.pow(n).is_zero()) throw std::invalid_argument("matrix is not unipotent");
    Matrix acc = Matrix::zero(n, n);
    Matrix p = Matrix::identity(n);
    for (int k = 1; k <= n; ++k) {
        p = p * e;
        if (p.is_zero()) break;
        Scalar c = Scalar(Rat(k % 2 ? 1 : -1, k));
        acc = acc + c * p;
    }
    return acc;
}

/// exp of a nilpotent matrix; the series terminates.
inline Matrix exp_nilpotent(const Matrix& nmat) {
    if (nmat.rows() != nmat.cols()) throw std::invalid_argument("exp of non-square matrix");
    int n = nmat.rows();
    if (!nmat.pow(n).is_zero()) throw std::invalid_argument("matrix is not nilpotent");
    Matrix acc = Matrix::identity(n);
    Matrix p = Matrix::identity(n);
    Rat fact = 1;
    for (int k = 1; k <= n; ++k) {
        p = p * nmat;
        if (p.is_zero()) break;
        fact *= k;
        acc = acc + Scalar(Rat(1) / fact) * p;
    }
    return acc;
}

struct QuasiUnipotence {
    int a = 0; // minimal order with T^a unipotent
    int b = 0; // minimal b with (T^a - Id)^b = 0
};

namespace detail {
inline int totient(int n) {
    int r = n;
    for (int p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        while (n % p == 0) n /= p;
        r -= r / p;
    }
    if (n > 1) r -= r / n;
    return r;
}
} // namespace detail

/// Minimal (a, b) with (T^a - Id)^b = 0, or nullopt when no power of T is
/// unipotent. Eigenvalues must be roots of unity whose orders n each satisfy
/// totient(n) <= dim, and the totients of the distinct orders sum to at most
/// dim; a is the lcm of those orders, so it suffices to scan lcm-closures of
/// the candidate orders under that totient budget, in increasing order.
inline std::optional<QuasiUnipotence> quasi_unipotence(const Matrix& t) {
    if (!t.is_invertible()) throw std::invalid_argument("monodromy must be invertible");
    int d = t.rows();
    std::vector<std::pair<int, int>> orders; // (n, totient)
    for (int n = 1; n <= 2 * d * d + 2; ++n) {
        int ph = detail::totient(n);
        if (ph <= d) orders.push_back({n, ph});
    }
    std::set<std::pair<long, int>> states = {{1, 0}}; // (lcm, totient budget used)
    for (auto [n, ph] : orders) {
        auto snapshot = states;
        for (auto [l, used] : snapshot) {
            if (used + ph > d) continue;
            long nl = std::lcm(l, long(n));
            states.insert({nl, used + ph});
        }
    }
    std::set<long> candidates;
    for (auto [l, used] : states) candidates.insert(l);
    for (long a : candidates) {
        Matrix ta = t.pow(int(a));
        Matrix e = ta - Matrix::identity(d);
        int idx = e.nilpotency_index();
        if (idx >= 0) return QuasiUnipotence{int(a), std::max(idx, 1)};
    }
    return std::nullopt;
}

/// Pairwise commutation plus unipotence (resp. nilpotence) of each member.
/// Violations are findings, not errors.
inline Report validate_family(const std::vector<Matrix>& ops, int dim, bool unipotent) {
    Report rep;
    for (size_t i = 0; i < ops.size(); ++i) {
        if (ops[i].rows() != dim || ops[i].cols() != dim) {
            rep.fail("dimension", "operator " + std::to_string(i + 1));
            continue;
        }
        if (unipotent) {
            Matrix e = ops[i] - Matrix::identity(dim);
            rep.require(e.pow(dim).is_zero(), "unipotence",
                        "operator " + std::to_string(i + 1));
        } else {
            rep.require(ops[i].is_nilpotent(), "nilpotence",
                        "operator " + std::to_string(i + 1));
        }
    }
    for (size_t i = 0; i < ops.size(); ++i)
        for (size_t j = i + 1; j < ops.size(); ++j)
            rep.require(ops[i].commutes_with(ops[j]), "commutation",
                        "pair (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")");
    return rep;
}

inline Report validate_family(const MonodromyFamily& fam) {
    return validate_family(fam.operators, fam.dim, true);
}
inline Report validate_family(const NilpotentFamily& fam) {
    return validate_family(fam.operators, fam.dim, false);
}

} // namespace hodgekit

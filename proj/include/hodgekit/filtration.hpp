#pragma once

#include "subspace.hpp"

#include <limits>
#include <map>
#include <vector>

namespace hodgekit {

/// Finite exhaustive increasing filtration of Q(i)^n by subspaces.
/// Only the weights where the subspace jumps are stored; the top jump is the
/// full space and everything below the lowest jump is zero. Decreasing
/// filtrations (Hodge type) are stored under index negation: F^p <-> at(-p).
class Filtration {
  public:
    Filtration() : ambient_(0) {}

    explicit Filtration(int ambient_dim) : ambient_(ambient_dim) {
        if (ambient_dim < 0) throw std::invalid_argument("negative ambient dimension");
        if (ambient_dim > 0) throw std::invalid_argument("nonzero space needs jump data");
    }

    /// Trivial filtration: one jump of the whole space at `weight`.
    static Filtration trivial(int ambient_dim, int weight) {
        Filtration f;
        f.ambient_ = ambient_dim;
        if (ambient_dim > 0) f.jumps_.push_back({weight, Subspace::full(ambient_dim)});
        return f;
    }

    /// Build from levels (weight -> subspace at that weight). Levels must be
    /// nested and the largest must be the full space. Repeated subspaces at
    /// consecutive weights are merged into a single jump.
    static Filtration from_levels(int ambient_dim, const std::map<int, Subspace>& levels) {
        Filtration f;
        f.ambient_ = ambient_dim;
        if (ambient_dim == 0) return f;
        if (levels.empty()) throw std::invalid_argument("filtration needs at least one level");
        const Subspace* prev = nullptr;
        for (const auto& [w, s] : levels) {
            if (s.ambient_dim() != ambient_dim)
                throw std::invalid_argument("filtration level has wrong ambient dimension");
            if (prev && !s.contains(*prev))
                throw std::invalid_argument("filtration levels not nested");
            if (!prev || s.dim() > prev->dim()) f.jumps_.push_back({w, s});
            prev = &f.jumps_.back().second;
        }
        if (!f.jumps_.back().second.is_full())
            throw std::invalid_argument("filtration not exhaustive");
        if (f.jumps_.front().second.is_zero()) f.jumps_.erase(f.jumps_.begin());
        return f;
    }

    int ambient_dim() const { return ambient_; }

    const std::vector<std::pair<int, Subspace>>& jumps() const { return jumps_; }

    Subspace at(int weight) const {
        Subspace cur = Subspace::zero(ambient_);
        for (const auto& [w, s] : jumps_) {
            if (w > weight) break;
            cur = s;
        }
        return cur;
    }
    /// Decreasing access: F^p = at(-p).
    Subspace at_dec(int p) const { return at(-p); }

    int min_weight() const { return jumps_.empty() ? 0 : jumps_.front().first; }
    int max_weight() const { return jumps_.empty() ? 0 : jumps_.back().first; }

    int graded_dim(int weight) const { return at(weight).dim() - at(weight - 1).dim(); }

    std::map<int, int> graded_dims() const {
        std::map<int, int> g;
        for (const auto& [w, s] : jumps_) {
            int d = graded_dim(w);
            if (d > 0) g[w] = d;
        }
        return g;
    }

    friend bool operator==(const Filtration& a, const Filtration& b) {
        return a.ambient_ == b.ambient_ && a.jumps_ == b.jumps_;
    }
    friend bool operator!=(const Filtration& a, const Filtration& b) { return !(a == b); }

    Filtration shifted(int s) const {
        Filtration f;
        f.ambient_ = ambient_;
        for (const auto& [w, sub] : jumps_) f.jumps_.push_back({w + s, sub});
        return f;
    }

    bool is_rational() const {
        for (const auto& [w, s] : jumps_)
            if (!s.is_rational()) return false;
        return true;
    }

    Filtration conjugate() const {
        std::map<int, Subspace> lv;
        for (const auto& [w, s] : jumps_) lv[w] = s.conjugate();
        return from_levels(ambient_, lv);
    }

    /// Transport along an isomorphism g (applied to every level).
    Filtration transported(const Matrix& g) const {
        if (g.rows() != g.cols() || g.cols() != ambient_)
            throw std::invalid_argument("transport needs a square matrix of ambient size");
        std::map<int, Subspace> lv;
        for (const auto& [w, s] : jumps_) lv[w] = s.image_under(g);
        return from_levels(ambient_, lv);
    }

    /// Filtration induced on the subspace A, in A's own coordinates.
    Filtration induced_sub(const SubspaceMap& a) const {
        std::map<int, Subspace> lv;
        for (const auto& [w, s] : jumps_) lv[w] = a.restrict(intersect(s, a.sub));
        if (lv.empty() || lv.rbegin()->second.dim() < a.sub_dim())
            lv[max_weight()] = Subspace::full(a.sub_dim());
        return from_levels(a.sub_dim(), lv);
    }

    /// Filtration induced on the quotient V/A.
    Filtration induced_quot(const QuotientMap& q) const {
        std::map<int, Subspace> lv;
        for (const auto& [w, s] : jumps_) lv[w] = q.push(s);
        return from_levels(q.quot_dim(), lv);
    }

    /// Dual filtration (W*)_j = Ann(W_{-j-1}) on the dual space.
    Filtration dual() const {
        std::map<int, Subspace> lv;
        // levels at all weights just around the jumps
        std::vector<int> probe;
        for (const auto& [w, s] : jumps_) {
            probe.push_back(-w - 1);
            probe.push_back(-w);
        }
        if (probe.empty()) probe.push_back(0);
        for (int j : probe) lv[j] = at(-j - 1).annihilator();
        lv[-min_weight()] = Subspace::full(ambient_);
        return from_levels(ambient_, lv);
    }

    /// Image filtration under a (not necessarily injective) map m.
    Filtration pushed(const Matrix& m) const {
        std::map<int, Subspace> lv;
        for (const auto& [w, s] : jumps_) lv[w] = s.image_under(m);
        if (lv.empty()) {
            if (m.rows() > 0) throw std::invalid_argument("push of empty filtration");
            return Filtration();
        }
        // the top level is the image, which must be full in the target space
        if (!lv.rbegin()->second.is_full())
            throw std::invalid_argument("pushed filtration is not exhaustive (map not onto)");
        return from_levels(m.rows(), lv);
    }

  private:
    int ambient_;
    std::vector<std::pair<int, Subspace>> jumps_;
};

} // namespace hodgekit

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "appell/errors.hpp"

namespace appell {

/// Exponent tuple of a monomial x^alpha on R^d.
struct MultiIndex {
    std::vector<int> e;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries) : e(std::move(entries)) {}
    MultiIndex(std::initializer_list<int> entries) : e(entries) {}

    int dim() const { return static_cast<int>(e.size()); }
    int operator[](int i) const { return e[static_cast<size_t>(i)]; }
    int& operator[](int i) { return e[static_cast<size_t>(i)]; }

    int degree() const { return std::accumulate(e.begin(), e.end(), 0); }

    bool operator==(const MultiIndex& o) const { return e == o.e; }

    /// Componentwise alpha <= beta.
    bool leq(const MultiIndex& o) const {
        if (e.size() != o.e.size()) return false;
        for (size_t i = 0; i < e.size(); ++i)
            if (e[i] > o.e[i]) return false;
        return true;
    }

    MultiIndex plus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] += o.e[i];
        return r;
    }

    MultiIndex minus(const MultiIndex& o) const {
        MultiIndex r = *this;
        for (size_t i = 0; i < e.size(); ++i) r.e[i] -= o.e[i];
        return r;
    }
};

namespace detail {

// Packed key: one byte per coordinate. Enough for d <= 8, exponents <= 255.
inline std::uint64_t pack_key(const MultiIndex& a) {
    std::uint64_t k = 0;
    for (int i = 0; i < a.dim(); ++i) k = (k << 8) | static_cast<std::uint64_t>(a[i] & 0xff);
    return k;
}

} // namespace detail

inline double factorial(int n) {
    static const auto table = [] {
        std::vector<double> t(171);
        t[0] = 1.0;
        for (int i = 1; i <= 170; ++i) t[static_cast<size_t>(i)] = t[static_cast<size_t>(i - 1)] * i;
        return t;
    }();
    if (n < 0 || n > 170) throw DomainError("factorial: argument out of range");
    return table[static_cast<size_t>(n)];
}

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// alpha_1! * alpha_2! * ... * alpha_d!
inline double mi_factorial(const MultiIndex& a) {
    double r = 1.0;
    for (int i = 0; i < a.dim(); ++i) r *= factorial(a[i]);
    return r;
}

/// |alpha|! / alpha!  (number of index tuples of type alpha).
inline double multinomial(const MultiIndex& a) {
    double r = 1.0;
    int s = 0;
    for (int i = 0; i < a.dim(); ++i) {
        s += a[i];
        r *= binomial(s, a[i]);
    }
    return r;
}

/// All multi-indices of fixed dimension and total degree, graded-lex order
/// (first coordinate varies slowest, from high to low). Instances are cached
/// and shared; contents are immutable.
class MultiIndexSet {
public:
    static std::shared_ptr<const MultiIndexSet> get(int d, int n) {
        if (d < 1 || d > 8) throw ShapeError("MultiIndexSet: dimension must be in [1,8]");
        if (n < 0 || n > 255) throw ShapeError("MultiIndexSet: degree must be in [0,255]");
        static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexSet>> cache;
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        auto& slot = cache[{d, n}];
        if (!slot) slot = std::shared_ptr<const MultiIndexSet>(new MultiIndexSet(d, n));
        return slot;
    }

    int dim() const { return d_; }
    int degree() const { return n_; }
    int size() const { return static_cast<int>(indices_.size()); }

    const MultiIndex& operator[](int r) const { return indices_[static_cast<size_t>(r)]; }
    const std::vector<MultiIndex>& all() const { return indices_; }

    int rank(const MultiIndex& a) const {
        auto it = rank_.find(detail::pack_key(a));
        if (it == rank_.end()) throw ShapeError("MultiIndexSet::rank: index not in set");
        return it->second;
    }

    bool contains(const MultiIndex& a) const {
        return a.dim() == d_ && a.degree() == n_;
    }

private:
    MultiIndexSet(int d, int n) : d_(d), n_(n) {
        MultiIndex cur(std::vector<int>(static_cast<size_t>(d), 0));
        emit(cur, 0, n);
        rank_.reserve(indices_.size());
        for (size_t r = 0; r < indices_.size(); ++r)
            rank_[detail::pack_key(indices_[r])] = static_cast<int>(r);
    }

    void emit(MultiIndex& cur, int pos, int rem) {
        if (pos == d_ - 1) {
            cur[pos] = rem;
            indices_.push_back(cur);
            return;
        }
        for (int k = rem; k >= 0; --k) {
            cur[pos] = k;
            emit(cur, pos + 1, rem - k);
        }
        cur[pos] = 0;
    }

    int d_;
    int n_;
    std::vector<MultiIndex> indices_;
    std::unordered_map<std::uint64_t, int> rank_;
};

/// Flattened layout of all multi-indices with degree <= N: per-degree sets
/// concatenated in graded order, with running offsets.
class GradedLayout {
public:
    GradedLayout(int d, int N) : d_(d), N_(N) {
        if (N < 0) throw ShapeError("GradedLayout: negative truncation degree");
        offsets_.reserve(static_cast<size_t>(N) + 2);
        int off = 0;
        for (int n = 0; n <= N; ++n) {
            sets_.push_back(MultiIndexSet::get(d, n));
            offsets_.push_back(off);
            off += sets_.back()->size();
        }
        offsets_.push_back(off);
    }

    int dim() const { return d_; }
    int max_degree() const { return N_; }
    int size() const { return offsets_.back(); }

    const MultiIndexSet& level(int n) const { return *sets_[static_cast<size_t>(n)]; }
    int offset(int n) const { return offsets_[static_cast<size_t>(n)]; }

    int flat_index(const MultiIndex& a) const {
        const int n = a.degree();
        if (n > N_) throw ShapeError("GradedLayout: degree exceeds truncation");
        return offset(n) + level(n).rank(a);
    }

    const MultiIndex& at(int flat) const {
        const int n = degree_of(flat);
        return level(n)[flat - offset(n)];
    }

    int degree_of(int flat) const {
        const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), flat);
        return static_cast<int>(it - offsets_.begin()) - 1;
    }

    bool operator==(const GradedLayout& o) const { return d_ == o.d_ && N_ == o.N_; }

private:
    int d_;
    int N_;
    std::vector<std::shared_ptr<const MultiIndexSet>> sets_;
    std::vector<int> offsets_;
};

} // namespace appell

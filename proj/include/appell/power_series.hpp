#pragma once

#include <optional>
#include <span>
#include <vector>

#include "appell/errors.hpp"
#include "appell/hilbert_scale.hpp"
#include "appell/multi_index.hpp"

namespace appell {

/// Truncated multivariate power series sum_{|alpha| <= N} c_alpha xi^alpha.
/// radius_hint is advisory domain-of-validity metadata, propagated
/// conservatively by the arithmetic; it does not gate any computation.
class PowerSeries {
public:
    PowerSeries(int d, int N) : layout_(d, N), coeffs_(static_cast<size_t>(layout_.size()), Complex(0.0)) {}

    static PowerSeries constant(int d, int N, Complex c) {
        PowerSeries s(d, N);
        s.coeffs_[0] = c;
        return s;
    }

    static PowerSeries one(int d, int N) { return constant(d, N, 1.0); }

    /// Series of exp<x, xi> in xi: c_alpha = x^alpha / alpha!.
    static PowerSeries exp_linear(std::span<const Complex> x, int N) {
        PowerSeries s(static_cast<int>(x.size()), N);
        for (int f = 0; f < s.layout_.size(); ++f) {
            const MultiIndex& a = s.layout_.at(f);
            Complex v = 1.0;
            for (int i = 0; i < a.dim(); ++i)
                for (int k = 0; k < a[i]; ++k) v *= x[static_cast<size_t>(i)];
            s.coeffs_[static_cast<size_t>(f)] = v / mi_factorial(a);
        }
        return s;
    }

    int dim() const { return layout_.dim(); }
    int max_degree() const { return layout_.max_degree(); }
    const GradedLayout& layout() const { return layout_; }

    Complex operator[](int flat) const { return coeffs_[static_cast<size_t>(flat)]; }
    Complex& operator[](int flat) { return coeffs_[static_cast<size_t>(flat)]; }
    Complex at(const MultiIndex& a) const { return coeffs_[static_cast<size_t>(layout_.flat_index(a))]; }
    Complex& at(const MultiIndex& a) { return coeffs_[static_cast<size_t>(layout_.flat_index(a))]; }
    Complex constant_term() const { return coeffs_[0]; }

    std::optional<double> radius_hint;

    void require_same_shape(const PowerSeries& o) const {
        if (!(layout_ == o.layout_)) throw ShapeError("PowerSeries: layout mismatch");
    }

    PowerSeries& operator+=(const PowerSeries& o) {
        require_same_shape(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }

    PowerSeries& operator-=(const PowerSeries& o) {
        require_same_shape(o);
        for (size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }

    PowerSeries& operator*=(Complex c) {
        for (auto& v : coeffs_) v *= c;
        return *this;
    }

private:
    GradedLayout layout_;
    VectorC coeffs_;
};

namespace detail {

inline std::optional<double> min_radius(const std::optional<double>& a, const std::optional<double>& b) {
    if (a && b) return std::min(*a, *b);
    return a ? a : b;
}

} // namespace detail

/// Cauchy product truncated at the common degree N.
inline PowerSeries mul(const PowerSeries& a, const PowerSeries& b) {
    a.require_same_shape(b);
    const int N = a.max_degree();
    PowerSeries c(a.dim(), N);
    const auto& lay = a.layout();
    for (int fa = 0; fa < lay.size(); ++fa) {
        if (a[fa] == Complex(0.0)) continue;
        const MultiIndex& alpha = lay.at(fa);
        const int rem = N - alpha.degree();
        const int stop = lay.offset(rem) + lay.level(rem).size();
        for (int fb = 0; fb < stop; ++fb) {
            if (b[fb] == Complex(0.0)) continue;
            c.at(alpha.plus(lay.at(fb))) += a[fa] * b[fb];
        }
    }
    c.radius_hint = detail::min_radius(a.radius_hint, b.radius_hint);
    return c;
}

/// Multiplicative inverse up to degree N by graded recursion
///   b_0 = 1/a_0,  b_gamma = -(1/a_0) sum_{0 < beta <= gamma} a_beta b_{gamma-beta}.
/// The radius hint is passed through unchanged; when the constant term is
/// small the hint is likely optimistic and *small_pivot (if given) is set.
inline PowerSeries reciprocal(const PowerSeries& a, bool* small_pivot = nullptr) {
    const Complex a0 = a.constant_term();
    if (a0 == Complex(0.0)) throw SingularGermError("reciprocal: constant term vanishes");
    if (small_pivot) *small_pivot = std::abs(a0) < 1e-8;
    PowerSeries b(a.dim(), a.max_degree());
    const auto& lay = a.layout();
    b[0] = 1.0 / a0;
    for (int f = 1; f < lay.size(); ++f) {
        const MultiIndex& gamma = lay.at(f);
        Complex acc = 0.0;
        // iterate all beta <= gamma, beta != 0
        MultiIndex beta(std::vector<int>(static_cast<size_t>(gamma.dim()), 0));
        while (true) {
            int i = 0;
            for (; i < gamma.dim(); ++i) {
                if (beta[i] < gamma[i]) {
                    ++beta[i];
                    break;
                }
                beta[i] = 0;
            }
            if (i == gamma.dim()) break;
            acc += a.at(beta) * b.at(gamma.minus(beta));
        }
        b[f] = -acc / a0;
    }
    b.radius_hint = a.radius_hint;
    return b;
}

inline Complex eval(const PowerSeries& a, std::span<const Complex> xi) {
    if (static_cast<int>(xi.size()) != a.dim()) throw ShapeError("eval: dimension mismatch");
    const auto& lay = a.layout();
    // power table xi_i^k, k <= N
    const int N = a.max_degree();
    std::vector<Complex> pow(static_cast<size_t>(a.dim()) * static_cast<size_t>(N + 1));
    for (int i = 0; i < a.dim(); ++i) {
        pow[static_cast<size_t>(i) * static_cast<size_t>(N + 1)] = 1.0;
        for (int k = 1; k <= N; ++k)
            pow[static_cast<size_t>(i) * static_cast<size_t>(N + 1) + static_cast<size_t>(k)] =
                pow[static_cast<size_t>(i) * static_cast<size_t>(N + 1) + static_cast<size_t>(k - 1)] *
                xi[static_cast<size_t>(i)];
    }
    Complex acc = 0.0;
    for (int f = 0; f < lay.size(); ++f) {
        if (a[f] == Complex(0.0)) continue;
        const MultiIndex& alpha = lay.at(f);
        Complex m = a[f];
        for (int i = 0; i < alpha.dim(); ++i)
            m *= pow[static_cast<size_t>(i) * static_cast<size_t>(N + 1) + static_cast<size_t>(alpha[i])];
        acc += m;
    }
    return acc;
}

inline Complex eval(const PowerSeries& a, std::initializer_list<Complex> xi) {
    return eval(a, std::span<const Complex>(xi.begin(), xi.size()));
}

} // namespace appell

#pragma once

// Test-only reference implementations, kept independent of the library's
// monomial-class representation: dense full-index-tuple tensors, classical
// recurrences, and deterministic random data.

#include <random>
#include <vector>

#include "appell/bisym_tensor.hpp"
#include "appell/sym_tensor.hpp"

namespace oracle {

using appell::BiSymTensor;
using appell::Complex;
using appell::MultiIndex;
using appell::SymTensor;
using appell::VectorC;

/// Dense degree-n tensor over C^d: one value per index tuple (d^n entries).
struct DenseTensor {
    int d = 1;
    int n = 0;
    VectorC v; // tuple (i_1..i_n) at flat index sum i_k d^{k-1}

    static DenseTensor from(const SymTensor& t) {
        DenseTensor out;
        out.d = t.dim();
        out.n = t.degree();
        size_t total = 1;
        for (int k = 0; k < out.n; ++k) total *= static_cast<size_t>(out.d);
        out.v.resize(total);
        for (size_t f = 0; f < total; ++f) out.v[f] = t.at(tuple_type(out.d, out.n, f));
        return out;
    }

    static MultiIndex tuple_type(int d, int n, size_t flat) {
        MultiIndex a(std::vector<int>(static_cast<size_t>(d), 0));
        for (int k = 0; k < n; ++k) {
            a[static_cast<int>(flat % static_cast<size_t>(d))]++;
            flat /= static_cast<size_t>(d);
        }
        return a;
    }

    size_t size() const { return v.size(); }
};

inline Complex dense_pairing(const DenseTensor& a, const DenseTensor& b) {
    Complex acc = 0.0;
    for (size_t f = 0; f < a.size(); ++f) acc += a.v[f] * b.v[f];
    return acc;
}

/// Dense bigraded tensor from a BiSymTensor: d^m x d^n values.
struct DenseBiTensor {
    int d = 1;
    int m = 0;
    int n = 0;
    VectorC v;

    static DenseBiTensor from(const BiSymTensor& f) {
        DenseBiTensor out;
        out.d = f.dim();
        out.m = f.out_degree();
        out.n = f.in_degree();
        size_t rows = 1, cols = 1;
        for (int k = 0; k < out.m; ++k) rows *= static_cast<size_t>(out.d);
        for (int k = 0; k < out.n; ++k) cols *= static_cast<size_t>(out.d);
        out.v.resize(rows * cols);
        for (size_t r = 0; r < rows; ++r) {
            const MultiIndex g = DenseTensor::tuple_type(out.d, out.m, r);
            for (size_t c = 0; c < cols; ++c)
                out.v[r * cols + c] = f.at(g, DenseTensor::tuple_type(out.d, out.n, c));
        }
        return out;
    }
};

/// Full-index contraction of the in-slots: out(I) = sum_J f(I,J) s(J).
inline DenseTensor dense_contract(const DenseBiTensor& f, const DenseTensor& s) {
    DenseTensor out;
    out.d = f.d;
    out.n = f.m;
    size_t rows = 1, cols = 1;
    for (int k = 0; k < f.m; ++k) rows *= static_cast<size_t>(f.d);
    for (int k = 0; k < f.n; ++k) cols *= static_cast<size_t>(f.d);
    out.v.assign(rows, Complex(0.0));
    for (size_t r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols; ++c) out.v[r] += f.v[r * cols + c] * s.v[c];
    return out;
}

/// Full symmetrization of the (a+b)-fold product of dense tensors.
inline DenseTensor dense_sym_product(const DenseTensor& t, const DenseTensor& s) {
    DenseTensor out;
    out.d = t.d;
    out.n = t.n + s.n;
    size_t total = 1;
    for (int k = 0; k < out.n; ++k) total *= static_cast<size_t>(out.d);
    out.v.assign(total, Complex(0.0));

    std::vector<int> perm(static_cast<size_t>(out.n));
    for (int k = 0; k < out.n; ++k) perm[static_cast<size_t>(k)] = k;
    double count = 0.0;
    std::vector<int> digits(static_cast<size_t>(out.n));
    do {
        count += 1.0;
        for (size_t f = 0; f < total; ++f) {
            size_t rest = f;
            for (int k = 0; k < out.n; ++k) {
                digits[static_cast<size_t>(k)] = static_cast<int>(rest % static_cast<size_t>(out.d));
                rest /= static_cast<size_t>(out.d);
            }
            size_t fa = 0, fb = 0;
            for (int k = t.n - 1; k >= 0; --k)
                fa = fa * static_cast<size_t>(out.d) + static_cast<size_t>(digits[static_cast<size_t>(perm[static_cast<size_t>(k)])]);
            for (int k = out.n - 1; k >= t.n; --k)
                fb = fb * static_cast<size_t>(out.d) + static_cast<size_t>(digits[static_cast<size_t>(perm[static_cast<size_t>(k)])]);
            out.v[f] += t.v[fa] * s.v[fb];
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto& x : out.v) x /= count;
    return out;
}

/// Probabilists' Hermite coefficients by He_{n+1} = x He_n - n He_{n-1};
/// result[k] is the coefficient of x^k in He_n.
inline std::vector<double> hermite_coeffs(int n) {
    std::vector<std::vector<double>> he(static_cast<size_t>(n) + 1);
    he[0] = {1.0};
    if (n >= 1) he[1] = {0.0, 1.0};
    for (int j = 2; j <= n; ++j) {
        std::vector<double> c(static_cast<size_t>(j) + 1, 0.0);
        for (size_t k = 0; k < he[static_cast<size_t>(j - 1)].size(); ++k)
            c[k + 1] += he[static_cast<size_t>(j - 1)][k];
        for (size_t k = 0; k < he[static_cast<size_t>(j - 2)].size(); ++k)
            c[k] -= (j - 1) * he[static_cast<size_t>(j - 2)][k];
        he[static_cast<size_t>(j)] = std::move(c);
    }
    return he[static_cast<size_t>(n)];
}

/// Deterministic uniform in [-1, 1] straight from the engine's integer
/// output, so results do not depend on distribution internals.
inline double uniform_pm1(std::mt19937& rng) {
    return 2.0 * (static_cast<double>(rng()) / 4294967296.0) - 1.0;
}

inline Complex random_complex(std::mt19937& rng) { return {uniform_pm1(rng), uniform_pm1(rng)}; }

inline SymTensor random_sym_tensor(std::mt19937& rng, int d, int n, bool complex_entries = true) {
    SymTensor t(d, n);
    for (int r = 0; r < t.set().size(); ++r)
        t[r] = complex_entries ? random_complex(rng) : Complex(uniform_pm1(rng));
    return t;
}

inline BiSymTensor random_bisym_tensor(std::mt19937& rng, int d, int m, int n, bool complex_entries = true) {
    BiSymTensor f(d, m, n);
    for (int rg = 0; rg < f.out_set().size(); ++rg)
        for (int rd = 0; rd < f.in_set().size(); ++rd)
            f(rg, rd) = complex_entries ? random_complex(rng) : Complex(uniform_pm1(rng));
    return f;
}

inline VectorC random_vector(std::mt19937& rng, int d, bool complex_entries = true) {
    VectorC v(static_cast<size_t>(d));
    for (auto& c : v) c = complex_entries ? random_complex(rng) : Complex(uniform_pm1(rng));
    return v;
}

} // namespace oracle

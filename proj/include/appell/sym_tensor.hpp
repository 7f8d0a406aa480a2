#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "appell/errors.hpp"
#include "appell/hilbert_scale.hpp"
#include "appell/multi_index.hpp"

namespace appell {

/// Symmetric degree-n tensor over C^d in monomial-class form: coeffs[r] is the
/// common entry of the full tensor on any index tuple of type set[r]. Pairings
/// account for the multiplicity n!/alpha! of each class.
class SymTensor {
public:
    SymTensor(int d, int n)
        : set_(MultiIndexSet::get(d, n)), coeffs_(static_cast<size_t>(set_->size()), Complex(0.0)) {}

    SymTensor(int d, int n, VectorC coeffs) : set_(MultiIndexSet::get(d, n)), coeffs_(std::move(coeffs)) {
        if (static_cast<int>(coeffs_.size()) != set_->size())
            throw ShapeError("SymTensor: coefficient count does not match index set");
    }

    /// xi^{tensor n}: entries v_alpha = xi^alpha.
    static SymTensor rank_one(std::span<const Complex> xi, int n) {
        SymTensor t(static_cast<int>(xi.size()), n);
        for (int r = 0; r < t.set().size(); ++r) {
            const MultiIndex& a = t.set()[r];
            Complex v = 1.0;
            for (int i = 0; i < a.dim(); ++i)
                for (int k = 0; k < a[i]; ++k) v *= xi[static_cast<size_t>(i)];
            t[r] = v;
        }
        return t;
    }

    static SymTensor basis(int d, int n, const MultiIndex& gamma) {
        SymTensor t(d, n);
        t[t.set().rank(gamma)] = 1.0;
        return t;
    }

    int dim() const { return set_->dim(); }
    int degree() const { return set_->degree(); }
    const MultiIndexSet& set() const { return *set_; }

    Complex operator[](int r) const { return coeffs_[static_cast<size_t>(r)]; }
    Complex& operator[](int r) { return coeffs_[static_cast<size_t>(r)]; }
    Complex at(const MultiIndex& a) const { return coeffs_[static_cast<size_t>(set_->rank(a))]; }
    const VectorC& coeffs() const { return coeffs_; }

    SymTensor& operator+=(const SymTensor& o) {
        require_same_shape(o);
        for (size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] += o.coeffs_[r];
        return *this;
    }

    SymTensor& operator*=(Complex c) {
        for (auto& v : coeffs_) v *= c;
        return *this;
    }

    friend SymTensor operator*(Complex c, SymTensor t) {
        t *= c;
        return t;
    }

    void require_same_shape(const SymTensor& o) const {
        if (dim() != o.dim()) throw ShapeError("SymTensor: dimension mismatch");
        if (degree() != o.degree()) throw ShapeError("SymTensor: degree mismatch");
    }

private:
    std::shared_ptr<const MultiIndexSet> set_;
    VectorC coeffs_;
};

/// Canonical bilinear pairing <T|S> = sum_alpha (n!/alpha!) t_alpha s_alpha.
/// Bilinear in both slots (no conjugation).
inline Complex pairing(const SymTensor& t, const SymTensor& s) {
    t.require_same_shape(s);
    Complex acc = 0.0;
    for (int r = 0; r < t.set().size(); ++r)
        acc += multinomial(t.set()[r]) * t[r] * s[r];
    return acc;
}

/// |T|_p = sqrt( sum_alpha (n!/alpha!) lambda^{2 p alpha} |v_alpha|^2 ).
/// For rank-one input this equals |xi|_p^n.
inline double scale_norm(const SymTensor& t, const HilbertScale& scale, int p) {
    if (scale.dim() != t.dim()) throw ShapeError("scale_norm: scale dimension mismatch");
    double acc = 0.0;
    for (int r = 0; r < t.set().size(); ++r) {
        const MultiIndex& a = t.set()[r];
        acc += multinomial(a) * scale.index_weight(a, p) * std::norm(t[r]);
    }
    return std::sqrt(acc);
}

/// Symmetrized tensor product T ot S (degree a+b). In monomial-class form
///   (T ot S)_gamma = (a! b! / (a+b)!) sum_{alpha <= gamma, |alpha| = a}
///                    prod_i C(gamma_i, alpha_i) t_alpha s_{gamma - alpha}.
inline SymTensor symmetrize_product(const SymTensor& t, const SymTensor& s) {
    if (t.dim() != s.dim()) throw ShapeError("symmetrize_product: dimension mismatch");
    const int a = t.degree();
    const int b = s.degree();
    SymTensor out(t.dim(), a + b);
    const double scale = factorial(a) * factorial(b) / factorial(a + b);
    for (int rg = 0; rg < out.set().size(); ++rg) {
        const MultiIndex& gamma = out.set()[rg];
        Complex acc = 0.0;
        for (int ra = 0; ra < t.set().size(); ++ra) {
            const MultiIndex& alpha = t.set()[ra];
            if (!alpha.leq(gamma)) continue;
            double ways = 1.0;
            for (int i = 0; i < gamma.dim(); ++i) ways *= binomial(gamma[i], alpha[i]);
            acc += ways * t[ra] * s.at(gamma.minus(alpha));
        }
        out[rg] = scale * acc;
    }
    return out;
}

} // namespace appell

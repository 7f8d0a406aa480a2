#pragma once

#include <memory>
#include <vector>

#include "appell/sym_tensor.hpp"

namespace appell {

/// Doubly graded kernel block f_{m,n}: symmetric of degree m in the out-slots
/// and degree n in the in-slots, stored as a dense (gamma, delta) matrix of
/// monomial-class entries.
class BiSymTensor {
public:
    BiSymTensor(int d, int m, int n)
        : out_set_(MultiIndexSet::get(d, m)),
          in_set_(MultiIndexSet::get(d, n)),
          coeffs_(static_cast<size_t>(out_set_->size()) * static_cast<size_t>(in_set_->size()), Complex(0.0)) {}

    int dim() const { return out_set_->dim(); }
    int out_degree() const { return out_set_->degree(); }
    int in_degree() const { return in_set_->degree(); }
    const MultiIndexSet& out_set() const { return *out_set_; }
    const MultiIndexSet& in_set() const { return *in_set_; }

    Complex operator()(int rg, int rd) const {
        return coeffs_[static_cast<size_t>(rg) * static_cast<size_t>(in_set_->size()) + static_cast<size_t>(rd)];
    }
    Complex& operator()(int rg, int rd) {
        return coeffs_[static_cast<size_t>(rg) * static_cast<size_t>(in_set_->size()) + static_cast<size_t>(rd)];
    }
    Complex at(const MultiIndex& gamma, const MultiIndex& delta) const {
        return (*this)(out_set_->rank(gamma), in_set_->rank(delta));
    }

    /// xi^{ot m} (x) eta^{ot n}: entries xi^gamma eta^delta.
    static BiSymTensor rank_one(std::span<const Complex> xi, int m, std::span<const Complex> eta, int n) {
        BiSymTensor f(static_cast<int>(xi.size()), m, n);
        const SymTensor a = SymTensor::rank_one(xi, m);
        const SymTensor b = SymTensor::rank_one(eta, n);
        for (int rg = 0; rg < f.out_set().size(); ++rg)
            for (int rd = 0; rd < f.in_set().size(); ++rd) f(rg, rd) = a[rg] * b[rd];
        return f;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : coeffs_) m = std::max(m, std::abs(v));
        return m;
    }

private:
    std::shared_ptr<const MultiIndexSet> out_set_;
    std::shared_ptr<const MultiIndexSet> in_set_;
    VectorC coeffs_;
};

/// Contraction of the in-slots against a degree-n symmetric tensor:
///   result_gamma = sum_delta (n!/delta!) f_{gamma,delta} s_delta.
/// The n! factor of the operator convention is applied by the caller.
inline SymTensor contract(const BiSymTensor& f, const SymTensor& s) {
    if (f.dim() != s.dim()) throw ShapeError("contract: dimension mismatch");
    if (f.in_degree() != s.degree()) throw ShapeError("contract: inner degree mismatch");
    SymTensor out(f.dim(), f.out_degree());
    for (int rd = 0; rd < f.in_set().size(); ++rd) {
        const Complex w = multinomial(f.in_set()[rd]) * s[rd];
        if (w == Complex(0.0)) continue;
        for (int rg = 0; rg < f.out_set().size(); ++rg) out[rg] += f(rg, rd) * w;
    }
    return out;
}

/// Pairing against xi^{ot m} (x) eta^{ot n}:
///   sum_{gamma,delta} (m!/gamma!)(n!/delta!) f_{gamma,delta} xi^gamma eta^delta.
inline Complex pairing(const BiSymTensor& f, std::span<const Complex> xi, std::span<const Complex> eta) {
    const SymTensor a = SymTensor::rank_one(xi, f.out_degree());
    const SymTensor b = SymTensor::rank_one(eta, f.in_degree());
    Complex acc = 0.0;
    for (int rg = 0; rg < f.out_set().size(); ++rg) {
        const double mg = multinomial(f.out_set()[rg]);
        for (int rd = 0; rd < f.in_set().size(); ++rd)
            acc += mg * multinomial(f.in_set()[rd]) * f(rg, rd) * a[rg] * b[rd];
    }
    return acc;
}

/// Mixed Hilbert-scale norm |f|_{p_out, -p_in} on H_{p_out}^{ot m} (x) H_{-p_in}^{ot n}:
///   sqrt( sum (m!/gamma!)(n!/delta!) lambda^{2 p_out gamma} lambda^{-2 p_in delta} |f|^2 ).
inline double mixed_scale_norm(const BiSymTensor& f, const HilbertScale& scale, int p_out, int p_in) {
    if (scale.dim() != f.dim()) throw ShapeError("mixed_scale_norm: scale dimension mismatch");
    double acc = 0.0;
    for (int rg = 0; rg < f.out_set().size(); ++rg) {
        const MultiIndex& g = f.out_set()[rg];
        const double wg = multinomial(g) * scale.index_weight(g, p_out);
        for (int rd = 0; rd < f.in_set().size(); ++rd) {
            const MultiIndex& dl = f.in_set()[rd];
            acc += wg * multinomial(dl) * scale.index_weight(dl, -p_in) * std::norm(f(rg, rd));
        }
    }
    return std::sqrt(acc);
}

} // namespace appell

#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "appell/appell_system.hpp"
#include "appell/quadrature.hpp"
#include "appell/sym_tensor.hpp"

namespace appell {

namespace detail {

inline std::vector<SymTensor> zero_family(int d, int N) {
    std::vector<SymTensor> c;
    c.reserve(static_cast<size_t>(N) + 1);
    for (int n = 0; n <= N; ++n) c.emplace_back(d, n);
    return c;
}

} // namespace detail

/// Test function in the P-basis: phi(x) = sum_n <P_n(x) | phi_n>.
struct ChaosVector {
    SystemPtr sys;
    std::vector<SymTensor> coeffs; // degree n at index n, n <= N

    explicit ChaosVector(SystemPtr s) : sys(std::move(s)), coeffs(detail::zero_family(sys->dim(), sys->max_degree())) {}

    int max_degree() const { return sys->max_degree(); }
    SymTensor& operator[](int n) { return coeffs[static_cast<size_t>(n)]; }
    const SymTensor& operator[](int n) const { return coeffs[static_cast<size_t>(n)]; }
};

/// Generalized function in the Q-basis: Phi = sum_n Q_n(Phi_n).
struct ChaosFunctional {
    SystemPtr sys;
    std::vector<SymTensor> coeffs;

    explicit ChaosFunctional(SystemPtr s)
        : sys(std::move(s)), coeffs(detail::zero_family(sys->dim(), sys->max_degree())) {}

    int max_degree() const { return sys->max_degree(); }
    SymTensor& operator[](int n) { return coeffs[static_cast<size_t>(n)]; }
    const SymTensor& operator[](int n) const { return coeffs[static_cast<size_t>(n)]; }
};

/// Coefficient family of the normalized exponential e(xi; .): phi_n = xi^{ot n}/n!.
inline ChaosVector e_mu_vector(const SystemPtr& sys, std::span<const Complex> xi) {
    ChaosVector v(sys);
    for (int n = 0; n <= v.max_degree(); ++n) {
        v[n] = SymTensor::rank_one(xi, n);
        v[n] *= 1.0 / factorial(n);
    }
    return v;
}

/// Generalized Radon-Nikodym distribution rho(xi): Phi_n = (-1)^n xi^{ot n}/n!.
inline ChaosFunctional rho(const SystemPtr& sys, std::span<const Complex> xi) {
    ChaosFunctional f(sys);
    double sign = 1.0;
    for (int n = 0; n <= f.max_degree(); ++n) {
        f[n] = SymTensor::rank_one(xi, n);
        f[n] *= sign / factorial(n);
        sign = -sign;
    }
    return f;
}

/// Dual pairing <<Phi, phi>> evaluated through biorthogonality:
/// sum_n n! <Phi_n | phi_n>.
inline Complex q_pair(const ChaosFunctional& Phi, const ChaosVector& phi) {
    if (Phi.sys != phi.sys)
        throw ShapeError("q_pair: operands must share one Appell system (same truncation)");
    Complex acc = 0.0;
    for (int n = 0; n <= Phi.max_degree(); ++n) acc += factorial(n) * pairing(Phi[n], phi[n]);
    return acc;
}

/// ||phi||_{p,q}^2 = sum_n (n!)^2 2^{qn} |phi_n|_p^2.
inline double test_norm(const ChaosVector& phi, int p, int q) {
    double acc = 0.0;
    for (int n = 0; n <= phi.max_degree(); ++n) {
        const double t = factorial(n) * std::pow(2.0, 0.5 * q * n) * scale_norm(phi[n], phi.sys->scale(), p);
        acc += t * t;
    }
    return std::sqrt(acc);
}

/// ||Phi||_{-p,-q}^2 = sum_n 2^{-qn} |Phi_n|_{-p}^2.
inline double dual_norm(const ChaosFunctional& Phi, int p, int q) {
    double acc = 0.0;
    for (int n = 0; n <= Phi.max_degree(); ++n) {
        const double t = std::pow(2.0, -0.5 * q * n) * scale_norm(Phi[n], Phi.sys->scale(), -p);
        acc += t * t;
    }
    return std::sqrt(acc);
}

/// Expand sum <P_n|phi_n> into monomial coefficients sum c_alpha x^alpha.
inline PowerSeries to_monomial(const ChaosVector& phi) {
    const auto& sys = *phi.sys;
    PowerSeries out(sys.dim(), sys.max_degree());
    for (int n = 0; n <= sys.max_degree(); ++n) {
        const auto& level = sys.layout().level(n);
        const int cols = sys.prefix_size(n);
        for (int rg = 0; rg < level.size(); ++rg) {
            const Complex w = multinomial(level[rg]) * phi[n][rg];
            if (w == Complex(0.0)) continue;
            for (int fa = 0; fa < cols; ++fa) {
                const double k = sys.kernel_entry(n, rg, fa);
                if (k != 0.0) out[fa] += w * k;
            }
        }
    }
    return out;
}

/// Inverse basis change: unique coefficient family with to_monomial(result) = poly.
/// Solved top degree down through the unitriangular kernel table.
inline ChaosVector to_appell(const PowerSeries& poly, const SystemPtr& sys) {
    if (poly.dim() != sys->dim()) throw ShapeError("to_appell: dimension mismatch");
    if (poly.max_degree() > sys->max_degree())
        throw ShapeError("to_appell: polynomial degree exceeds system truncation");

    // copy into the system layout
    PowerSeries work(sys->dim(), sys->max_degree());
    for (int f = 0; f < poly.layout().size(); ++f) work.at(poly.layout().at(f)) = poly[f];

    ChaosVector out(sys);
    for (int n = sys->max_degree(); n >= 0; --n) {
        const auto& level = sys->layout().level(n);
        const int base = sys->layout().offset(n);
        for (int rg = 0; rg < level.size(); ++rg) {
            const Complex c = work[base + rg];
            if (c == Complex(0.0)) continue;
            const Complex phi_entry = c * mi_factorial(level[rg]) / factorial(n);
            out[n][rg] = phi_entry;
            // remove the lower-degree part of <P_n | phi_entry * E_gamma>
            const Complex w = multinomial(level[rg]) * phi_entry;
            for (int fa = 0; fa < base; ++fa) {
                const double k = sys->kernel_entry(n, rg, fa);
                if (k != 0.0) work[fa] -= w * k;
            }
            work[base + rg] = 0.0;
        }
    }
    return out;
}

/// Pointwise value sum_n <P_n(x) | phi_n>, valid at complex x.
inline Complex eval(const ChaosVector& phi, std::span<const Complex> x) {
    Complex acc = 0.0;
    for (int n = 0; n <= phi.max_degree(); ++n) acc += pairing(phi.sys->p_tensor(n, x), phi[n]);
    return acc;
}

/// Embedding of a test function into the dual side through L^2(mu):
/// Phi_m[gamma] = E_mu[ phi(x) P_m(x)_gamma ] / m!, so that
/// q_pair(embed_l2(phi), psi) = E_mu[phi psi] for psi of degree <= N.
inline ChaosFunctional embed_l2(const ChaosVector& phi, int order = -1) {
    const auto& sys = *phi.sys;
    const int d = sys.dim();
    if (d > 3) throw UnsupportedError("embed_l2: tensorized quadrature supports d <= 3");
    if (order < 1) order = sys.max_degree() + 2;

    std::vector<QuadratureRule> rules;
    rules.reserve(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) rules.push_back(quadrature_rule(sys.measure().component(i), order));

    ChaosFunctional out(phi.sys);
    std::vector<Complex> x(static_cast<size_t>(d), 0.0);
    std::function<void(int, double)> walk = [&](int i, double w) {
        if (i == d) {
            const Complex v = w * eval(phi, x);
            for (int m = 0; m <= sys.max_degree(); ++m) {
                const SymTensor pm = sys.p_tensor(m, x);
                for (int rg = 0; rg < pm.set().size(); ++rg) out[m][rg] += v * pm[rg];
            }
            return;
        }
        const auto& r = rules[static_cast<size_t>(i)];
        for (size_t k = 0; k < r.nodes.size(); ++k) {
            x[static_cast<size_t>(i)] = r.nodes[k];
            walk(i + 1, w * r.weights[k]);
        }
    };
    walk(0, 1.0);
    for (int m = 0; m <= sys.max_degree(); ++m) out[m] *= 1.0 / factorial(m);
    return out;
}

} // namespace appell

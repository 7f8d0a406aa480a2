#pragma once

#include <cmath>
#include <span>

#include "appell/chaos.hpp"
#include "appell/power_series.hpp"

namespace appell {

/// The two cylinder-size conventions in use for U_{p,q}: |theta|_p^2 < 2^{-q}
/// (transform locality) and |theta|_p^2 < 2^{-q-1} (symbol cylinders). The
/// bound is an explicit parameter rather than a fixed choice.
enum class LocalityBound { TwoPowNegQ, TwoPowNegQMinus1 };

struct LocalityView {
    int p = 0;
    int q = 0;
    LocalityBound bound = LocalityBound::TwoPowNegQ;

    double limit() const {
        return bound == LocalityBound::TwoPowNegQ ? std::pow(2.0, -q) : std::pow(2.0, -q - 1);
    }

    bool contains(const HilbertScale& scale, std::span<const Complex> theta) const {
        const double n = scale.vector_norm(theta, p);
        return n * n < limit();
    }
};

/// Truncated analytic germ at 0 with its declared validity cylinder.
struct GermFunction {
    PowerSeries series;
    LocalityView domain;

    GermFunction(PowerSeries s, LocalityView v) : series(std::move(s)), domain(v) {}
};

/// S-transform (S Phi)(theta) = <<Phi, e(theta;.)>> = sum_n <Phi_n | theta^{ot n}>.
/// The locality check realizes the finite-order constraint: theta must lie in
/// the declared U_{p,q} view. Truncated sums always converge, so callers may
/// disable the check explicitly.
inline Complex s_transform(const ChaosFunctional& Phi, std::span<const Complex> theta, LocalityView view,
                           bool enforce_domain = true) {
    if (enforce_domain && !view.contains(Phi.sys->scale(), theta))
        throw DomainError("s_transform: theta outside the declared U_{p,q} neighborhood");
    Complex acc = 0.0;
    for (int n = 0; n <= Phi.max_degree(); ++n) acc += pairing(Phi[n], SymTensor::rank_one(theta, n));
    return acc;
}

/// Coefficient form of the S-transform: c_alpha = (n!/alpha!) Phi_n[alpha],
/// so that eval(series, theta) reproduces s_transform pointwise.
inline GermFunction s_transform_series(const ChaosFunctional& Phi, LocalityView view = {}) {
    PowerSeries s(Phi.sys->dim(), Phi.max_degree());
    const auto& lay = s.layout();
    for (int n = 0; n <= Phi.max_degree(); ++n) {
        const auto& level = lay.level(n);
        for (int r = 0; r < level.size(); ++r)
            s[lay.offset(n) + r] = multinomial(level[r]) * Phi[n][r];
    }
    return GermFunction(std::move(s), view);
}

/// Inverse of s_transform_series on truncated germs: Phi_n[alpha] = (alpha!/n!) c_alpha.
inline ChaosFunctional inverse_s(const GermFunction& g, const SystemPtr& sys) {
    if (g.series.dim() != sys->dim()) throw ShapeError("inverse_s: dimension mismatch");
    if (g.series.max_degree() > sys->max_degree())
        throw ShapeError("inverse_s: germ degree exceeds system truncation");
    ChaosFunctional Phi(sys);
    const auto& lay = g.series.layout();
    for (int n = 0; n <= g.series.max_degree(); ++n) {
        const auto& level = lay.level(n);
        for (int r = 0; r < level.size(); ++r)
            Phi[n][r] = g.series[lay.offset(n) + r] / multinomial(level[r]);
    }
    return Phi;
}

/// C-transform in series form: (C phi)(xi) = <<rho(-xi), phi>> = sum_n <xi^{ot n} | phi_n>.
inline Complex c_transform_series(const ChaosVector& phi, std::span<const Complex> xi) {
    Complex acc = 0.0;
    for (int n = 0; n <= phi.max_degree(); ++n) acc += pairing(SymTensor::rank_one(xi, n), phi[n]);
    return acc;
}

/// C-transform by its defining integral: E_mu[phi(x + xi)] via quadrature,
/// real shift, d <= 3.
inline Complex c_transform_integral(const ChaosVector& phi, std::span<const double> xi, int order = -1) {
    const auto& sys = *phi.sys;
    const int d = sys.dim();
    if (static_cast<int>(xi.size()) != d) throw ShapeError("c_transform_integral: dimension mismatch");
    if (order < 1) order = sys.max_degree() + 2;
    return integrate(
        sys.measure(),
        [&](std::span<const double> x) {
            std::vector<Complex> shifted(static_cast<size_t>(d));
            for (int i = 0; i < d; ++i)
                shifted[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + xi[static_cast<size_t>(i)];
            return eval(phi, shifted);
        },
        order);
}

/// Gaussian-only coincidence of the C- and S-transforms: returns the largest
/// deviation |C phi (theta) - S(embed_l2 phi)(theta)| over the sample grid.
inline double gaussian_coincidence(const ChaosVector& phi, std::span<const VectorC> thetas, int order = -1) {
    if (!phi.sys->measure().all_gaussian())
        throw UnsupportedError("gaussian_coincidence: defined for Gaussian systems only");
    const ChaosFunctional embedded = embed_l2(phi, order);
    double dev = 0.0;
    for (const auto& theta : thetas) {
        const Complex c = c_transform_series(phi, theta);
        const Complex s = s_transform(embedded, theta, LocalityView{}, false);
        dev = std::max(dev, std::abs(c - s));
    }
    return dev;
}

} // namespace appell

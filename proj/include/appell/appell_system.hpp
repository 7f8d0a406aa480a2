#pragma once

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "appell/hilbert_scale.hpp"
#include "appell/measure.hpp"
#include "appell/power_series.hpp"
#include "appell/sym_tensor.hpp"

namespace appell {

namespace detail {

/// Power table x_i^k for k <= N, row-major per coordinate.
inline std::vector<Complex> power_table(std::span<const Complex> x, int N) {
    std::vector<Complex> pw(x.size() * static_cast<size_t>(N + 1));
    for (size_t i = 0; i < x.size(); ++i) {
        pw[i * static_cast<size_t>(N + 1)] = 1.0;
        for (int k = 1; k <= N; ++k)
            pw[i * static_cast<size_t>(N + 1) + static_cast<size_t>(k)] =
                pw[i * static_cast<size_t>(N + 1) + static_cast<size_t>(k - 1)] * x[i];
    }
    return pw;
}

inline Complex monomial_value(const std::vector<Complex>& pw, int N, const MultiIndex& a) {
    Complex v = 1.0;
    for (int i = 0; i < a.dim(); ++i)
        v *= pw[static_cast<size_t>(i) * static_cast<size_t>(N + 1) + static_cast<size_t>(a[i])];
    return v;
}

} // namespace detail

/// Appell polynomial system of a product measure at truncation degree N.
///
/// The normalized exponential e(xi; x) = exp<x,xi> / L(xi) expands as
/// sum_n (1/n!) <P_n(x) | xi^{ot n}>; writing r for the reciprocal Laplace
/// series, the kernels have the unitriangular coefficient table
///   P_n(x)_gamma = sum_{alpha <= gamma} K_n[gamma,alpha] x^alpha,
///   K_n[gamma,alpha] = gamma! r_{gamma-alpha} / alpha!,   K_n[gamma,gamma] = 1.
class AppellSystem {
public:
    AppellSystem(ProductMeasure mu, int N, HilbertScale scale)
        : mu_(std::move(mu)), N_(N), scale_(std::move(scale)), layout_(mu_.dim(), N) {
        if (N < 0) throw DomainError("AppellSystem: negative truncation degree");
        if (scale_.dim() != mu_.dim()) throw ShapeError("AppellSystem: scale dimension mismatch");
        if (!mu_.check_nondegenerate(N))
            throw DegenerateMeasureError(
                "AppellSystem: non-degeneracy check failed at degree N (a component has finite "
                "support of size <= N)");
        if (!(mu_.laplace_radius() > 0.0))
            throw DomainError("AppellSystem: Laplace transform must be analytic at 0");

        laplace_ = mu_.laplace_series(N);
        recip_ = reciprocal(laplace_);

        kernels_.resize(static_cast<size_t>(N) + 1);
        for (int n = 0; n <= N; ++n) {
            const auto& level = layout_.level(n);
            const int cols = prefix_size(n);
            auto& K = kernels_[static_cast<size_t>(n)];
            K.assign(static_cast<size_t>(level.size()) * static_cast<size_t>(cols), 0.0);
            for (int rg = 0; rg < level.size(); ++rg) {
                const MultiIndex& gamma = level[rg];
                const double gfac = mi_factorial(gamma);
                for (int fa = 0; fa < cols; ++fa) {
                    const MultiIndex& alpha = layout_.at(fa);
                    if (!alpha.leq(gamma)) continue;
                    const double r = recip_.at(gamma.minus(alpha)).real();
                    K[static_cast<size_t>(rg) * static_cast<size_t>(cols) + static_cast<size_t>(fa)] =
                        gfac * r / mi_factorial(alpha);
                }
            }
        }
    }

    static std::shared_ptr<const AppellSystem> build(ProductMeasure mu, int N, HilbertScale scale) {
        return std::make_shared<const AppellSystem>(std::move(mu), N, std::move(scale));
    }

    static std::shared_ptr<const AppellSystem> build(ProductMeasure mu, int N) {
        const int d = mu.dim();
        return build(std::move(mu), N, HilbertScale::standard(d));
    }

    int dim() const { return mu_.dim(); }
    int max_degree() const { return N_; }
    const ProductMeasure& measure() const { return mu_; }
    const HilbertScale& scale() const { return scale_; }
    const GradedLayout& layout() const { return layout_; }
    const PowerSeries& laplace_series() const { return laplace_; }
    const PowerSeries& reciprocal_series() const { return recip_; }

    /// K_n[gamma, alpha] with alpha given as a flat index of the graded layout.
    double kernel_entry(int n, int gamma_rank, int alpha_flat) const {
        const int cols = prefix_size(n);
        return kernels_[static_cast<size_t>(n)]
                       [static_cast<size_t>(gamma_rank) * static_cast<size_t>(cols) + static_cast<size_t>(alpha_flat)];
    }

    /// Number of layout slots with degree <= n.
    int prefix_size(int n) const { return layout_.offset(n) + layout_.level(n).size(); }

    /// The tensor P_n(x), entries v_gamma(x) = sum_alpha K_n[gamma,alpha] x^alpha.
    SymTensor p_tensor(int n, std::span<const Complex> x) const {
        if (static_cast<int>(x.size()) != dim()) throw ShapeError("p_tensor: dimension mismatch");
        const auto pw = detail::power_table(x, N_);
        SymTensor t(dim(), n);
        const int cols = prefix_size(n);
        for (int rg = 0; rg < t.set().size(); ++rg) {
            Complex acc = 0.0;
            for (int fa = 0; fa < cols; ++fa) {
                const double k = kernel_entry(n, rg, fa);
                if (k == 0.0) continue;
                acc += k * detail::monomial_value(pw, N_, layout_.at(fa));
            }
            t[rg] = acc;
        }
        return t;
    }

    /// exp<x,xi> / L(xi), L evaluated in closed form. xi must lie strictly
    /// inside the per-component Laplace radius.
    Complex e_mu_closed(std::span<const Complex> xi, std::span<const Complex> x) const {
        if (static_cast<int>(xi.size()) != dim() || static_cast<int>(x.size()) != dim())
            throw ShapeError("e_mu_closed: dimension mismatch");
        for (int i = 0; i < dim(); ++i)
            if (!(std::abs(xi[static_cast<size_t>(i)]) < mu_.component(i).laplace_radius()))
                throw DomainError("e_mu_closed: xi outside the Laplace analyticity radius");
        const Complex L = mu_.laplace_closed(xi);
        if (std::abs(L) < 1e-12) throw SingularGermError("e_mu_closed: Laplace transform vanishes at xi");
        Complex dot = 0.0;
        for (int i = 0; i < dim(); ++i) dot += x[static_cast<size_t>(i)] * xi[static_cast<size_t>(i)];
        return std::exp(dot) / L;
    }

    /// Truncated expansion sum_{n<=N} (1/n!) <P_n(x) | xi^{ot n}>.
    Complex e_mu_series(std::span<const Complex> xi, std::span<const Complex> x) const {
        Complex acc = 0.0;
        for (int n = 0; n <= N_; ++n) {
            const SymTensor xin = SymTensor::rank_one(xi, n);
            acc += pairing(p_tensor(n, x), xin) / factorial(n);
        }
        return acc;
    }

    /// Pointwise dual system for the 1-D Gaussian: Q_n(x) = (-1)^n p^(n)(x)/p(x).
    double q_density_1d(int n, double x) const {
        if (dim() != 1) throw UnsupportedError("q_density_1d: requires d = 1");
        const auto& c = mu_.component(0);
        if (!c.has_smooth_density())
            throw UnsupportedError("q_density_1d: measure has no smooth density on all of R");
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * c.density_derivative_ratio(n, x);
    }

private:
    ProductMeasure mu_;
    int N_;
    HilbertScale scale_;
    GradedLayout layout_;
    PowerSeries laplace_{1, 0};
    PowerSeries recip_{1, 0};
    std::vector<std::vector<double>> kernels_;
};

using SystemPtr = std::shared_ptr<const AppellSystem>;

} // namespace appell

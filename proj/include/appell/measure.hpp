#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "appell/errors.hpp"
#include "appell/power_series.hpp"

namespace appell {

/// One-dimensional factor of a product measure. Every catalog entry has an
/// analytic Laplace transform at 0; moments come from closed recurrences.
class ComponentMeasure {
public:
    enum class Kind { Gaussian, Gamma, Poisson, Uniform, TwoPoint };

    static ComponentMeasure gaussian(double mean, double variance) {
        if (!(variance > 0.0)) throw DomainError("gaussian: variance must be positive");
        ComponentMeasure m(Kind::Gaussian);
        m.a_ = mean;
        m.b_ = variance;
        return m;
    }
    static ComponentMeasure gamma(double shape, double scale) {
        if (!(shape > 0.0) || !(scale > 0.0)) throw DomainError("gamma: shape and scale must be positive");
        ComponentMeasure m(Kind::Gamma);
        m.a_ = shape;
        m.b_ = scale;
        return m;
    }
    static ComponentMeasure poisson(double rate) {
        if (!(rate > 0.0)) throw DomainError("poisson: rate must be positive");
        ComponentMeasure m(Kind::Poisson);
        m.a_ = rate;
        return m;
    }
    static ComponentMeasure uniform(double a, double b) {
        if (!(a < b)) throw DomainError("uniform: need a < b");
        ComponentMeasure m(Kind::Uniform);
        m.a_ = a;
        m.b_ = b;
        return m;
    }
    static ComponentMeasure two_point(double x1, double x2, double p1) {
        if (!(p1 > 0.0) || !(p1 < 1.0)) throw DomainError("two_point: p1 must lie in (0,1)");
        if (x1 == x2) throw DomainError("two_point: support points must differ");
        ComponentMeasure m(Kind::TwoPoint);
        m.a_ = x1;
        m.b_ = x2;
        m.p_ = p1;
        return m;
    }

    Kind kind() const { return kind_; }
    double param_a() const { return a_; }
    double param_b() const { return b_; }
    double param_p() const { return p_; }

    /// Supported moment order; recurrences are exact but magnitudes explode
    /// beyond this, so higher orders are rejected rather than silently wrong.
    static constexpr int max_moment_order = 64;

    double moment(int k) const {
        if (k < 0 || k > max_moment_order) throw DomainError("moment: order beyond stored range");
        switch (kind_) {
            case Kind::Gaussian: {
                // m_k = mean m_{k-1} + (k-1) var m_{k-2}
                double m0 = 1.0, m1 = a_;
                if (k == 0) return m0;
                for (int j = 2; j <= k; ++j) {
                    const double mj = a_ * m1 + (j - 1) * b_ * m0;
                    m0 = m1;
                    m1 = mj;
                }
                return m1;
            }
            case Kind::Gamma: {
                // m_j = theta^j shape (shape+1) ... (shape+j-1)
                double r = 1.0;
                for (int j = 0; j < k; ++j) r *= b_ * (a_ + j);
                return r;
            }
            case Kind::Poisson: {
                // Touchard recurrence m_{j+1} = rate sum_i C(j,i) m_i
                std::vector<double> m(static_cast<size_t>(k) + 1);
                m[0] = 1.0;
                for (int j = 0; j < k; ++j) {
                    double s = 0.0;
                    for (int i = 0; i <= j; ++i) s += binomial(j, i) * m[static_cast<size_t>(i)];
                    m[static_cast<size_t>(j) + 1] = a_ * s;
                }
                return m[static_cast<size_t>(k)];
            }
            case Kind::Uniform:
                return (std::pow(b_, k + 1) - std::pow(a_, k + 1)) / ((k + 1) * (b_ - a_));
            case Kind::TwoPoint:
                return p_ * std::pow(a_, k) + (1.0 - p_) * std::pow(b_, k);
        }
        throw Error("moment: unreachable");
    }

    double laplace_radius() const {
        if (kind_ == Kind::Gamma) return 1.0 / b_;
        return std::numeric_limits<double>::infinity();
    }

    /// Closed-form Laplace transform L(xi) = E[exp(x xi)] at complex xi.
    Complex laplace_closed(Complex xi) const {
        switch (kind_) {
            case Kind::Gaussian:
                return std::exp(a_ * xi + 0.5 * b_ * xi * xi);
            case Kind::Gamma:
                return std::pow(Complex(1.0) - b_ * xi, Complex(-a_));
            case Kind::Poisson:
                return std::exp(a_ * (std::exp(xi) - 1.0));
            case Kind::Uniform: {
                if (std::abs(xi) * std::max(std::abs(a_), std::abs(b_)) < 1e-4) {
                    Complex acc = 0.0, p = 1.0;
                    for (int k = 0; k <= 12; ++k) {
                        acc += moment(k) / factorial(k) * p;
                        p *= xi;
                    }
                    return acc;
                }
                return (std::exp(b_ * xi) - std::exp(a_ * xi)) / ((b_ - a_) * xi);
            }
            case Kind::TwoPoint:
                return p_ * std::exp(a_ * xi) + (1.0 - p_) * std::exp(b_ * xi);
        }
        throw Error("laplace_closed: unreachable");
    }

    /// Number of support points; nullopt means infinite.
    std::optional<long> support_size() const {
        if (kind_ == Kind::TwoPoint) return 2;
        return std::nullopt;
    }

    bool has_smooth_density() const { return kind_ == Kind::Gaussian; }

    /// p^{(n)}(x) / p(x) for the Gaussian density; the only catalog measure
    /// with a smooth everywhere-positive density of the required decay.
    double density_derivative_ratio(int n, double x) const {
        if (kind_ != Kind::Gaussian)
            throw UnsupportedError("density_derivative_ratio: only available for Gaussian components");
        const double sigma = std::sqrt(b_);
        const double z = (x - a_) / sigma;
        // p^{(n)}(x) = (-1)^n sigma^{-n} He_n(z) p(x)
        double h0 = 1.0, h1 = z;
        double h = (n == 0) ? h0 : h1;
        for (int j = 2; j <= n; ++j) {
            h = z * h1 - (j - 1) * h0;
            h0 = h1;
            h1 = h;
        }
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * std::pow(sigma, -n) * h;
    }

private:
    explicit ComponentMeasure(Kind k) : kind_(k) {}

    Kind kind_;
    double a_ = 0.0;
    double b_ = 0.0;
    double p_ = 0.0;
};

/// Product measure mu = mu_1 (x) ... (x) mu_d on R^d. Mixed moments and the
/// Laplace transform factorize over the components.
class ProductMeasure {
public:
    explicit ProductMeasure(std::vector<ComponentMeasure> components) : components_(std::move(components)) {
        if (components_.empty()) throw ShapeError("ProductMeasure: needs at least one component");
    }

    int dim() const { return static_cast<int>(components_.size()); }
    const ComponentMeasure& component(int i) const { return components_[static_cast<size_t>(i)]; }
    const std::vector<ComponentMeasure>& components() const { return components_; }

    double moment(const MultiIndex& alpha) const {
        if (alpha.dim() != dim()) throw ShapeError("moment: dimension mismatch");
        double r = 1.0;
        for (int i = 0; i < dim(); ++i) r *= components_[static_cast<size_t>(i)].moment(alpha[i]);
        return r;
    }

    double laplace_radius() const {
        double r = std::numeric_limits<double>::infinity();
        for (const auto& c : components_) r = std::min(r, c.laplace_radius());
        return r;
    }

    Complex laplace_closed(std::span<const Complex> xi) const {
        if (static_cast<int>(xi.size()) != dim()) throw ShapeError("laplace_closed: dimension mismatch");
        Complex r = 1.0;
        for (int i = 0; i < dim(); ++i) r *= components_[static_cast<size_t>(i)].laplace_closed(xi[static_cast<size_t>(i)]);
        return r;
    }

    /// Taylor series of the Laplace transform: c_alpha = prod_i m^(i)_{alpha_i} / alpha_i!.
    PowerSeries laplace_series(int N) const {
        PowerSeries s(dim(), N);
        for (int f = 0; f < s.layout().size(); ++f) {
            const MultiIndex& a = s.layout().at(f);
            double v = 1.0;
            for (int i = 0; i < dim(); ++i)
                v *= components_[static_cast<size_t>(i)].moment(a[i]) / factorial(a[i]);
            s[f] = v;
        }
        s.radius_hint = laplace_radius();
        return s;
    }

    /// Non-degeneracy at truncation degree N: no nonzero polynomial of degree
    /// <= N may vanish mu-a.e. For a product measure this holds iff every
    /// component has more than N support points.
    bool check_nondegenerate(int N) const {
        for (const auto& c : components_) {
            const auto s = c.support_size();
            if (s && *s <= static_cast<long>(N)) return false;
        }
        return true;
    }

    bool all_gaussian() const {
        for (const auto& c : components_)
            if (c.kind() != ComponentMeasure::Kind::Gaussian) return false;
        return true;
    }

private:
    std::vector<ComponentMeasure> components_;
};

} // namespace appell

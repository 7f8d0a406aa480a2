#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "appell/measure.hpp"

namespace appell {

/// Nodes and probability weights of a one-dimensional rule for a component
/// measure. Gauss rules are exact on polynomials of degree <= 2*order - 1;
/// the discrete measures are summed directly.
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// Golub-Welsch: eigen-decompose the Jacobi matrix of the monic three-term
/// recurrence (diag a_j, off-diag sqrt(b_j)) for a normalized weight.
inline QuadratureRule golub_welsch(const std::vector<double>& a, const std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    Eigen::VectorXd diag(n), sub(n > 0 ? n - 1 : 0);
    for (int i = 0; i < n; ++i) diag(i) = a[static_cast<size_t>(i)];
    for (int i = 0; i + 1 < n; ++i) sub(i) = std::sqrt(b[static_cast<size_t>(i + 1)]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    QuadratureRule rule;
    rule.nodes.resize(static_cast<size_t>(n));
    rule.weights.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
        rule.nodes[static_cast<size_t>(i)] = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        rule.weights[static_cast<size_t>(i)] = v * v;
    }
    return rule;
}

} // namespace detail

inline QuadratureRule quadrature_rule(const ComponentMeasure& m, int order) {
    if (order < 1) throw DomainError("quadrature_rule: order must be >= 1");
    using Kind = ComponentMeasure::Kind;
    switch (m.kind()) {
        case Kind::Gaussian: {
            // probabilists' Hermite, then affine map to mean/variance
            std::vector<double> a(static_cast<size_t>(order), 0.0), b(static_cast<size_t>(order), 0.0);
            for (int j = 1; j < order; ++j) b[static_cast<size_t>(j)] = static_cast<double>(j);
            auto rule = detail::golub_welsch(a, b);
            const double sigma = std::sqrt(m.param_b());
            for (auto& x : rule.nodes) x = m.param_a() + sigma * x;
            return rule;
        }
        case Kind::Gamma: {
            // generalized Laguerre with alpha = shape - 1, scaled by theta
            const double alpha = m.param_a() - 1.0;
            std::vector<double> a(static_cast<size_t>(order)), b(static_cast<size_t>(order), 0.0);
            for (int j = 0; j < order; ++j) a[static_cast<size_t>(j)] = 2.0 * j + alpha + 1.0;
            for (int j = 1; j < order; ++j) b[static_cast<size_t>(j)] = j * (j + alpha);
            auto rule = detail::golub_welsch(a, b);
            for (auto& x : rule.nodes) x *= m.param_b();
            return rule;
        }
        case Kind::Uniform: {
            std::vector<double> a(static_cast<size_t>(order), 0.0), b(static_cast<size_t>(order), 0.0);
            for (int j = 1; j < order; ++j) b[static_cast<size_t>(j)] = j * j / (4.0 * j * j - 1.0);
            auto rule = detail::golub_welsch(a, b);
            for (auto& x : rule.nodes) x = 0.5 * (m.param_a() + m.param_b()) + 0.5 * (m.param_b() - m.param_a()) * x;
            return rule;
        }
        case Kind::Poisson: {
            // direct summation, truncated when the remaining tail mass < 1e-14
            QuadratureRule rule;
            const double lam = m.param_a();
            double pmf = std::exp(-lam);
            double cum = 0.0;
            int k = 0;
            while (cum < 1.0 - 1e-14 || pmf > 1e-16) {
                rule.nodes.push_back(static_cast<double>(k));
                rule.weights.push_back(pmf);
                cum += pmf;
                ++k;
                pmf *= lam / k;
                if (k > 2000) break;
            }
            return rule;
        }
        case Kind::TwoPoint:
            return {{m.param_a(), m.param_b()}, {m.param_p(), 1.0 - m.param_p()}};
    }
    throw Error("quadrature_rule: unreachable");
}

/// E_mu[f] by a tensorized rule, d <= 3. Exact for polynomial integrands of
/// degree <= 2*order - 1 in each variable (discrete components: exact up to
/// the 1e-14 tail cutoff).
inline Complex integrate(const ProductMeasure& mu, const std::function<Complex(std::span<const double>)>& f,
                         int order) {
    const int d = mu.dim();
    if (d > 3) throw UnsupportedError("integrate: tensorized quadrature supports d <= 3");
    std::vector<QuadratureRule> rules;
    rules.reserve(static_cast<size_t>(d));
    for (int i = 0; i < d; ++i) rules.push_back(quadrature_rule(mu.component(i), order));

    std::vector<double> x(static_cast<size_t>(d), 0.0);
    Complex acc = 0.0;
    std::function<void(int, double)> walk = [&](int i, double w) {
        if (i == d) {
            acc += w * f(x);
            return;
        }
        const auto& r = rules[static_cast<size_t>(i)];
        for (size_t k = 0; k < r.nodes.size(); ++k) {
            x[static_cast<size_t>(i)] = r.nodes[k];
            walk(i + 1, w * r.weights[k]);
        }
    };
    walk(0, 1.0);
    return acc;
}

} // namespace appell

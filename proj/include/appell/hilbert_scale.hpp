#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "appell/errors.hpp"
#include "appell/multi_index.hpp"

namespace appell {

using Complex = std::complex<double>;
using VectorC = std::vector<Complex>;

/// Finite weighted Hilbert scale on R^d / C^d: |xi|_p^2 = sum_i lambda_i^{2p} |xi_i|^2.
/// Weights >= 1, so the norms are non-decreasing in p. Negative p gives the
/// dual-side norms |.|_{-p}.
struct HilbertScale {
    std::vector<double> lambda;

    HilbertScale() = default;
    explicit HilbertScale(std::vector<double> weights) : lambda(std::move(weights)) {
        for (double w : lambda)
            if (!(w >= 1.0)) throw DomainError("HilbertScale: all weights must be >= 1");
    }

    /// Default scale lambda_i = i + 1 (i counted from 1): (2, 3, ..., d+1).
    static HilbertScale standard(int d) {
        std::vector<double> w(static_cast<size_t>(d));
        for (int i = 0; i < d; ++i) w[static_cast<size_t>(i)] = static_cast<double>(i + 2);
        return HilbertScale(std::move(w));
    }

    int dim() const { return static_cast<int>(lambda.size()); }

    double vector_norm(std::span<const Complex> xi, int p) const {
        if (static_cast<int>(xi.size()) != dim()) throw ShapeError("HilbertScale: dimension mismatch");
        double s = 0.0;
        for (int i = 0; i < dim(); ++i)
            s += std::pow(lambda[static_cast<size_t>(i)], 2 * p) * std::norm(xi[static_cast<size_t>(i)]);
        return std::sqrt(s);
    }

    /// prod_i lambda_i^{2 p alpha_i} — the weight of a monomial class in |.|_p^2.
    double index_weight(const MultiIndex& a, int p) const {
        double w = 1.0;
        for (int i = 0; i < a.dim(); ++i)
            w *= std::pow(lambda[static_cast<size_t>(i)], 2 * p * a[i]);
        return w;
    }
};

} // namespace appell

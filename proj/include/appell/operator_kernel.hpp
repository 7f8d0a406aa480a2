#pragma once

#include <memory>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "appell/bisym_tensor.hpp"
#include "appell/chaos.hpp"
#include "appell/transforms.hpp"

namespace appell {

/// Blocks with every entry below this magnitude are dropped as zero, keeping
/// kernels sparse and exact round trips literal.
inline constexpr double kernel_zero_cutoff = 1e-14;

/// Operator given by its kernel family {f_{m,n}}: on a test function over the
/// input system, b_m(phi) = sum_n n! <f_{m,n} | phi_n> and
/// B phi = sum_m <P_m | b_m(phi)> over the output system.
class OperatorKernel {
public:
    OperatorKernel(SystemPtr sys_in, SystemPtr sys_out)
        : sys_in_(std::move(sys_in)), sys_out_(std::move(sys_out)),
          blocks_(static_cast<size_t>(sys_out_->max_degree() + 1) * static_cast<size_t>(sys_in_->max_degree() + 1)) {
        if (sys_in_->dim() != sys_out_->dim()) throw ShapeError("OperatorKernel: dimension mismatch");
    }

    const SystemPtr& sys_in() const { return sys_in_; }
    const SystemPtr& sys_out() const { return sys_out_; }
    int dim() const { return sys_in_->dim(); }
    int max_out_degree() const { return sys_out_->max_degree(); }
    int max_in_degree() const { return sys_in_->max_degree(); }

    const BiSymTensor* block(int m, int n) const {
        const auto& slot = blocks_[slot_index(m, n)];
        return slot ? &*slot : nullptr;
    }

    void set_block(int m, int n, BiSymTensor f) {
        if (f.dim() != dim() || f.out_degree() != m || f.in_degree() != n)
            throw ShapeError("OperatorKernel::set_block: block shape mismatch");
        if (f.max_abs() < kernel_zero_cutoff) {
            blocks_[slot_index(m, n)].reset();
            return;
        }
        blocks_[slot_index(m, n)] = std::move(f);
    }

    void clear_block(int m, int n) { blocks_[slot_index(m, n)].reset(); }

private:
    size_t slot_index(int m, int n) const {
        if (m < 0 || m > max_out_degree() || n < 0 || n > max_in_degree())
            throw ShapeError("OperatorKernel: block degree out of range");
        return static_cast<size_t>(m) * static_cast<size_t>(max_in_degree() + 1) + static_cast<size_t>(n);
    }

    SystemPtr sys_in_;
    SystemPtr sys_out_;
    std::vector<std::optional<BiSymTensor>> blocks_;
};

/// (B phi)_m = sum_n n! contract(f_{m,n}, phi_n).
inline ChaosVector apply(const OperatorKernel& B, const ChaosVector& phi) {
    if (phi.sys != B.sys_in()) throw ShapeError("apply: test function is not built over the operator's input system");
    ChaosVector out(B.sys_out());
    for (int m = 0; m <= B.max_out_degree(); ++m) {
        for (int n = 0; n <= B.max_in_degree(); ++n) {
            const BiSymTensor* f = B.block(m, n);
            if (!f) continue;
            SymTensor c = contract(*f, phi[n]);
            c *= factorial(n);
            out[m] += c;
        }
    }
    return out;
}

namespace detail {

/// sum over blocks of <f_{m,n} | xi^{ot m} (x) eta^{ot n}> with shared
/// monomial power tables.
template <typename BlockAccess>
Complex bigraded_eval(int d, int Mout, int Min, BlockAccess&& block, std::span<const Complex> xi,
                      std::span<const Complex> eta) {
    if (static_cast<int>(xi.size()) != d || static_cast<int>(eta.size()) != d)
        throw ShapeError("symbol evaluation: dimension mismatch");
    const int top = std::max(Mout, Min);
    const auto pw_xi = power_table(xi, top);
    const auto pw_eta = power_table(eta, top);
    Complex acc = 0.0;
    for (int m = 0; m <= Mout; ++m)
        for (int n = 0; n <= Min; ++n) {
            const BiSymTensor* f = block(m, n);
            if (!f) continue;
            for (int rg = 0; rg < f->out_set().size(); ++rg) {
                const MultiIndex& g = f->out_set()[rg];
                const Complex xg = multinomial(g) * monomial_value(pw_xi, top, g);
                if (xg == Complex(0.0)) continue;
                for (int rd = 0; rd < f->in_set().size(); ++rd) {
                    const Complex v = (*f)(rg, rd);
                    if (v == Complex(0.0)) continue;
                    const MultiIndex& dl = f->in_set()[rd];
                    acc += xg * multinomial(dl) * monomial_value(pw_eta, top, dl) * v;
                }
            }
        }
    return acc;
}

} // namespace detail

/// Local CS-symbol B-check(xi, eta) = sum_{m,n} <f_{m,n} | xi^{ot m} (x) eta^{ot n}>.
/// On truncated data this coincides identically with the two-sided definition
/// <<rho(-xi), B e(eta;.)>>.
inline Complex cs_symbol(const OperatorKernel& B, std::span<const Complex> xi, std::span<const Complex> eta) {
    return detail::bigraded_eval(
        B.dim(), B.max_out_degree(), B.max_in_degree(), [&](int m, int n) { return B.block(m, n); }, xi, eta);
}

struct SymbolDomain {
    int p = 0;
    int q = 0;
    double delta = 0.5;
};

/// Bigraded symbol germ F(xi,eta) = sum_{m,n} <f_{m,n} | xi^{ot m} (x) eta^{ot n}>.
/// Blocks are stored in kernel normalization (the entries f_{gamma,delta}
/// themselves), so operator <-> germ round trips are literal copies.
class SymbolGerm {
public:
    struct Entry {
        MultiIndex gamma;
        MultiIndex delta;
        Complex value;
    };

    SymbolGerm(int d, int max_deg, SymbolDomain dom = {})
        : d_(d), max_deg_(max_deg), domain_(dom),
          blocks_(static_cast<size_t>(max_deg + 1) * static_cast<size_t>(max_deg + 1)) {}

    /// Build from explicit entry lists; entries must be homogeneous of the
    /// declared block bidegree.
    static SymbolGerm from_entries(int d, int max_deg, SymbolDomain dom,
                                   const std::vector<std::tuple<int, int, std::vector<Entry>>>& blocks) {
        SymbolGerm g(d, max_deg, dom);
        for (const auto& [m, n, entries] : blocks) {
            if (m < 0 || n < 0 || m > max_deg || n > max_deg)
                throw MalformedGermError("SymbolGerm: block degree out of range");
            BiSymTensor f(d, m, n);
            for (const auto& e : entries) {
                if (e.gamma.dim() != d || e.delta.dim() != d)
                    throw MalformedGermError("SymbolGerm: entry index dimension mismatch");
                if (e.gamma.degree() != m || e.delta.degree() != n)
                    throw MalformedGermError("SymbolGerm: block is not homogeneous of its declared bidegree");
                f(f.out_set().rank(e.gamma), f.in_set().rank(e.delta)) = e.value;
            }
            g.set_block(m, n, std::move(f));
        }
        return g;
    }

    int dim() const { return d_; }
    int max_degree() const { return max_deg_; }
    const SymbolDomain& domain() const { return domain_; }
    SymbolDomain& domain() { return domain_; }

    const BiSymTensor* block(int m, int n) const {
        const auto& slot = blocks_[slot_index(m, n)];
        return slot ? &*slot : nullptr;
    }

    void set_block(int m, int n, BiSymTensor f) {
        if (f.dim() != d_ || f.out_degree() != m || f.in_degree() != n)
            throw MalformedGermError("SymbolGerm::set_block: block shape mismatch");
        if (f.max_abs() < kernel_zero_cutoff) {
            blocks_[slot_index(m, n)].reset();
            return;
        }
        blocks_[slot_index(m, n)] = std::move(f);
    }

    Complex eval(std::span<const Complex> xi, std::span<const Complex> eta) const;

private:
    size_t slot_index(int m, int n) const {
        if (m < 0 || m > max_deg_ || n < 0 || n > max_deg_)
            throw MalformedGermError("SymbolGerm: block degree out of range");
        return static_cast<size_t>(m) * static_cast<size_t>(max_deg_ + 1) + static_cast<size_t>(n);
    }

    int d_;
    int max_deg_;
    SymbolDomain domain_;
    std::vector<std::optional<BiSymTensor>> blocks_;
};

inline Complex SymbolGerm::eval(std::span<const Complex> xi, std::span<const Complex> eta) const {
    return detail::bigraded_eval(
        d_, max_deg_, max_deg_, [&](int m, int n) { return block(m, n); }, xi, eta);
}

/// Exact bigraded coefficient copy of the kernels.
inline SymbolGerm symbol_series(const OperatorKernel& B, SymbolDomain dom = {}) {
    const int M = std::max(B.max_out_degree(), B.max_in_degree());
    SymbolGerm g(B.dim(), M, dom);
    for (int m = 0; m <= B.max_out_degree(); ++m)
        for (int n = 0; n <= B.max_in_degree(); ++n) {
            const BiSymTensor* f = B.block(m, n);
            if (f) g.set_block(m, n, *f);
        }
    return g;
}

/// Kernel read-off from an exact bigraded germ; inverse of symbol_series.
inline OperatorKernel reconstruct_exact(const SymbolGerm& g, const SystemPtr& sys_in, const SystemPtr& sys_out) {
    if (g.dim() != sys_in->dim()) throw ShapeError("reconstruct_exact: dimension mismatch");
    OperatorKernel B(sys_in, sys_out);
    for (int m = 0; m <= g.max_degree(); ++m)
        for (int n = 0; n <= g.max_degree(); ++n) {
            const BiSymTensor* f = g.block(m, n);
            if (!f) continue;
            if (m > B.max_out_degree() || n > B.max_in_degree())
                throw ShapeError("reconstruct_exact: germ degree exceeds system truncation");
            B.set_block(m, n, *f);
        }
    return B;
}

/// Kernel family of the differential operator D(Phi_k). On P-basis monomials
/// it realizes D(Phi_k)<P_n|phi_n> = (n!/(n-k)!) <P_{n-k} ot Phi_k | phi_n>
/// for n >= k and 0 otherwise.
inline OperatorKernel d_operator(const SystemPtr& sys, const SymTensor& phi_k) {
    const int k = phi_k.degree();
    const int d = sys->dim();
    if (phi_k.dim() != d) throw ShapeError("d_operator: dimension mismatch");
    if (k > sys->max_degree()) throw ShapeError("d_operator: tensor degree exceeds truncation");

    OperatorKernel B(sys, sys);
    for (int j = 0; j + k <= sys->max_degree(); ++j) {
        const int n = j + k;
        BiSymTensor f(d, j, n);
        const double base = factorial(k) / (factorial(j) * factorial(n));
        for (int rg = 0; rg < f.out_set().size(); ++rg) {
            const MultiIndex& gamma = f.out_set()[rg];
            for (int rd = 0; rd < f.in_set().size(); ++rd) {
                const MultiIndex& delta = f.in_set()[rd];
                if (!gamma.leq(delta)) continue;
                const MultiIndex rest = delta.minus(gamma);
                f(rg, rd) = base * mi_factorial(delta) / mi_factorial(rest) * phi_k.at(rest);
            }
        }
        B.set_block(j, n, std::move(f));
    }
    return B;
}

/// The operator B<P_{n,nu}|phi_n> = <P_{n,mu}|phi_n>: diagonal kernels
/// f_{m,m} = (1/m!) * symmetric identity, i.e. entries gamma!/(m!)^2 on the
/// diagonal. Its CS-symbol is the truncated exponential of <xi, eta>.
inline OperatorKernel measure_change_operator(const SystemPtr& sys_nu, const SystemPtr& sys_mu) {
    if (sys_nu->dim() != sys_mu->dim()) throw ShapeError("measure_change_operator: dimension mismatch");
    if (sys_nu->max_degree() != sys_mu->max_degree())
        throw ShapeError("measure_change_operator: truncation mismatch");
    OperatorKernel B(sys_nu, sys_mu);
    for (int m = 0; m <= sys_nu->max_degree(); ++m) {
        BiSymTensor f(sys_nu->dim(), m, m);
        const double mfac = factorial(m);
        for (int rg = 0; rg < f.out_set().size(); ++rg)
            f(rg, rg) = mi_factorial(f.out_set()[rg]) / (mfac * mfac);
        B.set_block(m, m, std::move(f));
    }
    return B;
}

struct GrowthSampleSpec {
    std::vector<double> xi_magnitudes = {0.0, 0.5, 1.0, 2.0, 4.0, 8.0};
    int xi_directions = 6;
    double eta_radius = 0.25; // ball |eta|_{p0} <= eta_radius
    int eta_samples = 6;
    unsigned seed = 7;
};

struct GrowthReport {
    double c_est = 0.0;
    bool diverging = false;
    std::vector<double> tier_max; // per xi-magnitude tier
};

/// Estimate the constant of the growth bound |B-check(xi,eta)| <= C e^{eps |xi|_{-p0}}
/// over a sample grid: C_est = max |symbol| e^{-eps |xi|_{-p0}}. The report
/// flags divergence when the top magnitude tier still dominates all lower ones.
inline GrowthReport growth_bound_check(const OperatorKernel& B, int p0, double eps,
                                       const GrowthSampleSpec& spec = {}) {
    const int d = B.dim();
    const HilbertScale& scale = B.sys_out()->scale();
    std::mt19937 rng(spec.seed);
    auto unit = [&](int p) {
        VectorC v(static_cast<size_t>(d));
        for (auto& c : v) {
            const double re = 2.0 * (rng() / 4294967296.0) - 1.0;
            const double im = 2.0 * (rng() / 4294967296.0) - 1.0;
            c = Complex(re, im);
        }
        const double nrm = scale.vector_norm(v, p);
        for (auto& c : v) c /= nrm;
        return v;
    };

    std::vector<VectorC> etas;
    for (int i = 0; i < spec.eta_samples; ++i) {
        VectorC e = unit(p0);
        const double r = spec.eta_radius * (i + 1) / spec.eta_samples;
        for (auto& c : e) c *= r;
        etas.push_back(std::move(e));
    }

    GrowthReport rep;
    for (double mag : spec.xi_magnitudes) {
        double tier = 0.0;
        for (int k = 0; k < spec.xi_directions; ++k) {
            VectorC xi = unit(-p0);
            for (auto& c : xi) c *= mag;
            const double damp = std::exp(-eps * mag);
            for (const auto& eta : etas)
                tier = std::max(tier, std::abs(cs_symbol(B, xi, eta)) * damp);
        }
        rep.tier_max.push_back(tier);
        rep.c_est = std::max(rep.c_est, tier);
    }
    if (rep.tier_max.size() >= 2) {
        double prev = 0.0;
        for (size_t i = 0; i + 1 < rep.tier_max.size(); ++i) prev = std::max(prev, rep.tier_max[i]);
        rep.diverging = rep.tier_max.back() > prev * (1.0 + 1e-9) && rep.tier_max.back() > 0.0;
    }
    return rep;
}

} // namespace appell

#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "appell/operator_kernel.hpp"

namespace appell {

/// Round-trip acceptance tolerance for coefficients recovered by the
/// black-box extraction (relative, per coefficient).
inline constexpr double blackbox_coefficient_tolerance = 1e-6;

using SymbolFn = std::function<Complex(std::span<const Complex>, std::span<const Complex>)>;

struct BlackboxOptions {
    int max_degree = 4;          // highest extracted block degree M
    double epsilon = 1.0;        // growth parameter; default radii R_m = max(1, m/epsilon)
    double delta = 0.5;          // eta-circle radius
    std::vector<double> radii;   // optional per-degree override, size max_degree+1
    double residual_tol = 1e-9;  // Fourier tail threshold for the holomorphy check
    SymbolDomain domain;
};

namespace detail {

struct AngularGrid {
    // points z with components radius * exp(2 pi i (j/K + u_a/P)); the radial
    // index j runs over K circle points, u over the P^d component torus.
    int K;
    int P;
    int d;
    double radius;
    std::vector<VectorC> points;       // size K * P^d
    std::vector<std::vector<int>> us;  // torus index per point block

    AngularGrid(int d_, int K_, int P_, double r) : K(K_), P(P_), d(d_), radius(r) {
        std::vector<int> u(static_cast<size_t>(d), 0);
        const double two_pi = 2.0 * std::numbers::pi;
        while (true) {
            us.push_back(u);
            int i = 0;
            for (; i < d; ++i) {
                if (++u[static_cast<size_t>(i)] < P) break;
                u[static_cast<size_t>(i)] = 0;
            }
            if (i == d) break;
        }
        points.reserve(static_cast<size_t>(K) * us.size());
        for (int j = 0; j < K; ++j)
            for (const auto& uu : us) {
                VectorC z(static_cast<size_t>(d));
                for (int a = 0; a < d; ++a) {
                    const double ang = two_pi * (static_cast<double>(j) / K +
                                                 static_cast<double>(uu[static_cast<size_t>(a)]) / P);
                    z[static_cast<size_t>(a)] = radius * Complex(std::cos(ang), std::sin(ang));
                }
                points.push_back(std::move(z));
            }
    }

    int torus_size() const { return static_cast<int>(us.size()); }
    int size() const { return K * torus_size(); }

    /// DFT weight extracting the monomial z^alpha (|alpha| = deg) at point
    /// (j, u): radius^{-deg} exp(-2 pi i (j deg / K + sum u_a alpha_a / P)).
    Complex weight(int j, int u, const MultiIndex& alpha) const {
        const double two_pi = 2.0 * std::numbers::pi;
        double phase = -two_pi * static_cast<double>(j) * alpha.degree() / K;
        for (int a = 0; a < d; ++a)
            phase -= two_pi * static_cast<double>(us[static_cast<size_t>(u)][static_cast<size_t>(a)]) *
                     alpha[a] / P;
        return std::pow(radius, -alpha.degree()) * Complex(std::cos(phase), std::sin(phase));
    }
};

/// Holomorphy heuristic: on the (u=0, v=0) radial subgrid, the top (M+1)
/// discrete Fourier bins alias the negative Laurent indices. For F
/// holomorphic on the sampled circles they decay below noise; a pole inside
/// either circle leaves them O(1).
inline double fourier_tail_residual(const std::vector<Complex>& g, int K, int band) {
    std::vector<Complex> ghat(static_cast<size_t>(K) * static_cast<size_t>(K), Complex(0.0));
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<Complex> w(static_cast<size_t>(K) * static_cast<size_t>(K));
    for (int j = 0; j < K; ++j)
        for (int m = 0; m < K; ++m) {
            const double ph = -two_pi * j * m / K;
            w[static_cast<size_t>(j) * K + static_cast<size_t>(m)] = Complex(std::cos(ph), std::sin(ph));
        }
    for (int mh = 0; mh < K; ++mh)
        for (int nh = 0; nh < K; ++nh) {
            Complex acc = 0.0;
            for (int j = 0; j < K; ++j)
                for (int k = 0; k < K; ++k)
                    acc += g[static_cast<size_t>(j) * K + static_cast<size_t>(k)] *
                           w[static_cast<size_t>(j) * K + static_cast<size_t>(mh)] *
                           w[static_cast<size_t>(k) * K + static_cast<size_t>(nh)];
            ghat[static_cast<size_t>(mh) * K + static_cast<size_t>(nh)] = acc / static_cast<double>(K * K);
        }
    double all = 0.0, tail = 0.0;
    for (int mh = 0; mh < K; ++mh)
        for (int nh = 0; nh < K; ++nh) {
            const double v = std::abs(ghat[static_cast<size_t>(mh) * K + static_cast<size_t>(nh)]);
            all = std::max(all, v);
            if (mh >= K - band || nh >= K - band) tail = std::max(tail, v);
        }
    return tail / std::max(1.0, all);
}

} // namespace detail

/// Taylor-coefficient extraction of a bigraded symbol germ from point values
/// of F alone: a two-variable discrete Fourier transform over the circles
/// |s| = R_m, |t| = delta applied to (s,t) -> F(s xi, t eta) along a spanning
/// torus of directions, then conversion to kernel-normalized entries.
inline SymbolGerm extract_symbol_germ(const SymbolFn& F, int d, const BlackboxOptions& opt) {
    const int M = opt.max_degree;
    if (M < 0) throw DomainError("extract_symbol_germ: negative degree");
    if (!(opt.delta > 0.0)) throw DomainError("extract_symbol_germ: delta must be positive");
    std::vector<double> radii = opt.radii;
    if (radii.empty()) {
        radii.resize(static_cast<size_t>(M) + 1);
        for (int m = 0; m <= M; ++m) radii[static_cast<size_t>(m)] = std::max(1.0, m / opt.epsilon);
    }
    if (static_cast<int>(radii.size()) != M + 1)
        throw DomainError("extract_symbol_germ: radii must have max_degree+1 entries");

    const int K = 4 * (M + 1);
    const int P = (d == 1) ? 1 : M + 1;

    SymbolGerm germ(d, M, opt.domain);
    std::vector<std::shared_ptr<const MultiIndexSet>> sets;
    for (int n = 0; n <= M; ++n) sets.push_back(MultiIndexSet::get(d, n));

    for (int m = 0; m <= M; ++m) {
        const detail::AngularGrid xi_grid(d, K, P, radii[static_cast<size_t>(m)]);
        const detail::AngularGrid eta_grid(d, K, P, opt.delta);
        const int nxi = xi_grid.size();
        const int neta = eta_grid.size();
        const int tor = xi_grid.torus_size();

        // flattened target slots on the eta side: (n, delta-rank)
        std::vector<int> eta_offset(static_cast<size_t>(M) + 2, 0);
        for (int n = 0; n <= M; ++n)
            eta_offset[static_cast<size_t>(n) + 1] = eta_offset[static_cast<size_t>(n)] + sets[static_cast<size_t>(n)]->size();
        const int eta_slots = eta_offset[static_cast<size_t>(M) + 1];

        // DFT weight tables: eta side over all (n, delta) slots, xi side over |gamma| = m
        std::vector<Complex> w_eta(static_cast<size_t>(neta) * static_cast<size_t>(eta_slots));
        for (int ie = 0; ie < neta; ++ie)
            for (int n = 0; n <= M; ++n) {
                const auto& set = *sets[static_cast<size_t>(n)];
                for (int rd = 0; rd < set.size(); ++rd)
                    w_eta[static_cast<size_t>(ie) * static_cast<size_t>(eta_slots) +
                          static_cast<size_t>(eta_offset[static_cast<size_t>(n)] + rd)] =
                        eta_grid.weight(ie / tor, ie % tor, set[rd]);
            }
        const auto& gset = *sets[static_cast<size_t>(m)];
        std::vector<Complex> w_xi(static_cast<size_t>(nxi) * static_cast<size_t>(gset.size()));
        for (int ix = 0; ix < nxi; ++ix)
            for (int rg = 0; rg < gset.size(); ++rg)
                w_xi[static_cast<size_t>(ix) * static_cast<size_t>(gset.size()) + static_cast<size_t>(rg)] =
                    xi_grid.weight(ix / tor, ix % tor, gset[rg]);

        // stage 1: per xi-point, reduce over the eta grid
        std::vector<Complex> partial(static_cast<size_t>(nxi) * static_cast<size_t>(eta_slots), Complex(0.0));
        std::vector<Complex> diag_sub(static_cast<size_t>(K) * static_cast<size_t>(K), Complex(0.0));
        std::vector<Complex> row(static_cast<size_t>(neta));
        double sample_max = 0.0;
        for (int ix = 0; ix < nxi; ++ix) {
            const int j = ix / tor;
            const int u = ix % tor;
            for (int ie = 0; ie < neta; ++ie) {
                row[static_cast<size_t>(ie)] =
                    F(xi_grid.points[static_cast<size_t>(ix)], eta_grid.points[static_cast<size_t>(ie)]);
                sample_max = std::max(sample_max, std::abs(row[static_cast<size_t>(ie)]));
            }
            if (u == 0)
                for (int ie = 0; ie < neta; ++ie)
                    if (ie % tor == 0)
                        diag_sub[static_cast<size_t>(j) * K + static_cast<size_t>(ie / tor)] =
                            row[static_cast<size_t>(ie)];
            Complex* out = &partial[static_cast<size_t>(ix) * static_cast<size_t>(eta_slots)];
            for (int ie = 0; ie < neta; ++ie) {
                const Complex g = row[static_cast<size_t>(ie)];
                const Complex* w = &w_eta[static_cast<size_t>(ie) * static_cast<size_t>(eta_slots)];
                for (int s = 0; s < eta_slots; ++s) out[s] += g * w[s];
            }
            for (int s = 0; s < eta_slots; ++s) out[s] /= static_cast<double>(neta);
        }

        const double residual = detail::fourier_tail_residual(diag_sub, K, M + 1);
        if (residual > opt.residual_tol)
            throw ExtractionError("reconstruct_blackbox: Fourier residual " + std::to_string(residual) +
                                  " exceeds tolerance; F is not holomorphic on the sampled circles");

        // stage 2: reduce over the xi grid and convert to kernel entries
        std::vector<Complex> raw(static_cast<size_t>(gset.size()) * static_cast<size_t>(eta_slots), Complex(0.0));
        for (int ix = 0; ix < nxi; ++ix) {
            const Complex* in = &partial[static_cast<size_t>(ix) * static_cast<size_t>(eta_slots)];
            for (int rg = 0; rg < gset.size(); ++rg) {
                const Complex w = w_xi[static_cast<size_t>(ix) * static_cast<size_t>(gset.size()) +
                                       static_cast<size_t>(rg)];
                Complex* out = &raw[static_cast<size_t>(rg) * static_cast<size_t>(eta_slots)];
                for (int s = 0; s < eta_slots; ++s) out[s] += w * in[s];
            }
        }
        for (auto& v : raw) v /= static_cast<double>(nxi);

        for (int n = 0; n <= M; ++n) {
            const auto& dset = *sets[static_cast<size_t>(n)];
            // rounding noise of the averaged DFT sums, amplified by the
            // circle radii entering the extraction weights
            const double noise_floor = 128.0 * 2.220446049250313e-16 * std::max(1.0, sample_max) *
                                       std::pow(radii[static_cast<size_t>(m)], -m) * std::pow(opt.delta, -n);
            BiSymTensor f(d, m, n);
            for (int rg = 0; rg < gset.size(); ++rg)
                for (int rd = 0; rd < dset.size(); ++rd) {
                    Complex c = raw[static_cast<size_t>(rg) * static_cast<size_t>(eta_slots) +
                                    static_cast<size_t>(eta_offset[static_cast<size_t>(n)] + rd)];
                    if (std::abs(c) < noise_floor) c = 0.0;
                    // monomial coefficient -> kernel normalization
                    f(rg, rd) = c / (multinomial(gset[rg]) * multinomial(dset[rd]));
                }
            germ.set_block(m, n, std::move(f));
        }
    }
    return germ;
}

/// Reconstruct an operator from point values of its symbol (Cauchy-DFT path).
inline OperatorKernel reconstruct_blackbox(const SymbolFn& F, const SystemPtr& sys_in, const SystemPtr& sys_out,
                                           const BlackboxOptions& opt) {
    return reconstruct_exact(extract_symbol_germ(F, sys_in->dim(), opt), sys_in, sys_out);
}

} // namespace appell

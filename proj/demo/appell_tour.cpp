// A short tour: Appell polynomials for three measures, the biorthogonal
// pairing, the measure-change operator's symbol, and kernel recovery from
// symbol point values.

#include <cstdio>

#include "appell/appell.hpp"

using namespace appell;

namespace {

void print_poly(const char* label, const AppellSystem& sys, int n) {
    std::printf("  %s P_%d(x) =", label, n);
    bool first = true;
    for (int k = n; k >= 0; --k) {
        const double c = sys.kernel_entry(n, 0, k);
        if (c == 0.0) continue;
        std::printf(first ? " %+g x^%d" : " %+g x^%d", c, k);
        first = false;
    }
    std::printf("\n");
}

} // namespace

int main() {
    const int N = 8;
    const auto gauss = AppellSystem::build(ProductMeasure({ComponentMeasure::gaussian(0, 1)}), N);
    const auto poisson = AppellSystem::build(ProductMeasure({ComponentMeasure::poisson(1)}), N);
    const auto gamma = AppellSystem::build(ProductMeasure({ComponentMeasure::gamma(1, 1)}), N);

    std::printf("Appell polynomials of three product measures (d = 1, N = %d):\n", N);
    for (int n = 1; n <= 3; ++n) {
        print_poly("gaussian ", *gauss, n);
        print_poly("poisson  ", *poisson, n);
        print_poly("gamma    ", *gamma, n);
    }

    std::printf("\nbiorthogonality <<Q_n, P_m>> for the Poisson system (expect diag n!):\n");
    for (int n = 0; n <= 4; ++n) {
        std::printf("  ");
        for (int m = 0; m <= 4; ++m) {
            ChaosFunctional qn(poisson);
            qn[n][0] = 1.0;
            ChaosVector pm(poisson);
            pm[m][0] = 1.0;
            std::printf("%8.3f", q_pair(qn, pm).real());
        }
        std::printf("\n");
    }

    std::printf("\nmeasure-change operator poisson -> gaussian, symbol vs exp(xi eta):\n");
    const OperatorKernel mc = measure_change_operator(poisson, gauss);
    for (double t : {0.2, 0.5, 0.8}) {
        const VectorC xi{Complex(t)}, eta{Complex(t)};
        std::printf("  xi = eta = %.1f:  symbol = %.12f,  exp = %.12f\n", t,
                    cs_symbol(mc, xi, eta).real(), std::exp(t * t));
    }

    std::printf("\nkernel recovery from symbol point values (Cauchy-DFT, M = 4):\n");
    BlackboxOptions opt;
    opt.max_degree = 4;
    const OperatorKernel back = reconstruct_blackbox(
        [&](std::span<const Complex> xi, std::span<const Complex> eta) { return cs_symbol(mc, xi, eta); },
        poisson, gauss, opt);
    for (int m = 0; m <= 4; ++m) {
        const BiSymTensor* f = back.block(m, m);
        std::printf("  f_{%d,%d} = %.12f   (expect 1/%d! = %.12f)\n", m, m, f ? (*f)(0, 0).real() : 0.0, m,
                    1.0 / factorial(m));
    }
    return 0;
}

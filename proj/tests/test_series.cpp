#include <catch2/catch_amalgamated.hpp>

#include "appell/power_series.hpp"
#include "oracles.hpp"

using namespace appell;

namespace {

PowerSeries poly1d(int N, std::initializer_list<double> coeffs) {
    PowerSeries s(1, N);
    int k = 0;
    for (double c : coeffs) s[k++] = c;
    return s;
}

} // namespace

TEST_CASE("series multiplication basics", "[series]") {
    const PowerSeries a = poly1d(4, {1, 1});
    const PowerSeries b = poly1d(4, {1, -1});
    const PowerSeries c = mul(a, b);
    CHECK(std::abs(c[0] - Complex(1.0)) < 1e-15);
    CHECK(std::abs(c[1]) < 1e-15);
    CHECK(std::abs(c[2] - Complex(-1.0)) < 1e-15);
    CHECK(std::abs(c[3]) < 1e-15);

    std::mt19937 rng(201);
    PowerSeries r(2, 5);
    for (int f = 0; f < r.layout().size(); ++f) r[f] = oracle::random_complex(rng);
    const PowerSeries rid = mul(r, PowerSeries::one(2, 5));
    for (int f = 0; f < r.layout().size(); ++f) CHECK(std::abs(rid[f] - r[f]) < 1e-15);
}

TEST_CASE("exp series multiply to the doubled exponential", "[series]") {
    const int N = 8;
    const VectorC one{Complex(1.0)};
    const PowerSeries e = PowerSeries::exp_linear(one, N);
    const PowerSeries e2 = mul(e, e);
    for (int k = 0; k <= N; ++k) {
        const double expect = std::pow(2.0, k) / factorial(k); // oracle: 2^k/k!
        CHECK(std::abs(e2[k] - Complex(expect)) < 1e-14 * std::max(1.0, expect));
    }
}

TEST_CASE("mul is associative and commutative", "[series]") {
    std::mt19937 rng(202);
    for (int d = 1; d <= 2; ++d) {
        PowerSeries a(d, 8), b(d, 8), c(d, 8);
        for (int f = 0; f < a.layout().size(); ++f) {
            a[f] = oracle::random_complex(rng);
            b[f] = oracle::random_complex(rng);
            c[f] = oracle::random_complex(rng);
        }
        const PowerSeries ab_c = mul(mul(a, b), c);
        const PowerSeries a_bc = mul(a, mul(b, c));
        const PowerSeries ba = mul(b, a);
        const PowerSeries ab = mul(a, b);
        for (int f = 0; f < a.layout().size(); ++f) {
            CHECK(std::abs(ab_c[f] - a_bc[f]) < 1e-12);
            CHECK(std::abs(ab[f] - ba[f]) < 1e-14);
        }
    }
}

TEST_CASE("reciprocal of 1 + xi is the alternating geometric series", "[series]") {
    const PowerSeries a = poly1d(3, {1, 1});
    const PowerSeries b = reciprocal(a);
    CHECK(std::abs(b[0] - Complex(1)) < 1e-15);
    CHECK(std::abs(b[1] - Complex(-1)) < 1e-15);
    CHECK(std::abs(b[2] - Complex(1)) < 1e-15);
    CHECK(std::abs(b[3] - Complex(-1)) < 1e-15);
}

TEST_CASE("reciprocal of exp(xi^2/2) matches exp(-xi^2/2)", "[series]") {
    const int N = 8;
    PowerSeries a(1, N);
    for (int k = 0; k <= N / 2; ++k) a[2 * k] = 1.0 / (std::pow(2.0, k) * factorial(k));
    const PowerSeries b = reciprocal(a);
    for (int k = 0; k <= N; ++k) {
        const double expect = (k % 2 == 0) ? std::pow(-0.5, k / 2) / factorial(k / 2) : 0.0;
        CHECK(std::abs(b[k] - Complex(expect)) < 1e-14);
    }
}

TEST_CASE("reciprocal requires a unit at degree zero", "[series]") {
    PowerSeries a(1, 3);
    a[1] = 1.0;
    CHECK_THROWS_AS(reciprocal(a), SingularGermError);
}

TEST_CASE("mul(a, reciprocal(a)) is the unit series", "[series]") {
    std::mt19937 rng(203);
    for (int d = 1; d <= 2; ++d) {
        PowerSeries a(d, 6);
        for (int f = 0; f < a.layout().size(); ++f) a[f] = oracle::random_complex(rng);
        a[0] = Complex(1.0 + 0.5 * oracle::uniform_pm1(rng), 0.0);
        const PowerSeries prod = mul(a, reciprocal(a));
        CHECK(std::abs(prod[0] - Complex(1.0)) < 1e-12);
        for (int f = 1; f < a.layout().size(); ++f) CHECK(std::abs(prod[f]) < 1e-12);
    }
}

TEST_CASE("evaluation", "[series]") {
    const PowerSeries a = poly1d(3, {1, -1, 1, -1});
    CHECK(eval(a, {Complex(0.5)}).real() == Catch::Approx(0.625).margin(1e-15));
    CHECK(eval(a, {Complex(0.0)}).real() == Catch::Approx(1.0));

    // truncated exponential at 0.1: remainder bound 0.1^{N+1} e^{0.1} / (N+1)!
    const int N = 6;
    const PowerSeries e = PowerSeries::exp_linear(VectorC{Complex(1.0)}, N);
    const double got = eval(e, {Complex(0.1)}).real();
    const double bound = std::pow(0.1, N + 1) * std::exp(0.1) / factorial(N + 1);
    CHECK(std::abs(got - std::exp(0.1)) <= bound);
}

TEST_CASE("eval is multiplicative up to the truncation remainder", "[series]") {
    std::mt19937 rng(204);
    PowerSeries a(2, 8), b(2, 8);
    for (int f = 0; f < a.layout().size(); ++f) {
        a[f] = oracle::random_complex(rng);
        b[f] = oracle::random_complex(rng);
    }
    const PowerSeries ab = mul(a, b);
    const VectorC xi{Complex(0.05, 0.02), Complex(-0.04, 0.01)};
    const Complex lhs = eval(ab, xi);
    const Complex rhs = eval(a, xi) * eval(b, xi);
    // the dropped products have total degree >= 9 with coefficients |c| <= 2,
    // and there are fewer than (9+2)^2 * 81 of them at |xi| <= 0.07
    CHECK(std::abs(lhs - rhs) < 1e-7);
}

TEST_CASE("exp_linear coefficients", "[series]") {
    const PowerSeries e1 = PowerSeries::exp_linear(VectorC{Complex(1.0)}, 6);
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(e1[k] - Complex(1.0 / factorial(k))) < 1e-15);

    const PowerSeries e2 = PowerSeries::exp_linear(VectorC{Complex(1.0), Complex(2.0)}, 4);
    CHECK(std::abs(e2.at(MultiIndex{1, 1}) - Complex(2.0)) < 1e-15); // x^alpha/alpha! = 2/1

    const PowerSeries e0 = PowerSeries::exp_linear(VectorC{Complex(0.0), Complex(0.0)}, 4);
    CHECK(std::abs(e0[0] - Complex(1.0)) < 1e-15);
    for (int f = 1; f < e0.layout().size(); ++f) CHECK(std::abs(e0[f]) < 1e-15);
}

TEST_CASE("radius hints propagate conservatively", "[series]") {
    PowerSeries a(1, 4), b(1, 4);
    a[0] = 1.0;
    b[0] = 1.0;
    a.radius_hint = 2.0;
    b.radius_hint = 0.5;
    CHECK(mul(a, b).radius_hint == 0.5);
    CHECK(reciprocal(a).radius_hint == 2.0);

    PowerSeries tiny(1, 4);
    tiny[0] = 1e-12;
    bool warn = false;
    reciprocal(tiny, &warn);
    CHECK(warn);
}

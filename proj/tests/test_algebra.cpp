#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kdv/algebra.hpp"

using namespace kdv;

namespace {
double rel_err(Complex got, Complex want) {
    return std::abs(got - want) / (1.0 + std::abs(want));
}
}  // namespace

TEST_CASE("poly_roots factorable quadratic") {
    // lambda^2 - 3 lambda + 2 = (lambda-1)(lambda-2)
    Poly p({Complex(2.0), Complex(-3.0), Complex(1.0)});
    auto r = poly_roots(p);
    REQUIRE(r.size() == 2);
    CHECK(std::abs(r[0] - 1.0) < 1e-12);
    CHECK(std::abs(r[1] - 2.0) < 1e-12);
}

TEST_CASE("poly_roots linear") {
    // lambda - beta, beta = -1
    Poly p({Complex(1.0), Complex(1.0)});
    auto r = poly_roots(p);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] + 1.0) < 1e-14);
}

TEST_CASE("poly_roots double root from expanded factors") {
    // oracle: expand (lambda-1)^2 (lambda-2) independently
    Poly p = Poly::from_roots({Complex(1.0), Complex(1.0), Complex(2.0)});
    REQUIRE(p.degree() == 3);
    CHECK(std::abs(p.c[0] + 2.0) < 1e-15);  // -2
    CHECK(std::abs(p.c[1] - 5.0) < 1e-15);  // +5
    CHECK(std::abs(p.c[2] + 4.0) < 1e-15);  // -4
    auto r = poly_roots(p);
    REQUIRE(r.size() == 3);
    CHECK(std::abs(r[0] - 1.0) < 1e-7);
    CHECK(std::abs(r[1] - 1.0) < 1e-7);
    CHECK(std::abs(r[2] - 2.0) < 1e-7);
}

TEST_CASE("poly_roots residual contract on random complex polynomials") {
    std::mt19937_64 eng(7);
    std::uniform_real_distribution<double> uni(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = 1 + static_cast<int>(eng() % 6);
        std::vector<Complex> c(deg + 1);
        for (auto& z : c) z = Complex(uni(eng), uni(eng));
        if (std::abs(c.back()) < 0.1) c.back() += Complex(1.0);
        Poly p(c);
        auto roots = poly_roots(p);
        REQUIRE(static_cast<int>(roots.size()) == deg);
        for (const auto& r : roots)
            CHECK(std::abs(p.eval(r)) <= 1e-9 * p.max_abs_coeff());
    }
}

TEST_CASE("poly_roots rejects zero polynomial") {
    CHECK_THROWS_AS(poly_roots(Poly()), DegenerateError);
}

TEST_CASE("laurent expansion of a known rational function") {
    // (x^2+1)/(x-2) = x + 2 + 5/(x-2) = x + 2 + 5/x + 10/x^2 + ...
    Poly num({Complex(1.0), Complex(0.0), Complex(1.0)});
    Poly den({Complex(-2.0), Complex(1.0)});
    auto s = laurent_at_infinity(num, den, 3);
    REQUIRE(s.size() == 5);
    CHECK(rel_err(s[0], Complex(1.0)) < 1e-14);
    CHECK(rel_err(s[1], Complex(2.0)) < 1e-14);
    CHECK(rel_err(s[2], Complex(5.0)) < 1e-14);
    CHECK(rel_err(s[3], Complex(10.0)) < 1e-14);
    CHECK(rel_err(s[4], Complex(20.0)) < 1e-14);
}

TEST_CASE("gauss_legendre constant and polynomial exactness") {
    CHECK(std::abs(gauss_legendre([](double) { return Complex(1.0); }, 4) - 1.0) <
          1e-15);
    // t^2 -> 1/3, exact for n >= 2
    CHECK(std::abs(gauss_legendre([](double t) { return Complex(t * t); }, 2) -
                   Complex(1.0 / 3.0)) < 1e-14);
    // degree 2n-1 exactness: t^7 with n = 4 -> 1/8
    CHECK(std::abs(gauss_legendre([](double t) { return Complex(std::pow(t, 7)); }, 4) -
                   Complex(1.0 / 8.0)) < 1e-13);
}

TEST_CASE("gauss_legendre adaptive on 1/sqrt(t+1)") {
    // oracle: antiderivative 2 sqrt(t+1) gives 2(sqrt 2 - 1)
    const Complex want(2.0 * (std::sqrt(2.0) - 1.0));
    const Complex got = gauss_legendre_adaptive(
        [](double t) { return Complex(1.0 / std::sqrt(t + 1.0)); });
    CHECK(std::abs(got - want) < 1e-10);
}

TEST_CASE("gauss_legendre reports non-finite integrand") {
    CHECK_THROWS_AS(gauss_legendre([](double t) { return Complex(1.0 / (t - t)); }, 4),
                    QuadratureError);
}

TEST_CASE("mat2 determinant and multiplicativity") {
    CHECK(std::abs(Mat2::identity().det() - 1.0) < 1e-15);
    std::mt19937_64 eng(11);
    std::uniform_real_distribution<double> uni(-1.5, 1.5);
    auto rnd = [&]() { return Complex(uni(eng), uni(eng)); };
    for (int trial = 0; trial < 40; ++trial) {
        Mat2 a{rnd(), rnd(), rnd(), rnd()};
        Mat2 b{rnd(), rnd(), rnd(), rnd()};
        const Complex lhs = (a * b).det();
        const Complex rhs = a.det() * b.det();
        CHECK(std::abs(lhs - rhs) <=
              1e-13 * (1.0 + std::abs(a.det()) * std::abs(b.det())));
    }
}

TEST_CASE("commutator norm vanishes for commuting matrices") {
    Mat2 a{Complex(1.0), Complex(2.0), Complex(0.0), Complex(3.0)};
    CHECK(commutator_norm(a, a) == 0.0);
    CHECK(commutator_norm(a, Mat2::identity()) == 0.0);
}

TEST_CASE("interpolate_monic recovers a known polynomial") {
    Poly p = Poly::from_roots({Complex(1.0, 0.5), Complex(-2.0), Complex(0.3)});
    auto fn = [&](Complex x) { return p.eval(x); };
    Poly q = interpolate_monic(fn, 3, 2.5);
    for (int k = 0; k <= 3; ++k) CHECK(std::abs(q.c[k] - p.c[k]) < 1e-10);
}

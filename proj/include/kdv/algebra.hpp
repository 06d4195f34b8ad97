#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "kdv/errors.hpp"

namespace kdv {

using Complex = std::complex<double>;

inline bool is_finite(double x) { return std::isfinite(x); }
inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// Principal square root, argument in (-pi, pi].
inline Complex principal_sqrt(Complex z) { return std::sqrt(z); }

// Principal square root with the branch cut anchored: arguments within
// rounding of the real axis are snapped onto it (positive imaginary side),
// so conserved quantities sitting on the cut cannot flip branch under
// floating-point noise.
inline Complex branch_sqrt(Complex z) {
    if (std::abs(z.imag()) <= 1e-9 * std::abs(z)) z = Complex(z.real(), 0.0);
    return std::sqrt(z);
}

// Bilinear inner product <x,y> = sum x_j y_j (no conjugation).
Complex inner(const std::vector<Complex>& x, const std::vector<Complex>& y);

double norm_inf(const std::vector<Complex>& x);

// ---------------------------------------------------------------------------
// Polynomials, coefficients stored lowest degree first.
// ---------------------------------------------------------------------------

struct Poly {
    std::vector<Complex> c;

    Poly() : c{Complex(0.0)} {}
    explicit Poly(std::vector<Complex> coeffs) : c(std::move(coeffs)) {
        if (c.empty()) c.push_back(Complex(0.0));
    }

    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const;
    Complex leading() const { return c.back(); }
    double max_abs_coeff() const;

    Complex eval(Complex x) const;  // Horner
    Poly derivative() const;

    // Drops exact trailing zeros so the leading coefficient is nonzero.
    void trim();

    static Poly from_roots(const std::vector<Complex>& roots,
                           Complex leading = Complex(1.0));
    // Exact division by (x - root); root must be a root of the polynomial.
    Poly deflate(Complex root) const;
};

Poly operator*(const Poly& a, const Poly& b);
Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(Complex s, const Poly& a);

// All roots with multiplicity via the companion-matrix eigenvalues, with a
// Newton polish. Residual contract: |p(r)| <= 1e-9 * max|coeff| per root.
std::vector<Complex> poly_roots(const Poly& p);

// Coefficients s_d, s_{d-1}, ..., s_{-n_neg} of num/den = sum_j s_j x^j at
// infinity, where d = deg num - deg den >= 0. Returned lowest index last:
// out[k] = s_{d-k}, k = 0 .. d + n_neg.
std::vector<Complex> laurent_at_infinity(const Poly& num, const Poly& den,
                                         int n_neg);

// Monic polynomial of the given degree through degree+1 samples of fn taken
// on a circle; |fn(x_i) - poly(x_i)| is exact up to conditioning.
Poly interpolate_monic(const std::function<Complex(Complex)>& fn, int degree,
                       double radius);

// ---------------------------------------------------------------------------
// Quadrature
// ---------------------------------------------------------------------------

// Gauss-Legendre nodes/weights on [-1,1]; cached per n.
void gauss_legendre_rule(int n, std::vector<double>& nodes,
                         std::vector<double>& weights);

// n_nodes-point estimate of integral over [0,1].
Complex gauss_legendre(const std::function<Complex(double)>& f, int n_nodes);

// Doubles n starting at n0 until successive estimates differ by < 1e-12.
Complex gauss_legendre_adaptive(const std::function<Complex(double)>& f,
                                int n0 = 8);

// ---------------------------------------------------------------------------
// 2x2 complex matrices
// ---------------------------------------------------------------------------

struct Mat2 {
    Complex m11{0.0}, m12{0.0}, m21{0.0}, m22{0.0};

    Complex det() const { return m11 * m22 - m12 * m21; }
    Complex trace() const { return m11 + m22; }
    double max_abs() const;

    static Mat2 identity() { return {Complex(1.0), Complex(0.0), Complex(0.0), Complex(1.0)}; }
};

Mat2 operator*(const Mat2& a, const Mat2& b);
Mat2 operator+(const Mat2& a, const Mat2& b);
Mat2 operator-(const Mat2& a, const Mat2& b);
Mat2 operator*(Complex s, const Mat2& a);

// max-abs norm of AB - BA
double commutator_norm(const Mat2& a, const Mat2& b);

}  // namespace kdv

#include "kdv/algebra.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <map>
#include <mutex>
#include <numbers>

namespace kdv {

Complex inner(const std::vector<Complex>& x, const std::vector<Complex>& y) {
    Complex s(0.0);
    for (std::size_t j = 0; j < x.size(); ++j) s += x[j] * y[j];
    return s;
}

double norm_inf(const std::vector<Complex>& x) {
    double m = 0.0;
    for (const auto& z : x) m = std::max(m, std::abs(z));
    return m;
}

// ---------------------------------------------------------------------------
// Poly
// ---------------------------------------------------------------------------

bool Poly::is_zero() const {
    for (const auto& z : c)
        if (z != Complex(0.0)) return false;
    return true;
}

double Poly::max_abs_coeff() const {
    double m = 0.0;
    for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
}

Complex Poly::eval(Complex x) const {
    Complex r(0.0);
    for (int k = degree(); k >= 0; --k) r = r * x + c[k];
    return r;
}

Poly Poly::derivative() const {
    if (degree() == 0) return Poly();
    std::vector<Complex> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = double(k) * c[k];
    return Poly(std::move(d));
}

void Poly::trim() {
    while (c.size() > 1 && c.back() == Complex(0.0)) c.pop_back();
}

Poly Poly::from_roots(const std::vector<Complex>& roots, Complex leading) {
    std::vector<Complex> c{leading};  // lowest degree first throughout
    for (const auto& r : roots) {
        std::vector<Complex> nc(c.size() + 1, Complex(0.0));
        for (std::size_t k = 0; k < c.size(); ++k) {
            nc[k + 1] += c[k];
            nc[k] -= r * c[k];
        }
        c = std::move(nc);
    }
    return Poly(std::move(c));
}

Poly Poly::deflate(Complex root) const {
    const int n = degree();
    if (n < 1) throw DegenerateError("deflate: constant polynomial");
    std::vector<Complex> q(n);
    Complex carry = c[n];
    for (int k = n - 1; k >= 0; --k) {
        q[k] = carry;
        carry = c[k] + root * carry;
    }
    return Poly(std::move(q));
}

Poly operator*(const Poly& a, const Poly& b) {
    std::vector<Complex> c(a.c.size() + b.c.size() - 1, Complex(0.0));
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) c[i + j] += a.c[i] * b.c[j];
    return Poly(std::move(c));
}

Poly operator+(const Poly& a, const Poly& b) {
    std::vector<Complex> c(std::max(a.c.size(), b.c.size()), Complex(0.0));
    for (std::size_t i = 0; i < a.c.size(); ++i) c[i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) c[i] += b.c[i];
    return Poly(std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (Complex(-1.0) * b); }

Poly operator*(Complex s, const Poly& a) {
    std::vector<Complex> c(a.c);
    for (auto& z : c) z *= s;
    return Poly(std::move(c));
}

std::vector<Complex> poly_roots(const Poly& p_in) {
    Poly p = p_in;
    p.trim();
    if (p.is_zero()) throw DegenerateError("poly_roots: zero polynomial");
    const int n = p.degree();
    if (n < 1) throw DegenerateError("poly_roots: degree zero");
    for (const auto& z : p.c)
        if (!is_finite(z)) throw DegenerateError("poly_roots: non-finite coefficient");

    std::vector<Complex> roots;
    if (n == 1) {
        roots.push_back(-p.c[0] / p.c[1]);
    } else if (n == 2) {
        // stable quadratic formula
        const Complex a = p.c[2], b = p.c[1], c = p.c[0];
        const Complex d = principal_sqrt(b * b - 4.0 * a * c);
        const Complex q = (std::abs(b - d) > std::abs(b + d)) ? (b - d) : (b + d);
        if (std::abs(q) == 0.0) {
            roots = {Complex(0.0), Complex(0.0)};
        } else {
            roots = {-q / (2.0 * a), -2.0 * c / q};
        }
    } else {
        Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
        for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
        for (int i = 0; i < n; ++i) companion(i, n - 1) = -p.c[i] / p.c[n];
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(companion, false);
        for (int i = 0; i < n; ++i) roots.push_back(es.eigenvalues()(i));
    }

    // Newton polish; skipped automatically near multiple roots where p' ~ 0.
    const Poly dp = p.derivative();
    for (auto& r : roots) {
        for (int it = 0; it < 3; ++it) {
            const Complex f = p.eval(r), df = dp.eval(r);
            if (std::abs(df) < 1e-12 * (1.0 + std::abs(f))) break;
            const Complex step = f / df;
            if (!is_finite(step) || std::abs(step) > 1.0 + std::abs(r)) break;
            r -= step;
        }
    }
    std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

std::vector<Complex> laurent_at_infinity(const Poly& num, const Poly& den,
                                         int n_neg) {
    Poly n = num, d = den;
    n.trim();
    d.trim();
    const int dn = n.degree(), dd = d.degree();
    if (d.is_zero()) throw DegenerateError("laurent_at_infinity: zero denominator");
    if (dn < dd) throw DegenerateError("laurent_at_infinity: num degree below den degree");
    const int top = dn - dd;
    std::vector<Complex> s(static_cast<std::size_t>(top + n_neg + 1), Complex(0.0));
    auto num_coeff = [&](int k) -> Complex {
        return (k >= 0 && k <= dn) ? n.c[k] : Complex(0.0);
    };
    // match coefficients of num = den * (sum_j s_j x^j) from the top down
    for (int i = 0; i <= top + n_neg; ++i) {
        const int j = top - i;       // exponent being solved for
        const int k = j + dd;        // x^k coefficient equation
        Complex acc = num_coeff(k);
        for (int jj = top; jj > j; --jj) {
            const int di = k - jj;
            if (di >= 0 && di <= dd) acc -= d.c[di] * s[top - jj];
        }
        s[i] = acc / d.c[dd];
    }
    return s;
}

Poly interpolate_monic(const std::function<Complex(Complex)>& fn, int degree,
                       double radius) {
    if (degree == 0) return Poly({Complex(1.0)});
    const int m = degree + 1;
    Eigen::MatrixXcd V(m, degree);
    Eigen::VectorXcd rhs(m);
    for (int i = 0; i < m; ++i) {
        const double th = 2.0 * std::numbers::pi * (i + 0.5) / m;
        const Complex x = radius * Complex(std::cos(th), std::sin(th));
        Complex pw(1.0);
        for (int k = 0; k < degree; ++k) {
            V(i, k) = pw;
            pw *= x;
        }
        rhs(i) = fn(x) - pw;  // pw = x^degree, the monic term
    }
    Eigen::VectorXcd sol = V.colPivHouseholderQr().solve(rhs);
    std::vector<Complex> c(static_cast<std::size_t>(degree + 1));
    for (int k = 0; k < degree; ++k) c[k] = sol(k);
    c[degree] = Complex(1.0);
    return Poly(std::move(c));
}

// ---------------------------------------------------------------------------
// Gauss-Legendre
// ---------------------------------------------------------------------------

void gauss_legendre_rule(int n, std::vector<double>& nodes,
                         std::vector<double>& weights) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mtx;
    {
        std::lock_guard<std::mutex> lk(mtx);
        auto it = cache.find(n);
        if (it != cache.end()) {
            nodes = it->second.first;
            weights = it->second.second;
            return;
        }
    }
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    std::lock_guard<std::mutex> lk(mtx);
    cache[n] = {nodes, weights};
}

Complex gauss_legendre(const std::function<Complex(double)>& f, int n_nodes) {
    if (n_nodes < 2) throw DegenerateError("gauss_legendre: n_nodes must be >= 2");
    std::vector<double> x, w;
    gauss_legendre_rule(n_nodes, x, w);
    Complex acc(0.0);
    for (int i = 0; i < n_nodes; ++i) {
        const double t = 0.5 * (x[i] + 1.0);
        const Complex v = f(t);
        if (!is_finite(v))
            throw QuadratureError("gauss_legendre: non-finite integrand", Complex(t));
        acc += 0.5 * w[i] * v;
    }
    return acc;
}

Complex gauss_legendre_adaptive(const std::function<Complex(double)>& f, int n0) {
    Complex prev = gauss_legendre(f, n0);
    for (int n = 2 * n0; n <= 4096; n *= 2) {
        const Complex cur = gauss_legendre(f, n);
        if (std::abs(cur - prev) < 1e-12) return cur;
        prev = cur;
    }
    return prev;
}

// ---------------------------------------------------------------------------
// Mat2
// ---------------------------------------------------------------------------

double Mat2::max_abs() const {
    return std::max(std::max(std::abs(m11), std::abs(m12)),
                    std::max(std::abs(m21), std::abs(m22)));
}

Mat2 operator*(const Mat2& a, const Mat2& b) {
    return {a.m11 * b.m11 + a.m12 * b.m21, a.m11 * b.m12 + a.m12 * b.m22,
            a.m21 * b.m11 + a.m22 * b.m21, a.m21 * b.m12 + a.m22 * b.m22};
}

Mat2 operator+(const Mat2& a, const Mat2& b) {
    return {a.m11 + b.m11, a.m12 + b.m12, a.m21 + b.m21, a.m22 + b.m22};
}

Mat2 operator-(const Mat2& a, const Mat2& b) {
    return {a.m11 - b.m11, a.m12 - b.m12, a.m21 - b.m21, a.m22 - b.m22};
}

Mat2 operator*(Complex s, const Mat2& a) {
    return {s * a.m11, s * a.m12, s * a.m21, s * a.m22};
}

double commutator_norm(const Mat2& a, const Mat2& b) {
    return (a * b - b * a).max_abs();
}

}  // namespace kdv

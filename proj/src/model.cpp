#include "kdv/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace kdv {

std::string model_name(ModelId m) {
    switch (m) {
        case ModelId::LpKdV: return "lpkdv";
        case ModelId::LpmKdV: return "lpmkdv";
        case ModelId::LSKdV: return "lskdv";
    }
    return "?";
}

ModelId model_from_name(const std::string& name) {
    if (name == "lpkdv") return ModelId::LpKdV;
    if (name == "lpmkdv") return ModelId::LpmKdV;
    if (name == "lskdv") return ModelId::LSKdV;
    throw ConfigError("unknown model '" + name + "'");
}

void Spectrum::validate(ModelId model) const {
    if (alpha.empty()) throw ConfigError("spectrum: empty");
    for (const auto& a : alpha)
        if (!is_finite(a)) throw ConfigError("spectrum: non-finite eigenvalue");
    const int n = size();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Complex di = is_zeta_model(model)
                                   ? alpha[i] * alpha[i] - alpha[j] * alpha[j]
                                   : alpha[i] - alpha[j];
            if (std::abs(di) < 1e-12)
                throw ConfigError("spectrum: eigenvalues not distinct");
        }
        if (is_zeta_model(model) && std::abs(alpha[i]) < 1e-12)
            throw ConfigError("spectrum: zero eigenvalue");
    }
}

double PhasePoint::norm_inf() const {
    return std::max(kdv::norm_inf(p), kdv::norm_inf(q));
}

bool PhasePoint::finite() const {
    for (const auto& z : p)
        if (!is_finite(z)) return false;
    for (const auto& z : q)
        if (!is_finite(z)) return false;
    return true;
}

namespace models {

namespace {

// Weighted pole sums sum_j x_j y_j / (lambda - alpha_j) etc.
Complex pole_sum(const std::vector<Complex>& num, const std::vector<Complex>& poles,
                 Complex at) {
    Complex s(0.0);
    for (std::size_t j = 0; j < num.size(); ++j) {
        const Complex d = at - poles[j];
        if (std::abs(d) < 1e-13)
            throw PoleError("spectral parameter on the spectrum");
        s += num[j] / d;
    }
    return s;
}

std::vector<Complex> zeta_poles(const Spectrum& spec) {
    std::vector<Complex> z(spec.alpha.size());
    for (std::size_t j = 0; j < z.size(); ++j) z[j] = spec.alpha[j] * spec.alpha[j];
    return z;
}

std::vector<Complex> hadamard(const std::vector<Complex>& x,
                              const std::vector<Complex>& y) {
    std::vector<Complex> r(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) r[j] = x[j] * y[j];
    return r;
}

Complex sqrt_qq(const PhasePoint& x) {
    const Complex qq = inner(x.q, x.q);
    if (std::abs(qq) < 1e-12 * (1.0 + norm_inf(x.q)))
        throw DegenerateError("<q,q> = 0");
    return principal_sqrt(qq);
}

}  // namespace

Complex q_form(ModelId model, const Spectrum& spec, const std::vector<Complex>& x,
               const std::vector<Complex>& y, Complex lambda) {
    if (is_zeta_model(model))
        return pole_sum(hadamard(x, y), zeta_poles(spec), lambda * lambda);
    return pole_sum(hadamard(x, y), spec.alpha, lambda);
}

Mat2 lax_matrix(ModelId model, const Spectrum& spec, const PhasePoint& x,
                Complex lambda) {
    const auto& a = spec.alpha;
    switch (model) {
        case ModelId::LpKdV: {
            const Complex v = sqrt_qq(x);
            const Complex qpq = pole_sum(hadamard(x.p, x.q), a, lambda);
            const Complex qpp = pole_sum(hadamard(x.p, x.p), a, lambda);
            const Complex qqq = pole_sum(hadamard(x.q, x.q), a, lambda);
            Mat2 L;
            L.m11 = v + qpq;
            L.m12 = -lambda - qpp;
            L.m21 = Complex(1.0) + qqq;
            L.m22 = -L.m11;
            return L;
        }
        case ModelId::LpmKdV: {
            const Complex zeta = lambda * lambda;
            const auto zp = zeta_poles(spec);
            std::vector<Complex> a2pq(a.size()), app(a.size()), aqq(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) {
                a2pq[j] = a[j] * a[j] * x.p[j] * x.q[j];
                app[j] = a[j] * x.p[j] * x.p[j];
                aqq[j] = a[j] * x.q[j] * x.q[j];
            }
            Mat2 L;
            L.m11 = Complex(0.5) + pole_sum(a2pq, zp, zeta);
            L.m12 = -lambda * pole_sum(app, zp, zeta);
            L.m21 = lambda * pole_sum(aqq, zp, zeta);
            L.m22 = -L.m11;
            return L;
        }
        case ModelId::LSKdV: {
            const Complex zeta = lambda * lambda;
            const auto zp = zeta_poles(spec);
            std::vector<Complex> pq(a.size()), app(a.size()), aqq(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) {
                pq[j] = x.p[j] * x.q[j];
                app[j] = a[j] * x.p[j] * x.p[j];
                aqq[j] = a[j] * x.q[j] * x.q[j];
            }
            Mat2 L;
            L.m11 = 0.5 * lambda + lambda * pole_sum(pq, zp, zeta);
            L.m12 = -inner(x.p, x.q) - pole_sum(app, zp, zeta);
            L.m21 = Complex(1.0) + pole_sum(aqq, zp, zeta);
            L.m22 = -L.m11;
            return L;
        }
    }
    throw ConfigError("lax_matrix: bad model");
}

Mat2 darboux_matrix(ModelId model, Complex beta, const DarbouxParams& params,
                    Complex lambda) {
    switch (model) {
        case ModelId::LpKdV: {
            const Complex a = params.a, b = params.b;
            return {a, -lambda + beta + a * b, Complex(1.0), b};
        }
        case ModelId::LpmKdV: {
            const Complex a = params.a;
            if (std::abs(a) == 0.0) throw DegenerateError("darboux: a = 0");
            return {lambda * a, beta, beta, lambda / a};
        }
        case ModelId::LSKdV: {
            const Complex a = params.a, s = params.s;
            if (std::abs(a) == 0.0 || std::abs(s) == 0.0)
                throw DegenerateError("darboux: degenerate (a, s)");
            return {lambda * a, beta * s, beta / s, lambda / a};
        }
    }
    throw ConfigError("darboux_matrix: bad model");
}

Mat2 continuous_matrix(ModelId model, const Spectrum& spec, const PhasePoint& x,
                       Complex lambda) {
    switch (model) {
        case ModelId::LpKdV: {
            const Complex v = sqrt_qq(x);
            const Complex w = inner(x.p, x.q) / v;
            return {v, -lambda + w, Complex(1.0), -v};
        }
        case ModelId::LpmKdV: {
            // (v, w) read off the canonical-equation matrix: v = -<Ap,p>, w = <Aq,q>
            std::vector<Complex> ap(spec.alpha.size()), aq(spec.alpha.size());
            for (std::size_t j = 0; j < ap.size(); ++j) {
                ap[j] = spec.alpha[j] * x.p[j];
                aq[j] = spec.alpha[j] * x.q[j];
            }
            const Complex v = -inner(ap, x.p);
            const Complex w = inner(aq, x.q);
            const Complex l2 = 0.5 * lambda * lambda;
            return {l2, lambda * v, lambda * w, -l2};
        }
        case ModelId::LSKdV: {
            std::vector<Complex> aq(spec.alpha.size());
            for (std::size_t j = 0; j < aq.size(); ++j) aq[j] = spec.alpha[j] * x.q[j];
            const Complex v = inner(x.p, x.q);
            const Complex w = 0.5 * inner(aq, x.q);
            const Complex d = -0.5 * lambda * lambda + v + w;
            return {d, lambda * v, -lambda, -d};
        }
    }
    throw ConfigError("continuous_matrix: bad model");
}

Complex generating_function(ModelId model, const Spectrum& spec,
                            const PhasePoint& x, Complex lambda) {
    const auto& a = spec.alpha;
    switch (model) {
        case ModelId::LpKdV: {
            // sqrt(0) = 0 is fine here; only the Lax entries need <q,q> != 0
            const Complex v = principal_sqrt(inner(x.q, x.q));
            const Complex qpq = pole_sum(hadamard(x.p, x.q), a, lambda);
            const Complex qpp = pole_sum(hadamard(x.p, x.p), a, lambda);
            const Complex qqq = pole_sum(hadamard(x.q, x.q), a, lambda);
            std::vector<Complex> aqq(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) aqq[j] = a[j] * x.q[j] * x.q[j];
            const Complex qaqq = pole_sum(aqq, a, lambda);
            return lambda + qaqq + qpp - 2.0 * v * qpq + qpp * qqq - qpq * qpq;
        }
        case ModelId::LpmKdV: {
            const Complex zeta = lambda * lambda;
            const auto zp = zeta_poles(spec);
            std::vector<Complex> a2pq(a.size()), app(a.size()), aqq(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) {
                a2pq[j] = a[j] * a[j] * x.p[j] * x.q[j];
                app[j] = a[j] * x.p[j] * x.p[j];
                aqq[j] = a[j] * x.q[j] * x.q[j];
            }
            const Complex l11 = Complex(0.5) + pole_sum(a2pq, zp, zeta);
            return -l11 * l11 + zeta * pole_sum(app, zp, zeta) * pole_sum(aqq, zp, zeta);
        }
        case ModelId::LSKdV: {
            const Complex zeta = lambda * lambda;
            const auto zp = zeta_poles(spec);
            std::vector<Complex> pq(a.size()), app(a.size()), aqq(a.size());
            for (std::size_t j = 0; j < a.size(); ++j) {
                pq[j] = x.p[j] * x.q[j];
                app[j] = a[j] * x.p[j] * x.p[j];
                aqq[j] = a[j] * x.q[j] * x.q[j];
            }
            const Complex qpq = pole_sum(pq, zp, zeta);
            const Complex qapp = pole_sum(app, zp, zeta);
            const Complex qaqq = pole_sum(aqq, zp, zeta);
            const Complex spq = inner(x.p, x.q);
            return -zeta * (Complex(0.25) + qpq * qpq + qpq) +
                   spq * (Complex(1.0) + qaqq) + qapp * (Complex(1.0) + qaqq);
        }
    }
    throw ConfigError("generating_function: bad model");
}

Poly alpha_poly(ModelId model, const Spectrum& spec) {
    if (is_zeta_model(model)) return Poly::from_roots(zeta_poles(spec));
    return Poly::from_roots(spec.alpha);
}

Poly fit_numerator(ModelId model, const Spectrum& spec, const PhasePoint& x) {
    const int n = spec.size();
    const bool zeta = is_zeta_model(model);
    const int deg = (model == ModelId::LpmKdV) ? n : n + 1;
    double min_pole = 1e300;
    for (const auto& al : spec.alpha)
        min_pole = std::min(min_pole, zeta ? std::abs(al * al) : std::abs(al));
    // sampling circle well inside the spectrum keeps the monomial basis and
    // the sample magnitudes balanced
    const double radius = std::clamp(0.55 * min_pole, 0.5, 2.0);
    const Poly alpha = alpha_poly(model, spec);

    const int n_samples = std::max(2 * n + 2, 12);
    // Roots-of-unity samples make the scaled Vandermonde columns exactly
    // orthogonal: the least-squares solve reduces to one inner product.
    std::vector<Complex> zs(n_samples), rhs(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double th = 2.0 * std::numbers::pi * (i + 0.37) / n_samples;
        const Complex z = radius * Complex(std::cos(th), std::sin(th));
        zs[i] = z;
        const Complex lam = zeta ? principal_sqrt(z) : z;
        const Complex f = generating_function(model, spec, x, lam);
        rhs[i] = zeta ? (-4.0 * f * alpha.eval(z)) : (f * alpha.eval(z));
    }
    std::vector<Complex> coeffs(static_cast<std::size_t>(deg + 1));
    coeffs[deg] = Complex(1.0);
    for (int i = 0; i < n_samples; ++i) {
        Complex pw(1.0);
        for (int k = 0; k < deg; ++k) pw *= zs[i] / radius;
        rhs[i] -= pw * std::pow(radius, deg);  // subtract the monic term z^deg
    }
    for (int k = 0; k < deg; ++k) {
        Complex acc(0.0);
        for (int i = 0; i < n_samples; ++i) {
            Complex wk(1.0);
            const Complex w = zs[i] / radius;
            for (int kk = 0; kk < k; ++kk) wk *= w;
            acc += std::conj(wk) * rhs[i];
        }
        coeffs[k] = acc / (double(n_samples) * std::pow(radius, k));
    }
    Poly num(std::move(coeffs));

    // Validate the fit at off-grid probes; a miss signals an upstream bug.
    for (int i = 0; i < 3; ++i) {
        const double th = 2.0 * std::numbers::pi * (i + 0.11) / 3.1;
        const Complex z = 0.63 * radius * Complex(std::cos(th), std::sin(th));
        const Complex lam = zeta ? principal_sqrt(z) : z;
        const Complex f = generating_function(model, spec, x, lam);
        const Complex fit = zeta ? (-0.25 * num.eval(z) / alpha.eval(z))
                                 : (num.eval(z) / alpha.eval(z));
        if (std::abs(fit - f) > 1e-7 * (1.0 + std::abs(f)))
            throw FitError("fit_numerator: sampled F_lambda inconsistent with rational form");
    }
    return num;
}

std::vector<Complex> integrals(ModelId model, const Spectrum& spec,
                               const PhasePoint& x) {
    const int n = spec.size();
    const Poly alpha = alpha_poly(model, spec);
    const Poly num = fit_numerator(model, spec, x);
    switch (model) {
        case ModelId::LpKdV: {
            // F = Lam/alpha = lambda + sum_{j>=1} F_j lambda^{-j}
            const auto s = laurent_at_infinity(num, alpha, n);  // s_1, s_0, s_{-1}..
            std::vector<Complex> f(static_cast<std::size_t>(n));
            for (int j = 1; j <= n; ++j) f[j - 1] = s[static_cast<std::size_t>(1 + j)];
            return f;
        }
        case ModelId::LpmKdV: {
            // F = -Z/(4 alpha) = -1/4 + sum_{j>=1} F_j zeta^{-j}; F_0 = F(0)
            const auto s = laurent_at_infinity(num, alpha, std::max(n - 1, 0));
            std::vector<Complex> f(static_cast<std::size_t>(n));
            f[0] = -0.25 * num.eval(Complex(0.0)) / alpha.eval(Complex(0.0));
            for (int j = 1; j <= n - 1; ++j)
                f[j] = -0.25 * s[static_cast<std::size_t>(j)];
            return f;
        }
        case ModelId::LSKdV: {
            // F = -Z/(4 alpha) = -zeta/4 + sum_{j>=1} F_j zeta^{-j}
            const auto s = laurent_at_infinity(num, alpha, n);
            std::vector<Complex> f(static_cast<std::size_t>(n));
            for (int j = 1; j <= n; ++j) f[j - 1] = -0.25 * s[static_cast<std::size_t>(1 + j)];
            return f;
        }
    }
    throw ConfigError("integrals: bad model");
}

Complex hamiltonian_h1(ModelId model, const Spectrum& spec, const PhasePoint& x) {
    const auto& al = spec.alpha;
    const int n = spec.size();
    switch (model) {
        case ModelId::LpKdV: {
            const Complex v = sqrt_qq(x);
            Complex aqq(0.0), pp(0.0);
            for (int j = 0; j < n; ++j) {
                aqq += al[j] * x.q[j] * x.q[j];
                pp += x.p[j] * x.p[j];
            }
            return 0.5 * (aqq + pp) - v * inner(x.p, x.q);
        }
        case ModelId::LpmKdV: {
            Complex app(0.0), aqq(0.0), a2pq(0.0);
            for (int j = 0; j < n; ++j) {
                app += al[j] * x.p[j] * x.p[j];
                aqq += al[j] * x.q[j] * x.q[j];
                a2pq += al[j] * al[j] * x.p[j] * x.q[j];
            }
            return 0.5 * (app * aqq - a2pq);
        }
        case ModelId::LSKdV: {
            Complex app(0.0), aqq(0.0), a2pq(0.0);
            for (int j = 0; j < n; ++j) {
                app += al[j] * x.p[j] * x.p[j];
                aqq += al[j] * x.q[j] * x.q[j];
                a2pq += al[j] * al[j] * x.p[j] * x.q[j];
            }
            const Complex pq = inner(x.p, x.q);
            // H1 = -F1/2 with F1 = -<p,q>^2 - <A^2 p,q> + <Ap,p> + <p,q><Aq,q>
            return 0.5 * (pq * pq + a2pq - app - pq * aqq);
        }
    }
    throw ConfigError("hamiltonian_h1: bad model");
}

std::vector<Complex> shift_normalizers(ModelId model, const Spectrum& spec,
                                       Complex beta) {
    std::vector<Complex> n(spec.alpha.size());
    for (std::size_t j = 0; j < n.size(); ++j) {
        const Complex d = is_zeta_model(model)
                              ? spec.alpha[j] * spec.alpha[j] - beta * beta
                              : spec.alpha[j] - beta;
        if (std::abs(d) < 1e-12)
            throw DegenerateError("beta collides with the spectrum");
        n[j] = 1.0 / principal_sqrt(d);
    }
    return n;
}

Complex constraint_polynomial(ModelId model, const Spectrum& spec, Complex beta,
                              const DarbouxParams& params, const PhasePoint& x) {
    const Mat2 L = lax_matrix(model, spec, x, beta);
    switch (model) {
        case ModelId::LpKdV: {
            const Complex b = params.b;
            return L.m21 * b * b + 2.0 * L.m11 * b - L.m12;
        }
        case ModelId::LpmKdV: {
            const Complex a = params.a;
            return a * a * L.m12 - 2.0 * a * L.m11 - L.m21;
        }
        case ModelId::LSKdV: {
            const Complex t = params.a * params.a - 1.0;
            return t * t * L.m12 - 2.0 * beta * t * L.m11 - beta * beta * L.m21;
        }
    }
    throw ConfigError("constraint_polynomial: bad model");
}

DarbouxParams potential_constraint(ModelId model, const Spectrum& spec,
                                   Complex beta, BranchSign sigma,
                                   const PhasePoint& x) {
    const double sg = static_cast<double>(sigma.sigma);
    const Poly alpha = alpha_poly(model, spec);
    DarbouxParams out;
    out.model = model;
    switch (model) {
        case ModelId::LpKdV: {
            const Complex v = sqrt_qq(x);
            const Complex qpq = q_form(model, spec, x.p, x.q, beta);
            const Complex qqq = q_form(model, spec, x.q, x.q, beta);
            const Complex ab = alpha.eval(beta);
            const Complex f_beta = generating_function(model, spec, x, beta);
            // curve is xi^2 = -R(lambda), -R(beta) = -F_beta alpha(beta)^2
            const Complex xi = branch_sqrt(-f_beta * ab * ab);
            const Complex den = Complex(1.0) + qqq;
            const Complex base = -v - qpq;
            if (std::abs(xi / ab) <= 1e-12 * (1.0 + std::abs(base)))
                throw BranchCollisionError("lpkdv constraint: branch point, sigma roots coincide");
            if (denominator_zero(den, base))
                throw DegenerateError("lpkdv constraint: 1 + Q_beta(q,q) = 0");
            out.b = (base + sg * xi / ab) / den;
            // order fixed by the defining relations: b, then q-tilde, then a
            const auto nrm = shift_normalizers(model, spec, beta);
            std::vector<Complex> qt(x.q.size());
            for (std::size_t j = 0; j < qt.size(); ++j)
                qt[j] = nrm[j] * (x.p[j] + out.b * x.q[j]);
            const Complex vt = principal_sqrt(inner(qt, qt));
            out.a = out.b + vt + v;
            return out;
        }
        case ModelId::LpmKdV: {
            const Complex zeta = beta * beta;
            std::vector<Complex> ap(x.p.size());
            for (std::size_t j = 0; j < ap.size(); ++j) ap[j] = spec.alpha[j] * x.p[j];
            const Complex qapp = q_form(model, spec, ap, x.p, beta);
            std::vector<Complex> a2p(x.p.size());
            for (std::size_t j = 0; j < a2p.size(); ++j)
                a2p[j] = spec.alpha[j] * spec.alpha[j] * x.p[j];
            const Complex qa2pq = q_form(model, spec, a2p, x.q, beta);
            const Complex az = alpha.eval(zeta);
            const Complex f_beta = generating_function(model, spec, x, beta);
            const Complex sqrtR = branch_sqrt(-4.0 * f_beta * az * az);
            const Complex base = Complex(0.5) + qa2pq;
            const Complex den = beta * qapp;
            if (std::abs(sqrtR / (2.0 * az)) <= 1e-12 * (1.0 + std::abs(base)))
                throw BranchCollisionError("lpmkdv constraint: branch point");
            if (denominator_zero(den, base))
                throw DegenerateError("lpmkdv constraint: Q_beta(Ap,p) = 0");
            out.a = -(base + sg * sqrtR / (2.0 * az)) / den;
            if (std::abs(out.a) < 1e-12)
                throw DegenerateError("lpmkdv constraint: a = 0");
            return out;
        }
        case ModelId::LSKdV: {
            const Complex zeta = beta * beta;
            std::vector<Complex> ap(x.p.size());
            for (std::size_t j = 0; j < ap.size(); ++j) ap[j] = spec.alpha[j] * x.p[j];
            const Complex qapp = q_form(model, spec, ap, x.p, beta);
            const Complex qpq = q_form(model, spec, x.p, x.q, beta);
            const Complex az = alpha.eval(zeta);
            const Complex f_beta = generating_function(model, spec, x, beta);
            // R(zeta) = -4 zeta alpha(zeta)^2 F
            const Complex sqrtR = branch_sqrt(-4.0 * zeta * az * az * f_beta);
            const Complex den = inner(x.p, x.q) + qapp;
            const Complex base = zeta * (Complex(0.5) + qpq);
            if (std::abs(sqrtR / (2.0 * az)) <= 1e-12 * (1.0 + std::abs(base)))
                throw BranchCollisionError("lskdv constraint: branch point");
            if (denominator_zero(den, base))
                throw DegenerateError("lskdv constraint: <p,q> + Q_beta(Ap,p) = 0");
            const Complex rhs = -(base + sg * sqrtR / (2.0 * az)) / den;
            const Complex a2 = Complex(1.0) + rhs;
            if (std::abs(a2) < 1e-10 || std::abs(a2 - 1.0) < 1e-10)
                throw DegenerateError("lskdv constraint: a^2 in {0,1}");
            out.a = principal_sqrt(a2);
            out.s = beta / (out.a - 1.0 / out.a);
            return out;
        }
    }
    throw ConfigError("potential_constraint: bad model");
}

}  // namespace models
}  // namespace kdv

#pragma once

#include <string>
#include <vector>

#include "kdv/algebra.hpp"

namespace kdv {

enum class ModelId { LpKdV, LpmKdV, LSKdV };

std::string model_name(ModelId m);
ModelId model_from_name(const std::string& name);

// Whether the model's Lax structure lives on zeta = lambda^2.
inline bool is_zeta_model(ModelId m) { return m != ModelId::LpKdV; }

// Eigenvalue spectrum alpha_1..alpha_N of A = diag(alpha).
struct Spectrum {
    std::vector<Complex> alpha;

    int size() const { return static_cast<int>(alpha.size()); }
    // LpKdV: alpha_j pairwise distinct.
    // LpmKdV/LSKdV: alpha_j^2 pairwise distinct and nonzero.
    void validate(ModelId model) const;
};

// Canonical coordinates (p, q), N complex numbers each.
struct PhasePoint {
    std::vector<Complex> p, q;

    int size() const { return static_cast<int>(p.size()); }
    double norm_inf() const;
    bool finite() const;
};

// Discrete potentials entering D^(beta).
// LpKdV uses (a, b); LpmKdV uses (a); LSKdV uses (a, s) with s = beta/(a - 1/a)
// always derived, never independent.
struct DarbouxParams {
    ModelId model = ModelId::LpKdV;
    Complex a{0.0};
    Complex b{0.0};
    Complex s{0.0};
};

// The sign in front of the sqrt(R) term of the constraint quadratics; +1 is
// the principal branch of sqrt(-R(beta)) (LpKdV) or sqrt(R(beta^2)).
struct BranchSign {
    int sigma = +1;
    BranchSign() = default;
    explicit BranchSign(int s) : sigma(s) {
        if (s != 1 && s != -1) throw ConfigError("BranchSign: sigma must be +1 or -1");
    }
};

namespace models {

// A denominator counts as zero when |den| <= 1e-12 * (1 + |num|).
inline bool denominator_zero(Complex den, Complex num) {
    return std::abs(den) <= 1e-12 * (1.0 + std::abs(num));
}

// Q_lambda(x, y) = <(lambda - A)^{-1} x, y> for LpKdV and
// <(lambda^2 - A^2)^{-1} x, y> for the zeta models, assembled from the
// weights w_j = x_j y_j. Throws PoleError on the spectrum.
Complex q_form(ModelId model, const Spectrum& spec, const std::vector<Complex>& x,
               const std::vector<Complex>& y, Complex lambda);

// 2x2 traceless Lax matrix L(lambda; p, q).
Mat2 lax_matrix(ModelId model, const Spectrum& spec, const PhasePoint& x,
                Complex lambda);

// Darboux matrix D^(beta)(lambda) with det lambda - beta (LpKdV) or
// lambda^2 - beta^2 (LpmKdV, LSKdV).
Mat2 darboux_matrix(ModelId model, Complex beta, const DarbouxParams& params,
                    Complex lambda);

// Continuous spectral matrix U/V/W with potentials replaced by their
// squared-eigenfunction expressions.
Mat2 continuous_matrix(ModelId model, const Spectrum& spec, const PhasePoint& x,
                       Complex lambda);

// F_lambda = det L(lambda; p, q), evaluated from the closed-form expansion.
Complex generating_function(ModelId model, const Spectrum& spec,
                            const PhasePoint& x, Complex lambda);

// Monic numerator of the rational form of F_lambda, fitted from samples:
// LpKdV: F = Lam(lambda)/alpha(lambda), Lam monic of degree N+1.
// LpmKdV: F = -Z(zeta)/(4 alpha(zeta)), Z monic of degree N.
// LSKdV: F = -Z(zeta)/(4 alpha(zeta)), Z monic of degree N+1.
Poly fit_numerator(ModelId model, const Spectrum& spec, const PhasePoint& x);

// Denominator polynomial alpha(lambda) resp. alpha(zeta).
Poly alpha_poly(ModelId model, const Spectrum& spec);

// Conserved quantities from the expansion of F_lambda:
// LpKdV: F_1..F_N; LpmKdV: F_0..F_{N-1} with F_0 = F_lambda(0);
// LSKdV: F_1..F_N.
std::vector<Complex> integrals(ModelId model, const Spectrum& spec,
                               const PhasePoint& x);

// First Hamiltonian generating the canonical continuous flow.
Complex hamiltonian_h1(ModelId model, const Spectrum& spec, const PhasePoint& x);

// Discrete potentials f_beta(p, q) solving the constraint quadratic, branch
// selected by sigma.
DarbouxParams potential_constraint(ModelId model, const Spectrum& spec,
                                   Complex beta, BranchSign sigma,
                                   const PhasePoint& x);

// Constraint quadratic P^(beta) evaluated at the given params (a residual
// check oracle; zero for params returned by potential_constraint).
Complex constraint_polynomial(ModelId model, const Spectrum& spec, Complex beta,
                              const DarbouxParams& params, const PhasePoint& x);

// Per-component normalization factor (alpha_j - beta)^{-1/2} or
// (alpha_j^2 - beta^2)^{-1/2}, principal branch.
std::vector<Complex> shift_normalizers(ModelId model, const Spectrum& spec,
                                       Complex beta);

}  // namespace models
}  // namespace kdv

#include "kdv/hamiltonian.hpp"

#include <algorithm>
#include <cmath>

namespace kdv {
namespace hamiltonian {

State pack(const PhasePoint& x) {
    State y;
    y.reserve(x.p.size() + x.q.size());
    y.insert(y.end(), x.p.begin(), x.p.end());
    y.insert(y.end(), x.q.begin(), x.q.end());
    return y;
}

PhasePoint unpack(const State& y) {
    PhasePoint x;
    const std::size_t n = y.size() / 2;
    x.p.assign(y.begin(), y.begin() + n);
    x.q.assign(y.begin() + n, y.end());
    return x;
}

// Dormand-Prince RK5(4)7M coefficients.
namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
}  // namespace dp

StepStats integrate(const Rhs& rhs, State& y, double t_span, double tol) {
    StepStats stats;
    if (t_span == 0.0) return stats;
    const double dir = t_span > 0 ? 1.0 : -1.0;
    const double t_end = std::abs(t_span);
    double t = 0.0;
    double h = std::min(t_end, 1e-2);
    const std::size_t n = y.size();
    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), yt(n), y5(n);

    // autonomous system: negate the field to integrate backwards
    auto eval = [&](const State& s, State& out) {
        rhs(s, out);
        if (dir < 0)
            for (auto& z : out) z = -z;
    };

    eval(y, k1);
    int guard = 0;
    while (t < t_end) {
        if (++guard > 200000)
            throw IntegrationError("integrate: step count guard exceeded");
        h = std::min(h, t_end - t);
        for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * dp::a21 * k1[i];
        eval(yt, k2);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (dp::a31 * k1[i] + dp::a32 * k2[i]);
        eval(yt, k3);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (dp::a41 * k1[i] + dp::a42 * k2[i] + dp::a43 * k3[i]);
        eval(yt, k4);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (dp::a51 * k1[i] + dp::a52 * k2[i] + dp::a53 * k3[i] +
                                dp::a54 * k4[i]);
        eval(yt, k5);
        for (std::size_t i = 0; i < n; ++i)
            yt[i] = y[i] + h * (dp::a61 * k1[i] + dp::a62 * k2[i] + dp::a63 * k3[i] +
                                dp::a64 * k4[i] + dp::a65 * k5[i]);
        eval(yt, k6);
        for (std::size_t i = 0; i < n; ++i)
            y5[i] = y[i] + h * (dp::b1 * k1[i] + dp::b3 * k3[i] + dp::b4 * k4[i] +
                                dp::b5 * k5[i] + dp::b6 * k6[i]);
        eval(y5, k7);

        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const Complex e = h * (dp::e1 * k1[i] + dp::e3 * k3[i] + dp::e4 * k4[i] +
                                   dp::e5 * k5[i] + dp::e6 * k6[i] + dp::e7 * k7[i]);
            const double sk = tol * (1.0 + std::abs(y[i]));
            err = std::max(err, std::abs(e) / sk);
            if (!is_finite(y5[i]))
                throw IntegrationError("integrate: state became non-finite");
        }
        if (err <= 1.0) {
            t += h;
            y = y5;
            k1 = k7;  // FSAL
            ++stats.accepted;
        } else {
            ++stats.rejected;
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2), 0.2, 5.0);
        h *= fac;
        if (h < 1e-15)
            throw IntegrationError("integrate: step size collapsed (singularity?)");
    }
    return stats;
}

void canonical_rhs(ModelId model, const Spectrum& spec, const PhasePoint& x,
                   PhasePoint& dx) {
    const int n = spec.size();
    const auto& al = spec.alpha;
    dx.p.resize(n);
    dx.q.resize(n);
    switch (model) {
        case ModelId::LpKdV: {
            const Complex qq = inner(x.q, x.q);
            if (std::abs(qq) < 1e-12 * (1.0 + norm_inf(x.q)))
                throw IntegrationError("lpkdv flow crossed <q,q> = 0");
            const Complex v = principal_sqrt(qq);
            const Complex w = inner(x.p, x.q) / v;
            for (int j = 0; j < n; ++j) {
                dx.p[j] = v * x.p[j] - al[j] * x.q[j] + w * x.q[j];
                dx.q[j] = x.p[j] - v * x.q[j];
            }
            return;
        }
        case ModelId::LpmKdV: {
            Complex app(0.0), aqq(0.0);
            for (int j = 0; j < n; ++j) {
                app += al[j] * x.p[j] * x.p[j];
                aqq += al[j] * x.q[j] * x.q[j];
            }
            for (int j = 0; j < n; ++j) {
                dx.p[j] = 0.5 * al[j] * al[j] * x.p[j] - al[j] * app * x.q[j];
                dx.q[j] = al[j] * aqq * x.p[j] - 0.5 * al[j] * al[j] * x.q[j];
            }
            return;
        }
        case ModelId::LSKdV: {
            // gradient of H1 = -F1/2; differs from the printed matrix form by
            // the sign of the <p,q> diagonal term (see README on verification)
            Complex aqq(0.0);
            for (int j = 0; j < n; ++j) aqq += al[j] * x.q[j] * x.q[j];
            const Complex pq = inner(x.p, x.q);
            for (int j = 0; j < n; ++j) {
                const Complex diag = -0.5 * al[j] * al[j] - pq + 0.5 * aqq;
                dx.p[j] = diag * x.p[j] + al[j] * pq * x.q[j];
                dx.q[j] = -al[j] * x.p[j] - diag * x.q[j];
            }
            return;
        }
    }
    throw ConfigError("canonical_rhs: bad model");
}

FlowResult flow(ModelId model, const Spectrum& spec, const PhasePoint& x0,
                double t, double tol) {
    const auto f0 = models::integrals(model, spec, x0);
    State y = pack(x0);
    PhasePoint scratch;
    Rhs rhs = [&](const State& s, State& out) {
        const PhasePoint x = unpack(s);
        canonical_rhs(model, spec, x, scratch);
        out = pack(scratch);
    };
    FlowResult result;
    result.stats = integrate(rhs, y, t, tol);
    result.state = unpack(y);
    const auto ft = models::integrals(model, spec, result.state);
    result.drift.resize(f0.size());
    for (std::size_t j = 0; j < f0.size(); ++j)
        result.drift[j] = std::abs(ft[j] - f0[j]) / (1.0 + std::abs(f0[j]));
    return result;
}

double flow_map_commutator(ModelId model, const Spectrum& spec,
                           const FlowConfig& flow_cfg, const PhasePoint& x0,
                           double t, double tol) {
    const PhasePoint flowed = flow(model, spec, x0, t, tol).state;
    const PhasePoint map_then_flow =
        flow(model, spec, maps::apply_map(model, spec, flow_cfg, x0).first, t, tol)
            .state;
    const PhasePoint flow_then_map =
        maps::apply_map(model, spec, flow_cfg, flowed).first;
    double num = 0.0, scale = 1.0;
    for (int j = 0; j < spec.size(); ++j) {
        num = std::max(num, std::abs(map_then_flow.p[j] - flow_then_map.p[j]));
        num = std::max(num, std::abs(map_then_flow.q[j] - flow_then_map.q[j]));
        scale = std::max(scale, std::abs(map_then_flow.p[j]));
        scale = std::max(scale, std::abs(map_then_flow.q[j]));
    }
    return num / scale;
}

namespace {

// z values on the first two edges of the beta-orbit through y.
std::pair<Complex, Complex> first_two_z(ModelId model, const Spectrum& spec,
                                        const FlowConfig& cfg, const PhasePoint& y) {
    const auto [y1, params0] = maps::apply_map(model, spec, cfg, y);
    const auto params1 = models::potential_constraint(model, spec, cfg.beta,
                                                      cfg.sigma, y1);
    const Complex v0 = principal_sqrt(inner(y.q, y.q));
    const Complex v1 = principal_sqrt(inner(y1.q, y1.q));
    return {params0.b + v0, params1.b + v1};
}

double z_identity_once(const Spectrum& spec, const FlowConfig& cfg,
                       const PhasePoint& x0, double h, double tol) {
    const ModelId model = ModelId::LpKdV;
    const auto [z0_mid, z1_mid] = first_two_z(model, spec, cfg, x0);
    const PhasePoint xp = flow(model, spec, x0, h, tol).state;
    const PhasePoint xm = flow(model, spec, x0, -h, tol).state;
    const auto [z0_p, z1_p] = first_two_z(model, spec, cfg, xp);
    const auto [z0_m, z1_m] = first_two_z(model, spec, cfg, xm);
    const Complex lhs = ((z1_p + z0_p) - (z1_m + z0_m)) / (2.0 * h);
    const Complex rhs = z1_mid * z1_mid - z0_mid * z0_mid;
    return std::abs(lhs - rhs);
}

}  // namespace

ZEvolutionResult z_evolution_residual(const Spectrum& spec, Complex beta,
                                      BranchSign sigma, const PhasePoint& x0,
                                      double h) {
    const FlowConfig cfg{beta, sigma};
    const double tol = 1e-12;
    ZEvolutionResult r;
    r.residual = z_identity_once(spec, cfg, x0, h, tol);
    r.residual_half = z_identity_once(spec, cfg, x0, 0.5 * h, tol);
    return r;
}

PhasePoint flow_of_observable(const std::function<Complex(const PhasePoint&)>& h_fn,
                              const PhasePoint& x0, double t, double tol,
                              double fd_step) {
    State y = pack(x0);
    Rhs rhs = [&](const State& s, State& out) {
        PhasePoint x = unpack(s);
        const int n = static_cast<int>(x.p.size());
        out.assign(2 * n, Complex(0.0));
        for (int j = 0; j < n; ++j) {
            const Complex pj = x.p[j], qj = x.q[j];
            x.q[j] = qj + fd_step;
            const Complex hq_plus = h_fn(x);
            x.q[j] = qj - fd_step;
            const Complex hq_minus = h_fn(x);
            x.q[j] = qj;
            x.p[j] = pj + fd_step;
            const Complex hp_plus = h_fn(x);
            x.p[j] = pj - fd_step;
            const Complex hp_minus = h_fn(x);
            x.p[j] = pj;
            out[j] = -(hq_plus - hq_minus) / (2.0 * fd_step);       // p_dot
            out[n + j] = (hp_plus - hp_minus) / (2.0 * fd_step);    // q_dot
        }
    };
    integrate(rhs, y, t, tol);
    return unpack(y);
}

}  // namespace hamiltonian
}  // namespace kdv

#include "kdv/map.hpp"

#include <cmath>

namespace kdv {
namespace maps {

std::pair<PhasePoint, DarbouxParams> apply_map(ModelId model, const Spectrum& spec,
                                               const FlowConfig& flow,
                                               const PhasePoint& x) {
    const DarbouxParams params =
        models::potential_constraint(model, spec, flow.beta, flow.sigma, x);
    const auto nrm = models::shift_normalizers(model, spec, flow.beta);
    const int n = spec.size();
    PhasePoint out;
    out.p.resize(n);
    out.q.resize(n);
    for (int j = 0; j < n; ++j) {
        const Mat2 d =
            models::darboux_matrix(model, flow.beta, params, spec.alpha[j]);
        out.p[j] = nrm[j] * (d.m11 * x.p[j] + d.m12 * x.q[j]);
        out.q[j] = nrm[j] * (d.m21 * x.p[j] + d.m22 * x.q[j]);
    }
    if (!out.finite() || out.norm_inf() > kGrowthGuard)
        throw GrowthError("apply_map: state norm exceeded growth guard");
    return {out, params};
}

Orbit iterate_orbit(ModelId model, const Spectrum& spec, const FlowConfig& flow,
                    const PhasePoint& x0, int steps) {
    Orbit orbit;
    orbit.states.reserve(steps + 1);
    orbit.params.reserve(steps + 1);
    orbit.states.push_back(x0);
    for (int m = 0; m < steps; ++m) {
        try {
            auto [next, params] = apply_map(model, spec, flow, orbit.states.back());
            orbit.params.push_back(params);
            orbit.states.push_back(std::move(next));
        } catch (const Error& e) {
            throw StepError(std::string("orbit step failed: ") + e.what(), m);
        }
    }
    // potentials at the final point, (a(m), b(m)) = f_beta(p(m), q(m))
    try {
        orbit.params.push_back(models::potential_constraint(
            model, spec, flow.beta, flow.sigma, orbit.states.back()));
    } catch (const Error& e) {
        throw StepError(std::string("orbit potentials failed: ") + e.what(), steps);
    }
    return orbit;
}

LatticeGrid lattice_evolve(ModelId model, const Spectrum& spec,
                           const FlowConfig& flow1, const FlowConfig& flow2,
                           const PhasePoint& x0, int m_extent, int n_extent) {
    LatticeGrid g;
    g.model = model;
    g.m_extent = m_extent;
    g.n_extent = n_extent;
    g.flow1 = flow1;
    g.flow2 = flow2;
    g.states.assign(m_extent + 1, std::vector<PhasePoint>(n_extent + 1));
    g.m_edges.assign(m_extent, std::vector<DarbouxParams>(n_extent + 1));
    g.n_edges.assign(m_extent + 1, std::vector<DarbouxParams>(n_extent));

    g.states[0][0] = x0;
    for (int n = 0; n < n_extent; ++n) {
        try {
            auto [next, params] = apply_map(model, spec, flow2, g.states[0][n]);
            g.n_edges[0][n] = params;
            g.states[0][n + 1] = std::move(next);
        } catch (const Error& e) {
            throw StepError(std::string("lattice step failed: ") + e.what(), 0, n);
        }
    }
    for (int n = 0; n <= n_extent; ++n) {
        for (int m = 0; m < m_extent; ++m) {
            try {
                auto [next, params] = apply_map(model, spec, flow1, g.states[m][n]);
                g.m_edges[m][n] = params;
                g.states[m + 1][n] = std::move(next);
            } catch (const Error& e) {
                throw StepError(std::string("lattice step failed: ") + e.what(), m, n);
            }
        }
    }
    // n-edge potentials away from m = 0 (state data already fixed; these edges
    // were not traversed by the build order)
    for (int m = 1; m <= m_extent; ++m) {
        for (int n = 0; n < n_extent; ++n) {
            try {
                g.n_edges[m][n] = models::potential_constraint(
                    model, spec, flow2.beta, flow2.sigma, g.states[m][n]);
            } catch (const Error& e) {
                throw StepError(std::string("edge potentials failed: ") + e.what(), m, n);
            }
        }
    }
    return g;
}

Complex lpkdv_edge_z(const LatticeGrid& grid, int m, int n, bool m_direction) {
    const PhasePoint& base = grid.states[m][n];
    const Complex v = principal_sqrt(inner(base.q, base.q));
    const Complex b = m_direction ? grid.m_edges[m][n].b : grid.n_edges[m][n].b;
    return b + v;
}

UField extract_u_lpkdv(const LatticeGrid& grid) {
    if (grid.model != ModelId::LpKdV)
        throw ConfigError("extract_u_lpkdv: wrong model grid");
    UField f;
    f.model = grid.model;
    f.m_extent = grid.m_extent;
    f.n_extent = grid.n_extent;
    f.gauge = Complex(0.0);
    // u steps by -z per edge (the solution normalization of the lattice
    // equation itself; -2z would solve it with beta -> 4 beta instead)
    f.u.assign(grid.m_extent + 1, std::vector<Complex>(grid.n_extent + 1, Complex(0.0)));
    for (int n = 0; n < grid.n_extent; ++n)
        f.u[0][n + 1] = f.u[0][n] - lpkdv_edge_z(grid, 0, n, false);
    for (int n = 0; n <= grid.n_extent; ++n)
        for (int m = 0; m < grid.m_extent; ++m)
            f.u[m + 1][n] = f.u[m][n] - lpkdv_edge_z(grid, m, n, true);
    return f;
}

UField extract_u_lpmkdv(const LatticeGrid& grid) {
    if (grid.model != ModelId::LpmKdV)
        throw ConfigError("extract_u_lpmkdv: wrong model grid");
    UField f;
    f.model = grid.model;
    f.m_extent = grid.m_extent;
    f.n_extent = grid.n_extent;
    f.gauge = Complex(1.0);
    f.u.assign(grid.m_extent + 1, std::vector<Complex>(grid.n_extent + 1, Complex(1.0)));
    for (int n = 0; n < grid.n_extent; ++n) {
        const Complex a = grid.n_edges[0][n].a;
        if (std::abs(a) == 0.0) throw DegenerateError("extract_u: zero edge a");
        f.u[0][n + 1] = f.u[0][n] * a;
    }
    for (int n = 0; n <= grid.n_extent; ++n)
        for (int m = 0; m < grid.m_extent; ++m) {
            const Complex a = grid.m_edges[m][n].a;
            if (std::abs(a) == 0.0) throw DegenerateError("extract_u: zero edge a");
            f.u[m + 1][n] = f.u[m][n] * a;
        }
    return f;
}

UField extract_u_lskdv(const LatticeGrid& grid) {
    if (grid.model != ModelId::LSKdV)
        throw ConfigError("extract_u_lskdv: wrong model grid");
    UField f;
    f.model = grid.model;
    f.m_extent = grid.m_extent;
    f.n_extent = grid.n_extent;
    f.gauge = Complex(1.0);
    // z accumulates edge products along the fixed path, u = z^2
    std::vector<std::vector<Complex>> z(
        grid.m_extent + 1, std::vector<Complex>(grid.n_extent + 1, Complex(1.0)));
    auto checked = [](Complex a) {
        if (std::abs(a) == 0.0 || !is_finite(a))
            throw DegenerateError("extract_u: bad edge a");
        return a;
    };
    for (int n = 0; n < grid.n_extent; ++n)
        z[0][n + 1] = z[0][n] * checked(grid.n_edges[0][n].a);
    for (int n = 0; n <= grid.n_extent; ++n)
        for (int m = 0; m < grid.m_extent; ++m)
            z[m + 1][n] = z[m][n] * checked(grid.m_edges[m][n].a);
    f.u.assign(grid.m_extent + 1, std::vector<Complex>(grid.n_extent + 1));
    for (int m = 0; m <= grid.m_extent; ++m)
        for (int n = 0; n <= grid.n_extent; ++n) f.u[m][n] = z[m][n] * z[m][n];
    return f;
}

UField extract_u(const LatticeGrid& grid) {
    switch (grid.model) {
        case ModelId::LpKdV: return extract_u_lpkdv(grid);
        case ModelId::LpmKdV: return extract_u_lpmkdv(grid);
        case ModelId::LSKdV: return extract_u_lskdv(grid);
    }
    throw ConfigError("extract_u: bad model");
}

ResidualStats lattice_residual(ModelId model, const UField& f, Complex beta1,
                               Complex beta2) {
    ResidualStats stats;
    double sum = 0.0;
    int count = 0;
    for (int m = 0; m < f.m_extent; ++m) {
        for (int n = 0; n < f.n_extent; ++n) {
            const Complex u = f.u[m][n];        // u
            const Complex ut = f.u[m + 1][n];   // u tilde
            const Complex ub = f.u[m][n + 1];   // u bar
            const Complex utb = f.u[m + 1][n + 1];
            Complex res;
            switch (model) {
                case ModelId::LpKdV:
                    res = (utb - u) * (ut - ub) - (beta2 - beta1);
                    break;
                case ModelId::LpmKdV:
                    res = beta1 * (ub * utb - u * ut) - beta2 * (ut * utb - u * ub);
                    break;
                case ModelId::LSKdV:
                    res = beta1 * beta1 * (utb - ut) * (ub - u) -
                          beta2 * beta2 * (utb - ub) * (ut - u);
                    break;
            }
            const double scale = 1.0 + std::max(std::max(std::abs(u), std::abs(ut)),
                                                std::max(std::abs(ub), std::abs(utb)));
            const double r = std::abs(res) / (scale * scale);
            stats.max = std::max(stats.max, r);
            sum += r;
            ++count;
        }
    }
    stats.mean = count ? sum / count : 0.0;
    return stats;
}

double path_independence_residual(const LatticeGrid& grid) {
    double worst = 0.0;
    for (int m = 0; m < grid.m_extent; ++m) {
        for (int n = 0; n < grid.n_extent; ++n) {
            if (grid.model == ModelId::LpKdV) {
                const Complex zp = lpkdv_edge_z(grid, m, n, true);
                const Complex zpp = lpkdv_edge_z(grid, m, n, false);
                const Complex zp_up = lpkdv_edge_z(grid, m, n + 1, true);
                const Complex zpp_right = lpkdv_edge_z(grid, m + 1, n, false);
                const double scale = 1.0 + std::abs(zp) + std::abs(zpp);
                worst = std::max(worst,
                                 std::abs(zp + zpp_right - zpp - zp_up) / scale);
            } else {
                Complex am = grid.m_edges[m][n].a;
                Complex an = grid.n_edges[m][n].a;
                Complex an_right = grid.n_edges[m + 1][n].a;
                Complex am_up = grid.m_edges[m][n + 1].a;
                if (grid.model == ModelId::LSKdV) {
                    // u = z^2 sees only a^2; the a-sign is gauge
                    am *= am;
                    an *= an;
                    an_right *= an_right;
                    am_up *= am_up;
                }
                const Complex lhs = am * an_right, rhs = an * am_up;
                const double scale = std::abs(lhs) + std::abs(rhs);
                if (scale > 0.0)
                    worst = std::max(worst, std::abs(lhs - rhs) / scale);
            }
        }
    }
    return worst;
}

}  // namespace maps
}  // namespace kdv

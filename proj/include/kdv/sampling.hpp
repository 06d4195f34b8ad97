#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kdv/map.hpp"

namespace kdv {
namespace sampling {

// Deterministic uniform source; the raw-bits mapping keeps reports
// reproducible across standard library implementations.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t seed) : eng(seed) {}
    double uni(double a, double b) {
        return a + (b - a) * ((eng() >> 11) * 0x1.0p-53);
    }
    int pick(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
};

struct Config {
    Spectrum spec;
    PhasePoint x0;
    FlowConfig flow1, flow2;
    int attempts = 0;         // rejection count, for logging
    bool sign_paired = false;  // flows commute only up to the state-sign gauge
};

// max-norm distance between phase points
inline double point_dist(const PhasePoint& a, const PhasePoint& b) {
    double d = 0.0;
    for (std::size_t j = 0; j < a.p.size(); ++j) {
        d = std::max(d, std::abs(a.p[j] - b.p[j]));
        d = std::max(d, std::abs(a.q[j] - b.q[j]));
    }
    return d;
}

inline Spectrum sample_spectrum(int n, Rng& rng) {
    Spectrum s;
    for (int j = 0; j < n; ++j)
        s.alpha.push_back(Complex(1.6 + 0.55 * j + rng.uni(0.0, 0.25)));
    return s;
}

inline PhasePoint sample_point(int n, Rng& rng) {
    PhasePoint x;
    for (int j = 0; j < n; ++j) {
        x.p.push_back(Complex(rng.uni(0.5, 1.5)));
        x.q.push_back(Complex(rng.uni(0.5, 1.5)));
    }
    return x;
}

// Lattice parameters where the constraint discriminant -R (resp. R) has the
// oscillatory sign, so the branch pair is a conjugate pair and real initial
// data stays on a compact component. Hyperbolic windows give exponentially
// growing orbits that no fixed-precision drift check can certify.
//
// LpKdV scans real beta below the spectrum. The zeta models scan zeta = beta^2
// over (0, min alpha_j^2) and the negative axis; F -> +infinity as
// zeta -> -infinity, so a window always exists (beta imaginary there).
inline std::vector<Complex> elliptic_betas(ModelId model, const Spectrum& spec,
                                           const PhasePoint& x) {
    double amin = 1e300;
    for (const auto& al : spec.alpha) amin = std::min(amin, std::abs(al));
    std::vector<Complex> out;
    auto scan = [&](double lo, double hi, bool zeta_axis) {
        for (int k = 0; k < 96; ++k) {
            const double t = lo + (hi - lo) * (k + 0.5) / 96.0;
            const Complex beta =
                zeta_axis ? (t >= 0.0 ? Complex(std::sqrt(t))
                                      : Complex(0.0, std::sqrt(-t)))
                          : Complex(t);
            try {
                const Complex f = models::generating_function(model, spec, x, beta);
                if (f.real() > 0.05 && std::abs(f.imag()) < 1e-9 * (1.0 + std::abs(f)))
                    out.push_back(beta);
            } catch (const Error&) {
            }
        }
    };
    if (model == ModelId::LpKdV) {
        scan(-6.0, amin - 0.1, false);
    } else {
        scan(0.02, amin * amin - 0.1, true);
        scan(-12.0, -0.05, true);
    }
    return out;
}

// Finds the branch-sign pair under which the two flows commute at x. The
// principal-value sigma labels shuffle between sheets as (x, beta) move, so
// the commuting pair is configuration data, not a constant. Returns false
// when no pair commutes; with allow_sign_gauge, commuting up to the global
// state sign (a gauge invisible to every quadratic observable) also counts.
inline bool select_commuting_pair(ModelId model, const Spectrum& spec,
                                  const PhasePoint& x, FlowConfig& f1,
                                  FlowConfig& f2, bool& sign_paired,
                                  bool allow_sign_gauge = true) {
    const int order[4][2] = {{-1, -1}, {1, 1}, {-1, 1}, {1, -1}};
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& sg : order) {
            const FlowConfig c1{f1.beta, BranchSign(sg[0])};
            const FlowConfig c2{f2.beta, BranchSign(sg[1])};
            try {
                const PhasePoint a = maps::apply_map(
                    model, spec, c2, maps::apply_map(model, spec, c1, x).first)
                                        .first;
                const PhasePoint b = maps::apply_map(
                    model, spec, c1, maps::apply_map(model, spec, c2, x).first)
                                        .first;
                const double scale = 1.0 + a.norm_inf();
                if (point_dist(a, b) <= 1e-10 * scale) {
                    f1 = c1;
                    f2 = c2;
                    sign_paired = false;
                    return true;
                }
                if (pass == 1 && allow_sign_gauge) {
                    PhasePoint nb = b;
                    for (auto& z : nb.p) z = -z;
                    for (auto& z : nb.q) z = -z;
                    if (point_dist(a, nb) <= 1e-10 * scale) {
                        f1 = c1;
                        f2 = c2;
                        sign_paired = true;
                        return true;
                    }
                }
            } catch (const Error&) {
            }
        }
        if (!allow_sign_gauge) break;
    }
    return false;
}

// Random admissible configuration: real spectrum and phase point in
// [0.5, 1.5], lattice parameters rejection-sampled into elliptic windows,
// branch signs fixed to a commuting pair, trial orbits of both flows bounded
// and clear of the documented degeneracies. Throws after max_tries rejections.
inline Config sample_admissible(ModelId model, int n, std::uint64_t seed,
                                int trial_steps = 110, double norm_cap = 300.0,
                                int max_tries = 100) {
    Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        Config cfg;
        cfg.attempts = attempt;
        cfg.spec = sample_spectrum(n, rng);
        cfg.x0 = sample_point(n, rng);
        const auto betas = elliptic_betas(model, cfg.spec, cfg.x0);
        if (betas.size() < 4) continue;
        const int i1 = rng.pick(static_cast<int>(betas.size()));
        const int i2 = rng.pick(static_cast<int>(betas.size()));
        const Complex b1 = betas[i1], b2 = betas[i2];
        if (std::abs(b1 * b1 - b2 * b2) < 0.03) continue;
        cfg.flow1 = FlowConfig{b1, BranchSign(-1)};
        cfg.flow2 = FlowConfig{b2, BranchSign(-1)};
        if (!select_commuting_pair(model, cfg.spec, cfg.x0, cfg.flow1, cfg.flow2,
                                   cfg.sign_paired))
            continue;
        try {
            bool ok = true;
            for (const FlowConfig& fc : {cfg.flow1, cfg.flow2}) {
                PhasePoint y = cfg.x0;
                for (int m = 0; m < trial_steps && ok; ++m) {
                    y = maps::apply_map(model, cfg.spec, fc, y).first;
                    if (y.norm_inf() > norm_cap) ok = false;
                }
                if (!ok) break;
            }
            if (!ok) continue;
            // the cross-flow constraint must be evaluable off the main axis
            PhasePoint y = cfg.x0;
            for (int m = 0; m < std::min(trial_steps, 8); ++m) {
                y = maps::apply_map(model, cfg.spec, cfg.flow1, y).first;
                models::potential_constraint(model, cfg.spec, cfg.flow2.beta,
                                             cfg.flow2.sigma, y);
            }
        } catch (const Error&) {
            continue;
        }
        return cfg;
    }
    throw DegenerateError("sample_admissible: no admissible configuration found");
}

// Margin of w from the principal branch cut (negative real axis), relative.
inline double cut_margin(Complex w) {
    if (w.real() >= 0.0) return 1.0;
    const double a = std::abs(w);
    return a == 0.0 ? 0.0 : std::abs(w.imag()) / a;
}

// True when no dynamical square-root argument of the model comes close to
// the principal cut anywhere on the grid; all left-half-plane arguments must
// also share one side of the axis. Branch flips between sites would
// otherwise break path independence.
inline bool grid_branch_safe(const maps::LatticeGrid& g, double margin = 0.05) {
    if (g.model == ModelId::LpmKdV) return true;  // the map is branch-free
    int side = 0;  // -1 / +1 once a left-half-plane argument is seen
    auto safe = [&](Complex w) {
        if (cut_margin(w) < margin) return false;
        if (w.real() < 0.0) {
            const int s = w.imag() > 0.0 ? 1 : -1;
            if (side == 0) side = s;
            if (s != side) return false;
        }
        return true;
    };
    if (g.model == ModelId::LpKdV) {
        for (const auto& col : g.states)
            for (const auto& st : col)
                if (!safe(inner(st.q, st.q))) return false;
        return true;
    }
    // LSKdV: a = sqrt(1 + rhs) on every edge
    for (const auto& col : g.m_edges)
        for (const auto& d : col)
            if (!safe(d.a * d.a)) return false;
    for (const auto& col : g.n_edges)
        for (const auto& d : col)
            if (!safe(d.a * d.a)) return false;
    return true;
}

// Admissible configuration whose full m_extent x n_extent lattice builds,
// stays bounded, and keeps clear of branch-cut crossings.
inline Config sample_admissible_grid(ModelId model, int n, std::uint64_t seed,
                                     int m_extent, int n_extent,
                                     double norm_cap = 300.0, int max_tries = 100) {
    Rng rng(seed * 0x6a09e667f3bcc909ULL + 7);
    for (int attempt = 0; attempt < max_tries; ++attempt) {
        Config cfg;
        cfg.attempts = attempt;
        cfg.spec = sample_spectrum(n, rng);
        cfg.x0 = sample_point(n, rng);
        const auto betas = elliptic_betas(model, cfg.spec, cfg.x0);
        if (betas.size() < 4) continue;
        const Complex b1 = betas[rng.pick(static_cast<int>(betas.size()))];
        const Complex b2 = betas[rng.pick(static_cast<int>(betas.size()))];
        if (std::abs(b1 * b1 - b2 * b2) < 0.03) continue;
        cfg.flow1 = FlowConfig{b1, BranchSign(-1)};
        cfg.flow2 = FlowConfig{b2, BranchSign(-1)};
        if (!select_commuting_pair(model, cfg.spec, cfg.x0, cfg.flow1, cfg.flow2,
                                   cfg.sign_paired))
            continue;
        try {
            const auto grid = maps::lattice_evolve(model, cfg.spec, cfg.flow1,
                                                   cfg.flow2, cfg.x0, m_extent,
                                                   n_extent);
            bool ok = grid_branch_safe(grid);
            for (const auto& col : grid.states)
                for (const auto& st : col)
                    if (st.norm_inf() > norm_cap) ok = false;
            if (!ok) continue;
        } catch (const Error&) {
            continue;
        }
        return cfg;
    }
    throw DegenerateError("sample_admissible_grid: no admissible configuration found");
}

}  // namespace sampling
}  // namespace kdv

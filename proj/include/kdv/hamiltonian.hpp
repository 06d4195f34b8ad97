#pragma once

#include <functional>
#include <vector>

#include "kdv/map.hpp"
#include "kdv/model.hpp"

namespace kdv {
namespace hamiltonian {

using State = std::vector<Complex>;
using Rhs = std::function<void(const State&, State&)>;

struct StepStats {
    int accepted = 0;
    int rejected = 0;
};

// Adaptive Dormand-Prince 5(4) on a complex state vector; local error
// controlled at atol = rtol = tol. Throws IntegrationError when the step
// size collapses.
StepStats integrate(const Rhs& rhs, State& y, double t_span, double tol);

struct FlowResult {
    PhasePoint state;
    std::vector<double> drift;  // per-integral relative drift |F_j(t) - F_j(0)|
    StepStats stats;
};

// Canonical right-hand sides p_x = -dH1/dq, q_x = dH1/dp in closed form.
void canonical_rhs(ModelId model, const Spectrum& spec, const PhasePoint& x,
                   PhasePoint& dx);

// Integrate the H1 flow for time t and report the integral drift.
FlowResult flow(ModelId model, const Spectrum& spec, const PhasePoint& x0,
                double t, double tol);

// || S_beta(flow_t(x)) - flow_t(S_beta(x)) || / (1 + ||.||)
double flow_map_commutator(ModelId model, const Spectrum& spec,
                           const FlowConfig& flow_cfg, const PhasePoint& x0,
                           double t, double tol);

struct ZEvolutionResult {
    double residual = 0.0;     // at step h
    double residual_half = 0.0;  // at step h/2, for the Richardson check
};

// LpKdV identity (z_m + z_{m-1})_x = z_m^2 - z_{m-1}^2 along the H1 flow,
// checked by central differences of the flow at +-h and +-h/2.
ZEvolutionResult z_evolution_residual(const Spectrum& spec, Complex beta,
                                      BranchSign sigma, const PhasePoint& x0,
                                      double h);

// Hamiltonian flow of an arbitrary scalar H(p, q) with finite-difference
// gradients (central step fd_step); used for the t_lambda flows.
PhasePoint flow_of_observable(const std::function<Complex(const PhasePoint&)>& h_fn,
                              const PhasePoint& x0, double t, double tol,
                              double fd_step = 1e-7);

State pack(const PhasePoint& x);
PhasePoint unpack(const State& y);

}  // namespace hamiltonian
}  // namespace kdv

#pragma once

#include <utility>
#include <vector>

#include "kdv/model.hpp"

namespace kdv {

// One discrete flow S_beta: lattice parameter plus a fixed branch sign.
struct FlowConfig {
    Complex beta{0.0};
    BranchSign sigma{};
};

namespace maps {

// Iteration aborts when the state norm exceeds this (near-degenerate branch
// data can blow up).
inline constexpr double kGrowthGuard = 1e12;

// One application of S_beta; returns the image and the Darboux potentials used.
std::pair<PhasePoint, DarbouxParams> apply_map(ModelId model, const Spectrum& spec,
                                               const FlowConfig& flow,
                                               const PhasePoint& x);

struct Orbit {
    std::vector<PhasePoint> states;     // steps + 1 entries
    std::vector<DarbouxParams> params;  // potentials f_beta at every orbit point
};

Orbit iterate_orbit(ModelId model, const Spectrum& spec, const FlowConfig& flow,
                    const PhasePoint& x0, int steps);

// 2D array of states built from the commuting flows, with the Darboux
// potentials stored on every lattice edge.
struct LatticeGrid {
    ModelId model = ModelId::LpKdV;
    int m_extent = 0, n_extent = 0;
    FlowConfig flow1, flow2;  // m-direction, n-direction
    std::vector<std::vector<PhasePoint>> states;      // [m][n], (M+1) x (N+1)
    std::vector<std::vector<DarbouxParams>> m_edges;  // [m][n], m < M
    std::vector<std::vector<DarbouxParams>> n_edges;  // [m][n], n < N
};

// Build order is fixed: flow2 along n at m = 0, then flow1 along m for each n.
LatticeGrid lattice_evolve(ModelId model, const Spectrum& spec,
                           const FlowConfig& flow1, const FlowConfig& flow2,
                           const PhasePoint& x0, int m_extent, int n_extent);

// Extracted solution field of the lattice equation.
struct UField {
    ModelId model = ModelId::LpKdV;
    int m_extent = 0, n_extent = 0;
    std::vector<std::vector<Complex>> u;  // (M+1) x (N+1)
    Complex gauge{0.0};                   // u(0,0)
};

// u(0,0) = 0; u steps by -2z along edges, z' = b + v on m-edges (b from the
// edge potentials, v = sqrt<q,q> at the edge base), z'' likewise on n-edges.
UField extract_u_lpkdv(const LatticeGrid& grid);

// u(0,0) = 1; u multiplies by the edge potential a along each direction.
UField extract_u_lpmkdv(const LatticeGrid& grid);

// z(0,0) = 1; z multiplies by the edge a, u = z^2.
UField extract_u_lskdv(const LatticeGrid& grid);

UField extract_u(const LatticeGrid& grid);

struct ResidualStats {
    double max = 0.0;
    double mean = 0.0;
};

// Per-plaquette residual of the model's lattice equation, normalized by
// (1 + max corner magnitude)^2.
ResidualStats lattice_residual(ModelId model, const UField& u, Complex beta1,
                               Complex beta2);

// Max plaquette closure defect of the edge data (additive z for LpKdV,
// multiplicative a otherwise); zero closure makes u path-independent.
double path_independence_residual(const LatticeGrid& grid);

// Edge z value for LpKdV grids: b + v at the base state of the edge.
Complex lpkdv_edge_z(const LatticeGrid& grid, int m, int n, bool m_direction);

}  // namespace maps
}  // namespace kdv

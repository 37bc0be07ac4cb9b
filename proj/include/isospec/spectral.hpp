#pragma once

#include "isospec/family.hpp"

#include <functional>
#include <vector>

namespace isospec::spectral {

// Three-point Dirichlet discretization of -d2/dx2 + V on [a, b]: n grid
// points including both endpoints, m = n - 2 interior unknowns,
// diag_i = 2/h^2 + V(x_i), constant off-diagonal -1/h^2.
struct DiscretizedHamiltonian {
    double a = 0.0, b = 0.0, h = 0.0;
    int n = 0;
    std::vector<double> x; // interior nodes
    std::vector<double> diag;
    double off = 0.0;
    double v_edge_min = 0.0; // min(V(a), V(b)): proxy for the continuum threshold
};

DiscretizedHamiltonian discretize(const std::function<double(double)>& V, double a, double b,
                                  int n);

// Lowest k eigenvalues by Sturm-count bisection inside Gershgorin bounds, each
// to absolute tolerance 1e-10. For levels below V(edge), checks that the
// ground state has decayed at the box edge instead of being cut off by it
// (a wall-truncated mode keeps relative amplitude ~pi*h/W at the first node);
// throws window_error otherwise.
std::vector<double> eigenvalues(const DiscretizedHamiltonian& H, int k);

// Inverse iteration with tridiagonal partial-pivot elimination, one vector per
// given eigenvalue; unit L2 norm, orthogonalized against earlier vectors so
// clustered levels stay independent.
std::vector<std::vector<double>> eigenvectors(const DiscretizedHamiltonian& H,
                                              const std::vector<double>& lambdas);

struct SpectrumReport {
    std::vector<double> v1;      // k+1 lowest levels of V1
    std::vector<double> v2;      // k lowest levels of V2
    std::vector<double> v1gamma; // k lowest levels of the deformed potential
    // The deformation adds a bound state at 0 exactly when V1 itself has none,
    // i.e. when sqrt(mu) is not normalizable (some mu tail diverges).
    bool inserted_zero_mode = false;
    double inserted_level = 0.0; // v1gamma[0] when inserted, else NaN
    std::vector<double> pair_diffs; // |v1gamma[i+p] - v1[i]|, p = inserted ? 1 : 0
    double max_pair_diff = 0.0;
    int ladder_offset = 1; // v2[i] tracks v1[i+offset]; 1 iff V1 has the zero level
    std::vector<double> ladder_diffs;
    double max_ladder_diff = 0.0;
    std::vector<double> residual_norms; // ||(H1 - lambda) v||_2 per V1 pair, unit v
    double grid_h = 0.0;
    int n = 0, k = 0;
};

// Discretizes V1, V2 and the gamma-deformed potential on one window and
// compares their low spectra. gamma must be regular on the window. Throws
// unsupported_spectrum_error if a requested level reaches min V(edge).
SpectrumReport isospectral_check(const family::SuperpotentialSpec& s, double gamma,
                                 family::Window w, int n, int k);

// max interior |(-d2/dx2 + V1gamma) psi0gamma| / max |psi0gamma| on an n-point
// grid over the family window: measures how exactly the deformed zero mode is
// annihilated (limited by the h^2 truncation of the second difference).
double zero_mode_residual(const family::ParametricFamily& fam, int n);

// Same for the undeformed pair (V1, sqrt(mu)).
double zero_mode_residual_sqrt_mu(const family::IntegratingFactor& iff, int n);

// First-order intertwining A = d/dx + phi_p maps V1 eigenvectors to V2 ones.
// mode 0 with a normalizable zero mode: returns ||A psi0|| / ||psi0|| (should
// vanish). mode >= 1: returns the relative eigen-residual of A psi under H2.
double intertwine_check(const family::SuperpotentialSpec& s, family::Window w, int n,
                        int mode_index);

} // namespace isospec::spectral

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fracsys/eigensolve.hpp"
#include "fracsys/ground_state.hpp"
#include "fracsys/tau.hpp"

namespace fracsys {

// Coefficients of the linearization of the normalized system at the
// proportional solution (k1 w, tau0 k1 w):
//
//   a = [mu (2p-1) + beta~ (p-1) tau0^p] k1^{2p-2}
//   b = beta~ p tau0^{p-1} k1^{2p-2}
//   c = [(2p-1) tau0^{2p-2} + beta~ (p-1) tau0^{p-2}] k1^{2p-2}
//
// gamma± solve b g^2 + (c-a) g - b = 0 (so gamma+ gamma- = -1).  The branch
// labelled by the sign of beta~ (gamma+ for beta~>0, gamma- for beta~<0) is
// the negative root; on it a - b gamma = 2p-1 and f~ = b gamma + c.
struct LinearizationCoeffs {
    double a = 0.0, b = 0.0, c = 0.0;
    double gamma_plus = 0.0, gamma_minus = 0.0;
    double f_tilde = 0.0;
    double theta = 0.0;
};

LinearizationCoeffs linearization_coeffs(const NormalizedParams& np, const TauSolution& sol);

// Roots of b g^2 + (c-a) g - b = 0 as (negative root, positive root),
// computed cancellation-free; the product is exactly -1 by construction.
std::pair<double, double> gamma_roots(double a, double b, double c);

// Claim I: f~ != 1.  Claim II: f~ < 2p-1.  (beta~ > 0 branch.)
std::pair<bool, bool> check_claims(const LinearizationCoeffs& lc, const NormalizedParams& np,
                                   double tol = 1e-12);

// Weighted eigenvalue problem L Phi = lambda w^{2p-2} Phi, solved through the
// symmetric form L^{-1/2} m L^{-1/2} with the weight floored in the tails.
struct WeightedSpectrum {
    std::vector<double> eigenvalues;  // ascending lambda
    std::vector<Field> eigenfields;   // weighted-normalized
    Field weight;                     // floored w^{2p-2}
};

struct SpectrumOptions {
    double weight_floor = 1e-10;  // relative to max of the weight
    double tol = 1e-11;
    int max_iterations = 800;
    std::uint64_t seed = 20240701ULL;
};

WeightedSpectrum weighted_spectrum(const GroundState& gs, int K, const SpectrumOptions& opt = {});

enum class Verdict { nondegenerate, degenerate, inconclusive };

inline const char* verdict_name(Verdict v) {
    switch (v) {
        case Verdict::nondegenerate: return "nondegenerate";
        case Verdict::degenerate: return "degenerate";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "?";
}

struct NondegeneracyReport {
    LinearizationCoeffs coeffs;
    WeightedSpectrum spectrum;
    std::vector<double> f_tilde_distances;       // |f~ - lambda_k|
    std::vector<double> kernel_singular_values;  // smallest 2N+4, ascending
    int kernel_dim = 0;
    double kernel_gap = 0.0;  // first non-kernel / last kernel singular value
    std::vector<double> basis_residuals;  // predicted kernel vectors under the operator
    Verdict verdict = Verdict::inconclusive;
};

struct KernelOptions {
    SpectrumOptions spectrum;
    int spectrum_count = 8;
    double grid_tol = 1e-5;          // accuracy scale of the discretization
    double sv_threshold = 1e-6;      // near-zero cut relative to largest retained sv
    double min_gap = 100.0;
    double tol = 1e-10;              // LOBPCG residual tolerance
    int max_iterations = 400;
    std::uint64_t seed = 987654321ULL;
};

// Assembles the two-component linearized operator
//   L(phi,psi) - w^{2p-2} (a phi + b psi, c psi + b phi)
// in its L-symmetrized form, extracts its smallest singular values, counts the
// numeric kernel, validates the predicted basis (theta dw/dx_j, dw/dx_j) and
// emits a verdict.
NondegeneracyReport kernel_dimension(const GroundState& gs, const TauSolution& sol,
                                     const NormalizedParams& np, const KernelOptions& opt = {});

// Decoupled scalar check: smallest singular values of the L-symmetrized
// L phi - (2p-1) w^{2p-2} phi (kernel = the N translation modes).
std::vector<double> scalar_kernel_singular_values(const GroundState& gs, int nev,
                                                  const KernelOptions& opt = {});

}  // namespace fracsys

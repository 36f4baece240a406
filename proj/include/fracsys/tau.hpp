#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fracsys/coupling.hpp"

namespace fracsys {

// A root tau0 of g in D together with the amplitude k1 from
//   (mu1 + beta tau0^p) k1^{2p-2} = 1 = (mu2 tau0^{2p-2} + beta tau0^{p-2}) k1^{2p-2}.
struct TauSolution {
    double tau0 = 0.0;
    double k1 = 0.0;
    Interval region;
    bool positivity_first = false;   // mu1 + beta tau0^p > 0
    bool positivity_second = false;  // mu2 tau0^{2p-2} + beta tau0^{p-2} > 0
    double g_residual = 0.0;
};

enum class CriticalKind { minimum, maximum, inflection };

struct CriticalPoint {
    double tau = 0.0;
    CriticalKind kind = CriticalKind::inflection;
    double f_value = 0.0;
};

// Full critical-point census of f on [0, +inf) for beta > 0.
struct Landscape {
    std::vector<CriticalPoint> critical_points;  // ascending tau, includes tau = 0
    std::optional<double> tau_min;               // interior global minimum when below f(0)
    std::optional<double> k_min;
    std::string case_label;
};

inline const char* critical_kind_name(CriticalKind k) {
    switch (k) {
        case CriticalKind::minimum: return "min";
        case CriticalKind::maximum: return "max";
        case CriticalKind::inflection: return "saddle/inflection";
    }
    return "?";
}

// All positive roots of g, ascending, found by splitting (0, inf) into the
// monotone pieces delimited by the roots of h and bisecting each sign change
// (Newton-polished).  Independent of the region filter.
std::vector<double> find_g_roots(const SystemParams& sp, double root_tol = 1e-12);

// Closed form for p = 2: tau0 = sqrt((mu1-beta)/(mu2-beta)) when the ratio is positive.
std::optional<double> tau0_closed_form_p2(const SystemParams& sp);

struct TauSolverOptions {
    double root_tol = 1e-12;
    bool force_bisection = false;  // bypass the p = 2 closed form (cross-check route)
};

// Every root of g in D with amplitudes and positivity flags.  Throws no_root
// when the parameters fall outside the solvable windows or no root lies in D,
// positivity_violation when a beta < 0 root fails the amplitude positivity.
std::vector<TauSolution> solve_tau0(const SystemParams& sp, const TauSolverOptions& opt = {});

// Critical-point census of f per the h -> g -> f' chain; beta > 0 only.
Landscape classify_landscape(const SystemParams& sp, double root_tol = 1e-12);

struct LeastEnergyPrediction {
    double tau_min = 0.0;
    double k_min = 0.0;
    double S_mu1mu2 = 0.0;  // f(tau_min) * S
};

// tau_min, k_min and S_{mu1,mu2} = f(tau_min) S.  Throws semitrivial_minimizer
// when the minimizer of f sits at tau = 0.
LeastEnergyPrediction tau_min_and_Smu(const SystemParams& sp, double S);

// Inverts the strictly decreasing map beta~ -> l(beta~) on (-sqrt(mu), 0).
// lambda must lie strictly inside the attained range, else out_of_range.
double solve_beta_k(const NormalizedParams& np, double lambda, double tol = 1e-10);

}  // namespace fracsys

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "fracsys/ground_state.hpp"
#include "fracsys/tau.hpp"

namespace fracsys {

// Candidate pair for the coupled quotient
//   R(u,v) = int (1+|xi|^{2s}) (|u^|^2+|v^|^2)
//          / ( int mu1|u|^{2p} + 2 beta |u|^p |v|^p + mu2 |v|^{2p} )^{1/p}.
struct CoupledState {
    Field u;
    Field v;
    double quotient_value = 0.0;
    double energy_value = 0.0;  // mountain-pass level ((p-1)/(2p)) R^{p/(p-1)}
};

struct MinimizeOptions {
    int restarts = 8;           // random seeds; one informed seed is added when available
    int max_iterations = 4000;
    double window_tol = 1e-8;   // relative decrease of R over a 25-step window
    int window = 25;
    std::uint64_t seed = 12345ULL;
};

struct MinimizeTrace {
    std::vector<std::pair<int, double>> log;  // (restart, quotient per accepted step)
    std::vector<double> finals;               // final quotient per restart
};

double coupled_quotient(const SystemParams& sp, const Field& u, const Field& v);

// Preconditioned descent on log R from multiple seeds; returns the best pair.
CoupledState minimize_quotient(const SystemParams& sp, const Grid& grid,
                               const MinimizeOptions& opt = {}, MinimizeTrace* trace = nullptr,
                               const GroundState* informed = nullptr);

// Relative L2 residuals of both equations at the Euler-Lagrange rescaling of
// the pair (amplitude fixed so the quotient's multiplier is absorbed).
std::pair<double, double> vector_residual(const SystemParams& sp, const CoupledState& state);

// Least-energy derivative identity: lhs is the centered finite difference of
// B(mu) = k~^2(mu) (1 + tau~^2(mu)) B1 across mu1, rhs = -k_min^{2p} int w^{2p} / (2p).
std::pair<double, double> check_Bprime(const SystemParams& sp, const GroundState& gs, double delta_mu);

}  // namespace fracsys

#pragma once

#include <vector>

#include "fracsys/spectral.hpp"

namespace fracsys {

struct GroundState {
    Field w;
    double s = 0.0;
    double p = 0.0;
    double residual_norm = 0.0;  // ||L w - w^{2p-1}||_2 / ||w^{2p-1}||_2
    double S_value = 0.0;        // sobolev_quotient(w)
    int iterations = 0;
    std::vector<double> residual_history;  // trailing window of residuals
};

struct GroundStateOptions {
    double tol = 1e-12;      // successive relative L2 change
    int max_iterations = 10000;
    int history_window = 100;
};

// Petviashvili fixed point for (-Delta)^s w + w = w^{2p-1}:
//   u <- c^gamma L^{-1}(u^{2p-1}),  c = <L u, u> / <u^{2p-1}, u>,
//   gamma = (2p-1)/(2p-2),
// from a Gaussian seed, recentered to peak at the origin (argmax plus a
// 3-point parabolic sub-grid shift applied as a phase rotation) and
// symmetrized by even reflection averaging every step; negative undershoots
// are clipped to zero.
GroundState solve_w(double s, double p, const Grid& grid, const GroundStateOptions& opt = {});

// The Sobolev quotient at the computed ground state; equals S.
double compute_S(const GroundState& gs);

}  // namespace fracsys

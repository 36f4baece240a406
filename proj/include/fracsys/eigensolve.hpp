#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace fracsys {

using LinearOperator = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

struct EigenPairs {
    Eigen::VectorXd values;   // nev entries, smallest or largest first per call
    Eigen::MatrixXd vectors;  // dim x nev, orthonormal
    Eigen::VectorXd residuals;
    int iterations = 0;
    double operator_norm_estimate = 0.0;
};

struct LobpcgOptions {
    int block = 0;          // 0: nev + 4
    int max_iterations = 500;
    double tol = 1e-9;      // residual / ||A|| estimate
    std::uint64_t seed = 20240701ULL;
};

// Blocked LOBPCG (Rayleigh-Ritz over span{X, R, P}) for a symmetric operator.
// Extreme eigenpairs only; `largest` selects which end of the spectrum.
EigenPairs lobpcg(const LinearOperator& A, std::size_t dim, int nev, bool largest,
                  const LobpcgOptions& opt = {});

}  // namespace fracsys

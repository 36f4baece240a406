#include "fracsys/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "fracsys/errors.hpp"

namespace fracsys {

namespace {

// Returns W such that (S W) is orthonormal when G = S^T S, dropping directions
// whose Gram eigenvalue falls below drop_tol * max.
Eigen::MatrixXd gram_whitening(const Eigen::MatrixXd& G, double drop_tol = 1e-12) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    const Eigen::VectorXd d = es.eigenvalues();
    const double dmax = std::max(d.maxCoeff(), 0.0);
    std::vector<int> keep;
    for (int i = 0; i < d.size(); ++i)
        if (d(i) > drop_tol * dmax && d(i) > 0.0) keep.push_back(i);
    Eigen::MatrixXd W(G.rows(), static_cast<int>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j)
        W.col(static_cast<int>(j)) = es.eigenvectors().col(keep[j]) / std::sqrt(d(keep[j]));
    return W;
}

void sort_for_end(Eigen::VectorXd& theta, Eigen::MatrixXd& C, bool largest) {
    if (largest) {
        theta.reverseInPlace();
        C = C.rowwise().reverse().eval();
    }
}

}  // namespace

EigenPairs lobpcg(const LinearOperator& A, std::size_t dim, int nev, bool largest, const LobpcgOptions& opt) {
    const int n = static_cast<int>(dim);
    int b = opt.block > 0 ? opt.block : nev + 4;
    b = std::min(b, n);
    if (nev > b) raise(ErrorKind::invalid_argument, "lobpcg: nev exceeds block size");

    std::mt19937_64 rng(opt.seed);
    auto urand = [&]() { return 2.0 * (static_cast<double>(rng()) / static_cast<double>(UINT64_MAX)) - 1.0; };

    Eigen::MatrixXd X(n, b);
    for (int j = 0; j < b; ++j)
        for (int i = 0; i < n; ++i) X(i, j) = urand();
    {
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
        X = qr.householderQ() * Eigen::MatrixXd::Identity(n, b);
    }

    auto apply_block = [&](const Eigen::MatrixXd& V) {
        Eigen::MatrixXd AV(n, V.cols());
        Eigen::VectorXd in(n), out(n);
        for (int j = 0; j < V.cols(); ++j) {
            in = V.col(j);
            A(in, out);
            AV.col(j) = out;
        }
        return AV;
    };

    Eigen::MatrixXd AX = apply_block(X);
    Eigen::MatrixXd P(n, 0), AP(n, 0);

    EigenPairs result;
    double a_norm = 1e-300;

    for (int it = 0; it < opt.max_iterations; ++it) {
        // Rayleigh-Ritz on X
        Eigen::MatrixXd H = X.transpose() * AX;
        H = 0.5 * (H + H.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        Eigen::VectorXd theta = es.eigenvalues();
        Eigen::MatrixXd C = es.eigenvectors();
        sort_for_end(theta, C, largest);
        X = (X * C).eval();
        AX = (AX * C).eval();

        a_norm = std::max(a_norm, theta.cwiseAbs().maxCoeff());
        Eigen::MatrixXd R = AX - X * theta.asDiagonal();
        Eigen::VectorXd rnorm(b);
        for (int j = 0; j < b; ++j) rnorm(j) = R.col(j).norm();

        bool done = true;
        for (int j = 0; j < nev; ++j)
            if (rnorm(j) > opt.tol * std::max(a_norm, 1e-300)) done = false;
        result.iterations = it + 1;
        if (done || it == opt.max_iterations - 1) {
            result.values = theta.head(nev);
            result.vectors = X.leftCols(nev);
            result.residuals = rnorm.head(nev);
            result.operator_norm_estimate = a_norm;
            return result;
        }

        // Residual block, orthogonalized against X and P
        R -= X * (X.transpose() * R);
        if (P.cols() > 0) R -= P * (P.transpose() * R);
        Eigen::MatrixXd Gr = R.transpose() * R;
        Gr = 0.5 * (Gr + Gr.transpose()).eval();
        Eigen::MatrixXd Wr = gram_whitening(Gr, 1e-14);
        if (Wr.cols() == 0) {
            // residual space vanished numerically; declare what we have
            result.values = theta.head(nev);
            result.vectors = X.leftCols(nev);
            result.residuals = rnorm.head(nev);
            result.operator_norm_estimate = a_norm;
            return result;
        }
        Eigen::MatrixXd Rq = R * Wr;
        Eigen::MatrixXd ARq = apply_block(Rq);

        // Rayleigh-Ritz over S = [X, Rq, P]
        const int sc = static_cast<int>(X.cols() + Rq.cols() + P.cols());
        Eigen::MatrixXd S(n, sc), AS(n, sc);
        S << X, Rq, P;
        AS << AX, ARq, AP;

        Eigen::MatrixXd G = S.transpose() * S;
        G = 0.5 * (G + G.transpose()).eval();
        Eigen::MatrixXd W = gram_whitening(G);
        Eigen::MatrixXd Hs = W.transpose() * (S.transpose() * AS) * W;
        Hs = 0.5 * (Hs + Hs.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es2(Hs);
        Eigen::VectorXd th2 = es2.eigenvalues();
        Eigen::MatrixXd C2 = es2.eigenvectors();
        sort_for_end(th2, C2, largest);

        const int bkeep = std::min<int>(b, C2.cols());
        const Eigen::MatrixXd Cx = W * C2.leftCols(bkeep);
        Eigen::MatrixXd Xnew = S * Cx;
        Eigen::MatrixXd AXnew = AS * Cx;

        // implicit search direction: the non-X part of the new block
        Eigen::MatrixXd Cp = Cx;
        Cp.topRows(X.cols()).setZero();
        Eigen::MatrixXd Pnew = S * Cp;
        Eigen::MatrixXd APnew = AS * Cp;
        Eigen::MatrixXd Gp = Pnew.transpose() * Pnew;
        Gp = 0.5 * (Gp + Gp.transpose()).eval();
        Eigen::MatrixXd Wp = gram_whitening(Gp, 1e-10);
        P = Pnew * Wp;
        AP = APnew * Wp;

        if (bkeep < b) {
            // pad the block back up with fresh random directions
            Eigen::MatrixXd pad(n, b - bkeep);
            for (int j = 0; j < pad.cols(); ++j)
                for (int i = 0; i < n; ++i) pad(i, j) = urand();
            pad -= Xnew * (Xnew.transpose() * pad);
            Eigen::HouseholderQR<Eigen::MatrixXd> qr(pad);
            pad = qr.householderQ() * Eigen::MatrixXd::Identity(n, pad.cols());
            Eigen::MatrixXd Xfull(n, b), AXfull(n, b);
            Xfull << Xnew, pad;
            AXfull << AXnew, apply_block(pad);
            X = std::move(Xfull);
            AX = std::move(AXfull);
        } else {
            X = std::move(Xnew);
            AX = std::move(AXnew);
        }
    }

    raise(ErrorKind::internal, "lobpcg: unreachable");
}

}  // namespace fracsys

#include "fracsys/nondegeneracy.hpp"

#include <algorithm>
#include <cmath>

namespace fracsys {

std::pair<double, double> gamma_roots(double a, double b, double c) {
    if (b == 0.0) raise(ErrorKind::zero_coupling, "gamma_roots: b must be nonzero");
    // the root with largest magnitude shares the sign of (a-c)/b; the other is
    // -1/it by Vieta, which avoids the cancelling branch entirely
    const double disc = std::sqrt((a - c) * (a - c) + 4.0 * b * b);
    const double num = (a - c) + std::copysign(disc, a - c);
    double root_big = num / (2.0 * b);
    if (root_big == 0.0) root_big = disc / (2.0 * b);  // a = c: roots are ±1
    const double root_other = -1.0 / root_big;
    if (root_big < 0.0) return {root_big, root_other};
    return {root_other, root_big};
}

LinearizationCoeffs linearization_coeffs(const NormalizedParams& np, const TauSolution& sol) {
    if (np.beta_tilde == 0.0) raise(ErrorKind::zero_coupling, "linearization requires beta~ != 0");
    const double p = np.p;
    const double t = sol.tau0;
    const double gt = eval_g_tilde(np, t);
    const double scale = np.mu + std::abs(np.beta_tilde) * (std::pow(t, p) + std::pow(t, p - 2.0)) +
                         std::pow(t, 2.0 * p - 2.0);
    if (std::abs(gt) > 1e-8 * std::max(1.0, scale))
        raise(ErrorKind::constraint, "linearization_coeffs: tau0 is not a root of g~");

    const double k2 = 1.0 / (np.mu + np.beta_tilde * std::pow(t, p));  // k1^{2p-2}
    LinearizationCoeffs lc;
    lc.a = (np.mu * (2.0 * p - 1.0) + np.beta_tilde * (p - 1.0) * std::pow(t, p)) * k2;
    lc.b = np.beta_tilde * p * std::pow(t, p - 1.0) * k2;
    lc.c = ((2.0 * p - 1.0) * std::pow(t, 2.0 * p - 2.0) + np.beta_tilde * (p - 1.0) * std::pow(t, p - 2.0)) * k2;

    const auto [negative_root, positive_root] = gamma_roots(lc.a, lc.b, lc.c);

    // the sign-matched branch (paper labels: gamma+ for beta~ > 0, gamma- for
    // beta~ < 0) is the negative root; it carries a - b gamma = 2p-1
    if (np.beta_tilde > 0.0) {
        lc.gamma_plus = negative_root;
        lc.gamma_minus = positive_root;
        lc.f_tilde = lc.b * lc.gamma_plus + lc.c;
        lc.theta = lc.gamma_plus + (2.0 * p - 1.0 - lc.f_tilde) / lc.b;
    } else {
        lc.gamma_minus = negative_root;
        lc.gamma_plus = positive_root;
        lc.f_tilde = lc.b * lc.gamma_minus + lc.c;
        lc.theta = lc.gamma_minus + (2.0 * p - 1.0 - lc.f_tilde) / lc.b;
    }
    return lc;
}

std::pair<bool, bool> check_claims(const LinearizationCoeffs& lc, const NormalizedParams& np, double tol) {
    if (!(np.beta_tilde > 0.0)) raise(ErrorKind::domain, "check_claims: requires beta~ > 0");
    const bool claim1 = std::abs(lc.f_tilde - 1.0) > tol;
    const bool claim2 = lc.f_tilde < 2.0 * np.p - 1.0 - tol;
    return {claim1, claim2};
}

namespace {

Field weight_field(const GroundState& gs, double floor_rel) {
    Field m(gs.w.grid);
    const double q = 2.0 * gs.p - 2.0;
    double mmax = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = std::pow(std::max(gs.w[i], 0.0), q);
        mmax = std::max(mmax, m[i]);
    }
    if (!(mmax > 0.0)) raise(ErrorKind::invalid_argument, "weight is identically zero");
    if (floor_rel < 1e-12)
        raise(ErrorKind::weight_floor_too_small, "weight floor below 1e-12 of max: conditioning exceeds 1e12");
    const double floor_abs = floor_rel * mmax;
    for (double& v : m.values) {
        if (v < floor_abs) v = 0.0;
    }
    return m;
}

Eigen::VectorXd to_vec(const Field& f) {
    return Eigen::Map<const Eigen::VectorXd>(f.values.data(), static_cast<Eigen::Index>(f.size()));
}

Field from_vec(const Grid& g, const Eigen::VectorXd& v) {
    Field f(g);
    Eigen::Map<Eigen::VectorXd>(f.values.data(), v.size()) = v;
    return f;
}

}  // namespace

WeightedSpectrum weighted_spectrum(const GroundState& gs, int K, const SpectrumOptions& opt) {
    if (K < 1 || K > 40) raise(ErrorKind::invalid_argument, "weighted_spectrum: K must be in [1, 40]");
    const Grid& g = gs.w.grid;
    const double s = gs.s;
    WeightedSpectrum ws;
    ws.weight = weight_field(gs, opt.weight_floor);

    // T = L^{-1/2} m L^{-1/2}: symmetric PSD; eigenvalues are 1/lambda
    LinearOperator T = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        Field x = from_vec(g, in);
        Field y = apply_L_inv_sqrt(x, s);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] *= ws.weight[i];
        Field z = apply_L_inv_sqrt(y, s);
        out = to_vec(z);
    };

    LobpcgOptions lo;
    lo.tol = opt.tol;
    lo.max_iterations = opt.max_iterations;
    lo.seed = opt.seed;
    lo.block = K + 4;
    EigenPairs pairs = lobpcg(T, g.size(), K, /*largest=*/true, lo);

    for (int k = 0; k < K; ++k) {
        const double theta = pairs.values(k);
        if (!(theta > 0.0)) raise(ErrorKind::no_convergence, "weighted spectrum: nonpositive Ritz value");
        ws.eigenvalues.push_back(1.0 / theta);
        Field y = from_vec(g, pairs.vectors.col(k));
        Field phi = apply_L_inv_sqrt(y, s);
        double wnorm = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i) wnorm += ws.weight[i] * phi[i] * phi[i];
        wnorm = std::sqrt(wnorm * std::pow(g.dx(), g.N));
        double peak = 0.0;
        for (double v : phi.values)
            if (std::abs(v) > std::abs(peak)) peak = v;
        const double sign = peak >= 0.0 ? 1.0 : -1.0;
        for (double& v : phi.values) v *= sign / std::max(wnorm, 1e-300);
        ws.eigenfields.push_back(std::move(phi));
    }
    return ws;
}

namespace {

// Two-component symmetrized linearized operator
//   That (y1,y2) = (y1,y2) - L^{-1/2} m Q L^{-1/2} (y1,y2),  Q = [[a,b],[b,c]].
struct TwoComponentOp {
    const Grid* grid;
    double s;
    const Field* m;
    double a, b, c;

    void apply(const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
        const auto M = static_cast<Eigen::Index>(grid->size());
        Field x1 = from_vec(*grid, in.head(M));
        Field x2 = from_vec(*grid, in.tail(M));
        Field y1 = apply_L_inv_sqrt(x1, s);
        Field y2 = apply_L_inv_sqrt(x2, s);
        Field z1(*grid), z2(*grid);
        for (std::size_t i = 0; i < grid->size(); ++i) {
            const double w = (*m)[i];
            z1[i] = w * (a * y1[i] + b * y2[i]);
            z2[i] = w * (b * y1[i] + c * y2[i]);
        }
        Field r1 = apply_L_inv_sqrt(z1, s);
        Field r2 = apply_L_inv_sqrt(z2, s);
        out.resize(2 * M);
        out.head(M) = in.head(M) - to_vec(r1);
        out.tail(M) = in.tail(M) - to_vec(r2);
    }
};

std::vector<double> smallest_singular_values(const LinearOperator& Top, std::size_t dim, int nev,
                                             const KernelOptions& opt, Eigen::MatrixXd* vectors_out) {
    LinearOperator T2 = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        Eigen::VectorXd mid;
        Top(in, mid);
        Top(mid, out);
    };
    LobpcgOptions lo;
    lo.tol = opt.tol;
    lo.max_iterations = opt.max_iterations;
    lo.seed = opt.seed;
    lo.block = nev + 4;
    EigenPairs pairs = lobpcg(T2, dim, nev, /*largest=*/false, lo);
    std::vector<double> svals;
    for (int k = 0; k < nev; ++k) svals.push_back(std::sqrt(std::max(pairs.values(k), 0.0)));
    if (vectors_out) *vectors_out = pairs.vectors;
    return svals;
}

}  // namespace

NondegeneracyReport kernel_dimension(const GroundState& gs, const TauSolution& sol,
                                     const NormalizedParams& np, const KernelOptions& opt) {
    const Grid& g = gs.w.grid;
    const int N = g.N;
    NondegeneracyReport rep;
    rep.coeffs = linearization_coeffs(np, sol);
    rep.spectrum = weighted_spectrum(gs, opt.spectrum_count, opt.spectrum);
    for (double lam : rep.spectrum.eigenvalues)
        rep.f_tilde_distances.push_back(std::abs(rep.coeffs.f_tilde - lam));

    TwoComponentOp op{&g, gs.s, &rep.spectrum.weight, rep.coeffs.a, rep.coeffs.b, rep.coeffs.c};
    LinearOperator That = [&op](const Eigen::VectorXd& in, Eigen::VectorXd& out) { op.apply(in, out); };

    const int nev = 2 * N + 4;
    rep.kernel_singular_values = smallest_singular_values(That, 2 * g.size(), nev, opt, nullptr);

    const double sv_max = rep.kernel_singular_values.back();
    const double cut = opt.sv_threshold * std::max(sv_max, 1e-300);
    int dim = 0;
    while (dim < nev && rep.kernel_singular_values[static_cast<std::size_t>(dim)] < cut) ++dim;
    rep.kernel_dim = dim;
    if (dim > 0 && dim < nev) {
        const double last_kernel = std::max(rep.kernel_singular_values[static_cast<std::size_t>(dim - 1)], 1e-300);
        rep.kernel_gap = rep.kernel_singular_values[static_cast<std::size_t>(dim)] / last_kernel;
    } else {
        rep.kernel_gap = 0.0;
    }

    // predicted kernel basis (theta dw/dx_j, dw/dx_j), pushed through That
    for (int axis = 0; axis < N; ++axis) {
        Field dw = spectral_derivative(gs.w, axis);
        Field y1 = apply_L_sqrt(dw, gs.s);
        const auto M = static_cast<Eigen::Index>(g.size());
        Eigen::VectorXd y(2 * M);
        y.head(M) = rep.coeffs.theta * to_vec(y1);
        y.tail(M) = to_vec(y1);
        Eigen::VectorXd img;
        That(y, img);
        rep.basis_residuals.push_back(img.norm() / std::max(y.norm(), 1e-300));
    }

    const double min_dist = rep.f_tilde_distances.empty()
                                ? 0.0
                                : *std::min_element(rep.f_tilde_distances.begin(), rep.f_tilde_distances.end());
    const bool basis_ok = std::all_of(rep.basis_residuals.begin(), rep.basis_residuals.end(),
                                      [&](double r) { return r <= 10.0 * opt.grid_tol; });

    if (rep.kernel_dim == N && rep.kernel_gap >= opt.min_gap && min_dist >= 10.0 * opt.grid_tol && basis_ok)
        rep.verdict = Verdict::nondegenerate;
    else if (rep.kernel_dim > N && rep.kernel_gap >= opt.min_gap)
        rep.verdict = Verdict::degenerate;
    else
        rep.verdict = Verdict::inconclusive;
    return rep;
}

std::vector<double> scalar_kernel_singular_values(const GroundState& gs, int nev, const KernelOptions& opt) {
    const Grid& g = gs.w.grid;
    Field m = weight_field(gs, opt.spectrum.weight_floor);
    const double lam = 2.0 * gs.p - 1.0;
    LinearOperator Top = [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) {
        Field x = from_vec(g, in);
        Field y = apply_L_inv_sqrt(x, gs.s);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] *= lam * m[i];
        Field z = apply_L_inv_sqrt(y, gs.s);
        out = in - to_vec(z);
    };
    return smallest_singular_values(Top, g.size(), nev, opt, nullptr);
}

}  // namespace fracsys

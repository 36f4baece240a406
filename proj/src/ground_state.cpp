#include "fracsys/ground_state.hpp"

#include "fracsys/params.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace fracsys {

namespace {

Field gaussian_seed(const Grid& g) {
    Field u(g);
    if (g.N == 1) {
        for (int j = 0; j < g.n; ++j) {
            const double x = g.coord(j);
            u[static_cast<std::size_t>(j)] = std::exp(-0.5 * x * x);
        }
    } else {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                const double x = g.coord(i);
                const double y = g.coord(j);
                u[static_cast<std::size_t>(i) * g.n + j] = std::exp(-0.5 * (x * x + y * y));
            }
    }
    return u;
}

Field power_field(const Field& u, double q) {
    Field out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::pow(u[i], q);
    return out;
}

// Even reflection averaging about the origin node, per axis.
void symmetrize(Field& u) {
    const Grid& g = u.grid;
    const int n = g.n;
    if (g.N == 1) {
        for (int j = 1; j < n / 2; ++j) {
            const std::size_t a = static_cast<std::size_t>(j);
            const std::size_t b = static_cast<std::size_t>(n - j);
            const double m = 0.5 * (u[a] + u[b]);
            u[a] = m;
            u[b] = m;
        }
    } else {
        for (int i = 1; i < n / 2; ++i)
            for (int j = 0; j < n; ++j) {
                const std::size_t a = static_cast<std::size_t>(i) * n + j;
                const std::size_t b = static_cast<std::size_t>(n - i) * n + j;
                const double m = 0.5 * (u[a] + u[b]);
                u[a] = m;
                u[b] = m;
            }
        for (int i = 0; i < n; ++i)
            for (int j = 1; j < n / 2; ++j) {
                const std::size_t a = static_cast<std::size_t>(i) * n + j;
                const std::size_t b = static_cast<std::size_t>(i) * n + (n - j);
                const double m = 0.5 * (u[a] + u[b]);
                u[a] = m;
                u[b] = m;
            }
    }
}

double relative_change(const Field& a, const Field& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        num += d * d;
        den += b[i] * b[i];
    }
    return std::sqrt(num / std::max(den, 1e-300));
}

}  // namespace

GroundState solve_w(double s, double p, const Grid& grid, const GroundStateOptions& opt) {
    if (!(p > 1.0)) raise(ErrorKind::invalid_argument, "solve_w: requires p > 1");
    const double crit_half = 0.5 * critical_exponent(s, grid.N);
    if (!(p < crit_half)) raise(ErrorKind::invalid_argument, "solve_w: requires p < 2_s^*/2");
    if (!(opt.tol >= 1e-16)) raise(ErrorKind::invalid_argument, "solve_w: tol too small");

    const double sigma = 2.0 * p - 1.0;             // homogeneity of the nonlinearity
    const double gamma = sigma / (sigma - 1.0);     // stabilizing exponent (2p-1)/(2p-2)

    Field u = gaussian_seed(grid);
    GroundState gs;
    gs.s = s;
    gs.p = p;

    std::deque<double> history;
    int it = 0;
    for (; it < opt.max_iterations; ++it) {
        const Field nl = power_field(u, sigma);
        const double num = hs_energy(u, s);          // <L u, u>
        const double den = inner(nl, u);              // int u^{2p}
        if (!(den > 1e-280) || !(num > 1e-280)) raise(ErrorKind::collapse_to_zero, "iterate collapsed to zero");
        const double c = num / den;
        if (!std::isfinite(c)) raise(ErrorKind::collapse_to_zero, "stabilizing factor overflowed");

        Field next = apply_L_inverse(nl, s);
        const double amp = std::pow(c, gamma);
        for (double& v : next.values) v = std::max(amp * v, 0.0);
        next = recenter_peak(next);
        for (double& v : next.values) v = std::max(v, 0.0);
        symmetrize(next);

        const double delta = relative_change(next, u);
        u = std::move(next);

        const Field nl2 = power_field(u, sigma);
        Field res = apply_L(u, s);
        for (std::size_t i = 0; i < res.size(); ++i) res[i] -= nl2[i];
        const double residual = l2_norm(res) / std::max(l2_norm(nl2), 1e-300);
        history.push_back(residual);
        if (static_cast<int>(history.size()) > opt.history_window) history.pop_front();

        if (delta < opt.tol && it > 1) {
            gs.residual_norm = residual;
            break;
        }
    }
    if (it >= opt.max_iterations)
        raise(ErrorKind::no_convergence, "Petviashvili iteration did not converge");

    // clipped tail nodes sit at exact zero; lift them to a strictly positive
    // floor far below FFT roundoff so downstream positivity holds literally
    for (double& v : u.values) v = std::max(v, 1e-300);

    gs.w = std::move(u);
    gs.iterations = it + 1;
    gs.residual_history.assign(history.begin(), history.end());
    gs.S_value = sobolev_quotient(gs.w, s, p);
    return gs;
}

double compute_S(const GroundState& gs) { return sobolev_quotient(gs.w, gs.s, gs.p); }

}  // namespace fracsys

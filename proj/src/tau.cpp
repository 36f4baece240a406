#include "fracsys/tau.hpp"

#include <algorithm>
#include <cmath>

namespace fracsys {

namespace {

double g_term_scale(const SystemParams& sp, double tau) {
    return std::abs(sp.mu1) + std::abs(sp.beta) * (std::pow(tau, sp.p) + std::pow(tau, sp.p - 2.0)) +
           sp.mu2 * std::pow(tau, 2.0 * sp.p - 2.0);
}

// Sign of g as tau -> 0+ without evaluating at an extreme point.
int g_sign_at_zero(const SystemParams& sp) {
    if (sp.p < 2.0) {
        if (sp.beta > 0.0) return -1;
        if (sp.beta < 0.0) return +1;
        return +1;  // beta = 0: g(0+) = mu1
    }
    if (sp.p == 2.0) {
        const double v = sp.mu1 - sp.beta;
        return v > 0.0 ? +1 : (v < 0.0 ? -1 : 0);
    }
    return +1;  // p > 2: g(0+) = mu1 > 0
}

// Sign of g as tau -> +inf.
int g_sign_at_infinity(const SystemParams& sp) {
    if (sp.p < 2.0) {
        if (sp.beta > 0.0) return +1;
        return -1;  // beta <= 0: -mu2 tau^{2p-2} or -beta tau^p dominate negatively
    }
    if (sp.p == 2.0) {
        const double v = sp.beta - sp.mu2;
        if (v != 0.0) return v > 0.0 ? +1 : -1;
        return sp.mu1 - sp.beta > 0.0 ? +1 : -1;  // beta = mu2: g constant mu1 - beta
    }
    return -1;  // p > 2: -mu2 tau^{2p-2} dominates
}

int sign_of(double v) { return v > 0.0 ? +1 : (v < 0.0 ? -1 : 0); }

// Bisection for g on a bracket with opposite signs, then a guarded Newton polish.
double refine_g_root(const SystemParams& sp, double a, double b, double fa, double /*fb*/, double root_tol) {
    double lo = a, hi = b;
    double m = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        m = 0.5 * (lo + hi);
        const double fm = eval_g(sp, m);
        const double scale = std::max(1.0, g_term_scale(sp, m));
        if (std::abs(fm) <= root_tol * scale && (hi - lo) <= root_tol * std::max(1.0, m)) break;
        if ((fm > 0.0) == (fa > 0.0)) {
            lo = m;
        } else {
            hi = m;
        }
    }
    // Newton polish: g' = tau^{p-3} h(tau)
    for (int it = 0; it < 8; ++it) {
        const double gm = eval_g(sp, m);
        const double dg = std::pow(m, sp.p - 3.0) * eval_h(sp, m);
        if (dg == 0.0 || !std::isfinite(dg)) break;
        const double step = gm / dg;
        const double next = m - step;
        if (!(next > lo) || !(next < hi)) break;
        m = next;
        if (std::abs(step) <= 1e-16 * std::max(1.0, m)) break;
    }
    return m;
}

// Positive roots of h, ascending.  h has at most one interior extremum, so at
// most two roots; for beta < 0 it is strictly decreasing.
std::vector<double> find_h_roots(const SystemParams& sp) {
    std::vector<double> roots;
    const double p = sp.p;
    const double beta = sp.beta;

    auto bisect_h = [&](double a, double b) {
        double fa = eval_h(sp, a);
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = eval_h(sp, m);
            if (fm == 0.0 || (b - a) <= 1e-14 * std::max(1.0, m)) return m;
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };

    if (beta == 0.0 || p == 2.0) return roots;  // constant-sign h

    if (beta < 0.0) {
        // strictly decreasing from h(0+) = |beta| (p-2)
        if (p <= 2.0) return roots;  // starts non-positive, stays negative
        double b = 1.0;
        int k = 0;
        while (eval_h(sp, b) > 0.0 && k++ < 200) b *= 2.0;
        double a = b * 0.5;
        while (eval_h(sp, a) < 0.0 && a > 1e-300) a *= 0.5;
        if (eval_h(sp, a) > 0.0 && eval_h(sp, b) < 0.0) roots.push_back(bisect_h(a, b));
        return roots;
    }

    // beta > 0, p != 2: single interior extremum of h at tau_h
    const double tau_h = std::pow(beta / (sp.mu2 * (p - 1.0)), 1.0 / (p - 2.0));
    const double h_ext = eval_h(sp, tau_h);
    const bool two_roots = (p > 2.0) ? (h_ext > 0.0) : (h_ext < 0.0);
    if (!two_roots) return roots;

    // inner root between 0+ and tau_h
    double a = 0.5 * tau_h;
    const int s0 = (p > 2.0) ? -1 : +1;  // sign of h near 0+
    int k = 0;
    while (sign_of(eval_h(sp, a)) != s0 && k++ < 200) a *= 0.5;
    if (sign_of(eval_h(sp, a)) == s0) roots.push_back(bisect_h(a, tau_h));

    // outer root beyond tau_h
    double b = 2.0 * tau_h;
    k = 0;
    while (sign_of(eval_h(sp, b)) == sign_of(h_ext) && k++ < 60) b *= 2.0;
    if (sign_of(eval_h(sp, b)) != sign_of(h_ext)) roots.push_back(bisect_h(tau_h, b));

    std::sort(roots.begin(), roots.end());
    return roots;
}

}  // namespace

std::vector<double> find_g_roots(const SystemParams& sp, double root_tol) {
    std::vector<double> roots;
    const std::vector<double> breaks = find_h_roots(sp);

    // Interior breakpoints that already sit on a root (tangency) count once.
    for (double b : breaks) {
        const double gb = eval_g(sp, b);
        if (std::abs(gb) <= root_tol * std::max(1.0, g_term_scale(sp, b))) roots.push_back(b);
    }

    struct Endpoint {
        double tau;    // finite abscissa, or 0/inf marker via kind
        int sign;      // sign of g there (analytic at the extremes)
        bool at_zero;
        bool at_inf;
    };

    std::vector<Endpoint> pts;
    pts.push_back({0.0, g_sign_at_zero(sp), true, false});
    for (double b : breaks) pts.push_back({b, sign_of(eval_g(sp, b)), false, false});
    pts.push_back({0.0, g_sign_at_infinity(sp), false, true});

    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        const Endpoint& left = pts[i];
        const Endpoint& right = pts[i + 1];
        if (left.sign == 0 || right.sign == 0) continue;  // endpoint root already recorded
        if (left.sign == right.sign) continue;

        double a, b;
        if (left.at_zero) {
            const double anchor = right.at_inf ? 1.0 : right.tau;
            a = 0.5 * anchor;
            int k = 0;
            while (sign_of(eval_g(sp, a)) != left.sign && k++ < 200) a *= 0.5;
            if (sign_of(eval_g(sp, a)) != left.sign) continue;
        } else {
            a = left.tau;
        }
        if (right.at_inf) {
            double hint = std::max(2.0, 2.0 * a);
            if (sp.p > 2.0 && sp.beta > 0.0) {
                // paper bound: all roots lie below (2 beta~/p)^{1/(p-2)}
                const double bt = sp.beta / sp.mu2;
                hint = std::max(hint, 2.0 * std::pow(2.0 * bt / sp.p, 1.0 / (sp.p - 2.0)));
            }
            b = hint;
            int k = 0;
            while (sign_of(eval_g(sp, b)) != right.sign && k++ < 60) b *= 2.0;
            if (sign_of(eval_g(sp, b)) != right.sign) continue;
        } else {
            b = right.tau;
        }
        const double fa = eval_g(sp, a);
        const double fb = eval_g(sp, b);
        if (sign_of(fa) == sign_of(fb)) continue;
        roots.push_back(refine_g_root(sp, a, b, fa, fb, root_tol));
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [](double x, double y) { return std::abs(x - y) <= 1e-10 * std::max(1.0, x); }),
                roots.end());
    return roots;
}

std::optional<double> tau0_closed_form_p2(const SystemParams& sp) {
    if (sp.p != 2.0) return std::nullopt;
    const double num = sp.mu1 - sp.beta;
    const double den = sp.mu2 - sp.beta;
    if (den == 0.0 || num / den <= 0.0) return std::nullopt;
    return std::sqrt(num / den);
}

namespace {

bool in_solvable_window(const SystemParams& sp) {
    const double lim = -std::sqrt(sp.mu1 * sp.mu2);
    if (sp.beta == 0.0) return false;
    if (sp.beta < 0.0) return sp.beta > lim;
    if (sp.p == 2.0) return sp.beta < sp.mu2 || sp.beta > sp.mu1;
    return true;
}

}  // namespace

std::vector<TauSolution> solve_tau0(const SystemParams& sp, const TauSolverOptions& opt) {
    if (!in_solvable_window(sp)) {
        if (sp.p == 2.0 && sp.beta >= sp.mu2 && sp.beta <= sp.mu1)
            raise(ErrorKind::no_root, "no positive solutions: p = 2 with beta in [mu2, mu1]");
        raise(ErrorKind::no_root, "parameters outside the solvable coupling windows");
    }

    std::vector<double> roots;
    if (sp.p == 2.0 && !opt.force_bisection) {
        if (auto t = tau0_closed_form_p2(sp)) roots.push_back(*t);
    } else {
        roots = find_g_roots(sp, opt.root_tol);
    }

    const Interval D = region_D(sp);
    std::vector<TauSolution> out;
    for (double t : roots) {
        if (!D.contains(t)) continue;
        TauSolution sol;
        sol.tau0 = t;
        sol.region = D;
        const double amp1 = sp.mu1 + sp.beta * std::pow(t, sp.p);
        const double amp2 = sp.mu2 * std::pow(t, 2.0 * sp.p - 2.0) + sp.beta * std::pow(t, sp.p - 2.0);
        sol.positivity_first = amp1 > 0.0;
        sol.positivity_second = amp2 > 0.0;
        sol.g_residual = eval_g(sp, t);
        if (!sol.positivity_first || !sol.positivity_second) {
            if (sp.beta < 0.0)
                raise(ErrorKind::positivity_violation, "root of g fails the amplitude positivity conditions");
            continue;
        }
        sol.k1 = std::pow(amp1, -1.0 / (2.0 * sp.p - 2.0));
        out.push_back(sol);
    }
    if (out.empty()) raise(ErrorKind::no_root, "no root of g found in D");
    return out;
}

Landscape classify_landscape(const SystemParams& sp, double root_tol) {
    if (!(sp.beta > 0.0)) raise(ErrorKind::domain, "classify_landscape: requires beta > 0");

    Landscape L;
    const std::vector<double> roots = find_g_roots(sp, root_tol);

    // endpoint tau = 0
    CriticalPoint origin;
    origin.tau = 0.0;
    origin.f_value = eval_f(sp, 0.0);
    const int s0 = g_sign_at_zero(sp);
    origin.kind = s0 > 0 ? CriticalKind::minimum : (s0 < 0 ? CriticalKind::maximum : CriticalKind::inflection);
    L.critical_points.push_back(origin);

    // interior roots classified by the sign of f' = 2 tau g / H^{1+1/p} on each side
    for (size_t i = 0; i < roots.size(); ++i) {
        const double t = roots[i];
        const double left_sample = (i == 0) ? 0.5 * t : 0.5 * (roots[i - 1] + t);
        const double right_sample = (i + 1 < roots.size()) ? 0.5 * (t + roots[i + 1]) : 2.0 * t;
        int sl = sign_of(eval_g(sp, left_sample));
        int sr = sign_of(eval_g(sp, right_sample));
        if (i == 0 && sl == 0) sl = s0;
        CriticalPoint cp;
        cp.tau = t;
        cp.f_value = eval_f(sp, t);
        if (sl > 0 && sr < 0)
            cp.kind = CriticalKind::maximum;
        else if (sl < 0 && sr > 0)
            cp.kind = CriticalKind::minimum;
        else
            cp.kind = CriticalKind::inflection;
        L.critical_points.push_back(cp);
    }

    // kinds must alternate along increasing tau
    std::vector<CriticalKind> pattern;
    for (const auto& cp : L.critical_points) pattern.push_back(cp.kind);
    for (size_t i = 0; i + 1 < pattern.size(); ++i) {
        if (pattern[i] == CriticalKind::inflection || pattern[i + 1] == CriticalKind::inflection) continue;
        if (pattern[i] == pattern[i + 1])
            raise(ErrorKind::unclassified, "landscape sign table does not alternate");
    }

    const size_t n_int = roots.size();
    const CriticalKind k0 = origin.kind;
    auto interior_kind = [&](size_t i) { return L.critical_points[i + 1].kind; };
    if (n_int == 1 && k0 == CriticalKind::minimum && interior_kind(0) == CriticalKind::maximum)
        L.case_label = "unique-max+min-at-0";
    else if (n_int == 1 && k0 == CriticalKind::maximum && interior_kind(0) == CriticalKind::minimum)
        L.case_label = "unique-min+max-at-0";
    else if (n_int == 3 && k0 == CriticalKind::minimum && interior_kind(0) == CriticalKind::maximum &&
             interior_kind(1) == CriticalKind::minimum && interior_kind(2) == CriticalKind::maximum)
        L.case_label = "two-pairs";
    else if (n_int == 3 && k0 == CriticalKind::maximum && interior_kind(0) == CriticalKind::minimum &&
             interior_kind(1) == CriticalKind::maximum && interior_kind(2) == CriticalKind::minimum)
        L.case_label = "two-pairs";
    else
        raise(ErrorKind::unclassified, "landscape configuration matches no known case");

    // interior global minimum, kept only when it beats f(0)
    double best_f = std::numeric_limits<double>::infinity();
    double best_tau = -1.0;
    for (const auto& cp : L.critical_points) {
        if (cp.tau > 0.0 && cp.kind == CriticalKind::minimum && cp.f_value < best_f) {
            best_f = cp.f_value;
            best_tau = cp.tau;
        }
    }
    if (best_tau > 0.0 && best_f < origin.f_value) {
        L.tau_min = best_tau;
        L.k_min = std::pow(sp.mu1 + sp.beta * std::pow(best_tau, sp.p), -1.0 / (2.0 * sp.p - 2.0));

        // dense-grid validation of global minimality over [0, +inf)
        const double hi = std::max(10.0, 10.0 * roots.back());
        const double lo = 1e-4;
        const int n = 10000;
        double grid_min = origin.f_value;
        for (int i = 0; i <= n; ++i) {
            const double t = lo * std::pow(hi / lo, static_cast<double>(i) / n);
            grid_min = std::min(grid_min, eval_f(sp, t));
        }
        if (best_f > grid_min * (1.0 + 1e-9) + 1e-12)
            raise(ErrorKind::unclassified, "reported minimum beaten by dense-grid scan");
    }

    return L;
}

LeastEnergyPrediction tau_min_and_Smu(const SystemParams& sp, double S) {
    if (!(S > 0.0)) raise(ErrorKind::invalid_argument, "tau_min_and_Smu: S must be positive");
    const Landscape L = classify_landscape(sp);
    if (!L.tau_min)
        raise(ErrorKind::semitrivial_minimizer, "minimizer of f is semi-trivial (tau_min = 0)");
    LeastEnergyPrediction pred;
    pred.tau_min = *L.tau_min;
    pred.k_min = *L.k_min;
    pred.S_mu1mu2 = eval_f(sp, pred.tau_min) * S;

    const double stat = pred.tau_min * eval_g(sp, pred.tau_min);
    if (std::abs(stat) > 1e-8 * std::max(1.0, g_term_scale(sp, pred.tau_min)))
        raise(ErrorKind::unclassified, "stationarity relation fails at tau_min");
    return pred;
}

namespace {

// l evaluated through the inner tau-root solve at a trial beta~ < 0.
double l_of_beta(const NormalizedParams& np, double beta_tilde) {
    NormalizedParams trial(np.mu, beta_tilde, np.p, np.s, np.N);
    const auto sols = solve_tau0(trial.as_system());
    return eval_l(trial, sols.front().tau0, 1e-6);
}

}  // namespace

double solve_beta_k(const NormalizedParams& np, double lambda, double tol) {
    if (!(np.mu > 1.0)) raise(ErrorKind::invalid_argument, "solve_beta_k: requires mu > 1");
    const double smu = std::sqrt(np.mu);
    // near -sqrt(mu) the positivity window collapses and l blows up; 1e-8
    // of margin keeps the inner root solve well conditioned while leaving
    // l(lo) ~ 1e8, far above any realistic eigenvalue target
    double lo = -smu * (1.0 - 1e-8);
    double hi = -smu * 1e-8;

    const double l_hi = l_of_beta(np, hi);
    const double l_lo = l_of_beta(np, lo);
    if (!(lambda > l_hi) || !(lambda < l_lo))
        raise(ErrorKind::out_of_range, "lambda outside the attained range of l on (-sqrt(mu), 0)");

    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        mid = 0.5 * (lo + hi);
        const double lm = l_of_beta(np, mid);
        if (std::abs(lm - lambda) <= tol * std::max(1.0, std::abs(lambda))) return mid;
        if (lm > lambda)
            lo = mid;  // l decreases in beta~: need larger beta~
        else
            hi = mid;
        if (hi - lo <= 1e-16 * smu) break;
    }
    const double lm = l_of_beta(np, mid);
    if (std::abs(lm - lambda) > 100.0 * tol * std::max(1.0, std::abs(lambda)))
        raise(ErrorKind::no_convergence, "bisection on l(beta~) failed to reach tolerance");
    return mid;
}

}  // namespace fracsys

#include "fracsys/coupling.hpp"

#include <cmath>

namespace fracsys {

namespace {

void require_positive_tau(double tau, const char* who) {
    if (!(tau > 0.0)) raise(ErrorKind::domain, std::string(who) + ": tau must be > 0");
}

}  // namespace

double eval_g(const SystemParams& sp, double tau) {
    require_positive_tau(tau, "eval_g");
    return sp.mu1 + sp.beta * std::pow(tau, sp.p) - sp.mu2 * std::pow(tau, 2.0 * sp.p - 2.0) -
           sp.beta * std::pow(tau, sp.p - 2.0);
}

double eval_H(const SystemParams& sp, double tau) {
    if (!(tau >= 0.0)) raise(ErrorKind::domain, "eval_H: tau must be >= 0");
    return sp.mu1 + 2.0 * sp.beta * std::pow(tau, sp.p) + sp.mu2 * std::pow(tau, 2.0 * sp.p);
}

double eval_f(const SystemParams& sp, double tau) {
    const double H = eval_H(sp, tau);
    if (!(H > 0.0)) raise(ErrorKind::domain, "eval_f: denominator mu1 + 2 beta tau^p + mu2 tau^{2p} is not positive");
    return (1.0 + tau * tau) / std::pow(H, 1.0 / sp.p);
}

double eval_h(const SystemParams& sp, double tau) {
    require_positive_tau(tau, "eval_h");
    return sp.beta * sp.p * tau * tau - 2.0 * sp.mu2 * (sp.p - 1.0) * std::pow(tau, sp.p) -
           sp.beta * (sp.p - 2.0);
}

double eval_H1(double t, double p) {
    if (!(p > 2.0)) raise(ErrorKind::domain, "eval_H1: requires p > 2");
    if (!(t > 0.0)) raise(ErrorKind::domain, "eval_H1: requires t > 0");
    const double lead = t * t / (p - 1.0);
    const double corr = (p - 2.0) / p * std::pow(p - 1.0, -p / (p - 2.0)) *
                        std::pow(t, 2.0 * (p - 1.0) / (p - 2.0));
    return lead - corr;
}

double H1_maximizer(double p) {
    if (!(p > 2.0)) raise(ErrorKind::domain, "H1_maximizer: requires p > 2");
    return std::pow(p, (p - 2.0) / 2.0) * std::pow(p - 1.0, (4.0 - p) / 2.0);
}

double H1_max_value(double p) {
    if (!(p > 2.0)) raise(ErrorKind::domain, "H1_max_value: requires p > 2");
    return std::pow(p / (p - 1.0), p - 2.0);
}

std::pair<double, double> eval_F_G(const NormalizedParams& np, double tau) {
    require_positive_tau(tau, "eval_F_G");
    const double p = np.p;
    const double F = p * std::pow(tau, 2.0 * p - 2.0) - 2.0 * np.beta_tilde * std::pow(tau, p);
    const double G = 2.0 * (p - 1.0) / p * np.mu + np.beta_tilde * (p - 2.0) / p * std::pow(tau, p) -
                     np.beta_tilde * std::pow(tau, p - 2.0);
    return {F, G};
}

double eval_g_tilde(const NormalizedParams& np, double tau) {
    require_positive_tau(tau, "eval_g_tilde");
    return np.mu + np.beta_tilde * std::pow(tau, np.p) - np.beta_tilde * std::pow(tau, np.p - 2.0) -
           std::pow(tau, 2.0 * np.p - 2.0);
}

double eval_l(const NormalizedParams& np, double tau, double root_check) {
    require_positive_tau(tau, "eval_l");
    const double p = np.p;
    const double gt = eval_g_tilde(np, tau);
    const double scale = np.mu + std::abs(np.beta_tilde) * (std::pow(tau, p) + std::pow(tau, p - 2.0)) +
                         std::pow(tau, 2.0 * p - 2.0);
    if (std::abs(gt) > root_check * std::max(1.0, scale))
        raise(ErrorKind::constraint, "eval_l: tau is not a root of g~ within tolerance");
    const double denom = np.mu + np.beta_tilde * std::pow(tau, p);
    const double amp2 = std::pow(tau, 2.0 * p - 2.0) + np.beta_tilde * std::pow(tau, p - 2.0);
    if (!(denom > 0.0) || !(amp2 > 0.0))
        raise(ErrorKind::constraint, "eval_l: positivity conditions fail at tau");
    const double num = np.mu * (2.0 * p - 1.0) + np.beta_tilde * (p - 1.0) * std::pow(tau, p) -
                       np.beta_tilde * p * std::pow(tau, p - 2.0);
    return num / denom;
}

Interval region_D(const SystemParams& sp) {
    const double p = sp.p;
    const double inf = std::numeric_limits<double>::infinity();
    if (p < 2.0) {
        const double thresh = (p - 1.0) * std::pow(sp.mu1, (p - 2.0) / (2.0 * (p - 1.0))) *
                              std::pow(sp.mu2, p / (2.0 * (p - 1.0)));
        if (sp.beta > 0.0 && sp.beta < thresh) return Interval(0.0, 1.0);
    } else if (p > 2.0) {
        if (sp.beta > (p - 1.0) * sp.mu1) return Interval(1.0, inf);
    }
    return Interval(0.0, inf);
}

Interval region_Dtilde(const NormalizedParams& np) {
    const double p = np.p;
    const double inf = std::numeric_limits<double>::infinity();
    if (p < 2.0) {
        const double thresh = (p - 1.0) * std::pow(np.mu, (p - 2.0) / (2.0 * (p - 1.0)));
        if (np.beta_tilde > 0.0 && np.beta_tilde < thresh) return Interval(0.0, 1.0);
    } else if (p > 2.0) {
        if (np.beta_tilde > (p - 1.0) * np.mu) return Interval(1.0, inf);
    }
    return Interval(0.0, inf);
}

namespace {

// Roots of level = H1(t): bisection on each side of the maximizer.  The level
// must lie strictly below H1_max_value for two roots to exist.
std::pair<std::optional<double>, std::optional<double>> h1_level_roots(double level, double p) {
    const double tmax = H1_maximizer(p);
    const double vmax = H1_max_value(p);
    if (!(level < vmax)) return {std::nullopt, std::nullopt};

    auto bisect = [&](double a, double b) {
        // sign convention: H1(t) - level, negative at a, positive at b or vice versa
        double fa = eval_H1(a, p) - level;
        double fb = eval_H1(b, p) - level;
        if (fa == 0.0) return a;
        if (fb == 0.0) return b;
        for (int it = 0; it < 200; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = eval_H1(m, p) - level;
            if (fm == 0.0 || (b - a) <= 1e-15 * std::max(1.0, std::abs(m))) return m;
            if ((fm > 0.0) == (fa > 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        return 0.5 * (a + b);
    };

    // Left root: H1 increases from 0+ (H1 -> 0) to vmax at tmax.
    std::optional<double> r0;
    std::optional<double> r1;
    if (level > 0.0) {
        double a = tmax;
        while (eval_H1(a, p) > level) {
            a *= 0.5;
            if (a < 1e-300) break;
        }
        r0 = bisect(a, tmax);
    }
    // Right root: H1 decreases from vmax to -inf.
    {
        double b = tmax;
        for (int k = 0; k < 60; ++k) {
            b *= 2.0;
            if (eval_H1(b, p) < level) break;
        }
        r1 = bisect(tmax, b);
    }
    return {r0, r1};
}

}  // namespace

ConditionReport classify_conditions(const SystemParams& sp) {
    ConditionReport rep;
    const double p = sp.p;
    const double mu1 = sp.mu1;
    const double mu2 = sp.mu2;
    const double beta = sp.beta;
    const double pstar_half = 0.5 * critical_exponent(sp.s, sp.N);

    const NormalizedParams np = normalize(sp);
    const double mu = np.mu;
    const double bt = np.beta_tilde;

    rep.nonexistence_window = (p == 2.0) && (beta >= mu2) && (beta <= mu1);

    const bool p_sub = p < std::min(2.0, pstar_half);
    const bool p_super = p > 2.0 && p < pstar_half;

    // beta0 < beta1 solve 2(p-1)mu1/(p mu2) = H1(beta/mu2); present only in
    // the small-mu1 branch of A3/B3.
    if (p_super && mu1 < 0.5 * mu2 * std::pow(p / (p - 1.0), p - 1.0)) {
        const double level = 2.0 * (p - 1.0) * mu1 / (p * mu2);
        auto [t0, t1] = h1_level_roots(level, p);
        if (t0) rep.beta0 = *t0 * mu2;
        if (t1) rep.beta1 = *t1 * mu2;
    }

    if (p_super) {
        rep.a_flags[0] = beta > 0.0 && beta <= (p - 1.0) * mu1;
        rep.a_flags[1] = mu1 >= 0.5 * mu2 * std::pow(p / (p - 1.0), p - 1.0) && beta > (p - 1.0) * mu1;
        if (mu1 < 0.5 * mu2 * std::pow(p / (p - 1.0), p - 1.0) && rep.beta0 && rep.beta1) {
            const bool low = (p - 1.0) * mu1 <= beta && beta <= *rep.beta0;
            const bool high = beta >= std::max(*rep.beta1, (p - 1.0) * mu1);
            rep.a_flags[2] = low || high;
        }
    }
    if (p_sub) {
        const double thr_d = (p - 1.0) * std::pow(mu1, (p - 2.0) / (2.0 * (p - 1.0))) *
                             std::pow(mu2, p / (2.0 * (p - 1.0)));
        rep.a_flags[3] = beta >= thr_d;
        if (mu1 > 0.0 && mu1 < p * mu2 / (2.0 - p)) {
            const double bound1 = 0.5 * (p * mu2 - mu1 * (2.0 - p));
            const double bound2 = 2.0 * (p - 1.0) * std::pow(2.0 - p, (2.0 - p) / (2.0 * (p - 1.0))) *
                                  std::pow(1.0 / p, p / (2.0 * (p - 1.0))) *
                                  std::pow(mu1, p / (2.0 * (p - 1.0))) *
                                  std::pow(mu2, (p - 2.0) / (2.0 * (p - 1.0)));
            rep.a_flags[4] = beta > 0.0 && beta <= std::min(bound1, bound2);
        }
        const double lower = std::max(0.5 * (p * mu2 - mu1 * (2.0 - p)), 0.0);
        rep.a_flags[5] = beta > lower && beta < thr_d;
    }
    if (p == 2.0) rep.a_flags[6] = (beta > 0.0 && beta < mu2) || beta > mu1;

    // B conditions on (mu, beta~); beta~0/beta~1 are beta0/beta1 divided by mu2.
    if (p > 2.0) {
        rep.b_flags[0] = bt > 0.0 && bt <= (p - 1.0) * mu;
        rep.b_flags[1] = mu >= 0.5 * std::pow(p / (p - 1.0), p - 1.0) && bt >= (p - 1.0) * mu;
        if (mu > 1.0 && mu < 0.5 * std::pow(p / (p - 1.0), p - 1.0)) {
            const double level = 2.0 * (p - 1.0) / p * mu;
            auto [t0, t1] = h1_level_roots(level, p);
            if (t0 && t1) {
                const bool low = (p - 1.0) * mu <= bt && bt <= *t0;
                const bool high = std::max(*t1, (p - 1.0) * mu) <= bt;
                rep.b_flags[2] = low || high;
            }
        }
    } else if (p < 2.0) {
        const double thr = (p - 1.0) * std::pow(mu, (p - 2.0) / (2.0 * (p - 1.0)));
        rep.b_flags[3] = bt >= thr;
        if (mu > 1.0 && mu < p / (2.0 - p)) {
            const double bound1 = 0.5 * (p - mu * (2.0 - p));
            const double bound2 = 2.0 * (p - 1.0) * std::pow(2.0 - p, (2.0 - p) / (2.0 * (p - 1.0))) *
                                  std::pow(mu / p, p / (2.0 * (p - 1.0)));
            rep.b_flags[4] = bt > 0.0 && bt <= std::min(bound1, bound2);
        }
        const double lower = std::max(0.5 * (p - mu * (2.0 - p)), 0.0);
        rep.b_flags[5] = bt > lower && bt < thr;
    } else {
        rep.b_flags[6] = bt > 0.0;
    }

    return rep;
}

}  // namespace fracsys

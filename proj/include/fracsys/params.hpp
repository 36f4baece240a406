#pragma once

#include <cmath>
#include <limits>

#include "fracsys/errors.hpp"

namespace fracsys {

// Critical Sobolev exponent 2N/(N-2s), or +inf when N <= 2s.
inline double critical_exponent(double s, int N) {
    if (static_cast<double>(N) <= 2.0 * s) return std::numeric_limits<double>::infinity();
    return 2.0 * N / (N - 2.0 * s);
}

// Coupling parameters of the two-component system
//
//   (-Delta)^s u + u = mu1 |u|^{2p-2} u + beta |v|^p |u|^{p-2} u,
//   (-Delta)^s v + v = mu2 |v|^{2p-2} v + beta |u|^p |v|^{p-2} v.
//
// Standing assumptions enforced at construction: 0 < s <= 1 (s = 1 is the
// classical-limit validation mode), mu1 > mu2 > 0, and 1 < p < 2_s^*/2.
struct SystemParams {
    double s = 0.5;
    double p = 1.5;
    int N = 1;
    double mu1 = 2.0;
    double mu2 = 1.0;
    double beta = 0.0;

    SystemParams() = default;
    SystemParams(double s_, double p_, int N_, double mu1_, double mu2_, double beta_)
        : s(s_), p(p_), N(N_), mu1(mu1_), mu2(mu2_), beta(beta_) {
        validate();
    }

    void validate() const {
        if (!(s > 0.0) || !(s <= 1.0)) raise(ErrorKind::invalid_argument, "fractional order must satisfy 0 < s <= 1");
        if (N < 1) raise(ErrorKind::invalid_argument, "spatial dimension must be >= 1");
        if (!(mu2 > 0.0) || !(mu1 > mu2))
            raise(ErrorKind::invalid_argument, "self-couplings must satisfy mu1 > mu2 > 0");
        const double pmax = 0.5 * critical_exponent(s, N);
        if (!(p > 1.0) || !(p < pmax))
            raise(ErrorKind::invalid_argument, "exponent must satisfy 1 < p < 2_s^*/2");
        if (!std::isfinite(beta)) raise(ErrorKind::invalid_argument, "coupling must be finite");
    }
};

// Same system after the scaling (u,v) -> mu2^{-1/(2p-2)} (u,v): the second
// self-coupling becomes 1, mu = mu1/mu2 > 1 and beta_tilde = beta/mu2.
struct NormalizedParams {
    double mu = 2.0;
    double beta_tilde = 0.0;
    double p = 1.5;
    double s = 0.5;
    int N = 1;

    NormalizedParams() = default;
    NormalizedParams(double mu_, double beta_tilde_, double p_, double s_ = 0.5, int N_ = 1)
        : mu(mu_), beta_tilde(beta_tilde_), p(p_), s(s_), N(N_) {
        if (!(mu > 1.0)) raise(ErrorKind::invalid_argument, "normalized self-coupling must satisfy mu > 1");
        if (!(p > 1.0)) raise(ErrorKind::invalid_argument, "exponent must satisfy p > 1");
    }

    // View as a SystemParams with mu2 = 1.
    SystemParams as_system() const { return SystemParams(s, p, N, mu, 1.0, beta_tilde); }
};

inline NormalizedParams normalize(const SystemParams& sp) {
    return NormalizedParams(sp.mu1 / sp.mu2, sp.beta / sp.mu2, sp.p, sp.s, sp.N);
}

inline SystemParams denormalize(const NormalizedParams& np, double mu2) {
    return SystemParams(np.s, np.p, np.N, np.mu * mu2, mu2, np.beta_tilde * mu2);
}

// Half-open/-closed interval on [0, +inf]; hi may be +infinity.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool lo_closed = false;
    bool hi_closed = false;

    Interval() = default;
    Interval(double lo_, double hi_, bool lo_closed_ = false, bool hi_closed_ = false)
        : lo(lo_), hi(hi_), lo_closed(lo_closed_), hi_closed(hi_closed_) {
        if (!(lo >= 0.0) || !(lo < hi)) raise(ErrorKind::invalid_argument, "interval requires 0 <= lo < hi");
    }

    bool contains(double x) const {
        if (x < lo || (x == lo && !lo_closed)) return false;
        if (x > hi || (x == hi && !hi_closed)) return false;
        return true;
    }
};

}  // namespace fracsys

#pragma once

#include <array>
#include <optional>
#include <utility>

#include "fracsys/params.hpp"

namespace fracsys {

// Scalar functions attached to the coupled system.  All of them are pure;
// tau^{p-2} with non-integer p forces tau > 0 except where noted.
//
//   g(tau)  = mu1 + beta tau^p - mu2 tau^{2p-2} - beta tau^{p-2}
//   f(tau)  = (1 + tau^2) / (mu1 + 2 beta tau^p + mu2 tau^{2p})^{1/p}
//   H(tau)  = mu1 + 2 beta tau^p + mu2 tau^{2p}
//   h(tau)  = beta p tau^2 - 2 mu2 (p-1) tau^p - beta (p-2)
//
// with the chain  f' = 2 tau g / H^{1+1/p},  g' = tau^{p-3} h,
// h' = 2 p tau (beta - mu2 (p-1) tau^{p-2}).

double eval_g(const SystemParams& sp, double tau);
double eval_f(const SystemParams& sp, double tau);
double eval_H(const SystemParams& sp, double tau);
double eval_h(const SystemParams& sp, double tau);

// H1(t) = t^2/(p-1) - ((p-2)/p) (p-1)^{-p/(p-2)} t^{2(p-1)/(p-2)},  p > 2, t > 0.
double eval_H1(double t, double p);
// Maximizer t* = p^{(p-2)/2} (p-1)^{(4-p)/2} of H1 and its value (p/(p-1))^{p-2}.
double H1_maximizer(double p);
double H1_max_value(double p);

// Normalized auxiliary pair
//   F(tau) = p tau^{2p-2} - 2 beta~ tau^p
//   G(tau) = (2(p-1)/p) mu + (beta~ (p-2)/p) tau^p - beta~ tau^{p-2}
std::pair<double, double> eval_F_G(const NormalizedParams& np, double tau);

// Normalized root function g~(tau) = mu + beta~ tau^p - beta~ tau^{p-2} - tau^{2p-2}.
double eval_g_tilde(const NormalizedParams& np, double tau);

// Rayleigh-type quotient attached to a root tau of g~:
//   l = [mu(2p-1) + beta~ (p-1) tau^p - beta~ p tau^{p-2}] / (mu + beta~ tau^p).
// The root property |g~(tau)| <= root_check and both positivity conditions
// mu + beta~ tau^p > 0, tau^{2p-2} + beta~ tau^{p-2} > 0 are enforced.
double eval_l(const NormalizedParams& np, double tau, double root_check = 1e-8);

// Admissible ratio windows.
Interval region_D(const SystemParams& sp);
Interval region_Dtilde(const NormalizedParams& np);

// Which of the seven positive-coupling condition sets hold, plus the p = 2
// non-existence window beta in [mu2, mu1].
struct ConditionReport {
    std::array<bool, 7> a_flags{};  // A1..A7 on (mu1, mu2, beta)
    std::array<bool, 7> b_flags{};  // B1..B7 on (mu, beta~)
    std::optional<double> beta0;    // lower root of 2(p-1)mu1/(p mu2) = H1(beta/mu2)
    std::optional<double> beta1;    // upper root
    bool nonexistence_window = false;

    bool any_a() const {
        for (bool f : a_flags)
            if (f) return true;
        return false;
    }
};

ConditionReport classify_conditions(const SystemParams& sp);

}  // namespace fracsys

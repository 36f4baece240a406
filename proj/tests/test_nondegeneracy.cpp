#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracsys/nondegeneracy.hpp"

using namespace fracsys;

namespace {

double urand(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng()) / static_cast<double>(UINT64_MAX));
}

TauSolution first_normalized_solution(const NormalizedParams& np) {
    return solve_tau0(np.as_system()).front();
}

const GroundState& cached_sech_state() {
    static GroundState gs = [] {
        GroundStateOptions opt;
        opt.tol = 1e-12;
        return solve_w(1.0, 2.0, Grid(1, 2048, 64.0), opt);
    }();
    return gs;
}

double cosine_similarity(const Field& a, const Field& b) {
    return std::abs(inner(a, b)) / (l2_norm(a) * l2_norm(b));
}

}  // namespace

TEST_CASE("gamma roots of the branch quadratic") {
    // a = c: roots are exactly ±1
    const auto [neg, pos] = gamma_roots(1.7, 0.9, 1.7);
    CHECK(neg == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(pos == doctest::Approx(1.0).epsilon(1e-15));

    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const double a = urand(rng, -3.0, 5.0);
        const double b = urand(rng, 0.01, 4.0) * (i % 2 ? 1.0 : -1.0);
        const double c = urand(rng, -3.0, 5.0);
        const auto [n, p] = gamma_roots(a, b, c);
        CHECK(n < 0.0);
        CHECK(p > 0.0);
        CHECK(n * p == doctest::Approx(-1.0).epsilon(1e-12));
        // both satisfy c g - b = g (a - b g)
        for (double g : {n, p})
            CHECK(std::abs(b * g * g + (c - a) * g - b) <= 1e-10 * (1.0 + std::abs(a) + std::abs(c)));
    }
}

TEST_CASE("linearization fixture p = 2, mu = 2, beta~ = 3") {
    const NormalizedParams np(2.0, 3.0, 2.0, 1.0, 1);
    const TauSolution sol = first_normalized_solution(np);
    CHECK(sol.tau0 == doctest::Approx(std::sqrt(0.5)).epsilon(1e-12));

    const LinearizationCoeffs lc = linearization_coeffs(np, sol);
    CHECK(lc.a == doctest::Approx(15.0 / 7.0).epsilon(1e-12));
    CHECK(lc.b == doctest::Approx(12.0 / 7.0 * std::sqrt(0.5)).epsilon(1e-12));
    CHECK(lc.c == doctest::Approx(9.0 / 7.0).epsilon(1e-12));
    // f~ = (3 mu + beta~ tau0^2 - 2 beta~) / (mu + beta~ tau0^2) = 3/7 < 2p-1
    CHECK(lc.f_tilde == doctest::Approx(3.0 / 7.0).epsilon(1e-12));
    CHECK(lc.f_tilde < 2.0 * np.p - 1.0);
    // the beta~ > 0 branch: a - b gamma+ = 2p-1
    CHECK(lc.a - lc.b * lc.gamma_plus == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lc.gamma_plus * lc.gamma_minus == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(lc.theta == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(lc.theta != 0.0);
}

TEST_CASE("linearization fixture beta~ < 0 ties f~ to l") {
    const NormalizedParams np(2.0, -0.5, 2.0, 1.0, 1);
    const TauSolution sol = first_normalized_solution(np);
    const LinearizationCoeffs lc = linearization_coeffs(np, sol);
    CHECK(lc.f_tilde == doctest::Approx(37.0 / 7.0).epsilon(1e-12));
    CHECK(lc.a - lc.b * lc.gamma_minus == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(lc.f_tilde == doctest::Approx(eval_l(np, sol.tau0)).epsilon(1e-12));
}

TEST_CASE("branch identities across random admissible couplings") {
    std::mt19937_64 rng(17);
    int done = 0;
    while (done < 80) {
        const int branch = static_cast<int>(rng() % 3);
        const double p = branch == 0 ? urand(rng, 1.15, 1.9) : branch == 1 ? 2.0 : urand(rng, 2.1, 3.0);
        const double mu = urand(rng, 1.2, 3.0);
        double bt;
        if (rng() % 2 == 0) {
            bt = urand(rng, 0.05, 2.5);
            if (p == 2.0 && bt >= 1.0 && bt <= mu) continue;
        } else {
            bt = -urand(rng, 0.05, 0.9) * std::sqrt(mu);
        }
        const NormalizedParams np(mu, bt, p, 0.5, 1);
        const TauSolution sol = first_normalized_solution(np);
        const LinearizationCoeffs lc = linearization_coeffs(np, sol);
        CHECK(std::abs(lc.gamma_plus * lc.gamma_minus + 1.0) <= 1e-12);
        const double target = 2.0 * p - 1.0;
        if (bt > 0.0)
            CHECK(std::abs(lc.a - lc.b * lc.gamma_plus - target) <= 1e-10 * std::max(1.0, target));
        else
            CHECK(std::abs(lc.a - lc.b * lc.gamma_minus - target) <= 1e-10 * std::max(1.0, target));
        // f~ = l at every root of g~
        CHECK(std::abs(lc.f_tilde - eval_l(np, sol.tau0)) <= 1e-10 * std::max(1.0, std::abs(lc.f_tilde)));
        ++done;
    }
}

TEST_CASE("zero coupling is rejected") {
    const NormalizedParams np(2.0, 0.0, 1.5, 0.5, 1);
    TauSolution fake;
    fake.tau0 = std::pow(2.0, 1.0 / (2.0 * np.p - 2.0));
    bool zero = false;
    try {
        linearization_coeffs(np, fake);
    } catch (const Error& e) {
        zero = e.kind() == ErrorKind::zero_coupling;
    }
    CHECK(zero);
}

TEST_CASE("claims I and II") {
    const NormalizedParams np(2.0, 3.0, 2.0, 1.0, 1);
    const LinearizationCoeffs lc = linearization_coeffs(np, first_normalized_solution(np));
    const auto [c1, c2] = check_claims(lc, np);
    CHECK(c1);
    CHECK(c2);

    // margins of claim II shrink toward zero from above as beta~ -> 0+ along
    // the branch that continues to the decoupled root (p >= 2 keeps it in D)
    double prev_margin = std::numeric_limits<double>::infinity();
    for (double bt : {0.5, 0.1, 0.02}) {
        const NormalizedParams trial(2.0, bt, 2.5, 0.75, 1);
        const LinearizationCoeffs c = linearization_coeffs(trial, first_normalized_solution(trial));
        const double margin = 2.0 * trial.p - 1.0 - c.f_tilde;
        CHECK(margin > 0.0);
        CHECK(margin < prev_margin);
        prev_margin = margin;
    }

    // claims hold on samples from every positive-coupling condition region
    const SystemParams tuples[] = {
        SystemParams(0.75, 2.5, 1, 2.0, 1.0, 2.0),    // A1
        SystemParams(0.75, 2.5, 1, 2.0, 1.0, 5.0),    // A2
        SystemParams(0.75, 2.5, 1, 1.05, 1.0, 3.0),   // A3
        SystemParams(0.5, 1.5, 1, 2.0, 1.0, 1.0),     // A4
        SystemParams(0.5, 1.5, 1, 2.0, 1.0, 0.2),     // A5
        SystemParams(0.5, 1.5, 1, 2.0, 1.0, 0.3),     // A6
        SystemParams(1.0, 2.0, 1, 2.0, 1.0, 0.5),     // A7 lower window
        SystemParams(1.0, 2.0, 1, 2.0, 1.0, 3.0),     // A7 upper window
    };
    int region = 0;
    for (const auto& sp : tuples) {
        const ConditionReport cr = classify_conditions(sp);
        CHECK(cr.any_a());
        const NormalizedParams np2 = normalize(sp);
        for (const auto& sol : solve_tau0(np2.as_system())) {
            const LinearizationCoeffs c = linearization_coeffs(np2, sol);
            const auto [claim1, claim2] = check_claims(c, np2);
            CHECK(claim1);
            CHECK(claim2);
        }
        ++region;
    }
    CHECK(region == 8);
}

TEST_CASE("weighted spectrum for the sech state") {
    const GroundState& gs = cached_sech_state();
    SpectrumOptions so;
    so.tol = 1e-11;
    const WeightedSpectrum ws = weighted_spectrum(gs, 4, so);
    REQUIRE(ws.eigenvalues.size() == 4);

    // known ladder for the sech^2 weight: 1, 3, 6, 10
    CHECK(std::abs(ws.eigenvalues[0] - 1.0) <= 1e-3);
    CHECK(std::abs(ws.eigenvalues[1] - 3.0) <= 1e-2);
    CHECK(std::abs(ws.eigenvalues[2] - 6.0) <= 5e-2);
    CHECK(std::abs(ws.eigenvalues[3] - 10.0) <= 2e-1);
    // exactly N = 1 eigenvalue sits at 2p-1 (the translation mode)
    int at_2pm1 = 0;
    for (double lam : ws.eigenvalues)
        if (std::abs(lam - 3.0) <= 0.05) ++at_2pm1;
    CHECK(at_2pm1 == 1);

    // lambda1 eigenfield solves the residual equation directly: L Phi = lambda1 m Phi
    CHECK(cosine_similarity(ws.eigenfields[0], gs.w) >= 0.9999);
    {
        const Field lphi = apply_L(ws.eigenfields[0], gs.s);
        Field rhs(gs.w.grid);
        for (std::size_t i = 0; i < rhs.size(); ++i)
            rhs[i] = ws.eigenvalues[0] * ws.weight[i] * ws.eigenfields[0][i];
        Field res = lphi;
        for (std::size_t i = 0; i < res.size(); ++i) res[i] -= rhs[i];
        CHECK(l2_norm(res) / l2_norm(rhs) <= 1e-6);
    }
    // lambda2 eigenfield aligns with w'
    const Field dw = spectral_derivative(gs.w, 0);
    CHECK(cosine_similarity(ws.eigenfields[1], dw) >= 0.999);

    // lambda3 is a converged numeric fixture: two grid refinements agree to 1e-3
    GroundStateOptions opt;
    opt.tol = 1e-12;
    const GroundState coarse = solve_w(1.0, 2.0, Grid(1, 1024, 64.0), opt);
    const WeightedSpectrum ws_coarse = weighted_spectrum(coarse, 3, so);
    CHECK(std::abs(ws_coarse.eigenvalues[2] - ws.eigenvalues[2]) <=
          1e-3 * std::max(1.0, ws.eigenvalues[2]));

    // weighted orthogonality, normalized by the diagonal
    for (int k = 0; k < 4; ++k)
        for (int m = k + 1; m < 4; ++m) {
            double cross = 0.0, dk = 0.0, dm = 0.0;
            for (std::size_t i = 0; i < ws.weight.size(); ++i) {
                const double pk = ws.eigenfields[static_cast<std::size_t>(k)][i];
                const double pm = ws.eigenfields[static_cast<std::size_t>(m)][i];
                cross += ws.weight[i] * pk * pm;
                dk += ws.weight[i] * pk * pk;
                dm += ws.weight[i] * pm * pm;
            }
            CHECK(std::abs(cross) / std::sqrt(dk * dm) <= 1e-8);
        }
}

TEST_CASE("weight floor guard") {
    const GroundState& gs = cached_sech_state();
    SpectrumOptions so;
    so.weight_floor = 1e-13;
    bool guarded = false;
    try {
        weighted_spectrum(gs, 2, so);
    } catch (const Error& e) {
        guarded = e.kind() == ErrorKind::weight_floor_too_small;
    }
    CHECK(guarded);
    CHECK_THROWS_AS(weighted_spectrum(gs, 0, {}), Error);
    CHECK_THROWS_AS(weighted_spectrum(gs, 41, {}), Error);
}

TEST_CASE("kernel dimension is N on a nondegenerate tuple") {
    const GroundState& gs = cached_sech_state();
    const NormalizedParams np(2.0, 3.0, 2.0, 1.0, 1);  // A7 upper window
    const TauSolution sol = first_normalized_solution(np);
    const NondegeneracyReport rep = kernel_dimension(gs, sol, np);

    CHECK(rep.kernel_dim == 1);
    CHECK(rep.kernel_gap >= 100.0);
    CHECK(rep.verdict == Verdict::nondegenerate);
    REQUIRE(rep.basis_residuals.size() == 1);
    CHECK(rep.basis_residuals[0] <= 1e-4);
    REQUIRE(rep.kernel_singular_values.size() == 6);
    for (std::size_t i = 1; i < rep.kernel_singular_values.size(); ++i)
        CHECK(rep.kernel_singular_values[i - 1] <= rep.kernel_singular_values[i] * (1.0 + 1e-12));
    // f~ = 3/7 sits far from the spectrum {1, 3, 6, ...}
    for (double d : rep.f_tilde_distances) CHECK(d >= 0.5);
}

TEST_CASE("a constructed beta~ makes the kernel grow") {
    const GroundState& gs = cached_sech_state();
    SpectrumOptions so;
    so.tol = 1e-12;
    const WeightedSpectrum ws = weighted_spectrum(gs, 3, so);
    const double lambda3 = ws.eigenvalues[2];
    CHECK(lambda3 > 3.0);

    const NormalizedParams base(2.0, 0.0, 2.0, 1.0, 1);
    const double bt = solve_beta_k(base, lambda3, 1e-12);
    CHECK(bt == doctest::Approx((6.0 - std::sqrt(204.0)) / 14.0).epsilon(1e-3));

    const NormalizedParams degen(2.0, bt, 2.0, 1.0, 1);
    const TauSolution sol = first_normalized_solution(degen);
    const NondegeneracyReport rep = kernel_dimension(gs, sol, degen);
    CHECK(rep.kernel_dim > 1);
    CHECK(rep.verdict == Verdict::degenerate);
}

TEST_CASE("decoupled scalar operator has kernel dimension N") {
    const GroundState& gs = cached_sech_state();
    const auto svals = scalar_kernel_singular_values(gs, 4);
    REQUIRE(svals.size() == 4);
    CHECK(svals[0] <= 1e-6 * svals.back());
    CHECK(svals[1] >= 100.0 * std::max(svals[0], 1e-300));
}

TEST_CASE("translation multiplicity of lambda = 2p-1 equals N for N = 2") {
    GroundStateOptions opt;
    opt.tol = 1e-12;
    const GroundState gs2 = solve_w(1.0, 2.0, Grid(2, 128, 16.0), opt);
    SpectrumOptions so;
    so.tol = 1e-10;
    const WeightedSpectrum ws = weighted_spectrum(gs2, 5, so);
    int count = 0;
    for (double lam : ws.eigenvalues)
        if (std::abs(lam - 3.0) <= 0.05) ++count;
    CHECK(count == 2);
    CHECK(std::abs(ws.eigenvalues[0] - 1.0) <= 1e-3);

    // and the two-component kernel picks up both translation modes
    const NormalizedParams np(2.0, 3.0, 2.0, 1.0, 2);
    const TauSolution sol = solve_tau0(np.as_system()).front();
    KernelOptions ko;
    ko.grid_tol = 1e-3;  // dx = 0.25 resolves the profile's Fourier tail to ~2e-4
    const NondegeneracyReport rep = kernel_dimension(gs2, sol, np, ko);
    CHECK(rep.kernel_dim == 2);
    CHECK(rep.verdict == Verdict::nondegenerate);
}

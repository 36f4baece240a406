#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracsys/ground_state.hpp"

using namespace fracsys;

namespace {

// low-frequency random perturbation, smooth by construction
Field smooth_noise(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Field eta(g);
    for (int m = 1; m <= 6; ++m) {
        const double amp = 2.0 * (static_cast<double>(rng()) / static_cast<double>(UINT64_MAX)) - 1.0;
        const double phase = 2.0 * kPi * (static_cast<double>(rng()) / static_cast<double>(UINT64_MAX));
        const double xi = g.wavenumber(m);
        for (int j = 0; j < g.n; ++j)
            eta[static_cast<std::size_t>(j)] += amp * std::cos(xi * g.coord(j) + phase) *
                                                std::exp(-0.1 * g.coord(j) * g.coord(j));
    }
    return eta;
}

}  // namespace

TEST_CASE("sech soliton for s = 1, p = 2") {
    const Grid g(1, 2048, 64.0);
    GroundStateOptions opt;
    opt.tol = 1e-12;
    const GroundState gs = solve_w(1.0, 2.0, g, opt);

    CHECK(gs.residual_norm <= 1e-9);
    CHECK(gs.iterations > 2);

    // peak value sqrt(2) at the origin node
    const std::size_t origin = static_cast<std::size_t>(g.n / 2);
    CHECK(gs.w[origin] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

    // profile against sqrt(2) sech(x) on |x| <= 10
    double worst = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double x = g.coord(j);
        if (std::abs(x) > 10.0) continue;
        const double exact = std::sqrt(2.0) / std::cosh(x);
        worst = std::max(worst, std::abs(gs.w[static_cast<std::size_t>(j)] - exact) / exact);
    }
    CHECK(worst <= 1e-5);

    // S = sqrt(16/3) from the closed-form sech integrals
    CHECK(gs.S_value == doctest::Approx(std::sqrt(16.0 / 3.0)).epsilon(1e-6));
    CHECK(compute_S(gs) == doctest::Approx(gs.S_value).epsilon(1e-14));
}

TEST_CASE("algebraic-tail profile for s = 1/2, p = 3/2") {
    const Grid g(1, 4096, 128.0);
    GroundStateOptions opt;
    opt.tol = 1e-11;
    const GroundState gs = solve_w(0.5, 1.5, g, opt);

    const std::size_t origin = static_cast<std::size_t>(g.n / 2);
    CHECK(gs.w[origin] == doctest::Approx(2.0).epsilon(2e-3));

    double worst = 0.0;
    for (int j = 0; j < g.n; ++j) {
        const double x = g.coord(j);
        if (std::abs(x) > 5.0) continue;
        const double exact = 2.0 / (1.0 + x * x);
        worst = std::max(worst, std::abs(gs.w[static_cast<std::size_t>(j)] - exact) / exact);
    }
    CHECK(worst <= 1e-2);

    // algebraic tails stay far above roundoff: strict monotonicity holds here
    for (int j = g.n / 2; j + 1 < g.n; ++j)
        CHECK(gs.w[static_cast<std::size_t>(j + 1)] <= gs.w[static_cast<std::size_t>(j)] * (1.0 + 1e-12));
    double mn = 1e300;
    for (double v : gs.w.values) mn = std::min(mn, v);
    CHECK(mn > 1e-10);  // edge value ~ 2/L^2
}

TEST_CASE("ground state invariants") {
    const Grid g(1, 2048, 64.0);
    GroundStateOptions opt;
    opt.tol = 1e-12;
    const GroundState gs = solve_w(1.0, 2.0, g, opt);

    SUBCASE("positivity everywhere") {
        double mn = 1e300;
        for (double v : gs.w.values) mn = std::min(mn, v);
        CHECK(mn > 0.0);
    }
    SUBCASE("even symmetry and peak at origin") {
        const int n = g.n;
        for (int j = 1; j < n / 2; ++j)
            CHECK(gs.w[static_cast<std::size_t>(j)] ==
                  doctest::Approx(gs.w[static_cast<std::size_t>(n - j)]).epsilon(1e-12));
        const std::size_t origin = static_cast<std::size_t>(n / 2);
        for (std::size_t j = 0; j < gs.w.size(); ++j) CHECK(gs.w[origin] >= gs.w[j]);
    }
    SUBCASE("radial monotonicity on [0, L)") {
        // the exponential tail drops under FFT roundoff; allow noise-level slack
        const double peak = gs.w[static_cast<std::size_t>(g.n / 2)];
        for (int j = g.n / 2; j + 1 < g.n; ++j)
            CHECK(gs.w[static_cast<std::size_t>(j + 1)] <=
                  gs.w[static_cast<std::size_t>(j)] * (1.0 + 1e-12) + 1e-14 * peak);
    }
    SUBCASE("discrete amplitude identity <Lw, w> = int w^{2p}") {
        const double lhs = hs_energy(gs.w, gs.s);
        const double rhs = integrate_power(gs.w, 2.0 * gs.p);
        CHECK(std::abs(lhs - rhs) / rhs <= 1e-8);
    }
    SUBCASE("residual trend over the trailing window") {
        REQUIRE(gs.residual_history.size() >= 10);
        const auto& h = gs.residual_history;
        for (std::size_t i = h.size() >= 50 ? h.size() - 50 : 0; i + 1 < h.size(); ++i)
            CHECK(h[i + 1] <= h[i] * 1.10);
    }
    SUBCASE("fixed point has unit stabilizing factor") {
        const double c = hs_energy(gs.w, gs.s) / integrate_power(gs.w, 2.0 * gs.p);
        CHECK(std::abs(c - 1.0) <= 1e-8);
    }
    SUBCASE("local minimality of the quotient under smooth perturbations") {
        for (int k = 0; k < 20; ++k) {
            Field pert = gs.w;
            const Field eta = smooth_noise(g, 1000 + static_cast<std::uint64_t>(k));
            for (std::size_t i = 0; i < pert.size(); ++i) pert[i] += 1e-2 * eta[i];
            CHECK(gs.S_value <= sobolev_quotient(pert, gs.s, gs.p) * (1.0 + 1e-12));
        }
    }
    SUBCASE("quotient is invariant under grid shifts") {
        const Field moved = spectral_shift(gs.w, 0, 5.0 * g.dx());
        CHECK(sobolev_quotient(moved, gs.s, gs.p) == doctest::Approx(gs.S_value).epsilon(1e-12));
    }
}

TEST_CASE("tail-truncation control: doubling L at fixed dx, s = 1/2") {
    GroundStateOptions opt;
    opt.tol = 1e-11;
    const GroundState a = solve_w(0.5, 1.5, Grid(1, 8192, 256.0), opt);
    const GroundState b = solve_w(0.5, 1.5, Grid(1, 16384, 512.0), opt);
    const double wa = a.w[static_cast<std::size_t>(a.w.grid.n / 2)];
    const double wb = b.w[static_cast<std::size_t>(b.w.grid.n / 2)];
    CHECK(std::abs(wa - wb) / wb <= 1e-4);
}

TEST_CASE("two-dimensional ground state") {
    const Grid g(2, 128, 16.0);
    GroundStateOptions opt;
    opt.tol = 1e-11;
    const GroundState gs = solve_w(1.0, 2.0, g, opt);
    CHECK(gs.residual_norm <= 1e-9);

    // peak at the center node, symmetric in both axes
    const int n = g.n;
    const std::size_t center = static_cast<std::size_t>(n / 2) * n + n / 2;
    for (std::size_t i = 0; i < gs.w.size(); ++i) CHECK(gs.w[center] >= gs.w[i]);
    for (int i = 1; i < n / 2; ++i)
        CHECK(gs.w[static_cast<std::size_t>(i) * n + n / 2] ==
              doctest::Approx(gs.w[static_cast<std::size_t>(n - i) * n + n / 2]).epsilon(1e-10));

    const double lhs = hs_energy(gs.w, 1.0);
    const double rhs = integrate_power(gs.w, 4.0);
    CHECK(std::abs(lhs - rhs) / rhs <= 1e-8);
}

TEST_CASE("error paths") {
    const Grid g(1, 256, 32.0);
    GroundStateOptions opt;
    opt.tol = 1e-12;
    opt.max_iterations = 2;
    bool nonconv = false;
    try {
        solve_w(1.0, 2.0, g, opt);
    } catch (const Error& e) {
        nonconv = e.kind() == ErrorKind::no_convergence;
    }
    CHECK(nonconv);

    CHECK_THROWS_AS(solve_w(0.4, 5.5, g, {}), Error);  // p beyond 2_s^*/2
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <thread>
#include <vector>

#include "fracsys/spectral.hpp"

using namespace fracsys;

namespace {

Field mode_field(const Grid& g, int m) {
    Field u(g);
    const double xi = g.wavenumber(m);
    for (int j = 0; j < g.n; ++j) u[static_cast<std::size_t>(j)] = std::cos(xi * g.coord(j));
    return u;
}

Field gaussian(const Grid& g, double width = 1.0) {
    Field u(g);
    if (g.N == 1) {
        for (int j = 0; j < g.n; ++j) {
            const double x = g.coord(j) / width;
            u[static_cast<std::size_t>(j)] = std::exp(-0.5 * x * x);
        }
    } else {
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j) {
                const double x = g.coord(i) / width, y = g.coord(j) / width;
                u[static_cast<std::size_t>(i) * g.n + j] = std::exp(-0.5 * (x * x + y * y));
            }
    }
    return u;
}

Field random_field(const Grid& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Field u(g);
    for (double& v : u.values) v = 2.0 * (static_cast<double>(rng()) / static_cast<double>(UINT64_MAX)) - 1.0;
    return u;
}

double linf_diff(const Field& a, const Field& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Field scaled(const Field& u, double c) {
    Field out = u;
    for (double& v : out.values) v *= c;
    return out;
}

}  // namespace

TEST_CASE("fractional Laplacian multiplier on pure modes") {
    const Grid g(1, 256, 16.0);

    Field c(g, 3.7);
    const Field lc = frac_laplacian(c, 0.5);
    for (double v : lc.values) CHECK(std::abs(v) <= 1e-12);

    for (double s : {0.3, 0.5, 1.0}) {
        const int m = 5;
        const Field u = mode_field(g, m);
        const Field lu = frac_laplacian(u, s);
        const double factor = std::pow(g.wavenumber(m) * g.wavenumber(m), s);
        CHECK(linf_diff(lu, scaled(u, factor)) <= 1e-10 * std::max(1.0, factor));
    }

    // s = 1 equals the classical -d^2/dx^2 on the mode
    const Field u = mode_field(g, 7);
    const double xi = g.wavenumber(7);
    CHECK(linf_diff(frac_laplacian(u, 1.0), scaled(u, xi * xi)) <= 1e-10 * xi * xi);
}

TEST_CASE("L inverse round trip, constants and single modes") {
    const Grid g(1, 512, 32.0);
    const double s = 0.6;
    const Field f = random_field(g, 99);
    CHECK(linf_diff(apply_L_inverse(apply_L(f, s), s), f) <= 1e-12);

    Field c(g, 2.5);
    const Field lc = apply_L_inverse(c, s);
    for (double v : lc.values) CHECK(v == doctest::Approx(2.5).epsilon(1e-12));

    const Field m = mode_field(g, 9);
    const double xi = g.wavenumber(9);
    const double factor = 1.0 / (1.0 + std::pow(xi * xi, s));
    CHECK(linf_diff(apply_L_inverse(m, s), scaled(m, factor)) <= 1e-10);

    // half powers compose to the inverse
    const Field half = apply_L_inv_sqrt(apply_L_inv_sqrt(f, s), s);
    CHECK(linf_diff(half, apply_L_inverse(f, s)) <= 1e-11);
}

TEST_CASE("Parseval identity between value and coefficient space") {
    for (const Grid& g : {Grid(1, 128, 8.0), Grid(1, 1024, 64.0), Grid(2, 32, 4.0)}) {
        const Field f = random_field(g, 7 + static_cast<std::uint64_t>(g.N));
        const double value_side = inner(f, f);
        // hs_energy(f, s) - <f, (-Delta)^s f> isolates the plain L2 piece
        const double coeff_side = hs_energy(f, 1.0) - inner(f, frac_laplacian(f, 1.0));
        CHECK(coeff_side == doctest::Approx(value_side).epsilon(1e-10));
    }
}

TEST_CASE("fractional Laplacian is self-adjoint on the grid") {
    for (const Grid& g : {Grid(1, 256, 16.0), Grid(2, 32, 4.0)}) {
        const Field u = random_field(g, 21);
        const Field v = random_field(g, 22);
        for (double s : {0.4, 0.75, 1.0}) {
            const double lhs = inner(frac_laplacian(u, s), v);
            const double rhs = inner(u, frac_laplacian(v, s));
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max({1.0, std::abs(lhs), std::abs(rhs)}));
        }
    }
}

TEST_CASE("multiplier grows with s above frequency one") {
    const Grid g(1, 256, 8.0);
    const int m = 12;
    REQUIRE(g.wavenumber(m) > 1.0);
    const Field u = mode_field(g, m);
    double prev = 0.0;
    for (double s : {0.3, 0.5, 0.8, 1.0}) {
        const Field lu = frac_laplacian(u, s);
        const double amp = lu[static_cast<std::size_t>(g.n / 2)];  // x = 0, cos = 1
        CHECK(amp > prev);
        prev = amp;
    }
}

TEST_CASE("sobolev quotient homogeneity and the sech oracle") {
    const Grid g(1, 2048, 64.0);
    const Field f = gaussian(g, 1.3);
    // numerator and denominator are both degree-2 homogeneous, so the
    // quotient is invariant under u -> c u
    for (double p : {1.5, 2.0, 2.5}) {
        const double c = 3.0;
        CHECK(hs_energy(scaled(f, c), 0.5) == doctest::Approx(c * c * hs_energy(f, 0.5)).epsilon(1e-12));
        CHECK(std::pow(integrate_power(scaled(f, c), 2.0 * p), 1.0 / p) ==
              doctest::Approx(c * c * std::pow(integrate_power(f, 2.0 * p), 1.0 / p)).epsilon(1e-12));
        CHECK(sobolev_quotient(scaled(f, c), 0.5, p) ==
              doctest::Approx(sobolev_quotient(f, 0.5, p)).epsilon(1e-12));
    }

    // w = sqrt(2) sech(x): int w^2 = 4, int w'^2 = 4/3, int w^4 = 16/3,
    // quotient = (16/3) / (16/3)^{1/2} = sqrt(16/3)
    Field w(g);
    for (int j = 0; j < g.n; ++j) w[static_cast<std::size_t>(j)] = std::sqrt(2.0) / std::cosh(g.coord(j));
    CHECK(integrate_power(w, 2.0) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(integrate_power(w, 4.0) == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
    CHECK(hs_energy(w, 1.0) == doctest::Approx(4.0 + 4.0 / 3.0).epsilon(1e-12));
    CHECK(sobolev_quotient(w, 1.0, 2.0) == doctest::Approx(std::sqrt(16.0 / 3.0)).epsilon(1e-12));

    CHECK_THROWS_AS(sobolev_quotient(Field(g, 0.0), 0.5, 2.0), Error);
}

TEST_CASE("grid refinement leaves the quotient unchanged for smooth fields") {
    const double s = 0.5, p = 1.5;
    const Grid g1(1, 512, 32.0), g2(1, 1024, 32.0);
    const double q1 = sobolev_quotient(gaussian(g1, 1.0), s, p);
    const double q2 = sobolev_quotient(gaussian(g2, 1.0), s, p);
    CHECK(std::abs(q2 - q1) <= 1e-8 * std::abs(q1));
}

TEST_CASE("spectral derivative and shift") {
    const Grid g(1, 256, 16.0);
    const int m = 4;
    const double xi = g.wavenumber(m);
    const Field u = mode_field(g, m);
    const Field du = spectral_derivative(u, 0);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(du[static_cast<std::size_t>(j)] + xi * std::sin(xi * g.coord(j))) <= 1e-10 * xi);

    const double a = 0.37;
    const Field shifted = spectral_shift(u, 0, a);
    for (int j = 0; j < g.n; ++j)
        CHECK(std::abs(shifted[static_cast<std::size_t>(j)] - std::cos(xi * (g.coord(j) + a))) <= 1e-10);
}

TEST_CASE("2D multiplier on a product mode") {
    const Grid g(2, 32, 4.0);
    const int ma = 3, mb = 5;
    Field u(g);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j)
            u[static_cast<std::size_t>(i) * g.n + j] =
                std::cos(g.wavenumber(ma) * g.coord(i)) * std::cos(g.wavenumber(mb) * g.coord(j));
    const double s = 0.7;
    const double xi2 = g.wavenumber(ma) * g.wavenumber(ma) + g.wavenumber(mb) * g.wavenumber(mb);
    const double factor = std::pow(xi2, s);
    CHECK(linf_diff(frac_laplacian(u, s), scaled(u, factor)) <= 1e-9 * factor);
}

TEST_CASE("field serialization round trip with 32-byte header") {
    const Grid g(1, 128, 8.0);
    const Field f = random_field(g, 31);
    std::stringstream ss;
    write_field(f, 0.55, ss);
    const std::string blob = ss.str();
    CHECK(blob.size() == 32 + static_cast<std::size_t>(g.n) * 8);

    double s_read = 0.0;
    std::stringstream in(blob);
    const Field back = read_field(in, &s_read);
    CHECK(s_read == 0.55);
    CHECK(back.grid.n == g.n);
    CHECK(back.grid.L == g.L);
    CHECK(back.grid.N == 1);
    CHECK(linf_diff(back, f) == 0.0);

    // header fields are little-endian uint64/double
    CHECK(static_cast<unsigned char>(blob[0]) == 1);    // N = 1
    CHECK(static_cast<unsigned char>(blob[8]) == 128);  // n = 128
    for (int i = 1; i < 8; ++i) CHECK(blob[static_cast<std::size_t>(i)] == 0);
}

TEST_CASE("CSV export for 1D fields") {
    const Grid g(1, 8, 1.0);
    Field f(g);
    for (int j = 0; j < g.n; ++j) f[static_cast<std::size_t>(j)] = j * 0.25;
    std::stringstream ss;
    write_field_csv(f, ss);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "x,value");
    std::getline(ss, line);
    CHECK(line == "-1,0");
    int rows = 1;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 8);

    const Grid g2(2, 8, 1.0);
    std::stringstream s2;
    CHECK_THROWS_AS(write_field_csv(Field(g2), s2), Error);
}

TEST_CASE("operators are safe under concurrent calls") {
    const Grid g(1, 1024, 32.0);
    const Field f = gaussian(g, 1.1);
    const Field expected = frac_laplacian(f, 0.6);
    std::vector<std::thread> pool;
    std::vector<double> worst(8, 0.0);
    for (int t = 0; t < 8; ++t)
        pool.emplace_back([&, t] {
            for (int it = 0; it < 20; ++it) {
                const Field got = frac_laplacian(f, 0.6);
                worst[static_cast<std::size_t>(t)] =
                    std::max(worst[static_cast<std::size_t>(t)], linf_diff(got, expected));
                const Field inv = apply_L_inverse(apply_L(f, 0.6), 0.6);
                worst[static_cast<std::size_t>(t)] =
                    std::max(worst[static_cast<std::size_t>(t)], linf_diff(inv, f));
            }
        });
    for (auto& th : pool) th.join();
    for (double w : worst) CHECK(w <= 1e-12);
}

TEST_CASE("grid rejects bad shapes") {
    CHECK_THROWS_AS(Grid(3, 64, 8.0), Error);
    CHECK_THROWS_AS(Grid(1, 100, 8.0), Error);  // not a power of two
    CHECK_THROWS_AS(Grid(1, 4, 8.0), Error);    // below the minimum
    CHECK_THROWS_AS(Grid(1, 64, -1.0), Error);
}

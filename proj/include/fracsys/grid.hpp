#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracsys/errors.hpp"

namespace fracsys {

inline constexpr double kPi = 3.14159265358979323846;

// Periodic box [-L, L)^N with n nodes per axis (power of two) and
// wavenumbers xi_j = pi j / L, j = -n/2 .. n/2-1.
struct Grid {
    int N = 1;
    int n = 8192;
    double L = 256.0;

    Grid() = default;
    Grid(int N_, int n_, double L_) : N(N_), n(n_), L(L_) {
        if (N < 1 || N > 2) raise(ErrorKind::invalid_argument, "grid dimension must be 1 or 2");
        if (n < 8 || (n & (n - 1)) != 0) raise(ErrorKind::invalid_argument, "grid size must be a power of two >= 8");
        if (!(L > 0.0)) raise(ErrorKind::invalid_argument, "box half-length must be positive");
    }

    double dx() const { return 2.0 * L / n; }
    std::size_t size() const { return N == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n; }
    double coord(int j) const { return -L + j * dx(); }
    // signed frequency index for FFT bin j
    int freq_index(int j) const { return j <= n / 2 ? j : j - n; }
    double wavenumber(int m) const { return kPi * m / L; }

    bool operator==(const Grid& o) const { return N == o.N && n == o.n && L == o.L; }
};

// Real-valued function sampled on a Grid.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g, double fill = 0.0) : grid(g), values(g.size(), fill) {}

    std::size_t size() const { return values.size(); }
    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }
};

// Rectangle-rule quadrature (spectrally accurate on the periodic box).
double integrate(const Field& u);                     // int u dx
double inner(const Field& u, const Field& v);         // int u v dx
double l2_norm(const Field& u);                       // (int u^2 dx)^{1/2}
double integrate_power(const Field& u, double q);     // int |u|^q dx

// Binary serialization: 32-byte header of four 8-byte little-endian fields
// (N, n as uint64; L, s as doubles) followed by n^N doubles.
void write_field(const Field& u, double s, std::ostream& os);
Field read_field(std::istream& is, double* s_out = nullptr);
void write_field_file(const Field& u, double s, const std::string& path);
Field read_field_file(const std::string& path, double* s_out = nullptr);

// CSV export (x,value) for N = 1 fields, 17 significant digits.
void write_field_csv(const Field& u, std::ostream& os);

}  // namespace fracsys

#include "fracsys/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <ostream>

namespace fracsys {

double integrate(const Field& u) {
    double acc = 0.0;
    for (double v : u.values) acc += v;
    return acc * std::pow(u.grid.dx(), u.grid.N);
}

double inner(const Field& u, const Field& v) {
    if (!(u.grid == v.grid)) raise(ErrorKind::invalid_argument, "inner: grid mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) acc += u.values[i] * v.values[i];
    return acc * std::pow(u.grid.dx(), u.grid.N);
}

double l2_norm(const Field& u) { return std::sqrt(inner(u, u)); }

double integrate_power(const Field& u, double q) {
    double acc = 0.0;
    for (double v : u.values) acc += std::pow(std::abs(v), q);
    return acc * std::pow(u.grid.dx(), u.grid.N);
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
    os.write(reinterpret_cast<const char*>(&v), 8);
}

void put_f64(std::ostream& os, double d) {
    std::uint64_t v;
    std::memcpy(&v, &d, 8);
    put_u64(os, v);
}

std::uint64_t get_u64(std::istream& is) {
    std::uint64_t v = 0;
    is.read(reinterpret_cast<char*>(&v), 8);
    if constexpr (std::endian::native == std::endian::big) v = __builtin_bswap64(v);
    return v;
}

double get_f64(std::istream& is) {
    const std::uint64_t v = get_u64(is);
    double d;
    std::memcpy(&d, &v, 8);
    return d;
}

}  // namespace

void write_field(const Field& u, double s, std::ostream& os) {
    put_u64(os, static_cast<std::uint64_t>(u.grid.N));
    put_u64(os, static_cast<std::uint64_t>(u.grid.n));
    put_f64(os, u.grid.L);
    put_f64(os, s);
    for (double v : u.values) put_f64(os, v);
    if (!os) raise(ErrorKind::io, "write_field: stream failure");
}

Field read_field(std::istream& is, double* s_out) {
    const auto N = static_cast<int>(get_u64(is));
    const auto n = static_cast<int>(get_u64(is));
    const double L = get_f64(is);
    const double s = get_f64(is);
    if (!is) raise(ErrorKind::io, "read_field: truncated header");
    Field u{Grid(N, n, L)};
    for (double& v : u.values) v = get_f64(is);
    if (!is) raise(ErrorKind::io, "read_field: truncated payload");
    if (s_out) *s_out = s;
    return u;
}

void write_field_file(const Field& u, double s, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) raise(ErrorKind::io, "cannot open for writing: " + path);
    write_field(u, s, os);
}

Field read_field_file(const std::string& path, double* s_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) raise(ErrorKind::io, "cannot open for reading: " + path);
    return read_field(is, s_out);
}

void write_field_csv(const Field& u, std::ostream& os) {
    if (u.grid.N != 1) raise(ErrorKind::invalid_argument, "CSV export is defined for N = 1 fields");
    os << "x,value\n";
    char buf[64];
    for (int j = 0; j < u.grid.n; ++j) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.grid.coord(j), u.values[static_cast<std::size_t>(j)]);
        os << buf;
    }
}

}  // namespace fracsys

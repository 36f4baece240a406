#include "fracsys/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <complex>
#include <map>
#include <mutex>

namespace fracsys {

namespace {

// FFTW plans are cached per (N, n, direction); creation is serialized (FFTW
// planning is not thread-safe), execution via the new-array interface is.
// FFTW_UNALIGNED lets plans run on plain std::vector storage.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan forward(const Grid& g) { return get(g, true); }
    fftw_plan backward(const Grid& g) { return get(g, false); }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, bool>, fftw_plan> plans_;

    fftw_plan get(const Grid& g, bool fwd) {
        std::lock_guard<std::mutex> lock(mutex_);
        const auto key = std::make_tuple(g.N, g.n, fwd);
        auto it = plans_.find(key);
        if (it != plans_.end()) return it->second;

        const int n = g.n;
        std::vector<double> real(g.size());
        std::vector<std::complex<double>> cplx(spectrum_size(g));
        auto* cp = reinterpret_cast<fftw_complex*>(cplx.data());
        fftw_plan plan = nullptr;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        if (g.N == 1)
            plan = fwd ? fftw_plan_dft_r2c_1d(n, real.data(), cp, flags)
                       : fftw_plan_dft_c2r_1d(n, cp, real.data(), flags);
        else
            plan = fwd ? fftw_plan_dft_r2c_2d(n, n, real.data(), cp, flags)
                       : fftw_plan_dft_c2r_2d(n, n, cp, real.data(), flags);
        if (!plan) raise(ErrorKind::internal, "FFTW plan creation failed");
        plans_[key] = plan;
        return plan;
    }

public:
    static std::size_t spectrum_size(const Grid& g) {
        const std::size_t half = static_cast<std::size_t>(g.n / 2 + 1);
        return g.N == 1 ? half : static_cast<std::size_t>(g.n) * half;
    }
};

std::vector<std::complex<double>> fft_forward(const Field& u) {
    std::vector<std::complex<double>> out(PlanCache::spectrum_size(u.grid));
    fftw_execute_dft_r2c(PlanCache::instance().forward(u.grid),
                         const_cast<double*>(u.values.data()),
                         reinterpret_cast<fftw_complex*>(out.data()));
    return out;
}

// Consumes the spectrum (c2r may scribble on its input) and normalizes by n^N.
Field fft_backward(const Grid& g, std::vector<std::complex<double>>& spec) {
    Field out(g);
    fftw_execute_dft_c2r(PlanCache::instance().backward(g),
                         reinterpret_cast<fftw_complex*>(spec.data()), out.values.data());
    const double norm = 1.0 / std::pow(static_cast<double>(g.n), g.N);
    for (double& v : out.values) v *= norm;
    return out;
}

// Applies a real multiplier m(|xi|^2) over the half-spectrum.
template <typename M>
Field apply_real_multiplier(const Field& u, M&& mul) {
    const Grid& g = u.grid;
    auto spec = fft_forward(u);
    const int half = g.n / 2 + 1;
    if (g.N == 1) {
        for (int k = 0; k < half; ++k) {
            const double xi = g.wavenumber(k);
            spec[static_cast<std::size_t>(k)] *= mul(xi * xi);
        }
    } else {
        for (int i = 0; i < g.n; ++i) {
            const double xi0 = g.wavenumber(g.freq_index(i));
            for (int k = 0; k < half; ++k) {
                const double xi1 = g.wavenumber(k);
                spec[static_cast<std::size_t>(i) * half + k] *= mul(xi0 * xi0 + xi1 * xi1);
            }
        }
    }
    return fft_backward(g, spec);
}

void check_s(double s) {
    if (!(s > 0.0) || !(s <= 1.0)) raise(ErrorKind::invalid_argument, "fractional order must satisfy 0 < s <= 1");
}

}  // namespace

Field frac_laplacian(const Field& u, double s) {
    check_s(s);
    return apply_real_multiplier(u, [s](double xi2) { return xi2 == 0.0 ? 0.0 : std::pow(xi2, s); });
}

Field apply_L(const Field& u, double s) {
    check_s(s);
    return apply_real_multiplier(u, [s](double xi2) { return 1.0 + std::pow(xi2, s); });
}

Field apply_L_inverse(const Field& u, double s) {
    check_s(s);
    return apply_real_multiplier(u, [s](double xi2) { return 1.0 / (1.0 + std::pow(xi2, s)); });
}

Field apply_L_sqrt(const Field& u, double s) {
    check_s(s);
    return apply_real_multiplier(u, [s](double xi2) { return std::sqrt(1.0 + std::pow(xi2, s)); });
}

Field apply_L_inv_sqrt(const Field& u, double s) {
    check_s(s);
    return apply_real_multiplier(u, [s](double xi2) { return 1.0 / std::sqrt(1.0 + std::pow(xi2, s)); });
}

Field spectral_derivative(const Field& u, int axis) {
    const Grid& g = u.grid;
    if (axis < 0 || axis >= g.N) raise(ErrorKind::invalid_argument, "derivative axis out of range");
    auto spec = fft_forward(u);
    const int half = g.n / 2 + 1;
    const std::complex<double> I(0.0, 1.0);
    if (g.N == 1) {
        for (int k = 0; k < half; ++k) {
            const double xi = g.wavenumber(k);
            spec[static_cast<std::size_t>(k)] *= (k == g.n / 2) ? 0.0 : I * xi;
        }
    } else {
        for (int i = 0; i < g.n; ++i) {
            for (int k = 0; k < half; ++k) {
                std::complex<double>& c = spec[static_cast<std::size_t>(i) * half + k];
                if (axis == 0) {
                    const int m = g.freq_index(i);
                    c *= (i == g.n / 2) ? 0.0 : I * g.wavenumber(m);
                } else {
                    c *= (k == g.n / 2) ? 0.0 : I * g.wavenumber(k);
                }
            }
        }
    }
    return fft_backward(g, spec);
}

Field spectral_shift(const Field& u, int axis, double shift) {
    const Grid& g = u.grid;
    if (axis < 0 || axis >= g.N) raise(ErrorKind::invalid_argument, "shift axis out of range");
    auto spec = fft_forward(u);
    const int half = g.n / 2 + 1;
    auto phase = [&](int m, bool nyquist) -> std::complex<double> {
        const double arg = g.wavenumber(m) * shift;
        if (nyquist) return {std::cos(arg), 0.0};  // self-conjugate mode stays real
        return {std::cos(arg), std::sin(arg)};
    };
    if (g.N == 1) {
        for (int k = 0; k < half; ++k) spec[static_cast<std::size_t>(k)] *= phase(k, k == g.n / 2);
    } else {
        for (int i = 0; i < g.n; ++i) {
            for (int k = 0; k < half; ++k) {
                std::complex<double>& c = spec[static_cast<std::size_t>(i) * half + k];
                if (axis == 0)
                    c *= phase(g.freq_index(i), i == g.n / 2);
                else
                    c *= phase(k, k == g.n / 2);
            }
        }
    }
    return fft_backward(g, spec);
}

namespace {

// Peak location with a clamped 3-point parabolic sub-grid correction.
double peak_offset_1d(const std::vector<double>& v, int n, int jmax) {
    const double ym = v[static_cast<std::size_t>((jmax - 1 + n) % n)];
    const double y0 = v[static_cast<std::size_t>(jmax)];
    const double yp = v[static_cast<std::size_t>((jmax + 1) % n)];
    const double denom = ym - 2.0 * y0 + yp;
    if (denom == 0.0) return 0.0;
    return std::clamp(0.5 * (ym - yp) / denom, -0.5, 0.5);
}

}  // namespace

Field recenter_peak(const Field& u) {
    const Grid& g = u.grid;
    Field out = u;
    if (g.N == 1) {
        const auto it = std::max_element(out.values.begin(), out.values.end());
        const int jmax = static_cast<int>(it - out.values.begin());
        const double delta = peak_offset_1d(out.values, g.n, jmax);
        const double shift = (jmax + delta - g.n / 2) * g.dx();
        if (shift != 0.0) out = spectral_shift(out, 0, shift);
    } else {
        const auto it = std::max_element(out.values.begin(), out.values.end());
        const int idx = static_cast<int>(it - out.values.begin());
        const int i0 = idx / g.n;
        const int j0 = idx % g.n;
        // axis profiles through the peak
        std::vector<double> row(static_cast<std::size_t>(g.n)), col(static_cast<std::size_t>(g.n));
        for (int j = 0; j < g.n; ++j) row[static_cast<std::size_t>(j)] = out[static_cast<std::size_t>(i0) * g.n + j];
        for (int i = 0; i < g.n; ++i) col[static_cast<std::size_t>(i)] = out[static_cast<std::size_t>(i) * g.n + j0];
        const double d0 = peak_offset_1d(col, g.n, i0);
        const double d1 = peak_offset_1d(row, g.n, j0);
        const double shift0 = (i0 + d0 - g.n / 2) * g.dx();
        const double shift1 = (j0 + d1 - g.n / 2) * g.dx();
        if (shift0 != 0.0) out = spectral_shift(out, 0, shift0);
        if (shift1 != 0.0) out = spectral_shift(out, 1, shift1);
    }
    return out;
}


double hs_energy(const Field& u, double s) {
    check_s(s);
    const Grid& g = u.grid;
    const auto spec = fft_forward(u);
    const int half = g.n / 2 + 1;
    double acc = 0.0;
    auto weight_last = [&](int k) { return (k == 0 || k == g.n / 2) ? 1.0 : 2.0; };
    if (g.N == 1) {
        for (int k = 0; k < half; ++k) {
            const double xi = g.wavenumber(k);
            acc += weight_last(k) * (1.0 + std::pow(xi * xi, s)) * std::norm(spec[static_cast<std::size_t>(k)]);
        }
    } else {
        for (int i = 0; i < g.n; ++i) {
            const double xi0 = g.wavenumber(g.freq_index(i));
            for (int k = 0; k < half; ++k) {
                const double xi1 = g.wavenumber(k);
                const double xi2 = xi0 * xi0 + xi1 * xi1;
                acc += weight_last(k) * (1.0 + std::pow(xi2, s)) *
                       std::norm(spec[static_cast<std::size_t>(i) * half + k]);
            }
        }
    }
    // coefficients c_m = U_m / n^N, box measure (2L)^N
    const double scale = std::pow(2.0 * g.L, g.N) / std::pow(static_cast<double>(g.n), 2.0 * g.N);
    return acc * scale;
}

double sobolev_quotient(const Field& u, double s, double p) {
    if (!(p > 1.0)) raise(ErrorKind::invalid_argument, "sobolev_quotient: requires p > 1");
    const double denom = integrate_power(u, 2.0 * p);
    if (!(denom > 0.0)) raise(ErrorKind::domain, "sobolev_quotient: field is identically zero");
    return hs_energy(u, s) / std::pow(denom, 1.0 / p);
}

}  // namespace fracsys

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "fft.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/schur.hpp"

namespace schurlab {

namespace {

using detail::dft;

void check_resolution(int resolution) {
    if (resolution < 16 || (resolution & (resolution - 1)) != 0)
        throw InvalidArgument("resolution must be a power of two >= 16");
}

// |g^| integrated over the band resolved by samples at spacing dt, plus the
// part of that integral coming from the top half of the band.
struct BandMass {
    double total = 0.0;
    double high = 0.0;
};

// Zero padding by `pad` refines the frequency grid; without it the Riemann
// sum of |g^| runs on spacing 1/(2 halfwidth), which is far too coarse for
// windows of a few units.
BandMass band_mass(const std::vector<complex>& samples, double dt, std::size_t pad) {
    const std::size_t n = samples.size() * pad;
    std::vector<complex> padded(n);
    std::copy(samples.begin(), samples.end(), padded.begin());
    const auto spec = dft(std::move(padded));
    const double dxi = 1.0 / (static_cast<double>(n) * dt);
    BandMass m;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t freq = k <= n / 2 ? k : n - k;
        const double a = std::abs(spec[k]) * dt * dxi;
        m.total += a;
        if (freq > n / 4) m.high += a;
    }
    return m;
}

constexpr std::size_t kPad = 16;

}  // namespace

FourierL1 fourier_l1_bound(const ScalarFn& g, double halfwidth, int resolution) {
    if (!(halfwidth > 0.0)) throw InvalidArgument("halfwidth must be > 0");
    check_resolution(resolution);
    const auto n = static_cast<std::size_t>(resolution);
    const double dt = 2.0 * halfwidth / static_cast<double>(n);
    std::vector<complex> samples(n);
    double peak = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        samples[j] = g(-halfwidth + static_cast<double>(j) * dt);
        if (!std::isfinite(samples[j].real()) || !std::isfinite(samples[j].imag()))
            throw NumericalFailure("fourier_l1_bound: non-finite sample");
        peak = std::max(peak, std::abs(samples[j]));
    }
    if (peak == 0.0) return {0.0, 0.0};

    const BandMass fine = band_mass(samples, dt, kPad);
    if (fine.high > 1e-3 * fine.total)
        throw ResolutionTooLow("upper half of the band carries " + std::to_string(fine.high / fine.total) +
                               " of the spectral mass; raise the resolution");
    std::vector<complex> half(n / 2);
    for (std::size_t j = 0; j < n / 2; ++j) half[j] = samples[2 * j];
    const BandMass coarse = band_mass(half, 2.0 * dt, kPad);
    // Frequency spacing error, judged against half the padding.
    const BandMass loose = band_mass(samples, dt, kPad / 2);
    return {fine.total, fine.high + std::abs(fine.total - coarse.total) + std::abs(fine.total - loose.total)};
}

namespace {

// 4 pi int_0^inf |T(xi)| dxi for R = 1, where T(xi) = int_xi^inf rho^ and
// T is tabulated at spacing dxi from exact cell integrals of rho^.
double tail_integral(const std::vector<double>& T, std::size_t stride, double dxi) {
    double acc = 0.5 * T[0];
    for (std::size_t m = stride; m < T.size(); m += stride) acc += T[m];
    return 4.0 * std::numbers::pi * acc * dxi * static_cast<double>(stride);
}

}  // namespace

FourierL1 one_minus_rho_over_t_l1(double R, int resolution) {
    if (!(R > 0.0)) throw InvalidArgument("cutoff radius must be > 0");
    check_resolution(resolution);
    constexpr double kHalfwidth = 64.0;
    const auto n = static_cast<std::size_t>(resolution);
    const double dt = 2.0 * kHalfwidth / static_cast<double>(n);
    if (dt > 1.0 / 64.0) throw ResolutionTooLow("one_minus_rho_over_t_l1 needs resolution >= 2^13");
    const double dxi = 1.0 / (2.0 * kHalfwidth);
    const CutoffSpec unit{1.0};

    // q(t) = rho(t) (1 - exp(-2 pi i t dxi)) / (2 pi i t); its transform at
    // xi is the integral of rho^ over [xi, xi + dxi].
    std::vector<complex> q(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = -kHalfwidth + static_cast<double>(j) * dt;
        const double r = cutoff_rho(unit, t);
        if (r == 0.0) continue;
        if (t == 0.0) {
            q[j] = r * dxi;
            continue;
        }
        const complex z(0.0, -2.0 * std::numbers::pi * t * dxi);
        q[j] = r * (1.0 - std::exp(z)) / complex(0.0, 2.0 * std::numbers::pi * t);
    }
    const auto spec = dft(q);
    // Undo the window offset -halfwidth: multiply by exp(2 pi i halfwidth xi_m) = (-1)^m.
    std::vector<double> T(n / 2);
    double below = 0.0;
    for (std::size_t m = 0; m < n / 2; ++m) {
        T[m] = std::abs(0.5 - below);
        const double sign = (m % 2 == 0) ? 1.0 : -1.0;
        below += sign * (spec[m] * dt).real();
    }
    const double fine = tail_integral(T, 1, dxi);
    const double coarse = tail_integral(T, 2, dxi);
    return {fine / R, (std::abs(fine - coarse) + 4.0 * std::numbers::pi * T.back() * dxi) / R};
}

}  // namespace schurlab

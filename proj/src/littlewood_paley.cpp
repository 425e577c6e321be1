#include <cmath>
#include <string>
#include <vector>

#include "fft.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/schatten.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/wavelet.hpp"

namespace schurlab {

BesovResult littlewood_paley_besov(const ScalarFn& f, const BesovParams& P, double halfwidth, int resolution) {
    if (!(halfwidth > 0.0)) throw InvalidArgument("halfwidth must be > 0");
    if (resolution < 16 || (resolution & (resolution - 1)) != 0)
        throw InvalidArgument("resolution must be a power of two >= 16");
    if (!(P.p > 0.0) || !(P.q > 0.0)) throw InvalidArgument("Besov exponents must be > 0");
    if (P.j_max < P.j_min) throw InvalidArgument("Besov range needs j_min <= j_max");

    const auto n = static_cast<std::size_t>(resolution);
    const double dt = 2.0 * halfwidth / static_cast<double>(n);
    const double nyquist = 0.5 / dt;
    if (std::ldexp(1.0, P.j_max + 1) > nyquist)
        throw ResolutionTooLow("level " + std::to_string(P.j_max) + " reaches past the Nyquist frequency " +
                               std::to_string(nyquist));

    std::vector<complex> samples(n);
    for (std::size_t m = 0; m < n; ++m) samples[m] = f(-halfwidth + static_cast<double>(m) * dt);
    const auto spec = detail::dft(std::move(samples));
    const double dxi = 1.0 / (static_cast<double>(n) * dt);
    const CutoffSpec chi{1.0};

    BesovResult r;
    for (int j = P.j_min; j <= P.j_max; ++j) {
        std::vector<complex> band(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double xi = static_cast<double>(k <= n / 2 ? k : n - k) * dxi;
            const double w = cutoff_rho(chi, std::ldexp(xi, -j)) - cutoff_rho(chi, std::ldexp(xi, 1 - j));
            if (w != 0.0) band[k] = w * spec[k];
        }
        const auto back = detail::dft(std::move(band), FFTW_BACKWARD);
        Sampled s{-halfwidth, dt, std::vector<double>(n)};
        for (std::size_t m = 0; m < n; ++m) s.v[m] = back[m].real() / static_cast<double>(n);
        r.terms.push_back(std::pow(2.0, j * P.s) * s.lp(P.p));
    }
    r.value = schatten_norm_from_sigma(r.terms, P.q);
    r.boundary_low = r.terms.front();
    r.boundary_high = r.terms.back();
    return r;
}

}  // namespace schurlab

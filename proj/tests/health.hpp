#pragma once

// Wavelet system health measurements shared by the unit and acceptance tests.

#include <cmath>

#include "schurlab/wavelet.hpp"

namespace health {

using namespace schurlab;

// max |<w_{j,k}, w_{j2,k2}> - delta| over |j| <= 2, |k| <= 8. Cross-level
// entries are taken at the finer level's resolution.
inline double gram_error(const WaveletSystem& W) {
    double err = 0.0;
    for (int j = -2; j <= 2; ++j)
        for (int k = -8; k <= 8; ++k) {
            const ScalarFn f = wavelet_fn(W, j, k);
            for (int j2 = -2; j2 <= j; ++j2) {
                const auto lc = level_coeffs(f, W, j2, -8, 8, Basis::wavelet, j - j2);
                for (std::size_t i = 0; i < lc.c.size(); ++i) {
                    const int k2 = lc.k_first + static_cast<int>(i);
                    err = std::max(err, std::abs(lc.c[i] - ((j2 == j && k2 == k) ? 1.0 : 0.0)));
                }
            }
        }
    return err;
}

// max over m < M of |int t^m w(t) dt|
inline double moment_error(const WaveletSystem& W) {
    const auto& w = W.samples(Basis::wavelet);
    double err = 0.0;
    for (int m = 0; m < W.vanishing_moments(); ++m) {
        double acc = 0.0;
        for (std::size_t q = 0; q < w.size(); ++q) acc += std::pow(static_cast<double>(q) * W.spacing(), m) * w[q];
        err = std::max(err, std::abs(acc * W.spacing()));
    }
    return err;
}

// Sup error of reconstructing the unit bump on [-1, 1] from levels -6..8.
inline double reconstruction_error(const WaveletSystem& W) {
    const ScalarFn bump = fn::smooth_bump(0.0, 1.0);
    std::vector<double> pts;
    for (int i = -64; i <= 64; ++i) pts.push_back(i / 64.0);
    const auto r = reconstruct(bump, W, -6, 8, {-1.0, 1.0}, pts);
    double err = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) err = std::max(err, std::abs(r[i] - bump.real(pts[i])));
    return err;
}

// Largest wavelet coefficient of a degree M-1 polynomial, levels -2..3.
inline double polynomial_leak(const WaveletSystem& W) {
    const ScalarFn poly = fn::polynomial(std::vector<double>(static_cast<std::size_t>(W.vanishing_moments()), 1.3));
    double worst = 0.0;
    for (int j = -2; j <= 3; ++j)
        for (double c : level_coeffs(poly, W, j, -10, 10).c) worst = std::max(worst, std::abs(c));
    return worst;
}

}  // namespace health

#pragma once

// Thin FFTW wrapper shared by the Fourier-side routines.

#include <fftw3.h>

#include <string>
#include <vector>

#include "schurlab/errors.hpp"
#include "schurlab/funcs.hpp"

namespace schurlab::detail {

// Unnormalized DFT: out[m] = sum_j in[j] exp(-+2 pi i j m / n), sign FFTW_FORWARD or FFTW_BACKWARD.
inline std::vector<complex> dft(std::vector<complex> in, int sign = FFTW_FORWARD) {
    const int n = static_cast<int>(in.size());
    std::vector<complex> out(in.size());
    auto* src = reinterpret_cast<fftw_complex*>(in.data());
    auto* dst = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan = fftw_plan_dft_1d(n, src, dst, sign, FFTW_ESTIMATE);
    if (plan == nullptr) throw NumericalFailure("fftw could not plan a transform of size " + std::to_string(n));
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    return out;
}

}  // namespace schurlab::detail

#pragma once

// Compactly supported Daubechies wavelets from the cascade algorithm, wavelet
// coefficients and layers, homogeneous Besov norms, and the polynomial
// corrected layer decomposition.

#include <iosfwd>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include "schurlab/funcs.hpp"

namespace schurlab {

/// Minimal-phase Daubechies low-pass filter with M vanishing moments
/// (length 2M, sum sqrt 2). M = 1 is Haar. Throws UnsupportedOrder outside 1..10.
[[nodiscard]] std::vector<double> daubechies_filter(int M);

struct CascadeResult {
    // Samples at t = q 2^{-J}, q = 0 .. (L-1) 2^J, L = filter length.
    std::vector<double> scaling;
    std::vector<double> wavelet;
    int iterations = 0;
    double residual = 0.0;  // sup norm of the last update
};

/// Fixed-point iteration of the refinement operator on the dyadic grid
/// 2^{-J}, started from the indicator of [0, 1). The wavelet uses the mirror
/// filter g_k = (-1)^k h_{L-1-k}. Throws NonConvergence if the last update
/// exceeds 1e-6 in sup norm.
[[nodiscard]] CascadeResult cascade(const std::vector<double>& filter, int J);

enum class Basis { scaling, wavelet };

/// Immutable sampled Daubechies system; copies share the sample tables.
class WaveletSystem {
public:
    /// `budget` is the largest admissible quadrature spacing 2^{-J-j} in t.
    WaveletSystem(int M, int J, double budget = 0.125);

    [[nodiscard]] int vanishing_moments() const noexcept { return d_->M; }
    [[nodiscard]] int depth() const noexcept { return d_->J; }
    [[nodiscard]] double budget() const noexcept { return d_->budget; }
    [[nodiscard]] const std::vector<double>& filter() const noexcept { return d_->h; }
    [[nodiscard]] const std::vector<double>& mirror_filter() const noexcept { return d_->g; }
    [[nodiscard]] std::size_t filter_length() const noexcept { return d_->h.size(); }
    /// [0, 2M-1]
    [[nodiscard]] Interval support() const noexcept;
    /// 2^{-J}
    [[nodiscard]] double spacing() const noexcept { return d_->dt; }
    /// 2^J
    [[nodiscard]] long per_unit() const noexcept { return d_->per_unit; }
    [[nodiscard]] const std::vector<double>& samples(Basis b) const noexcept {
        return b == Basis::scaling ? d_->cascade.scaling : d_->cascade.wavelet;
    }
    [[nodiscard]] int cascade_iterations() const noexcept { return d_->cascade.iterations; }
    [[nodiscard]] double cascade_residual() const noexcept { return d_->cascade.residual; }

    /// Regularity bookkeeping: DB-M is treated as C^beta with beta = 0.55 M.
    [[nodiscard]] double regularity() const noexcept { return 0.55 * d_->M; }

    /// Samples of the d-th derivative on the same grid, from exact dyadic
    /// refinement of the integer values. Throws RegimeViolation if d is not
    /// below regularity(). d = 0 returns samples(b).
    [[nodiscard]] const std::vector<double>& derivative_samples(Basis b, int d) const;

    /// Samples on the finer grid 2^{-J-extra}, refined exactly from the
    /// cascade table through the two-scale relation.
    [[nodiscard]] std::vector<double> refined_samples(Basis b, int extra) const;

    /// Linear interpolation of the d-th derivative table; 0 outside the support.
    [[nodiscard]] double eval(Basis b, double u, int d = 0) const;

    /// Header "t,phi,w" then one row per grid point.
    void write_csv(std::ostream& out) const;

private:
    struct Data {
        int M = 0;
        int J = 0;
        double budget = 0.0;
        double dt = 0.0;
        long per_unit = 0;
        std::vector<double> h, g;
        CascadeResult cascade;
        // derivs[d] = {scaling^(d), wavelet^(d)} for d >= 1.
        std::vector<std::pair<std::vector<double>, std::vector<double>>> derivs;
    };
    std::shared_ptr<const Data> d_;
};

/// 2^{j/2} b(2^j t - k) as a ScalarFn with derivatives up to the regularity.
[[nodiscard]] ScalarFn wavelet_fn(const WaveletSystem& W, int j, int k, Basis b = Basis::wavelet);

/// Coefficients <f, b_{j,k}> for k = k_first .. k_first + size - 1.
struct LevelCoeffs {
    int j = 0;
    int k_first = 0;
    std::vector<double> c;
    Basis basis = Basis::wavelet;
};

/// Range of k whose b_{j,k} support meets `window`.
[[nodiscard]] std::pair<int, int> k_range(const WaveletSystem& W, int j, Interval window);

/// Riemann sums at the cascade resolution, substituting u = 2^j t - k so the
/// basis samples enter exactly. `oversample` refines the basis grid to
/// 2^{-J-oversample}, which resolves f when it varies on a finer scale than
/// level j (for instance a basis function of a finer level). Throws
/// ResolutionInsufficient when the spacing 2^{-J-oversample-j} in t exceeds
/// W.budget().
[[nodiscard]] LevelCoeffs level_coeffs(const ScalarFn& f, const WaveletSystem& W, int j, int k_lo, int k_hi,
                                       Basis b = Basis::wavelet, int oversample = 0);

/// Map (j, k) -> <f, phi_{j,k}> over the given ranges.
[[nodiscard]] std::map<std::pair<int, int>, double> wavelet_coeffs(const ScalarFn& f, const WaveletSystem& W,
                                                                   std::pair<int, int> j_range,
                                                                   std::pair<int, int> k_range);

/// Values on the natural grid t = t0 + m dt.
struct Sampled {
    double t0 = 0.0;
    double dt = 1.0;
    std::vector<double> v;

    [[nodiscard]] double sup() const;
    /// (sum |v|^p dt)^{1/p}; p = kInf is the sup.
    [[nodiscard]] double lp(double p) const;
};

/// f_j = sum_k <f, b_{j,k}> b_{j,k}, kept as its coefficients.
class Layer {
public:
    Layer(WaveletSystem W, LevelCoeffs coeffs);

    [[nodiscard]] int level() const noexcept { return coeffs_.j; }
    [[nodiscard]] const LevelCoeffs& coeffs() const noexcept { return coeffs_; }
    /// d-th derivative at t; exact at grid nodes 2^{-J-j} Z for d = 0.
    [[nodiscard]] double operator()(double t, int d = 0) const;
    /// Values on the natural grid 2^{-J-j} Z over the whole support.
    [[nodiscard]] Sampled sample(int d = 0) const;
    [[nodiscard]] Interval support() const noexcept;

private:
    WaveletSystem W_;
    LevelCoeffs coeffs_;
};

/// Layer of f at level j over the k range meeting `window`.
[[nodiscard]] Layer layer(const ScalarFn& f, int j, const WaveletSystem& W, Interval window);
/// Projection onto the scaling space V_j over the same k range.
[[nodiscard]] Layer scaling_projection(const ScalarFn& f, int j, const WaveletSystem& W, Interval window);

/// P_{j_min} f + sum_{j_min <= j <= j_max} f_j at the given points.
[[nodiscard]] std::vector<double> reconstruct(const ScalarFn& f, const WaveletSystem& W, int j_min, int j_max,
                                              Interval window, const std::vector<double>& points);

struct BesovParams {
    double s = 0.0;
    double p = 2.0;  // kInf allowed
    double q = 2.0;  // kInf allowed
    int j_min = -6;
    int j_max = 8;
};

struct BesovResult {
    double value = 0.0;
    // 2^{js} ||f_j||_p for j = j_min .. j_max.
    std::vector<double> terms;
    double boundary_low = 0.0;   // term at j_min
    double boundary_high = 0.0;  // term at j_max
};

/// Truncated (sum_j (2^{js} ||f_j||_p)^q)^{1/q}. Throws RegimeViolation
/// unless W.regularity() > |s|.
[[nodiscard]] BesovResult besov_norm(const ScalarFn& f, const BesovParams& P, const WaveletSystem& W,
                                     Interval window);

/// The same truncated norm through the Fourier side: Delta_j f has multiplier
/// rho_1(2^{-j} xi) - rho_1(2^{1-j} xi), supported where 2^{j-1} <= |xi| <= 2^{j+1}.
/// f is sampled on [-halfwidth, halfwidth) at `resolution` points and treated
/// as periodic there. Only comparable to besov_norm up to constants, so it is
/// reported, never asserted. Throws ResolutionTooLow when 2^{j_max+1} exceeds
/// the Nyquist frequency.
[[nodiscard]] BesovResult littlewood_paley_besov(const ScalarFn& f, const BesovParams& P, double halfwidth,
                                                 int resolution = 1 << 16);

struct PolynomialCorrection {
    std::vector<double> coeffs;  // P(t) = sum coeffs[i] t^i, degree <= n
    std::vector<ScalarFn> layers;  // f_j - sum_{d<n} t^d f_j^(d)(0)/d!
    int j_min = 0;
    int j_max = 0;
    // sup_j ||f_j^(n)||_inf per level, used for the convergence check.
    std::vector<double> derivative_sups;
};

/// Corrected layers for j_min..j_max and the polynomial fitted at n+1
/// Chebyshev points of `window`. Throws SeriesDivergence when the finest
/// level still carries more than 1e-3 of sum_j ||f_j^(n)||_inf. Layers within 1e-8 (1 + sup |f|)
/// of zero count as zero.
[[nodiscard]] PolynomialCorrection polynomial_correction(const ScalarFn& f, const WaveletSystem& W, int n,
                                                         int j_min, int j_max, Interval window);

}  // namespace schurlab

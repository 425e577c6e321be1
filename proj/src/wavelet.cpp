#include "schurlab/wavelet.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "schurlab/errors.hpp"
#include "schurlab/schatten.hpp"

namespace schurlab {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

std::vector<complex> poly_roots(const std::vector<double>& c) {
    // c ascending, degree >= 1. Companion matrix eigenvalues, then Newton polish.
    const int deg = static_cast<int>(c.size()) - 1;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[static_cast<std::size_t>(i)] / c.back();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    if (es.info() != Eigen::Success) throw NumericalFailure("filter polynomial roots did not converge");
    std::vector<complex> roots;
    for (int i = 0; i < deg; ++i) {
        complex y = es.eigenvalues()(i);
        for (int it = 0; it < 4; ++it) {
            complex p = c.back(), dp = 0.0;
            for (int k = deg - 1; k >= 0; --k) {
                dp = dp * y + p;
                p = p * y + c[static_cast<std::size_t>(k)];
            }
            if (dp == complex{}) break;
            y -= p / dp;
        }
        roots.push_back(y);
    }
    return roots;
}

// One refinement sweep on a grid of `per_unit` points per unit:
// out[m] = scale sqrt2 sum_k taps_k in[2m - k per_unit].
std::vector<double> refine(const std::vector<double>& in, const std::vector<double>& taps, long per_unit,
                           double scale) {
    const long n = static_cast<long>(in.size());
    std::vector<double> out(in.size(), 0.0);
    for (std::size_t k = 0; k < taps.size(); ++k) {
        const double a = scale * kSqrt2 * taps[k];
        const long shift = static_cast<long>(k) * per_unit;
        for (long m = 0; m < n; ++m) {
            const long src = 2 * m - shift;
            if (src < 0) continue;
            if (src >= n) break;
            out[static_cast<std::size_t>(m)] += a * in[static_cast<std::size_t>(src)];
        }
    }
    return out;
}

// d-th derivative of the scaling function at 0..L-1: eigenvector of
// A_ij = sqrt2 h_{2i-j} for eigenvalue 2^{-d}, normalized by
// sum_k (-k)^d v_k = d!.
std::vector<double> integer_values(const std::vector<double>& h, int d) {
    const auto L = static_cast<Eigen::Index>(h.size());
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(L + 1, L);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(L + 1);
    for (Eigen::Index i = 0; i < L; ++i) {
        for (Eigen::Index j = 0; j < L; ++j) {
            const Eigen::Index k = 2 * i - j;
            if (k >= 0 && k < L) sys(i, j) = kSqrt2 * h[static_cast<std::size_t>(k)];
        }
        sys(i, i) -= std::ldexp(1.0, -d);
    }
    double fact = 1.0;
    for (int i = 2; i <= d; ++i) fact *= i;
    for (Eigen::Index k = 0; k < L; ++k) sys(L, k) = std::pow(-static_cast<double>(k), d);
    rhs(L) = fact;
    const Eigen::VectorXd v = sys.colPivHouseholderQr().solve(rhs);
    if ((sys * v - rhs).norm() > 1e-8 * (1.0 + rhs.norm()))
        throw NonConvergence("no consistent derivative values at the integers for order " + std::to_string(d));
    return {v.data(), v.data() + v.size()};
}

}  // namespace

std::vector<double> daubechies_filter(int M) {
    if (M < 1 || M > 10) throw UnsupportedOrder("Daubechies order " + std::to_string(M) + " outside 1..10");
    // Ascending coefficients of (1 + z)^M prod (z - z_i), z_i the roots inside
    // the unit disc of the spectral factor.
    std::vector<complex> poly{1.0};
    auto mul = [&](complex a0, complex a1) {
        std::vector<complex> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i] * a0;
            next[i + 1] += poly[i] * a1;
        }
        poly = std::move(next);
    };
    for (int i = 0; i < M; ++i) mul(1.0, 1.0);
    if (M > 1) {
        std::vector<double> P(static_cast<std::size_t>(M));
        for (int k = 0; k < M; ++k) P[static_cast<std::size_t>(k)] = binomial(M - 1 + k, k);
        for (const complex& y : poly_roots(P)) {
            const complex b = 2.0 - 4.0 * y;
            const complex disc = std::sqrt(b * b - 4.0);
            complex z = 0.5 * (b + disc);
            if (std::abs(z) >= 1.0) z = 0.5 * (b - disc);
            mul(-z, 1.0);
        }
    }
    const std::size_t L = poly.size();
    std::vector<double> h(L);
    double sum = 0.0;
    for (std::size_t k = 0; k < L; ++k) {
        h[k] = poly[L - 1 - k].real();
        sum += h[k];
    }
    for (double& v : h) v *= kSqrt2 / sum;
    return h;
}

CascadeResult cascade(const std::vector<double>& filter, int J) {
    if (J < 4 || J > 20) throw InvalidArgument("cascade depth J must be in 4..20");
    if (filter.size() < 2) throw InvalidArgument("cascade needs a filter of length >= 2");
    const long per_unit = 1L << J;
    const std::size_t L = filter.size();
    const std::size_t n = (L - 1) * static_cast<std::size_t>(per_unit) + 1;

    CascadeResult res;
    std::vector<double> v(n, 0.0);
    std::fill(v.begin(), v.begin() + per_unit, 1.0);
    constexpr int kMaxIters = 2000;
    res.residual = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= kMaxIters; ++it) {
        std::vector<double> w = refine(v, filter, per_unit, 1.0);
        double diff = 0.0;
        for (std::size_t q = 0; q < n; ++q) diff = std::max(diff, std::abs(w[q] - v[q]));
        v = std::move(w);
        res.iterations = it;
        res.residual = diff;
        if (diff < 1e-14) break;
    }
    if (!(res.residual <= 1e-6))
        throw NonConvergence("cascade update still " + std::to_string(res.residual) + " after " +
                             std::to_string(res.iterations) + " iterations");
    std::vector<double> g(L);
    for (std::size_t k = 0; k < L; ++k) g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * filter[L - 1 - k];
    res.wavelet = refine(v, g, per_unit, 1.0);
    res.scaling = std::move(v);
    return res;
}

// ---------------------------------------------------------------------------

WaveletSystem::WaveletSystem(int M, int J, double budget) {
    if (!(budget > 0.0)) throw InvalidArgument("quadrature budget must be > 0");
    auto d = std::make_shared<Data>();
    d->M = M;
    d->J = J;
    d->budget = budget;
    d->h = daubechies_filter(M);
    d->cascade = cascade(d->h, J);
    d->per_unit = 1L << J;
    d->dt = std::ldexp(1.0, -J);
    const std::size_t L = d->h.size();
    d->g.resize(L);
    for (std::size_t k = 0; k < L; ++k) d->g[k] = ((k % 2 == 0) ? 1.0 : -1.0) * d->h[L - 1 - k];

    // Derivative tables by exact dyadic refinement of the integer values.
    const double beta = 0.55 * M;
    for (int order = 1; order < M && order < beta; ++order) {
        std::vector<double> table = integer_values(d->h, order);
        const double scale = std::ldexp(1.0, order);
        for (int r = 1; r <= J; ++r) {
            std::vector<double> finer((L - 1) * (std::size_t{1} << r) + 1, 0.0);
            for (std::size_t m = 0; m < finer.size(); m += 2) finer[m] = table[m / 2];
            // odd points from the refinement relation on the previous level
            const long unit = 1L << (r - 1);
            for (std::size_t m = 1; m < finer.size(); m += 2) {
                double acc = 0.0;
                for (std::size_t k = 0; k < L; ++k) {
                    const long src = static_cast<long>(m) - static_cast<long>(k) * unit;
                    if (src < 0) break;
                    if (src < static_cast<long>(table.size())) acc += d->h[k] * table[static_cast<std::size_t>(src)];
                }
                finer[m] = scale * kSqrt2 * acc;
            }
            table = std::move(finer);
        }
        std::vector<double> wav = refine(table, d->g, d->per_unit, scale);
        d->derivs.emplace_back(std::move(table), std::move(wav));
    }
    d_ = std::move(d);
}

Interval WaveletSystem::support() const noexcept {
    return {0.0, static_cast<double>(d_->h.size() - 1)};
}

const std::vector<double>& WaveletSystem::derivative_samples(Basis b, int d) const {
    if (d == 0) return samples(b);
    if (d < 0 || static_cast<std::size_t>(d) > d_->derivs.size())
        throw RegimeViolation("derivative of order " + std::to_string(d) + " exceeds what DB-" +
                              std::to_string(d_->M) + " provides");
    const auto& pair = d_->derivs[static_cast<std::size_t>(d) - 1];
    return b == Basis::scaling ? pair.first : pair.second;
}

std::vector<double> WaveletSystem::refined_samples(Basis b, int extra) const {
    if (extra < 0 || extra > 8) throw InvalidArgument("refinement depth must be in 0..8");
    if (extra == 0) return samples(b);
    std::vector<double> phi = d_->cascade.scaling;
    long unit = d_->per_unit;
    const std::size_t L = d_->h.size();
    // phi on 2^{-J-r} from phi on 2^{-J-r+1}; the wavelet needs one step from phi.
    for (int r = 1; r < extra; ++r) {
        std::vector<double> finer((L - 1) * static_cast<std::size_t>(2 * unit) + 1, 0.0);
        for (std::size_t m = 0; m < finer.size(); ++m) {
            if (m % 2 == 0) {
                finer[m] = phi[m / 2];
                continue;
            }
            double acc = 0.0;
            for (std::size_t k = 0; k < L; ++k) {
                const long src = static_cast<long>(m) - static_cast<long>(k) * unit;
                if (src < 0) break;
                if (src < static_cast<long>(phi.size())) acc += d_->h[k] * phi[static_cast<std::size_t>(src)];
            }
            finer[m] = kSqrt2 * acc;
        }
        phi = std::move(finer);
        unit *= 2;
    }
    const std::vector<double>& taps = b == Basis::scaling ? d_->h : d_->g;
    std::vector<double> out((L - 1) * static_cast<std::size_t>(2 * unit) + 1, 0.0);
    for (std::size_t m = 0; m < out.size(); ++m) {
        double acc = 0.0;
        for (std::size_t k = 0; k < L; ++k) {
            const long src = static_cast<long>(m) - static_cast<long>(k) * unit;
            if (src < 0) break;
            if (src < static_cast<long>(phi.size())) acc += taps[k] * phi[static_cast<std::size_t>(src)];
        }
        out[m] = kSqrt2 * acc;
    }
    return out;
}

double WaveletSystem::eval(Basis b, double u, int d) const {
    const auto& tab = derivative_samples(b, d);
    const double x = u * static_cast<double>(d_->per_unit);
    if (!(x >= 0.0) || x > static_cast<double>(tab.size() - 1)) return 0.0;
    const auto i = static_cast<std::size_t>(x);
    if (i + 1 >= tab.size()) return tab.back();
    const double frac = x - static_cast<double>(i);
    return frac == 0.0 ? tab[i] : tab[i] + frac * (tab[i + 1] - tab[i]);
}

void WaveletSystem::write_csv(std::ostream& out) const {
    char buf[96];
    out << "t,phi,w\n";
    const auto& s = d_->cascade.scaling;
    const auto& w = d_->cascade.wavelet;
    for (std::size_t q = 0; q < s.size(); ++q) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", static_cast<double>(q) * d_->dt, s[q], w[q]);
        out << buf;
    }
    if (!out) throw IoFailure("could not write wavelet samples");
}

ScalarFn wavelet_fn(const WaveletSystem& W, int j, int k, Basis b) {
    const double width = W.support().hi;
    const double scale = std::ldexp(1.0, j);
    const Interval support{k / scale, (k + width) / scale};
    int order = 0;
    while (order + 1 < W.vanishing_moments() && order + 1 < W.regularity()) ++order;
    return ScalarFn(order, [W, k, b, scale](double t, int d) {
        return complex(std::sqrt(scale) * std::pow(scale, d) * W.eval(b, scale * t - k, d), 0.0);
    }, support);
}

std::pair<int, int> k_range(const WaveletSystem& W, int j, Interval window) {
    const double scale = std::ldexp(1.0, j);
    const double width = W.support().hi;
    // b_{j,k} lives on [k, k + width] / 2^j.
    const int lo = static_cast<int>(std::ceil(window.lo * scale - width));
    const int hi = static_cast<int>(std::floor(window.hi * scale));
    return {lo, hi};
}

LevelCoeffs level_coeffs(const ScalarFn& f, const WaveletSystem& W, int j, int k_lo, int k_hi, Basis b,
                         int oversample) {
    const int J = W.depth() + oversample;
    const double step = std::ldexp(1.0, -J - j);
    if (step > W.budget())
        throw ResolutionInsufficient("level " + std::to_string(j) + " needs quadrature spacing " +
                                     std::to_string(step) + " > budget " + std::to_string(W.budget()));
    LevelCoeffs out;
    out.j = j;
    out.k_first = k_lo;
    out.basis = b;
    if (k_hi < k_lo) return out;
    out.c.assign(static_cast<std::size_t>(k_hi - k_lo) + 1, 0.0);

    // Only k whose support meets f's support can be nonzero.
    int lo = k_lo, hi = k_hi;
    if (f.support_hint()) {
        const auto [a, z] = k_range(W, j, *f.support_hint());
        lo = std::max(lo, a);
        hi = std::min(hi, z);
    }
    if (hi < lo) return out;

    const std::vector<double> tab = W.refined_samples(b, oversample);
    const long per_unit = 1L << J;
    const long m0 = static_cast<long>(lo) * per_unit;
    const long m1 = static_cast<long>(hi) * per_unit + static_cast<long>(tab.size()) - 1;
    std::vector<double> F(static_cast<std::size_t>(m1 - m0 + 1));
    for (long m = m0; m <= m1; ++m) F[static_cast<std::size_t>(m - m0)] = f.real(std::ldexp(static_cast<double>(m), -J - j));

    const double norm = std::ldexp(1.0, -J) / std::sqrt(std::ldexp(1.0, j));
    for (int k = lo; k <= hi; ++k) {
        const double* fk = F.data() + (static_cast<long>(k) * per_unit - m0);
        double acc = 0.0;
        for (std::size_t q = 0; q < tab.size(); ++q) acc += fk[q] * tab[q];
        out.c[static_cast<std::size_t>(k - k_lo)] = norm * acc;
    }
    return out;
}

std::map<std::pair<int, int>, double> wavelet_coeffs(const ScalarFn& f, const WaveletSystem& W,
                                                     std::pair<int, int> j_range, std::pair<int, int> k_rng) {
    std::map<std::pair<int, int>, double> out;
    for (int j = j_range.first; j <= j_range.second; ++j) {
        const LevelCoeffs lc = level_coeffs(f, W, j, k_rng.first, k_rng.second);
        for (std::size_t i = 0; i < lc.c.size(); ++i) out[{j, lc.k_first + static_cast<int>(i)}] = lc.c[i];
    }
    return out;
}

double Sampled::sup() const {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double Sampled::lp(double p) const {
    if (!(p > 0.0)) throw InvalidArgument("Lp norm needs p > 0");
    if (std::isinf(p)) return sup();
    const double m = sup();
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::abs(x) / m, p);
    return m * std::pow(acc * dt, 1.0 / p);
}

Layer::Layer(WaveletSystem W, LevelCoeffs coeffs) : W_(std::move(W)), coeffs_(std::move(coeffs)) {}

Interval Layer::support() const noexcept {
    const double scale = std::ldexp(1.0, coeffs_.j);
    const int last = coeffs_.k_first + static_cast<int>(coeffs_.c.size()) - 1;
    return {coeffs_.k_first / scale, (last + W_.support().hi) / scale};
}

double Layer::operator()(double t, int d) const {
    if (coeffs_.c.empty()) return 0.0;
    const int j = coeffs_.j;
    const double scale = std::ldexp(1.0, j);
    const double u = scale * t;
    const double width = W_.support().hi;
    const int last = coeffs_.k_first + static_cast<int>(coeffs_.c.size()) - 1;
    const int lo = std::max(coeffs_.k_first, static_cast<int>(std::ceil(u - width)));
    const int hi = std::min(last, static_cast<int>(std::floor(u)));
    double acc = 0.0;
    for (int k = lo; k <= hi; ++k) {
        const double c = coeffs_.c[static_cast<std::size_t>(k - coeffs_.k_first)];
        if (c != 0.0) acc += c * W_.eval(coeffs_.basis, u - k, d);
    }
    return acc * std::sqrt(scale) * std::pow(scale, d);
}

Sampled Layer::sample(int d) const {
    Sampled s;
    const int J = W_.depth();
    const int j = coeffs_.j;
    s.dt = std::ldexp(1.0, -J - j);
    s.t0 = std::ldexp(static_cast<double>(coeffs_.k_first), -j);
    if (coeffs_.c.empty()) return s;
    const auto& tab = W_.derivative_samples(coeffs_.basis, d);
    const long per_unit = W_.per_unit();
    s.v.assign(static_cast<std::size_t>((static_cast<long>(coeffs_.c.size()) - 1) * per_unit) + tab.size(), 0.0);
    const double scale = std::ldexp(1.0, j);
    const double amp = std::sqrt(scale) * std::pow(scale, d);
    for (std::size_t i = 0; i < coeffs_.c.size(); ++i) {
        const double c = coeffs_.c[i] * amp;
        if (c == 0.0) continue;
        double* out = s.v.data() + static_cast<long>(i) * per_unit;
        for (std::size_t q = 0; q < tab.size(); ++q) out[q] += c * tab[q];
    }
    return s;
}

namespace {

Interval effective_window(const ScalarFn& f, Interval window) {
    if (window.hi > window.lo) return window;
    if (f.support_hint()) return *f.support_hint();
    throw InvalidArgument("a window is required for functions without a support hint");
}

}  // namespace

Layer layer(const ScalarFn& f, int j, const WaveletSystem& W, Interval window) {
    const auto [lo, hi] = k_range(W, j, effective_window(f, window));
    return Layer(W, level_coeffs(f, W, j, lo, hi, Basis::wavelet));
}

Layer scaling_projection(const ScalarFn& f, int j, const WaveletSystem& W, Interval window) {
    const auto [lo, hi] = k_range(W, j, effective_window(f, window));
    return Layer(W, level_coeffs(f, W, j, lo, hi, Basis::scaling));
}

std::vector<double> reconstruct(const ScalarFn& f, const WaveletSystem& W, int j_min, int j_max, Interval window,
                                const std::vector<double>& points) {
    if (j_max < j_min) throw InvalidArgument("reconstruct needs j_min <= j_max");
    std::vector<double> out(points.size(), 0.0);
    const Layer coarse = scaling_projection(f, j_min, W, window);
    for (std::size_t i = 0; i < points.size(); ++i) out[i] += coarse(points[i]);
    for (int j = j_min; j <= j_max; ++j) {
        const Layer lj = layer(f, j, W, window);
        for (std::size_t i = 0; i < points.size(); ++i) out[i] += lj(points[i]);
    }
    return out;
}

BesovResult besov_norm(const ScalarFn& f, const BesovParams& P, const WaveletSystem& W, Interval window) {
    if (!(W.regularity() > std::abs(P.s)))
        throw RegimeViolation("Besov smoothness |s| = " + std::to_string(std::abs(P.s)) +
                              " needs more regularity than DB-" + std::to_string(W.vanishing_moments()));
    if (!(P.p > 0.0) || !(P.q > 0.0)) throw InvalidArgument("Besov exponents must be > 0");
    if (P.j_max < P.j_min) throw InvalidArgument("Besov range needs j_min <= j_max");
    BesovResult r;
    for (int j = P.j_min; j <= P.j_max; ++j) {
        const double nrm = layer(f, j, W, window).sample().lp(P.p);
        r.terms.push_back(std::pow(2.0, j * P.s) * nrm);
    }
    r.value = schatten_norm_from_sigma(r.terms, P.q);
    r.boundary_low = r.terms.front();
    r.boundary_high = r.terms.back();
    return r;
}

PolynomialCorrection polynomial_correction(const ScalarFn& f, const WaveletSystem& W, int n, int j_min, int j_max,
                                           Interval window) {
    if (n < 0) throw InvalidArgument("polynomial degree must be >= 0");
    if (j_max < j_min) throw InvalidArgument("polynomial_correction needs j_min <= j_max");
    if (!(window.hi > window.lo)) throw InvalidArgument("polynomial_correction needs a nonempty window");
    static_cast<void>(W.derivative_samples(Basis::wavelet, n));  // regularity gate

    PolynomialCorrection out;
    out.j_min = j_min;
    out.j_max = j_max;
    // Layers below this are quadrature noise; on polynomial input every layer
    // is, and the divergence test would compare noise with noise.
    double fscale = 0.0;
    for (int i = 0; i <= 64; ++i) fscale = std::max(fscale, std::abs(f.real(window.lo + (window.hi - window.lo) * i / 64.0)));
    const double floor = 1e-8 * (1.0 + fscale);
    double total = 0.0;
    for (int j = j_min; j <= j_max; ++j) {
        const Layer lj = layer(f, j, W, window);
        if (lj.sample().sup() <= floor) {
            out.derivative_sups.push_back(0.0);
            out.layers.push_back(fn::zero());
            continue;
        }
        std::vector<double> taylor(static_cast<std::size_t>(n));
        for (int d = 0; d < n; ++d) taylor[static_cast<std::size_t>(d)] = lj(0.0, d);
        const double dsup = lj.sample(n).sup();
        out.derivative_sups.push_back(dsup);
        total += dsup;
        out.layers.emplace_back(0, [lj, taylor](double t, int) {
            double poly = 0.0, pw = 1.0, fact = 1.0;
            for (std::size_t d = 0; d < taylor.size(); ++d) {
                if (d > 0) fact *= static_cast<double>(d);
                poly += taylor[d] * pw / fact;
                pw *= t;
            }
            return complex(lj(t) - poly, 0.0);
        });
    }
    if (total > 0.0 && out.derivative_sups.back() > 1e-3 * total)
        throw SeriesDivergence("finest level carries " + std::to_string(out.derivative_sups.back() / total) +
                               " of the derivative sum");

    // P from n+1 Chebyshev points of the window.
    const auto m = static_cast<Eigen::Index>(n + 1);
    Eigen::MatrixXd V(m, m);
    Eigen::VectorXd rhs(m);
    const double mid = 0.5 * (window.lo + window.hi), half = 0.5 * (window.hi - window.lo);
    for (Eigen::Index i = 0; i < m; ++i) {
        const double t = mid + half * std::cos((2.0 * static_cast<double>(i) + 1.0) * std::numbers::pi /
                                                (2.0 * static_cast<double>(m)));
        double r = f.real(t);
        for (const auto& g : out.layers) r -= g.real(t);
        rhs(i) = r;
        double pw = 1.0;
        for (Eigen::Index c = 0; c < m; ++c) {
            V(i, c) = pw;
            pw *= t;
        }
    }
    const Eigen::VectorXd coeffs = V.fullPivLu().solve(rhs);
    out.coeffs.assign(coeffs.data(), coeffs.data() + coeffs.size());
    return out;
}

}  // namespace schurlab

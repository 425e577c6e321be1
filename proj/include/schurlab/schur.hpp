#pragma once

// Discrete multilinear Schur multipliers: contraction, cutoff and indicator
// symbols, the diagonal/off-diagonal split of divided differences, Fourier
// L1 majorants, and a lower-bound optimizer for multiplier norms.

#include <cstdint>
#include <vector>

#include "schurlab/funcs.hpp"
#include "schurlab/schatten.hpp"
#include "schurlab/symbol_grid.hpp"

namespace schurlab {

/// out[i_0, i_n] = sum over i_1..i_{n-1} of psi(i_0..i_n) x_1[i_0,i_1] ... x_n[i_{n-1},i_n].
/// Throws ArityMismatch unless xs.size() == psi.arity(), GridMismatch unless
/// every matrix carries the symbol's grid.
[[nodiscard]] KernelMatrix apply_schur(const SymbolGrid& psi, const std::vector<KernelMatrix>& xs);

// Raw forms used by the optimizer. `values` is the dense row-major tensor of
// a symbol of arity xs.size() over N = xs[0].rows() points.
[[nodiscard]] Matrix schur_contract(const std::vector<complex>& values, const std::vector<Matrix>& xs);
/// Adjoint of x_j -> schur_contract(values, xs) with respect to
/// Re tr(a^* b), evaluated at g. The slot-j entry of xs is ignored.
[[nodiscard]] Matrix schur_contract_adjoint(const std::vector<complex>& values, const std::vector<Matrix>& xs,
                                            std::size_t j, const Matrix& g);

struct CutoffSpec {
    double R = 1.0;
};

/// Smooth cutoff: 1 on [-R, R], 0 outside [-2R, 2R], monotone in between.
[[nodiscard]] double cutoff_rho(const CutoffSpec& spec, double xi);
/// rho_R as a ScalarFn (values only).
[[nodiscard]] ScalarFn rho_fn(double R);
/// (1 - rho_R(t)) / t with value 0 at t = 0.
[[nodiscard]] ScalarFn one_minus_rho_over_t(double R);

/// psi(i, j) = g(grid[i] - grid[j]); tagged toeplitz_diff.
[[nodiscard]] SymbolGrid toeplitz_symbol(const ScalarFn& g, std::vector<double> grid);

/// ||g^||_{L1} under g^(xi) = int g(t) exp(-2 pi i t xi) dt, with a
/// discretization tail estimate. Both numbers belong in any report.
struct FourierL1 {
    double value = 0.0;
    double tail = 0.0;
};

/// Samples g on [-halfwidth, halfwidth) at `resolution` points and integrates
/// |g^| over the resolved band. g must be negligible outside the window.
/// Throws ResolutionTooLow when the top half of the band carries a visible
/// share of the spectrum.
[[nodiscard]] FourierL1 fourier_l1_bound(const ScalarFn& g, double halfwidth, int resolution);

/// ||G^||_{L1} for G(t) = (1 - rho_R(t))/t. G decays only like 1/t, so the
/// windowed route above does not apply; this uses G^' = -2 pi i (delta - rho_R^).
[[nodiscard]] FourierL1 one_minus_rho_over_t_l1(double R, int resolution = 1 << 16);

/// Indicator of t_0 in [l, l+1) and t_m in [l + r_1 + ... + r_m, ... + 1) for
/// every m, on grid^{n+1} with n = r_list.size().
[[nodiscard]] SymbolGrid block_indicator(const std::vector<int>& r_list, int l, std::vector<double> grid);

/// The n+1 summands of f^[n]: entry k < n is the off-diagonal piece
///   (f^[n-1](.., omit t_k, ..) - f^[n-1](.., omit t_{k+1}, ..)) G(t_{k+1} - t_k) prod_{m<k} rho_R(t_{m+1} - t_m)
/// and entry n is f^[n] prod_m rho_R(t_{m+1} - t_m). They sum to f^[n].
[[nodiscard]] std::vector<SymbolGrid> split_symbol(const ScalarFn& f, int n, double R, std::vector<double> grid);

/// t -> sum_k alpha_k phi(lambda t - k), k = first_index, first_index + 1, ...
[[nodiscard]] ScalarFn phi_alpha_lambda(const ScalarFn& phi, std::vector<complex> alpha, int first_index,
                                        double lambda);

struct EstimateOptions {
    int restarts = 16;
    int max_iters = 200;
    double step = 0.5;
    double tol = 1e-7;
    std::uint64_t seed = 0;
};

struct NormEstimate {
    double value = 0.0;
    std::vector<KernelMatrix> witnesses;
    int iterations = 0;
    std::uint64_t seed = 0;
    bool converged = false;
    bool degenerate = false;
    // Best certified value after each outer iteration (all restarts in order).
    std::vector<double> history;
};

/// Certified lower bound for the norm of T_psi : S_{p_1} x ... x S_{p_n} -> S_p.
/// value = ||T_psi(w)||_p / prod ||w_i||_{p_i} for the returned witnesses,
/// which are normalized to ||w_i||_{p_i} = 1.
[[nodiscard]] NormEstimate estimate_norm(const SymbolGrid& psi, const ExponentTuple& exps,
                                         const EstimateOptions& opts = {});

/// Recomputes the ratio from witnesses alone.
[[nodiscard]] double witness_ratio(const SymbolGrid& psi, const ExponentTuple& exps,
                                   const std::vector<KernelMatrix>& witnesses);

}  // namespace schurlab

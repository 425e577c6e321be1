#pragma once

// Fourier series on the torus, monomial divided-difference expansions, the
// unitary-twisted multiple operator integral, and Cayley transfer between the
// real line and the circle.

#include <map>
#include <span>
#include <vector>

#include "schurlab/funcs.hpp"
#include "schurlab/schatten.hpp"

namespace schurlab {

using Multi = std::vector<int>;

/// Finitely supported coefficients indexed by (arity + 1)-tuples of
/// integers. Arity 0 is an ordinary one-variable series.
class FourierSeries {
public:
    explicit FourierSeries(int arity);

    [[nodiscard]] int arity() const noexcept { return arity_; }
    [[nodiscard]] const std::map<Multi, complex>& coeffs() const noexcept { return coeffs_; }
    [[nodiscard]] std::size_t size() const noexcept { return coeffs_.size(); }
    [[nodiscard]] bool empty() const noexcept { return coeffs_.empty(); }
    /// Smallest K with support in [-K, K]^{arity+1}.
    [[nodiscard]] int truncation() const noexcept;

    /// Adds c to the coefficient at k; entries that cancel to exactly 0 are dropped.
    void add(const Multi& k, complex c);
    [[nodiscard]] complex at(const Multi& k) const;

    /// sum_k c_k z_0^{k_0} ... z_n^{k_n}
    [[nodiscard]] complex eval(std::span<const complex> z) const;
    /// (sum |c_k|^p)^{1/p}; p = kInf gives max |c_k|.
    [[nodiscard]] double lp_norm(double p) const;

private:
    int arity_;
    std::map<Multi, complex> coeffs_;
};

/// diag(exp(i theta_0), ..., exp(i theta_{N-1}))
struct DiagonalUnitary {
    std::vector<double> phases;

    [[nodiscard]] std::size_t size() const noexcept { return phases.size(); }
    /// Diagonal of U^k.
    [[nodiscard]] Eigen::VectorXcd power(int k) const;
    [[nodiscard]] Matrix matrix() const;
};

/// sum over k of c_k U^{k_0} x_1 U^{k_1} ... x_n U^{k_n}. Throws
/// DimensionMismatch unless every x_i is N x N with N = U.size() and
/// xs.size() == series.arity().
[[nodiscard]] Matrix moi_apply(const FourierSeries& series, const DiagonalUnitary& u, const std::vector<Matrix>& xs);

/// Coefficients of (z^k)^[n](z_0, ..., z_n):
///   k >= n      unit coefficients on all exponent tuples summing to k - n,
///   0 <= k < n  none,
///   k < 0       (-1)^n on (-a_0 - 1, ..., -a_n - 1) with sum a = |k| - 1.
[[nodiscard]] FourierSeries monomial_divdiff_coeffs(int k, int n);

/// Expansion of phi^[n] from the coefficients of phi (arity 0).
[[nodiscard]] FourierSeries divdiff_fourier(const FourierSeries& phi_hat, int n);

/// Divided difference over complex nodes from a value/derivative callback.
[[nodiscard]] complex divdiff_complex(const std::function<complex(complex, int)>& f, std::span<const complex> nodes,
                                      int max_order = kUnlimitedOrder, double tol = 1e-12);

/// (lambda + i)/(lambda - i): real line onto the circle minus {1}.
[[nodiscard]] complex cayley(double lambda);
/// i (z + 1)/(z - 1), inverse of cayley. Throws PoleAtOne near z = 1.
[[nodiscard]] double cayley_inv(complex z);

/// U with phases arg(cayley(lambda_i)).
[[nodiscard]] DiagonalUnitary cayley_unitary(std::span<const double> lambdas);

struct CayleyCheck {
    complex lhs;
    // Transfer sum with weight (i/2)^n on every term.
    complex rhs;
    // Same sum with weight (-1)^{k+1} i^{n-k+1} / 2^{n-k+1} on the k-th group;
    // it agrees with rhs only for n = 1 and is kept for reporting.
    complex rhs_alt;
};

/// lhs = phi^[n](lambda_0..lambda_n) and the transfer sum over chains
/// 0 = i_0 < ... < i_k = n of psi^[k](z_{i_0}..z_{i_k}) prod_{interior j}(z_{i_j} - 1)^2
/// prod_{other l}(z_l - 1), with psi = phi o cayley_inv and z = cayley(lambda).
/// Throws NodeCoincidence unless the nodes are distinct.
[[nodiscard]] CayleyCheck cayley_transfer_check(const ScalarFn& phi, std::span<const double> lambdas);

}  // namespace schurlab

#pragma once

// Schatten p-(quasi)norms, Hoelder combinations and block pinching on finite
// kernel matrices.

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schurlab/funcs.hpp"

namespace schurlab {

using Matrix = Eigen::MatrixXcd;

/// Finite section of an S_2 kernel: an N x N complex matrix whose rows and
/// columns are labelled by a strictly increasing grid.
class KernelMatrix {
public:
    KernelMatrix(Matrix entries, std::vector<double> grid);
    /// Labels 0, 1, ..., N-1.
    explicit KernelMatrix(Matrix entries);

    [[nodiscard]] const Matrix& entries() const noexcept { return entries_; }
    [[nodiscard]] const std::vector<double>& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return grid_.size(); }

private:
    Matrix entries_;
    std::vector<double> grid_;
};

[[nodiscard]] std::vector<double> index_grid(std::size_t n);

struct Svd {
    Matrix u;
    Eigen::VectorXd sigma;  // non-increasing
    Matrix v;
};

/// Thin SVD x = u diag(sigma) v^*. Throws NumericalFailure on non-finite input
/// or output.
[[nodiscard]] Svd svd(const Matrix& x);

/// Non-increasing singular values.
[[nodiscard]] std::vector<double> singular_values(const Matrix& x);
[[nodiscard]] std::vector<double> singular_values(const KernelMatrix& x);

/// (sum sigma_i^p)^{1/p}; p = kInf gives sigma_1.
[[nodiscard]] double schatten_norm(const Matrix& x, double p);
[[nodiscard]] double schatten_norm(const KernelMatrix& x, double p);
/// Same from precomputed singular values.
[[nodiscard]] double schatten_norm_from_sigma(std::span<const double> sigma, double p);
[[nodiscard]] double schatten_norm_from_sigma(const Eigen::VectorXd& sigma, double p);

/// (sum p_i^{-1})^{-1}. Entries may be kInf.
[[nodiscard]] double holder_combine(std::span<const double> p_list);
[[nodiscard]] inline double holder_combine(std::initializer_list<double> p_list) {
    return holder_combine(std::span<const double>(p_list.begin(), p_list.size()));
}

/// p/(1-p) for 0 < p < 1, kInf at p = 1, nullopt for p > 1.
[[nodiscard]] std::optional<double> sharp_exponent(double p);

/// Exponents (p_1, ..., p_n) together with their Hoelder combination and the
/// regime flags used to gate downstream operations.
class ExponentTuple {
public:
    explicit ExponentTuple(std::vector<double> p_list);
    ExponentTuple(std::initializer_list<double> p_list) : ExponentTuple(std::vector<double>(p_list)) {}

    [[nodiscard]] const std::vector<double>& p_list() const noexcept { return p_list_; }
    [[nodiscard]] std::size_t size() const noexcept { return p_list_.size(); }
    [[nodiscard]] double operator[](std::size_t i) const { return p_list_.at(i); }
    [[nodiscard]] double p() const noexcept { return p_; }
    [[nodiscard]] std::optional<double> p_sharp() const noexcept { return sharp_exponent(p_); }

    /// All p_i in [1, inf), 0 < p <= 1, and for n >= 2 both (p_2;...;p_n) and
    /// (p_1;...;p_{n-1}) lie in [1, inf). For n = 1 this means p = p_1 = 1.
    [[nodiscard]] bool in_main_regime() const noexcept { return main_regime_; }
    /// "main", "banach" (p >= 1 outside the main regime) or "quasi-banach".
    [[nodiscard]] std::string regime() const;

private:
    std::vector<double> p_list_;
    double p_;
    bool main_regime_;
};

/// Disjoint half-open index ranges [begin, end).
class BlockPartition {
public:
    struct Range {
        std::size_t begin = 0;
        std::size_t end = 0;
    };

    explicit BlockPartition(std::vector<Range> blocks);
    /// Consecutive blocks of the given widths starting at 0.
    [[nodiscard]] static BlockPartition uniform(std::size_t n, std::size_t width);

    [[nodiscard]] const std::vector<Range>& blocks() const noexcept { return blocks_; }

private:
    std::vector<Range> blocks_;
};

/// Keeps the entries inside each block x same-block square and zeroes the
/// rest. Throws IndexOutOfRange if a block leaves 0..N-1.
[[nodiscard]] Matrix block_expectation(const Matrix& x, const BlockPartition& partition);
[[nodiscard]] KernelMatrix block_expectation(const KernelMatrix& x, const BlockPartition& partition);

}  // namespace schurlab

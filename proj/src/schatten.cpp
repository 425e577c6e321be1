#include "schurlab/schatten.hpp"

#include <algorithm>
#include <cmath>

#include "schurlab/errors.hpp"

namespace schurlab {

KernelMatrix::KernelMatrix(Matrix entries, std::vector<double> grid)
    : entries_(std::move(entries)), grid_(std::move(grid)) {
    if (entries_.rows() != entries_.cols()) throw DimensionMismatch("KernelMatrix must be square");
    if (static_cast<std::size_t>(entries_.rows()) != grid_.size())
        throw DimensionMismatch("KernelMatrix grid length must equal N");
    for (std::size_t i = 1; i < grid_.size(); ++i)
        if (!(grid_[i] > grid_[i - 1])) throw InvalidArgument("KernelMatrix grid must be strictly increasing");
    if (!entries_.allFinite()) throw InvalidArgument("KernelMatrix entries must be finite");
}

KernelMatrix::KernelMatrix(Matrix entries)
    : KernelMatrix(entries, index_grid(static_cast<std::size_t>(entries.rows()))) {}

std::vector<double> index_grid(std::size_t n) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = static_cast<double>(i);
    return g;
}

// Eigen 3.4.0 BDCSVD occasionally returns NaN on finite input (seen on
// optimizer iterates at N = 64). Jacobi is slower but does not.
Svd svd(const Matrix& x) {
    if (!x.allFinite()) throw NumericalFailure("SVD of a matrix with non-finite entries");
    Eigen::BDCSVD<Matrix> dec(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (dec.info() == Eigen::Success && dec.singularValues().allFinite() && dec.matrixU().allFinite() &&
        dec.matrixV().allFinite())
        return {dec.matrixU(), dec.singularValues(), dec.matrixV()};
    Eigen::JacobiSVD<Matrix> jac(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    if (jac.info() != Eigen::Success) throw NumericalFailure("SVD did not converge");
    Svd out{jac.matrixU(), jac.singularValues(), jac.matrixV()};
    if (!out.sigma.allFinite()) throw NumericalFailure("SVD produced non-finite singular values");
    return out;
}

std::vector<double> singular_values(const Matrix& x) {
    if (x.size() == 0) return {};
    if (!x.allFinite()) throw NumericalFailure("singular values of a matrix with non-finite entries");
    Eigen::VectorXd s;
    Eigen::BDCSVD<Matrix> dec(x);
    if (dec.info() == Eigen::Success && dec.singularValues().allFinite()) {
        s = dec.singularValues();
    } else {
        Eigen::JacobiSVD<Matrix> jac(x);
        if (jac.info() != Eigen::Success || !jac.singularValues().allFinite())
            throw NumericalFailure("SVD did not converge");
        s = jac.singularValues();
    }
    std::vector<double> out(s.data(), s.data() + s.size());
    out.resize(static_cast<std::size_t>(std::max(x.rows(), x.cols())), 0.0);
    return out;
}

std::vector<double> singular_values(const KernelMatrix& x) { return singular_values(x.entries()); }

double schatten_norm_from_sigma(std::span<const double> sigma, double p) {
    if (!(p > 0.0)) throw InvalidArgument("Schatten exponent must be > 0");
    if (std::isinf(p)) return sigma.empty() ? 0.0 : *std::max_element(sigma.begin(), sigma.end());
    // Scale by sigma_max so that sigma^p neither overflows nor underflows.
    double smax = 0.0;
    for (double s : sigma) smax = std::max(smax, s);
    if (smax == 0.0) return 0.0;
    double acc = 0.0;
    for (double s : sigma) acc += std::pow(s / smax, p);
    return smax * std::pow(acc, 1.0 / p);
}

double schatten_norm_from_sigma(const Eigen::VectorXd& sigma, double p) {
    return schatten_norm_from_sigma(std::span<const double>(sigma.data(), static_cast<std::size_t>(sigma.size())), p);
}

double schatten_norm(const Matrix& x, double p) {
    if (!(p > 0.0)) throw InvalidArgument("Schatten exponent must be > 0");
    if (p == 2.0) return x.norm();
    const auto s = singular_values(x);
    return schatten_norm_from_sigma(s, p);
}

double schatten_norm(const KernelMatrix& x, double p) { return schatten_norm(x.entries(), p); }

double holder_combine(std::span<const double> p_list) {
    if (p_list.empty()) throw InvalidArgument("holder_combine needs at least one exponent");
    double inv = 0.0;
    for (double p : p_list) {
        if (!(p > 0.0)) throw InvalidArgument("Hoelder exponents must be > 0");
        inv += 1.0 / p;
    }
    return inv == 0.0 ? kInf : 1.0 / inv;
}

std::optional<double> sharp_exponent(double p) {
    if (!(p > 0.0)) throw InvalidArgument("sharp exponent needs p > 0");
    if (p > 1.0) return std::nullopt;
    if (p == 1.0) return kInf;
    return p / (1.0 - p);
}

ExponentTuple::ExponentTuple(std::vector<double> p_list) : p_list_(std::move(p_list)) {
    if (p_list_.empty()) throw InvalidArgument("ExponentTuple needs at least one exponent");
    p_ = holder_combine(p_list_);
    const std::size_t n = p_list_.size();
    bool ok = p_ > 0.0 && p_ <= 1.0;
    for (double q : p_list_) ok = ok && q >= 1.0 && std::isfinite(q);
    if (ok && n >= 2) {
        const double tail = holder_combine(std::span<const double>(p_list_).subspan(1));
        const double head = holder_combine(std::span<const double>(p_list_).first(n - 1));
        ok = tail >= 1.0 && std::isfinite(tail) && head >= 1.0 && std::isfinite(head);
    }
    main_regime_ = ok;
}

std::string ExponentTuple::regime() const {
    if (main_regime_) return "main";
    return p_ >= 1.0 ? "banach" : "quasi-banach";
}

BlockPartition::BlockPartition(std::vector<Range> blocks) : blocks_(std::move(blocks)) {
    std::vector<Range> sorted = blocks_;
    std::sort(sorted.begin(), sorted.end(), [](const Range& a, const Range& b) { return a.begin < b.begin; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i].end < sorted[i].begin) throw InvalidArgument("block range with end < begin");
        if (i > 0 && sorted[i].begin < sorted[i - 1].end) throw InvalidArgument("blocks must be disjoint");
    }
}

BlockPartition BlockPartition::uniform(std::size_t n, std::size_t width) {
    if (width == 0) throw InvalidArgument("block width must be > 0");
    std::vector<Range> blocks;
    for (std::size_t b = 0; b < n; b += width) blocks.push_back({b, std::min(n, b + width)});
    return BlockPartition(std::move(blocks));
}

Matrix block_expectation(const Matrix& x, const BlockPartition& partition) {
    const auto n = static_cast<std::size_t>(x.rows());
    Matrix out = Matrix::Zero(x.rows(), x.cols());
    for (const auto& r : partition.blocks()) {
        if (r.end > n) throw IndexOutOfRange("block [" + std::to_string(r.begin) + ", " +
                                             std::to_string(r.end) + ") exceeds N = " + std::to_string(n));
        const auto b = static_cast<Eigen::Index>(r.begin);
        const auto w = static_cast<Eigen::Index>(r.end - r.begin);
        out.block(b, b, w, w) = x.block(b, b, w, w);
    }
    return out;
}

KernelMatrix block_expectation(const KernelMatrix& x, const BlockPartition& partition) {
    return KernelMatrix(block_expectation(x.entries(), partition), x.grid());
}

}  // namespace schurlab

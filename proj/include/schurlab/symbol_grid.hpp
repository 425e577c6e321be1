#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

namespace schurlab {

using complex = std::complex<double>;

enum class SymbolStructure { dense, toeplitz_diff, product };

[[nodiscard]] std::string_view to_string(SymbolStructure s) noexcept;

/// A symbol psi(t_0, ..., t_n) sampled on grid^{n+1}.
///
/// Values are either produced on demand by `eval` or stored densely in
/// row-major order (last index fastest). Both forms are immutable.
class SymbolGrid {
public:
    using Index = std::span<const std::size_t>;
    using Eval = std::function<complex(Index)>;

    // Dense materialization is refused above this many entries.
    static constexpr std::size_t kMaxDenseEntries = std::size_t{1} << 24;

    SymbolGrid(int arity, std::vector<double> grid, Eval eval,
               SymbolStructure structure = SymbolStructure::dense);

    [[nodiscard]] static SymbolGrid from_values(int arity, std::vector<double> grid,
                                                std::vector<complex> values,
                                                SymbolStructure structure = SymbolStructure::dense);

    [[nodiscard]] int arity() const noexcept { return arity_; }
    [[nodiscard]] std::size_t points() const noexcept { return grid_->size(); }
    [[nodiscard]] const std::vector<double>& grid() const noexcept { return *grid_; }
    [[nodiscard]] SymbolStructure structure() const noexcept { return structure_; }
    /// N^{n+1}
    [[nodiscard]] std::size_t tensor_size() const noexcept;

    [[nodiscard]] complex operator()(Index idx) const;
    [[nodiscard]] complex at(std::initializer_list<std::size_t> idx) const {
        return (*this)(Index(idx.begin(), idx.size()));
    }

    [[nodiscard]] bool is_materialized() const noexcept { return values_ != nullptr; }
    /// Dense values; nullptr unless materialized.
    [[nodiscard]] const std::vector<complex>* values() const noexcept { return values_.get(); }

    /// Dense copy of this symbol. Throws InvalidArgument above kMaxDenseEntries.
    [[nodiscard]] SymbolGrid materialize() const;

    /// max |psi| over the grid tensor.
    [[nodiscard]] double sup_abs() const;

    /// Visits every multi-index in row-major order.
    void for_each(const std::function<void(Index, complex)>& visit) const;

private:
    int arity_;
    std::shared_ptr<const std::vector<double>> grid_;
    Eval eval_;
    std::shared_ptr<const std::vector<complex>> values_;
    SymbolStructure structure_;
};

/// Pointwise product; grids and arities must agree.
[[nodiscard]] SymbolGrid operator*(const SymbolGrid& a, const SymbolGrid& b);
/// Pointwise sum.
[[nodiscard]] SymbolGrid operator+(const SymbolGrid& a, const SymbolGrid& b);
[[nodiscard]] SymbolGrid operator*(complex c, const SymbolGrid& a);

}  // namespace schurlab

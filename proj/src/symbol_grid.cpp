#include "schurlab/symbol_grid.hpp"

#include <cmath>
#include <string>

#include "schurlab/errors.hpp"

namespace schurlab {

std::string_view to_string(SymbolStructure s) noexcept {
    switch (s) {
        case SymbolStructure::dense: return "dense";
        case SymbolStructure::toeplitz_diff: return "toeplitz_diff";
        case SymbolStructure::product: return "product";
    }
    return "dense";
}

SymbolGrid::SymbolGrid(int arity, std::vector<double> grid, Eval eval, SymbolStructure structure)
    : arity_(arity),
      grid_(std::make_shared<const std::vector<double>>(std::move(grid))),
      eval_(std::move(eval)),
      structure_(structure) {
    if (arity_ < 0) throw InvalidArgument("SymbolGrid arity must be >= 0");
    if (grid_->empty()) throw InvalidArgument("SymbolGrid grid must be nonempty");
    if (!eval_) throw InvalidArgument("SymbolGrid needs an evaluator");
}

SymbolGrid SymbolGrid::from_values(int arity, std::vector<double> grid, std::vector<complex> values,
                                   SymbolStructure structure) {
    auto shared = std::make_shared<const std::vector<complex>>(std::move(values));
    const std::size_t n = grid.size();
    auto eval = [shared, n](Index idx) {
        std::size_t flat = 0;
        for (std::size_t i : idx) flat = flat * n + i;
        return (*shared)[flat];
    };
    SymbolGrid s(arity, std::move(grid), std::move(eval), structure);
    if (shared->size() != s.tensor_size())
        throw DimensionMismatch("SymbolGrid::from_values: expected " + std::to_string(s.tensor_size()) +
                                " values, got " + std::to_string(shared->size()));
    s.values_ = std::move(shared);
    return s;
}

std::size_t SymbolGrid::tensor_size() const noexcept {
    std::size_t total = 1;
    for (int i = 0; i <= arity_; ++i) total *= grid_->size();
    return total;
}

complex SymbolGrid::operator()(Index idx) const {
    if (idx.size() != static_cast<std::size_t>(arity_) + 1)
        throw ArityMismatch("symbol of arity " + std::to_string(arity_) + " indexed with " +
                            std::to_string(idx.size()) + " indices");
    if (values_) {
        std::size_t flat = 0;
        for (std::size_t i : idx) {
            if (i >= grid_->size()) throw IndexOutOfRange("symbol index out of range");
            flat = flat * grid_->size() + i;
        }
        return (*values_)[flat];
    }
    for (std::size_t i : idx)
        if (i >= grid_->size()) throw IndexOutOfRange("symbol index out of range");
    return eval_(idx);
}

void SymbolGrid::for_each(const std::function<void(Index, complex)>& visit) const {
    const std::size_t n = grid_->size();
    const std::size_t slots = static_cast<std::size_t>(arity_) + 1;
    std::vector<std::size_t> idx(slots, 0);
    const std::size_t total = tensor_size();
    for (std::size_t flat = 0; flat < total; ++flat) {
        const complex v = values_ ? (*values_)[flat] : eval_(Index(idx));
        visit(Index(idx), v);
        for (std::size_t s = slots; s-- > 0;) {
            if (++idx[s] < n) break;
            idx[s] = 0;
        }
    }
}

SymbolGrid SymbolGrid::materialize() const {
    if (values_) return *this;
    const std::size_t total = tensor_size();
    if (total > kMaxDenseEntries)
        throw InvalidArgument("SymbolGrid: " + std::to_string(total) + " entries exceed the dense limit");
    std::vector<complex> values;
    values.reserve(total);
    for_each([&](Index, complex v) { values.push_back(v); });
    return from_values(arity_, *grid_, std::move(values), structure_);
}

double SymbolGrid::sup_abs() const {
    double best = 0.0;
    if (values_) {
        for (const complex& v : *values_) best = std::max(best, std::abs(v));
        return best;
    }
    for_each([&](Index, complex v) { best = std::max(best, std::abs(v)); });
    return best;
}

namespace {

void check_compatible(const SymbolGrid& a, const SymbolGrid& b) {
    if (a.arity() != b.arity()) throw ArityMismatch("symbol arities differ");
    if (a.grid() != b.grid()) throw GridMismatch("symbol grids differ");
}

}  // namespace

SymbolGrid operator*(const SymbolGrid& a, const SymbolGrid& b) {
    check_compatible(a, b);
    return SymbolGrid(a.arity(), a.grid(), [a, b](SymbolGrid::Index idx) { return a(idx) * b(idx); },
                      SymbolStructure::product);
}

SymbolGrid operator+(const SymbolGrid& a, const SymbolGrid& b) {
    check_compatible(a, b);
    return SymbolGrid(a.arity(), a.grid(), [a, b](SymbolGrid::Index idx) { return a(idx) + b(idx); });
}

SymbolGrid operator*(complex c, const SymbolGrid& a) {
    return SymbolGrid(a.arity(), a.grid(), [a, c](SymbolGrid::Index idx) { return c * a(idx); },
                      a.structure());
}

}  // namespace schurlab

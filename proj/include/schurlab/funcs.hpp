#pragma once

// Scalar functions carrying analytic derivatives, confluent divided
// differences, and stars-and-bars composition enumeration.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "schurlab/errors.hpp"

namespace schurlab {

using complex = std::complex<double>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class SymbolGrid;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    [[nodiscard]] bool contains(double t) const noexcept { return t >= lo && t <= hi; }
    [[nodiscard]] double width() const noexcept { return hi - lo; }
};

// Order used for functions whose every derivative is available (polynomials,
// trigonometric and exponential families).
inline constexpr int kUnlimitedOrder = 1 << 20;

/// A real-variable function bundled with its derivatives up to `order()`.
///
/// `eval(t, d)` returns the d-th derivative at t. When a support hint is
/// present every derivative vanishes outside it.
class ScalarFn {
public:
    using Eval = std::function<complex(double t, int d)>;

    ScalarFn(int order, Eval eval, std::optional<Interval> support_hint = std::nullopt);

    [[nodiscard]] int order() const noexcept { return order_; }
    [[nodiscard]] const std::optional<Interval>& support_hint() const noexcept { return support_; }

    /// d-th derivative at t; throws InsufficientDerivatives when d > order().
    [[nodiscard]] complex eval(double t, int d = 0) const;
    [[nodiscard]] complex operator()(double t) const { return eval(t, 0); }

    /// Real part of eval(t, d). Most of the corpus is real valued.
    [[nodiscard]] double real(double t, int d = 0) const { return eval(t, d).real(); }

private:
    int order_;
    Eval eval_;
    std::optional<Interval> support_;
};

/// Nodes (t_0, ..., t_k) of a divided difference. Two nodes coincide iff
/// |t_i - t_j| <= coincidence_tol (grouped transitively).
struct NodeList {
    std::vector<double> nodes;
    double coincidence_tol = 1e-12;

    NodeList() = default;
    explicit NodeList(std::vector<double> ts, double tol = 1e-12);
    NodeList(std::initializer_list<double> ts) : NodeList(std::vector<double>(ts)) {}

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
    /// Largest number of mutually coincident nodes.
    [[nodiscard]] int max_multiplicity() const;
};

struct Composition {
    std::vector<int> parts;
    int total = 0;

    friend bool operator==(const Composition&, const Composition&) = default;
};

/// f^[k](t_0, ..., t_k) from a confluent Newton table. Coincident nodes
/// consume derivatives f^(m)/m!. Symmetric in the nodes.
[[nodiscard]] complex divdiff_eval(const ScalarFn& f, const NodeList& nodes, int k);
[[nodiscard]] complex divdiff_eval(const ScalarFn& f, std::span<const double> nodes, int k);

/// Tabulates f^[k] on grid^{k+1}. The result is lazy; call materialize() on
/// it for a dense tensor.
[[nodiscard]] SymbolGrid divdiff_grid(const ScalarFn& f, std::vector<double> grid, int k);

/// All (slots)-tuples of nonnegative integers summing to `total`, in
/// descending lexicographic order: (total,0,...,0) first, (0,...,0,total) last.
[[nodiscard]] std::vector<Composition> enumerate_compositions(int slots, int total);

[[nodiscard]] double binomial(int n, int k);

namespace detail {

// Partitions node indices into coincidence groups (transitive closure of
// |a-b| <= tol) and returns an ordering that keeps each group contiguous,
// plus the group id of every position in that ordering.
template <class Node>
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> group_nodes(std::span<const Node> nodes,
                                                                          double tol) {
    const std::size_t m = nodes.size();
    std::vector<std::size_t> parent(m);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (std::abs(nodes[i] - nodes[j]) <= tol) parent[find(i)] = find(j);

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return find(a) < find(b); });
    std::vector<std::size_t> group(m);
    for (std::size_t i = 0; i < m; ++i) group[i] = find(order[i]);
    return {order, group};
}

}  // namespace detail

/// Confluent divided difference over an arbitrary node field (real or
/// complex). `value(node, d)` must return the d-th derivative; it is only
/// queried with d > 0 when nodes coincide. `max_order` bounds d.
template <class Node, class ValueFn>
complex confluent_divdiff(std::span<const Node> nodes, double tol, int max_order, ValueFn&& value) {
    const std::size_t m = nodes.size();
    if (m == 0) throw OrderMismatch("divided difference needs at least one node");
    auto [order, group] = detail::group_nodes(nodes, tol);

    // Column-by-column Newton table; table[i] holds f[z_i, ..., z_{i+c}].
    std::vector<complex> table(m);
    std::vector<double> factorial(m, 1.0);
    for (std::size_t d = 1; d < m; ++d) factorial[d] = factorial[d - 1] * static_cast<double>(d);

    for (std::size_t i = 0; i < m; ++i) table[i] = value(nodes[order[i]], 0);
    for (std::size_t c = 1; c < m; ++c) {
        for (std::size_t i = 0; i + c < m; ++i) {
            const Node& a = nodes[order[i]];
            const Node& b = nodes[order[i + c]];
            if (group[i] == group[i + c]) {
                if (static_cast<int>(c) > max_order)
                    throw InsufficientDerivatives("node repeated " + std::to_string(c + 1) +
                                                  " times needs derivative order " + std::to_string(c));
                table[i] = value(a, static_cast<int>(c)) / factorial[c];
            } else {
                table[i] = (table[i + 1] - table[i]) / complex(b - a);
            }
        }
    }
    return table[0];
}

// ---------------------------------------------------------------------------
// Function corpus
// ---------------------------------------------------------------------------
namespace fn {

[[nodiscard]] ScalarFn zero();
[[nodiscard]] ScalarFn constant(complex c);
/// sum_i coeffs[i] t^i
[[nodiscard]] ScalarFn polynomial(std::vector<double> coeffs);
[[nodiscard]] ScalarFn monomial(int m);
/// amplitude * sin(freq * t + phase)
[[nodiscard]] ScalarFn sine(double freq = 1.0, double phase = 0.0, double amplitude = 1.0);
/// exp(-t^2 / (2 sigma^2))
[[nodiscard]] ScalarFn gaussian(double sigma = 1.0);
/// exp(-1/(1-u^2)) with u = (t - center)/radius; C-infinity, supported on
/// [center - radius, center + radius].
[[nodiscard]] ScalarFn smooth_bump(double center = 0.0, double radius = 1.0);
/// (1 - u^2)^power with u = (t - center)/radius, zero for |u| >= 1. It is
/// C^{power-1}; order() reports power-1.
[[nodiscard]] ScalarFn poly_bump(double center = 0.0, double radius = 1.0, int power = 5);

/// t -> f(scale * t)
[[nodiscard]] ScalarFn dilate(ScalarFn f, double scale);
/// t -> f(t - shift)
[[nodiscard]] ScalarFn translate(ScalarFn f, double shift);
/// t -> a f(t) + b g(t)
[[nodiscard]] ScalarFn combine(complex a, ScalarFn f, complex b, ScalarFn g);

}  // namespace fn
}  // namespace schurlab

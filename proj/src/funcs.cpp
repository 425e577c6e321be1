#include "schurlab/funcs.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "schurlab/symbol_grid.hpp"

namespace schurlab {

ScalarFn::ScalarFn(int order, Eval eval, std::optional<Interval> support_hint)
    : order_(order), eval_(std::move(eval)), support_(support_hint) {
    if (order_ < 0) throw InvalidArgument("ScalarFn order must be >= 0");
    if (!eval_) throw InvalidArgument("ScalarFn needs an evaluator");
    if (support_ && !(support_->lo <= support_->hi))
        throw InvalidArgument("ScalarFn support hint must satisfy lo <= hi");
}

complex ScalarFn::eval(double t, int d) const {
    if (d < 0 || d > order_)
        throw InsufficientDerivatives("derivative " + std::to_string(d) + " requested, order is " +
                                      std::to_string(order_));
    if (support_ && !support_->contains(t)) return {0.0, 0.0};
    return eval_(t, d);
}

NodeList::NodeList(std::vector<double> ts, double tol) : nodes(std::move(ts)), coincidence_tol(tol) {
    if (nodes.empty()) throw InvalidArgument("NodeList needs at least one node");
    if (!(coincidence_tol >= 0.0)) throw InvalidArgument("coincidence_tol must be >= 0");
}

int NodeList::max_multiplicity() const {
    auto [order, group] = detail::group_nodes(std::span<const double>(nodes), coincidence_tol);
    int best = 0;
    std::size_t i = 0;
    while (i < group.size()) {
        std::size_t j = i;
        while (j < group.size() && group[j] == group[i]) ++j;
        best = std::max(best, static_cast<int>(j - i));
        i = j;
    }
    return best;
}

complex divdiff_eval(const ScalarFn& f, const NodeList& nodes, int k) {
    if (k < 0 || nodes.size() != static_cast<std::size_t>(k) + 1)
        throw OrderMismatch("order " + std::to_string(k) + " needs " + std::to_string(k + 1) +
                            " nodes, got " + std::to_string(nodes.size()));
    return confluent_divdiff(std::span<const double>(nodes.nodes), nodes.coincidence_tol, f.order(),
                             [&f](double t, int d) { return f.eval(t, d); });
}

complex divdiff_eval(const ScalarFn& f, std::span<const double> nodes, int k) {
    if (k < 0 || nodes.size() != static_cast<std::size_t>(k) + 1)
        throw OrderMismatch("order " + std::to_string(k) + " needs " + std::to_string(k + 1) +
                            " nodes, got " + std::to_string(nodes.size()));
    return confluent_divdiff(nodes, 1e-12, f.order(), [&f](double t, int d) { return f.eval(t, d); });
}

SymbolGrid divdiff_grid(const ScalarFn& f, std::vector<double> grid, int k) {
    if (k < 0) throw OrderMismatch("divided difference order must be >= 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument("divdiff_grid: grid must be strictly increasing");
    auto shared = std::make_shared<const std::vector<double>>(grid);
    auto eval = [f, shared, k](SymbolGrid::Index idx) {
        std::vector<double> nodes(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) nodes[i] = (*shared)[idx[i]];
        return divdiff_eval(f, std::span<const double>(nodes), k);
    };
    return SymbolGrid(k, std::move(grid), std::move(eval));
}

namespace {

void compositions_rec(int slot, int slots, int remaining, std::vector<int>& parts,
                      std::vector<Composition>& out, int total) {
    if (slot == slots - 1) {
        parts[slot] = remaining;
        out.push_back({parts, total});
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        parts[slot] = v;
        compositions_rec(slot + 1, slots, remaining - v, parts, out, total);
    }
}

}  // namespace

std::vector<Composition> enumerate_compositions(int slots, int total) {
    if (slots < 1) throw InvalidArgument("enumerate_compositions: slots must be >= 1");
    if (total < 0) throw InvalidArgument("enumerate_compositions: total must be >= 0");
    std::vector<Composition> out;
    std::vector<int> parts(static_cast<std::size_t>(slots), 0);
    compositions_rec(0, slots, total, parts, out, total);
    return out;
}

double binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    return std::round(r);
}

// ---------------------------------------------------------------------------

namespace fn {

ScalarFn zero() {
    return ScalarFn(kUnlimitedOrder, [](double, int) { return complex{}; });
}

ScalarFn constant(complex c) {
    return ScalarFn(kUnlimitedOrder, [c](double, int d) { return d == 0 ? c : complex{}; });
}

ScalarFn polynomial(std::vector<double> coeffs) {
    return ScalarFn(kUnlimitedOrder, [coeffs = std::move(coeffs)](double t, int d) {
        const int deg = static_cast<int>(coeffs.size()) - 1;
        if (d > deg) return complex{};
        double acc = 0.0;
        for (int i = deg; i >= d; --i) {
            double c = coeffs[static_cast<std::size_t>(i)];
            for (int j = 0; j < d; ++j) c *= static_cast<double>(i - j);
            acc = acc * t + c;
        }
        return complex(acc, 0.0);
    });
}

ScalarFn monomial(int m) {
    if (m < 0) throw InvalidArgument("monomial degree must be >= 0");
    std::vector<double> c(static_cast<std::size_t>(m) + 1, 0.0);
    c.back() = 1.0;
    return polynomial(std::move(c));
}

ScalarFn sine(double freq, double phase, double amplitude) {
    return ScalarFn(kUnlimitedOrder, [=](double t, int d) {
        const double shift = static_cast<double>(d % 4) * std::numbers::pi / 2.0;
        return complex(amplitude * std::pow(freq, d) * std::sin(freq * t + phase + shift), 0.0);
    });
}

ScalarFn gaussian(double sigma) {
    if (!(sigma > 0.0)) throw InvalidArgument("gaussian sigma must be > 0");
    return ScalarFn(kUnlimitedOrder, [sigma](double t, int d) {
        const double x = t / sigma;
        // d^n/dx^n exp(-x^2/2) = (-1)^n He_n(x) exp(-x^2/2)
        double he_prev = 1.0, he = x;
        double hen = d == 0 ? 1.0 : x;
        for (int n = 1; n < d; ++n) {
            const double next = x * he - static_cast<double>(n) * he_prev;
            he_prev = he;
            he = next;
            hen = he;
        }
        const double sign = (d % 2 == 0) ? 1.0 : -1.0;
        return complex(sign * hen * std::exp(-0.5 * x * x) / std::pow(sigma, d), 0.0);
    });
}

ScalarFn smooth_bump(double center, double radius) {
    if (!(radius > 0.0)) throw InvalidArgument("smooth_bump radius must be > 0");
    auto eval = [center, radius](double t, int d) {
        const double u = (t - center) / radius;
        if (!(std::abs(u) < 1.0)) return complex{};
        const double base = std::exp(-1.0 / (1.0 - u * u));
        if (base == 0.0) return complex{};
        // f = exp(g), g = -(1/2) [1/(1-u) + 1/(1+u)]; f^(m+1) = sum_j C(m,j) g^(j+1) f^(m-j)
        std::vector<double> g(static_cast<std::size_t>(d) + 1, 0.0);
        double fact = 1.0;
        for (int j = 1; j <= d; ++j) {
            fact *= static_cast<double>(j);
            const double a = fact / std::pow(1.0 - u, j + 1);
            const double b = ((j % 2 == 0) ? 1.0 : -1.0) * fact / std::pow(1.0 + u, j + 1);
            g[static_cast<std::size_t>(j)] = -0.5 * (a + b);
        }
        std::vector<double> f(static_cast<std::size_t>(d) + 1, 0.0);
        f[0] = base;
        for (int m = 0; m < d; ++m) {
            double acc = 0.0;
            for (int j = 0; j <= m; ++j)
                acc += binomial(m, j) * g[static_cast<std::size_t>(j + 1)] * f[static_cast<std::size_t>(m - j)];
            f[static_cast<std::size_t>(m + 1)] = acc;
        }
        const double v = f[static_cast<std::size_t>(d)] / std::pow(radius, d);
        return complex(std::isfinite(v) ? v : 0.0, 0.0);
    };
    return ScalarFn(kUnlimitedOrder, eval, Interval{center - radius, center + radius});
}

ScalarFn poly_bump(double center, double radius, int power) {
    if (!(radius > 0.0)) throw InvalidArgument("poly_bump radius must be > 0");
    if (power < 1) throw InvalidArgument("poly_bump power must be >= 1");
    // (1 - u^2)^P = sum_i C(P,i) (-1)^i u^{2i}
    std::vector<double> coeffs(static_cast<std::size_t>(2 * power) + 1, 0.0);
    for (int i = 0; i <= power; ++i)
        coeffs[static_cast<std::size_t>(2 * i)] = binomial(power, i) * ((i % 2 == 0) ? 1.0 : -1.0);
    ScalarFn inner = polynomial(std::move(coeffs));
    auto eval = [inner, center, radius](double t, int d) {
        const double u = (t - center) / radius;
        if (!(std::abs(u) < 1.0)) return complex{};
        return inner.eval(u, d) / std::pow(radius, d);
    };
    return ScalarFn(power - 1, eval, Interval{center - radius, center + radius});
}

ScalarFn dilate(ScalarFn f, double scale) {
    if (scale == 0.0) throw InvalidArgument("dilate: scale must be nonzero");
    std::optional<Interval> support;
    if (f.support_hint()) {
        const double a = f.support_hint()->lo / scale, b = f.support_hint()->hi / scale;
        support = Interval{std::min(a, b), std::max(a, b)};
    }
    const int order = f.order();
    return ScalarFn(order, [f = std::move(f), scale](double t, int d) {
        return std::pow(scale, d) * f.eval(scale * t, d);
    }, support);
}

ScalarFn translate(ScalarFn f, double shift) {
    std::optional<Interval> support;
    if (f.support_hint()) support = Interval{f.support_hint()->lo + shift, f.support_hint()->hi + shift};
    const int order = f.order();
    return ScalarFn(order, [f = std::move(f), shift](double t, int d) { return f.eval(t - shift, d); },
                    support);
}

ScalarFn combine(complex a, ScalarFn f, complex b, ScalarFn g) {
    std::optional<Interval> support;
    if (f.support_hint() && g.support_hint())
        support = Interval{std::min(f.support_hint()->lo, g.support_hint()->lo),
                           std::max(f.support_hint()->hi, g.support_hint()->hi)};
    const int order = std::min(f.order(), g.order());
    return ScalarFn(order, [a, b, f = std::move(f), g = std::move(g)](double t, int d) {
        return a * f.eval(t, d) + b * g.eval(t, d);
    }, support);
}

}  // namespace fn
}  // namespace schurlab

#include "schurlab/schur.hpp"

#include <cmath>
#include <memory>

#include "schurlab/errors.hpp"

namespace schurlab {

namespace {

// Walks every prefix (i_0, ..., i_{n-1}) depth first. `visit(idx, flat, w)`
// receives the prefix, its row-major offset into the tensor (times N), and
// the product of x_m[i_m, i_{m+1}] over the prefix slots m < n-1 other than
// `skip`. Prefixes with zero weight are pruned.
template <class Visit>
void walk_prefixes(const std::vector<const Matrix*>& xs, std::size_t n_points, std::size_t skip, Visit&& visit) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> idx(n, 0);
    std::vector<complex> weight(n, complex(1.0, 0.0));
    std::vector<std::size_t> flat(n, 0);

    // depth d chooses idx[d]; weight[d] and flat[d] describe idx[0..d].
    auto rec = [&](auto&& self, std::size_t d) -> void {
        for (std::size_t i = 0; i < n_points; ++i) {
            idx[d] = i;
            if (d == 0) {
                weight[0] = 1.0;
                flat[0] = i;
            } else {
                const std::size_t slot = d - 1;
                const complex link =
                    slot == skip ? complex(1.0, 0.0)
                                 : (*xs[slot])(static_cast<Eigen::Index>(idx[d - 1]), static_cast<Eigen::Index>(i));
                if (link == complex(0.0, 0.0)) continue;
                weight[d] = weight[d - 1] * link;
                flat[d] = flat[d - 1] * n_points + i;
            }
            if (d + 1 == n)
                visit(idx, flat[d] * n_points, weight[d]);
            else
                self(self, d + 1);
        }
    };
    rec(rec, 0);
}

std::vector<const Matrix*> pointers(const std::vector<Matrix>& xs) {
    std::vector<const Matrix*> out;
    out.reserve(xs.size());
    for (const auto& x : xs) out.push_back(&x);
    return out;
}

void check_dense(const std::vector<complex>& values, const std::vector<Matrix>& xs) {
    if (xs.empty()) throw ArityMismatch("contraction needs at least one matrix");
    const auto n_points = static_cast<std::size_t>(xs[0].rows());
    std::size_t expected = 1;
    for (std::size_t i = 0; i <= xs.size(); ++i) expected *= n_points;
    if (values.size() != expected) throw DimensionMismatch("symbol tensor size does not match the matrices");
    for (const auto& x : xs)
        if (static_cast<std::size_t>(x.rows()) != n_points || static_cast<std::size_t>(x.cols()) != n_points)
            throw DimensionMismatch("all matrices must be N x N");
}

}  // namespace

Matrix schur_contract(const std::vector<complex>& values, const std::vector<Matrix>& xs) {
    check_dense(values, xs);
    const std::size_t n = xs.size();
    const auto np = static_cast<std::size_t>(xs[0].rows());
    // Column i_0 of outT is row i_0 of the result; xlastT column a is row a of x_n.
    const Matrix xlastT = xs[n - 1].transpose();
    Matrix outT = Matrix::Zero(static_cast<Eigen::Index>(np), static_cast<Eigen::Index>(np));
    walk_prefixes(pointers(xs), np, n, [&](const std::vector<std::size_t>& idx, std::size_t off, complex w) {
        const complex* psi = values.data() + off;
        const complex* xl = xlastT.col(static_cast<Eigen::Index>(idx[n - 1])).data();
        complex* o = outT.col(static_cast<Eigen::Index>(idx[0])).data();
        for (std::size_t k = 0; k < np; ++k) o[k] += w * psi[k] * xl[k];
    });
    return outT.transpose();
}

Matrix schur_contract_adjoint(const std::vector<complex>& values, const std::vector<Matrix>& xs, std::size_t j,
                              const Matrix& g) {
    check_dense(values, xs);
    const std::size_t n = xs.size();
    if (j >= n) throw IndexOutOfRange("adjoint slot out of range");
    const auto np = static_cast<std::size_t>(xs[0].rows());
    const auto N = static_cast<Eigen::Index>(np);
    const Matrix gT = g.transpose();
    Matrix result = Matrix::Zero(N, N);
    if (j + 1 == n) {
        // Last slot: row i_{n-1} of the result collects conj(w psi) g[i_0, .].
        Matrix resT = Matrix::Zero(N, N);
        walk_prefixes(pointers(xs), np, n, [&](const std::vector<std::size_t>& idx, std::size_t off, complex w) {
            const complex* psi = values.data() + off;
            const complex* gr = gT.col(static_cast<Eigen::Index>(idx[0])).data();
            complex* r = resT.col(static_cast<Eigen::Index>(idx[n - 1])).data();
            const complex cw = std::conj(w);
            for (std::size_t k = 0; k < np; ++k) r[k] += cw * std::conj(psi[k]) * gr[k];
        });
        return resT.transpose();
    }
    const Matrix xlastT = xs[n - 1].transpose();
    walk_prefixes(pointers(xs), np, j, [&](const std::vector<std::size_t>& idx, std::size_t off, complex w) {
        const complex* psi = values.data() + off;
        const complex* xl = xlastT.col(static_cast<Eigen::Index>(idx[n - 1])).data();
        const complex* gr = gT.col(static_cast<Eigen::Index>(idx[0])).data();
        complex acc{};
        for (std::size_t k = 0; k < np; ++k) acc += std::conj(psi[k] * xl[k]) * gr[k];
        result(static_cast<Eigen::Index>(idx[j]), static_cast<Eigen::Index>(idx[j + 1])) += std::conj(w) * acc;
    });
    return result;
}

KernelMatrix apply_schur(const SymbolGrid& psi, const std::vector<KernelMatrix>& xs) {
    if (xs.size() != static_cast<std::size_t>(psi.arity()) || xs.empty())
        throw ArityMismatch("symbol of arity " + std::to_string(psi.arity()) + " applied to " +
                            std::to_string(xs.size()) + " matrices");
    for (const auto& x : xs)
        if (x.grid() != psi.grid()) throw GridMismatch("matrix grid differs from the symbol grid");
    const SymbolGrid dense = psi.materialize();
    std::vector<Matrix> ms;
    ms.reserve(xs.size());
    for (const auto& x : xs) ms.push_back(x.entries());
    return KernelMatrix(schur_contract(*dense.values(), ms), psi.grid());
}

// ---------------------------------------------------------------------------

namespace {

CutoffSpec checked_cutoff(double R) {
    if (!(R > 0.0)) throw InvalidArgument("cutoff radius must be > 0");
    return CutoffSpec{R};
}

}  // namespace

double cutoff_rho(const CutoffSpec& spec, double xi) {
    if (!(spec.R > 0.0)) throw InvalidArgument("cutoff radius must be > 0");
    const double a = std::abs(xi) / spec.R;
    if (a <= 1.0) return 1.0;
    if (a >= 2.0) return 0.0;
    const double up = std::exp(-1.0 / (2.0 - a));
    const double down = std::exp(-1.0 / (a - 1.0));
    return up / (up + down);
}

ScalarFn rho_fn(double R) {
    const CutoffSpec spec = checked_cutoff(R);
    return ScalarFn(0, [spec](double t, int) { return complex(cutoff_rho(spec, t), 0.0); },
                    Interval{-2.0 * R, 2.0 * R});
}

ScalarFn one_minus_rho_over_t(double R) {
    const CutoffSpec spec = checked_cutoff(R);
    return ScalarFn(0, [spec](double t, int) {
        if (std::abs(t) <= spec.R) return complex{};
        return complex((1.0 - cutoff_rho(spec, t)) / t, 0.0);
    });
}

SymbolGrid toeplitz_symbol(const ScalarFn& g, std::vector<double> grid) {
    auto pts = std::make_shared<const std::vector<double>>(grid);
    return SymbolGrid(1, std::move(grid),
                      [g, pts](SymbolGrid::Index idx) { return g((*pts)[idx[0]] - (*pts)[idx[1]]); },
                      SymbolStructure::toeplitz_diff);
}

SymbolGrid block_indicator(const std::vector<int>& r_list, int l, std::vector<double> grid) {
    if (r_list.empty()) throw ArityMismatch("block indicator needs n >= 1");
    std::vector<long> cells;
    cells.reserve(grid.size());
    for (double t : grid) cells.push_back(static_cast<long>(std::floor(t)));
    std::vector<long> target(r_list.size() + 1);
    target[0] = l;
    for (std::size_t m = 0; m < r_list.size(); ++m) target[m + 1] = target[m] + r_list[m];
    auto shared = std::make_shared<const std::vector<long>>(std::move(cells));
    return SymbolGrid(static_cast<int>(r_list.size()), std::move(grid),
                      [shared, target](SymbolGrid::Index idx) {
                          for (std::size_t m = 0; m < idx.size(); ++m)
                              if ((*shared)[idx[m]] != target[m]) return complex{};
                          return complex(1.0, 0.0);
                      });
}

std::vector<SymbolGrid> split_symbol(const ScalarFn& f, int n, double R, std::vector<double> grid) {
    if (n < 1) throw OrderMismatch("split_symbol needs n >= 1");
    if (f.order() < n) throw InsufficientDerivatives("split_symbol needs f of order >= n");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument("split_symbol: grid must be strictly increasing");
    const CutoffSpec spec = checked_cutoff(R);
    const ScalarFn G = one_minus_rho_over_t(R);
    auto pts = std::make_shared<const std::vector<double>>(grid);

    std::vector<SymbolGrid> out;
    for (int k = 0; k < n; ++k) {
        out.emplace_back(n, grid, [f, G, spec, pts, k, n](SymbolGrid::Index idx) {
            std::vector<double> t(idx.size());
            for (std::size_t i = 0; i < idx.size(); ++i) t[i] = (*pts)[idx[i]];
            const double d = t[static_cast<std::size_t>(k) + 1] - t[static_cast<std::size_t>(k)];
            const complex gk = G(d);
            if (gk == complex{}) return complex{};
            double prod = 1.0;
            for (int m = 0; m < k; ++m)
                prod *= cutoff_rho(spec, t[static_cast<std::size_t>(m) + 1] - t[static_cast<std::size_t>(m)]);
            if (prod == 0.0) return complex{};
            std::vector<double> omit_k, omit_k1;
            for (int i = 0; i <= n; ++i) {
                if (i != k) omit_k.push_back(t[static_cast<std::size_t>(i)]);
                if (i != k + 1) omit_k1.push_back(t[static_cast<std::size_t>(i)]);
            }
            const complex diff = divdiff_eval(f, std::span<const double>(omit_k), n - 1) -
                                 divdiff_eval(f, std::span<const double>(omit_k1), n - 1);
            return diff * gk * prod;
        });
    }
    out.emplace_back(n, grid, [f, spec, pts, n](SymbolGrid::Index idx) {
        std::vector<double> t(idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) t[i] = (*pts)[idx[i]];
        double prod = 1.0;
        for (int m = 0; m < n; ++m)
            prod *= cutoff_rho(spec, t[static_cast<std::size_t>(m) + 1] - t[static_cast<std::size_t>(m)]);
        if (prod == 0.0) return complex{};
        return prod * divdiff_eval(f, std::span<const double>(t), n);
    });
    return out;
}

ScalarFn phi_alpha_lambda(const ScalarFn& phi, std::vector<complex> alpha, int first_index, double lambda) {
    if (!(lambda > 0.0)) throw InvalidArgument("phi_alpha_lambda: lambda must be > 0");
    if (!phi.support_hint()) throw InvalidArgument("phi_alpha_lambda: phi must carry a support hint");
    int lo_k = 0, hi_k = -1;
    bool any = false;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (alpha[i] == complex{}) continue;
        const int k = first_index + static_cast<int>(i);
        if (!any) lo_k = k;
        hi_k = k;
        any = true;
    }
    if (!any) return ScalarFn(phi.order(), [](double, int) { return complex{}; }, Interval{0.0, 0.0});
    const Interval s = *phi.support_hint();
    const Interval support{(s.lo + lo_k) / lambda, (s.hi + hi_k) / lambda};
    return ScalarFn(phi.order(), [phi, alpha = std::move(alpha), first_index, lambda](double t, int d) {
        complex acc{};
        const double scale = std::pow(lambda, d);
        for (std::size_t i = 0; i < alpha.size(); ++i) {
            if (alpha[i] == complex{}) continue;
            acc += alpha[i] * phi.eval(lambda * t - (first_index + static_cast<int>(i)), d);
        }
        return scale * acc;
    }, support);
}

}  // namespace schurlab

#include <cmath>
#include <functional>
#include <numbers>

#include "schurlab/experiments.hpp"
#include "schurlab/schatten.hpp"
#include "schurlab/schur.hpp"
#include "schurlab/torus.hpp"
#include "schurlab/wavelet.hpp"

namespace schurlab {

namespace {

bool close(complex a, complex b, double tol) { return std::abs(a - b) <= tol; }

bool all_entries(const SymbolGrid& s, const std::function<bool(SymbolGrid::Index, complex)>& pred) {
    bool ok = true;
    s.for_each([&](SymbolGrid::Index i, complex v) { ok = ok && pred(i, v); });
    return ok;
}

Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index r = 0;
    for (const auto& row : rows) {
        Eigen::Index c = 0;
        for (double v : row) m(r, c++) = v;
        ++r;
    }
    return m;
}

bool sv_equal(const Matrix& x, std::vector<double> expect) {
    const auto s = singular_values(x);
    if (s.size() != expect.size()) return false;
    for (std::size_t i = 0; i < s.size(); ++i)
        if (std::abs(s[i] - expect[i]) > 1e-12) return false;
    return true;
}

using Check = std::pair<const char*, std::function<bool()>>;

std::vector<Check> corpus() {
    std::vector<Check> c;

    // funcs
    c.emplace_back("divdiff t^2 at (1,3) is 4",
                   [] { return close(divdiff_eval(fn::monomial(2), {1.0, 3.0}, 1), 4.0, 1e-12); });
    c.emplace_back("divdiff sin at (0,0) is 1", [] { return close(divdiff_eval(fn::sine(), {0.0, 0.0}, 1), 1.0, 1e-14); });
    c.emplace_back("divdiff_grid t on (0,1) is all ones", [] {
        return all_entries(divdiff_grid(fn::monomial(1), {0.0, 1.0}, 1),
                           [](auto, complex v) { return close(v, 1.0, 1e-14); });
    });
    c.emplace_back("divdiff_grid t^2 on (0,1) is s+t", [] {
        const auto g = divdiff_grid(fn::monomial(2), {0.0, 1.0}, 1);
        return close(g.at({0, 0}), 0.0, 1e-14) && close(g.at({0, 1}), 1.0, 1e-14) &&
               close(g.at({1, 0}), 1.0, 1e-14) && close(g.at({1, 1}), 2.0, 1e-14);
    });
    c.emplace_back("compositions of 5 into 1 slot", [] {
        const auto v = enumerate_compositions(1, 5);
        return v.size() == 1 && v[0].parts == std::vector<int>{5};
    });
    c.emplace_back("compositions of 0 into 4 slots", [] {
        const auto v = enumerate_compositions(4, 0);
        return v.size() == 1 && v[0].parts == std::vector<int>{0, 0, 0, 0};
    });

    // schatten
    c.emplace_back("singular values of diag(3,4)", [] { return sv_equal(mat({{3, 0}, {0, 4}}), {4, 3}); });
    c.emplace_back("singular values of zero", [] { return sv_equal(Matrix::Zero(3, 3), {0, 0, 0}); });
    c.emplace_back("singular values of the shift", [] { return sv_equal(mat({{0, 1}, {0, 0}}), {1, 0}); });
    c.emplace_back("||diag(3,4)||_1 = 7", [] { return std::abs(schatten_norm(mat({{3, 0}, {0, 4}}), 1.0) - 7.0) < 1e-12; });
    c.emplace_back("||I_2||_{1/2} = 4", [] { return std::abs(schatten_norm(mat({{1, 0}, {0, 1}}), 0.5) - 4.0) < 1e-12; });
    c.emplace_back("||diag(3,4)||_inf = 4", [] { return std::abs(schatten_norm(mat({{3, 0}, {0, 4}}), kInf) - 4.0) < 1e-12; });
    c.emplace_back("(2;2) = 1", [] { return std::abs(holder_combine({2.0, 2.0}) - 1.0) < 1e-15; });
    c.emplace_back("(3;3;3) = 1", [] { return std::abs(holder_combine({3.0, 3.0, 3.0}) - 1.0) < 1e-15; });
    c.emplace_back("(2;3;6) = 1", [] { return std::abs(holder_combine({2.0, 3.0, 6.0}) - 1.0) < 1e-15; });
    c.emplace_back("pinching all-ones to the diagonal", [] {
        const Matrix e = block_expectation(Matrix::Ones(2, 2), BlockPartition({{0, 1}, {1, 2}}));
        return e.isApprox(Matrix::Identity(2, 2));
    });
    c.emplace_back("pinching with one block is the identity", [] {
        const Matrix x = mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
        return block_expectation(x, BlockPartition({{0, 3}})) == x;
    });
    c.emplace_back("pinching [[1,2],[3,4]]", [] {
        return block_expectation(mat({{1, 2}, {3, 4}}), BlockPartition({{0, 1}, {1, 2}})) == mat({{1, 0}, {0, 4}});
    });

    // schur
    c.emplace_back("constant symbol factors out", [] {
        const std::vector<double> g = index_grid(3);
        const SymbolGrid psi(2, g, [](SymbolGrid::Index) { return complex(2.5, 0.0); });
        const Matrix x = mat({{1, 2, 0}, {0, 1, 3}, {4, 0, 1}}), y = mat({{0, 1, 1}, {2, 0, 1}, {1, 1, 0}});
        const KernelMatrix out = apply_schur(psi, {KernelMatrix(x, g), KernelMatrix(y, g)});
        return out.entries().isApprox(2.5 * x * y);
    });
    c.emplace_back("delta symbol keeps the diagonal", [] {
        const std::vector<double> g = index_grid(3);
        const SymbolGrid psi(1, g, [](SymbolGrid::Index i) { return complex(i[0] == i[1] ? 1.0 : 0.0, 0.0); });
        const Matrix x = mat({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}});
        const Matrix d = x.diagonal().asDiagonal();
        return apply_schur(psi, {KernelMatrix(x, g)}).entries() == d;
    });
    c.emplace_back("rho_1(0) = 1", [] { return cutoff_rho({1.0}, 0.0) == 1.0; });
    c.emplace_back("rho_1(3) = 0", [] { return cutoff_rho({1.0}, 3.0) == 0.0; });
    c.emplace_back("rho_2(-2) = 1", [] { return cutoff_rho({2.0}, -2.0) == 1.0; });
    c.emplace_back("toeplitz of 1 is all ones", [] {
        return all_entries(toeplitz_symbol(fn::constant(1.0), {0.0, 0.5, 2.0}),
                           [](auto, complex v) { return v == complex(1.0, 0.0); });
    });
    c.emplace_back("toeplitz of rho_R on a sparse grid is the identity", [] {
        return all_entries(toeplitz_symbol(rho_fn(0.25), {0.0, 1.0, 2.0, 3.0}),
                           [](SymbolGrid::Index i, complex v) { return v == complex(i[0] == i[1] ? 1.0 : 0.0); });
    });
    c.emplace_back("L1 of zero is 0", [] { return fourier_l1_bound(fn::zero(), 4.0, 256).value == 0.0; });
    c.emplace_back("block indicator r=(0) on [0,1) is all ones", [] {
        return all_entries(block_indicator({0}, 0, {0.0, 0.25, 0.5, 0.75}), [](auto, complex v) { return v == 1.0; });
    });
    c.emplace_back("block indicator r=(5) on [0,1) is zero", [] {
        return all_entries(block_indicator({5}, 0, {0.0, 0.25, 0.5, 0.75}), [](auto, complex v) { return v == 0.0; });
    });
    c.emplace_back("block indicators partition the grid", [] {
        const std::vector<double> g{0.0, 0.7, 1.2, 2.5, 3.1};
        std::vector<complex> sum(25);
        for (int l = -1; l <= 4; ++l) {
            const auto d = block_indicator({1}, l, g).materialize();
            for (std::size_t i = 0; i < 25; ++i) sum[i] += (*d.values())[i];
        }
        // b_{(1)} = [floor(t_1) = floor(t_0) + 1]
        bool ok = true;
        for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = 0; b < 5; ++b)
                ok = ok && sum[a * 5 + b] == (std::floor(g[b]) == std::floor(g[a]) + 1 ? 1.0 : 0.0);
        return ok;
    });
    c.emplace_back("split of sin, n=2, N=16 sums to f^[2]", [] {
        std::vector<double> g(16);
        for (int k = 0; k < 16; ++k) g[static_cast<std::size_t>(k)] = k * 0.25;
        const auto full = divdiff_grid(fn::sine(), g, 2).materialize();
        std::vector<complex> sum(full.tensor_size());
        for (const auto& p : split_symbol(fn::sine(), 2, 1.0, g)) {
            const auto d = p.materialize();
            for (std::size_t i = 0; i < sum.size(); ++i) sum[i] += (*d.values())[i];
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < sum.size(); ++i) worst = std::max(worst, std::abs(sum[i] - (*full.values())[i]));
        return worst <= 1e-9;
    });
    c.emplace_back("split with R beyond the grid keeps only the diagonal piece", [] {
        const std::vector<double> g{0.0, 0.5, 1.0, 1.5};
        const auto pieces = split_symbol(fn::sine(), 2, 10.0, g);
        const auto full = divdiff_grid(fn::sine(), g, 2).materialize();
        bool ok = true;
        for (std::size_t k = 0; k + 1 < pieces.size(); ++k)
            ok = ok && all_entries(pieces[k], [](auto, complex v) { return v == 0.0; });
        const auto last = pieces.back().materialize();
        for (std::size_t i = 0; i < full.tensor_size(); ++i)
            ok = ok && close((*last.values())[i], (*full.values())[i], 1e-14);
        return ok;
    });
    c.emplace_back("identity multiplier on S_2 has norm 1", [] {
        const SymbolGrid one(1, index_grid(6), [](SymbolGrid::Index) { return complex(1.0, 0.0); });
        return std::abs(estimate_norm(one, ExponentTuple{2.0}, {.restarts = 2, .seed = 1}).value - 1.0) <= 1e-6;
    });
    c.emplace_back("phi_{delta_0, 1} is phi", [] {
        const ScalarFn phi = fn::smooth_bump(0.0, 1.0);
        const ScalarFn f = phi_alpha_lambda(phi, {1.0}, 0, 1.0);
        for (double t : {-0.7, -0.1, 0.0, 0.4, 0.9})
            if (f(t) != phi(t)) return false;
        return true;
    });
    c.emplace_back("phi_{0, lambda} is zero", [] {
        const ScalarFn f = phi_alpha_lambda(fn::smooth_bump(0.0, 1.0), {0.0, 0.0}, 0, 2.0);
        for (double t : {-0.7, 0.0, 0.3, 1.1})
            if (f(t) != 0.0) return false;
        return true;
    });

    // torus
    auto moi_setup = [](FourierSeries s, std::vector<double> phases, Matrix expect_factor) {
        const Matrix x = mat({{1, 2}, {3, 4}}), y = mat({{0, 1}, {1, 1}});
        const Matrix out = moi_apply(s, DiagonalUnitary{std::move(phases)}, {x, y});
        return out.isApprox(expect_factor * x * y);
    };
    c.emplace_back("MOI of a delta at 0 is c x_1 x_2", [moi_setup] {
        FourierSeries s(2);
        s.add({0, 0, 0}, complex(1.5, -0.5));
        return moi_setup(s, {0.3, 1.1}, complex(1.5, -0.5) * Matrix::Identity(2, 2));
    });
    c.emplace_back("MOI with U = 1 sums the coefficients", [moi_setup] {
        FourierSeries s(2);
        s.add({1, 0, 0}, 2.0);
        s.add({0, -2, 1}, 0.5);
        return moi_setup(s, {0.0, 0.0}, 2.5 * Matrix::Identity(2, 2));
    });
    c.emplace_back("MOI at (1,0,0) is U x_1 x_2", [moi_setup] {
        FourierSeries s(2);
        s.add({1, 0, 0}, 1.0);
        return moi_setup(s, {0.3, 1.1}, DiagonalUnitary{{0.3, 1.1}}.matrix());
    });
    c.emplace_back("divdiff expansion of 0 is empty", [] { return divdiff_fourier(FourierSeries(0), 2).empty(); });
    c.emplace_back("cayley_inv(-1) = 0", [] { return cayley_inv(complex(-1.0, 0.0)) == 0.0; });
    c.emplace_back("cayley check of 0 is (0, 0)", [] {
        const std::vector<double> l{-0.5, 0.2, 0.9};
        const CayleyCheck r = cayley_transfer_check(fn::zero(), l);
        return r.lhs == 0.0 && r.rhs == 0.0;
    });

    // wavelet
    c.emplace_back("Haar filter", [] {
        const auto h = daubechies_filter(1);
        return h.size() == 2 && std::abs(h[0] - std::numbers::sqrt2 / 2) < 1e-15 &&
               std::abs(h[1] - std::numbers::sqrt2 / 2) < 1e-15;
    });
    c.emplace_back("filter sums to sqrt 2", [] {
        for (int M = 1; M <= 10; ++M) {
            double s = 0.0;
            for (double v : daubechies_filter(M)) s += v;
            if (std::abs(s - std::numbers::sqrt2) > 1e-12) return false;
        }
        return true;
    });
    c.emplace_back("Haar cascade is the indicator of [0,1)", [] {
        const auto r = cascade(daubechies_filter(1), 6);
        for (std::size_t q = 0; q < r.scaling.size(); ++q)
            if (std::abs(r.scaling[q] - (q < 64 ? 1.0 : 0.0)) > 1e-14) return false;
        return true;
    });
    c.emplace_back("DB-2 scaling function integrates to 1", [] {
        const WaveletSystem W(2, 10);
        double s = 0.0;
        for (double v : W.samples(Basis::scaling)) s += v;
        return std::abs(s * W.spacing() - 1.0) < 1e-8;
    });
    c.emplace_back("coefficients of a basis function", [] {
        const WaveletSystem W(4, 12);
        const auto m = wavelet_coeffs(wavelet_fn(W, 0, 0), W, {-1, 1}, {-3, 3});
        for (const auto& [jk, v] : m)
            if (std::abs(v - (jk == std::pair{0, 0} ? 1.0 : 0.0)) > 1e-6) return false;
        return true;
    });
    c.emplace_back("coefficients of zero", [] {
        const WaveletSystem W(2, 10);
        for (const auto& [jk, v] : wavelet_coeffs(fn::zero(), W, {-1, 1}, {-3, 3}))
            if (v != 0.0) return false;
        return true;
    });
    c.emplace_back("layers of a basis function", [] {
        const WaveletSystem W(4, 12);
        const ScalarFn f = wavelet_fn(W, 0, 5);
        const Interval win{5.0, 12.0};
        const Layer l0 = layer(f, 0, W, win), l1 = layer(f, 1, W, win);
        double e0 = 0.0, e1 = 0.0;
        for (int i = 0; i <= 700; ++i) {
            const double t = 5.0 + i * 0.01;
            e0 = std::max(e0, std::abs(l0(t) - f.real(t)));
            e1 = std::max(e1, std::abs(l1(t)));
        }
        return e0 <= 1e-6 && e1 <= 1e-6;
    });
    c.emplace_back("layer of zero", [] {
        const WaveletSystem W(2, 10);
        return layer(fn::zero(), 0, W, {0.0, 4.0}).sample().sup() == 0.0;
    });
    c.emplace_back("Besov norm of a basis function is its L^p norm", [] {
        const WaveletSystem W(4, 12);
        const ScalarFn f = wavelet_fn(W, 0, 0);
        double l2 = 0.0;
        for (double v : W.samples(Basis::wavelet)) l2 += v * v;
        l2 = std::sqrt(l2 * W.spacing());
        const BesovResult r = besov_norm(f, {0.5, 2.0, 1.0, -2, 2}, W, {});
        return std::abs(r.value - l2) <= 1e-5;
    });
    c.emplace_back("Besov norm of zero", [] {
        const WaveletSystem W(4, 10);
        return besov_norm(fn::zero(), {1.0, 2.0, 2.0, -2, 2}, W, {0.0, 4.0}).value == 0.0;
    });
    c.emplace_back("polynomial correction of zero", [] {
        const WaveletSystem W(4, 10);
        const auto pc = polynomial_correction(fn::zero(), W, 1, -2, 2, {-1.0, 1.0});
        for (double v : pc.coeffs)
            if (v != 0.0) return false;
        for (const auto& g : pc.layers)
            if (g(0.3) != 0.0) return false;
        return true;
    });

    // cli
    c.emplace_back("empty case list serializes with summary only", [] {
        Report r;
        r.summary["checked"] = 0;
        const Json j = Json::parse(dump_json(r.to_json()));
        return j.contains("summary") && !j.contains("cases");
    });
    c.emplace_back("split-partition run passes", [] {
        const auto cfg = parse_config(Json{{"schema_version", kSchemaVersion},
                                           {"name", "selftest-split"},
                                           {"kind", "split-partition"},
                                           {"parameters", {{"functions", {"sin"}}, {"n_list", {2}}, {"R_list", {1.0}}}}});
        return exit_code(run(cfg)) == 0;
    });
    c.emplace_back("identical configs give identical bytes", [] {
        const auto cfg = parse_config(Json{{"schema_version", kSchemaVersion},
                                           {"name", "selftest-det"},
                                           {"kind", "divdiff-oracle"},
                                           {"parameters", {{"cases", 10}, {"seed", 7}}}});
        return dump_json(run(cfg).to_json()) == dump_json(run(cfg).to_json());
    });
    return c;
}

}  // namespace

std::vector<SelfCheck> selftest() {
    std::vector<SelfCheck> out;
    for (auto& [name, fn] : corpus()) {
        SelfCheck s{name, false, ""};
        try {
            s.ok = fn();
        } catch (const std::exception& e) {
            s.detail = e.what();
        }
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace schurlab

#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/funcs.hpp"
#include "schurlab/schur.hpp"

using namespace schurlab;

namespace {

std::vector<complex> random_values(std::mt19937_64& rng, std::size_t count) {
    std::normal_distribution<double> g;
    std::vector<complex> v(count);
    for (auto& z : v) {
        const double re = g(rng);
        z = complex(re, g(rng));
    }
    return v;
}

std::size_t flat(const std::vector<std::size_t>& idx, std::size_t N) {
    std::size_t f = 0;
    for (std::size_t i : idx) f = f * N + i;
    return f;
}

double re_inner(const Matrix& a, const Matrix& b) { return (a.adjoint() * b).trace().real(); }

std::vector<double> linear_grid(std::size_t n, double lo, double step) {
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) g[i] = lo + step * static_cast<double>(i);
    return g;
}

}  // namespace

TEST_SUITE("schur") {
    TEST_CASE("contraction matches the naive loop") {
        std::mt19937_64 rng(31);
        for (std::size_t n = 1; n <= 3; ++n) {
            const std::size_t N = 5;
            std::size_t total = 1;
            for (std::size_t i = 0; i <= n; ++i) total *= N;
            const auto vals = random_values(rng, total);
            std::vector<Matrix> xs;
            for (std::size_t i = 0; i < n; ++i) xs.push_back(oracle::random_matrix(rng, N));
            const Matrix fast = schur_contract(vals, xs);
            const Matrix slow = oracle::contract_naive([&](const auto& idx) { return vals[flat(idx, N)]; }, xs);
            CHECK((fast - slow).norm() <= 1e-12 * slow.norm());
        }
    }

    TEST_CASE("a symbol depending on the middle index inserts a diagonal") {
        std::mt19937_64 rng(32);
        const auto grid = linear_grid(6, -1.0, 0.5);
        const SymbolGrid psi(2, grid, [&](SymbolGrid::Index idx) { return complex(grid[idx[1]], 0.0); });
        const Matrix a = oracle::random_matrix(rng, 6), b = oracle::random_matrix(rng, 6);
        const KernelMatrix out = apply_schur(psi, {KernelMatrix(a, grid), KernelMatrix(b, grid)});
        Matrix d = Matrix::Zero(6, 6);
        for (int i = 0; i < 6; ++i) d(i, i) = grid[static_cast<std::size_t>(i)];
        CHECK((out.entries() - a * d * b).norm() < 1e-12);
        CHECK(out.grid() == grid);
    }

    TEST_CASE("apply_schur validates its inputs") {
        const auto grid = linear_grid(3, 0.0, 1.0);
        const SymbolGrid psi = toeplitz_symbol(fn::constant(1.0), grid);
        const KernelMatrix x(Matrix::Identity(3, 3), grid);
        CHECK_THROWS_AS(static_cast<void>(apply_schur(psi, {x, x})), ArityMismatch);
        CHECK_THROWS_AS(static_cast<void>(apply_schur(psi, {KernelMatrix(Matrix::Identity(3, 3), {0.0, 1.0, 3.0})})),
                        GridMismatch);
    }

    TEST_CASE("adjoint of the contraction") {
        std::mt19937_64 rng(33);
        const std::size_t N = 4, n = 3;
        const auto vals = random_values(rng, N * N * N * N);
        std::vector<Matrix> xs;
        for (std::size_t i = 0; i < n; ++i) xs.push_back(oracle::random_matrix(rng, N));
        const Matrix g = oracle::random_matrix(rng, N), h = oracle::random_matrix(rng, N);
        for (std::size_t j = 0; j < n; ++j) {
            auto with_h = xs;
            with_h[j] = h;
            const double lhs = re_inner(g, schur_contract(vals, with_h));
            const double rhs = re_inner(schur_contract_adjoint(vals, xs, j, g), h);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
        }
    }

    TEST_CASE("cutoff values") {
        const CutoffSpec s{1.0};
        CHECK(cutoff_rho(s, 0.0) == 1.0);
        CHECK(cutoff_rho(s, -1.0) == 1.0);
        CHECK(cutoff_rho(s, 1.5) == doctest::Approx(0.5));
        CHECK(cutoff_rho(s, 2.0) == 0.0);
        CHECK(cutoff_rho(s, -7.0) == 0.0);
        double prev = 1.0;
        for (double t = 1.0; t <= 2.0; t += 1.0 / 64) {
            const double r = cutoff_rho(s, t);
            CHECK(r <= prev);
            prev = r;
        }
        CHECK(cutoff_rho({2.0}, 3.0) == doctest::Approx(0.5));
        CHECK_THROWS_AS(static_cast<void>(cutoff_rho({0.0}, 1.0)), InvalidArgument);

        const ScalarFn G = one_minus_rho_over_t(1.0);
        CHECK(G(0.0) == complex(0.0, 0.0));
        CHECK(G(0.9) == complex(0.0, 0.0));
        CHECK(G.real(4.0) == doctest::Approx(0.25));
        CHECK(G.real(-4.0) == doctest::Approx(-0.25));
        CHECK(G.real(1.5) == doctest::Approx(0.5 / 1.5));
    }

    TEST_CASE("fourier L1 of a gaussian is its value at 0") {
        // g^ > 0, so the L1 norm of g^ is g(0) = 1.
        const FourierL1 r = fourier_l1_bound(fn::gaussian(1.0), 40.0, 1 << 14);
        CHECK(std::abs(r.value - 1.0) <= r.tail + 1e-9);
        CHECK(r.tail < 1e-6);
        CHECK(fourier_l1_bound(fn::zero(), 4.0, 64).value == 0.0);
    }

    TEST_CASE("fourier L1 of the cutoffs against quadrature references") {
        const FourierL1 rho = fourier_l1_bound(rho_fn(1.0), 8.0, 4096);
        CHECK(std::abs(rho.value - oracle::kRhoHatL1) <= rho.tail + 1e-6);
        CHECK(rho.tail < 1e-3);
        const FourierL1 g = one_minus_rho_over_t_l1(1.0, 1 << 16);
        CHECK(std::abs(g.value - oracle::kOneMinusRhoOverTHatL1) <= g.tail + 1e-6);
        // Dilation: (1 - rho_R(t))/t = (1/R) G_1(t/R), whose transform has L1 norm ||G_1^||/R.
        const FourierL1 g2 = one_minus_rho_over_t_l1(2.0, 1 << 16);
        CHECK(g2.value == doctest::Approx(g.value / 2.0).epsilon(1e-12));
        // rho_R(t) = rho_1(t/R) keeps the L1 norm of the transform.
        const FourierL1 rho2 = fourier_l1_bound(rho_fn(2.0), 16.0, 8192);
        CHECK(std::abs(rho2.value - rho.value) <= rho.tail + rho2.tail);
    }

    TEST_CASE("fourier L1 of rho is stable in the resolution") {
        const double a = fourier_l1_bound(rho_fn(1.0), 8.0, 1 << 12).value;
        const double b = fourier_l1_bound(rho_fn(1.0), 8.0, 1 << 14).value;
        CHECK(std::abs(a - b) <= 1e-4);
    }

    TEST_CASE("fourier L1 rejects unresolved input") {
        CHECK_THROWS_AS(static_cast<void>(fourier_l1_bound(fn::sine(30.0), 4.0, 64)), ResolutionTooLow);
        CHECK_THROWS_AS(static_cast<void>(fourier_l1_bound(rho_fn(1.0), 8.0, 100)), InvalidArgument);
        CHECK_THROWS_AS(static_cast<void>(one_minus_rho_over_t_l1(1.0, 1024)), ResolutionTooLow);
    }

    TEST_CASE("block indicators") {
        const auto grid = linear_grid(8, 0.0, 0.5);  // cells 0,0,1,1,2,2,3,3
        const SymbolGrid b = block_indicator({1, -1}, 1, grid);
        CHECK(b.arity() == 2);
        CHECK(b.at({2, 4, 3}) == complex(1.0, 0.0));
        CHECK(b.at({3, 5, 2}) == complex(1.0, 0.0));
        CHECK(b.at({2, 4, 4}) == complex(0.0, 0.0));
        CHECK(b.at({0, 4, 3}) == complex(0.0, 0.0));
        // Indicators add pointwise.
        const SymbolGrid one = block_indicator({0}, 0, grid) + block_indicator({1}, 0, grid);
        CHECK(one.at({1, 3}) == complex(1.0, 0.0));
        CHECK_THROWS_AS(static_cast<void>(block_indicator({}, 0, grid)), ArityMismatch);
    }

    TEST_CASE("split pieces sum to the divided difference") {
        const auto grid = linear_grid(10, 0.0, 0.4);
        for (int n : {1, 2, 3})
            for (double R : {0.5, 1.0, 2.0}) {
                const ScalarFn f = fn::sine(1.3, 0.2);
                const auto parts = split_symbol(f, n, R, grid);
                REQUIRE(parts.size() == static_cast<std::size_t>(n) + 1);
                SymbolGrid sum = parts[0];
                for (std::size_t k = 1; k < parts.size(); ++k) sum = sum + parts[k];
                const SymbolGrid full = divdiff_grid(f, grid, n).materialize();
                const SymbolGrid s = sum.materialize();
                double worst = 0.0;
                for (std::size_t i = 0; i < full.tensor_size(); ++i)
                    worst = std::max(worst, std::abs((*full.values())[i] - (*s.values())[i]));
                CHECK(worst <= 1e-9);
            }
    }

    TEST_CASE("split of t^2 at hand-checked nodes") {
        // f^[1](a, b) = a + b and f^[2] = 1; rho_1 is 1 at distance 0.5 and 0 at 2.5.
        const std::vector<double> grid{0.0, 0.5, 3.0};
        const auto parts = split_symbol(fn::monomial(2), 2, 1.0, grid);
        REQUIRE(parts.size() == 3);
        CHECK(std::abs(parts[0].at({0, 1, 2})) < 1e-14);
        CHECK(std::abs(parts[1].at({0, 1, 2}) - 1.0) < 1e-14);
        CHECK(std::abs(parts[2].at({0, 1, 2})) < 1e-14);
        CHECK(std::abs(parts[0].at({2, 1, 0}) - 1.0) < 1e-14);
        CHECK(std::abs(parts[1].at({2, 1, 0})) < 1e-14);
        // Past the grid diameter only the diagonal piece survives.
        const auto wide = split_symbol(fn::monomial(2), 2, 10.0, grid);
        for (std::size_t a = 0; a < 3; ++a)
            for (std::size_t b = 0; b < 3; ++b)
                for (std::size_t c = 0; c < 3; ++c) {
                    CHECK(wide[0].at({a, b, c}) == complex(0.0, 0.0));
                    CHECK(wide[1].at({a, b, c}) == complex(0.0, 0.0));
                    CHECK(std::abs(wide[2].at({a, b, c}) - 1.0) < 1e-12);
                }
    }

    TEST_CASE("diagonal piece vanishes off the cutoff band") {
        const auto grid = linear_grid(12, 0.0, 0.5);
        const auto parts = split_symbol(fn::sine(), 2, 1.0, grid);
        // |t_1 - t_0| = 2.5 > 2R.
        CHECK(parts[2].at({0, 5, 5}) == complex(0.0, 0.0));
        CHECK(std::abs(parts[2].at({3, 3, 3}) - fn::sine().eval(1.5, 2) / 2.0) < 1e-14);
    }

    TEST_CASE("optimizer returns certified witnesses") {
        std::mt19937_64 rng(34);
        const auto grid = linear_grid(6, 0.0, 1.0);
        const SymbolGrid psi = SymbolGrid::from_values(2, grid, random_values(rng, 216));
        const ExponentTuple exps{2.0, 2.0};
        EstimateOptions opts;
        opts.restarts = 4;
        opts.max_iters = 60;
        opts.seed = 99;
        const NormEstimate e = estimate_norm(psi, exps, opts);
        REQUIRE(e.witnesses.size() == 2);
        for (const auto& w : e.witnesses) CHECK(schatten_norm(w, 2.0) == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(std::abs(witness_ratio(psi, exps, e.witnesses) - e.value) <= 1e-8 * e.value);
        CHECK(e.value >= psi.sup_abs() * (1 - 1e-12));
        CHECK(e.seed == 99);
        for (std::size_t i = 1; i < e.history.size(); ++i) CHECK(e.history[i] >= e.history[i - 1]);
        // Same seed, same answer.
        const NormEstimate again = estimate_norm(psi, exps, opts);
        CHECK(again.value == e.value);
    }

    TEST_CASE("linear multipliers on S_2 have norm max |psi|") {
        std::mt19937_64 rng(35);
        const auto grid = linear_grid(7, 0.0, 1.0);
        const SymbolGrid psi = SymbolGrid::from_values(1, grid, random_values(rng, 49));
        EstimateOptions opts;
        opts.restarts = 3;
        const NormEstimate e = estimate_norm(psi, ExponentTuple{2.0}, opts);
        CHECK(e.value == doctest::Approx(psi.sup_abs()).epsilon(1e-12));
    }

    TEST_CASE("constant symbol is the identity on S_1") {
        const auto grid = linear_grid(5, 0.0, 1.0);
        const SymbolGrid one = toeplitz_symbol(fn::constant(1.0), grid);
        const NormEstimate e = estimate_norm(one, ExponentTuple{1.0});
        CHECK(e.value == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("a single-entry symbol has norm 1") {
        const auto grid = linear_grid(4, 0.0, 1.0);
        std::vector<complex> v(64);
        v[flat({1, 3, 0}, 4)] = 1.0;
        const SymbolGrid delta = SymbolGrid::from_values(2, grid, v);
        EstimateOptions opts;
        opts.restarts = 2;
        opts.seed = 3;
        for (const ExponentTuple exps : {ExponentTuple{2.0, 2.0}, ExponentTuple{1.0, 1.0}, ExponentTuple{1.0, kInf}})
            CHECK(estimate_norm(delta, exps, opts).value == doctest::Approx(1.0).epsilon(1e-10));
    }

    TEST_CASE("zero symbol is flagged degenerate") {
        const SymbolGrid z = toeplitz_symbol(fn::zero(), linear_grid(4, 0.0, 1.0));
        const NormEstimate e = estimate_norm(z, ExponentTuple{2.0});
        CHECK(e.degenerate);
        CHECK(e.value == 0.0);
        CHECK(e.witnesses.size() == 1);
    }

    TEST_CASE("toeplitz estimates do not see a translated grid") {
        EstimateOptions opts;
        opts.restarts = 3;
        opts.max_iters = 40;
        opts.seed = 5;
        const NormEstimate a = estimate_norm(toeplitz_symbol(rho_fn(1.0), linear_grid(12, 0.0, 0.5)), {1.0}, opts);
        const NormEstimate b = estimate_norm(toeplitz_symbol(rho_fn(1.0), linear_grid(12, 3.25, 0.5)), {1.0}, opts);
        CHECK(a.value == b.value);
    }

    TEST_CASE("estimate options and arity are validated") {
        const SymbolGrid psi = toeplitz_symbol(fn::constant(1.0), linear_grid(3, 0.0, 1.0));
        CHECK_THROWS_AS(static_cast<void>(estimate_norm(psi, ExponentTuple{2.0, 2.0})), ArityMismatch);
        EstimateOptions bad;
        bad.restarts = 0;
        CHECK_THROWS_AS(static_cast<void>(estimate_norm(psi, ExponentTuple{2.0}, bad)), InvalidArgument);
    }

    TEST_CASE("phi_alpha_lambda") {
        const ScalarFn phi = fn::smooth_bump(0.5, 0.5);
        const ScalarFn f = phi_alpha_lambda(phi, {1.0, -2.0}, 0, 2.0);
        CHECK(std::abs(f(0.3) - phi(0.6)) < 1e-15);
        CHECK(std::abs(f(0.8) - (phi(1.6) - 2.0 * phi(0.6))) < 1e-15);
        CHECK(f.support_hint()->lo == doctest::Approx(0.0));
        CHECK(f.support_hint()->hi == doctest::Approx(1.0));
        CHECK(std::abs(f.eval(0.7, 1) - 2.0 * (phi.eval(1.4, 1) - 2.0 * phi.eval(0.4, 1))) < 1e-12);
        CHECK_THROWS_AS(static_cast<void>(phi_alpha_lambda(phi, {1.0}, 0, 0.0)), InvalidArgument);
        CHECK_THROWS_AS(static_cast<void>(phi_alpha_lambda(fn::sine(), {1.0}, 0, 1.0)), InvalidArgument);
    }
}

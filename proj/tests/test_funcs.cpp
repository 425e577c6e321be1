#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "schurlab/funcs.hpp"
#include "schurlab/symbol_grid.hpp"

using namespace schurlab;

namespace {

double rel(complex a, complex b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

std::vector<double> distinct_nodes(std::mt19937_64& rng, std::size_t m, double gap) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (;;) {
        std::vector<double> v(m);
        for (auto& x : v) x = u(rng);
        bool ok = true;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j) ok = ok && std::abs(v[i] - v[j]) > gap;
        if (ok) return v;
    }
}

ScalarFn random_fn(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    if (rng() % 2 == 0) {
        std::vector<double> c(7);
        for (auto& a : c) a = u(rng);
        return fn::polynomial(c);
    }
    return fn::sine(2.0 + u(rng), u(rng), 1.0 + 0.5 * u(rng));
}

}  // namespace

TEST_SUITE("funcs") {
    TEST_CASE("hand-computed divided differences") {
        CHECK(divdiff_eval(fn::monomial(3), {0.0, 1.0, 2.0}, 2).real() == doctest::Approx(3.0).epsilon(1e-14));
        CHECK(divdiff_eval(fn::monomial(2), {1.0, 3.0}, 1).real() == doctest::Approx(4.0).epsilon(1e-14));
        CHECK(divdiff_eval(fn::sine(), {0.0, 0.0}, 1).real() == doctest::Approx(1.0).epsilon(1e-14));
        for (int n = 0; n <= 5; ++n) {
            std::vector<double> nodes;
            for (int i = 0; i <= n; ++i) nodes.push_back(0.3 * i * i - 1.0);
            CHECK(std::abs(divdiff_eval(fn::monomial(n), nodes, n) - 1.0) < 1e-12);
        }
    }

    TEST_CASE("full diagonal gives f^(n)/n!") {
        const ScalarFn f = fn::sine(1.5, 0.2);
        CHECK(std::abs(divdiff_eval(f, {0.4, 0.4, 0.4}, 2) - f.eval(0.4, 2) / 2.0) < 1e-15);
    }

    TEST_CASE("grid tensor entries") {
        const SymbolGrid g = divdiff_grid(fn::monomial(3), {0.0, 1.0, 2.0}, 2);
        CHECK(g.arity() == 2);
        CHECK(g.tensor_size() == 27);
        CHECK(std::abs(g.at({0, 1, 2}) - 3.0) < 1e-14);
        CHECK(std::abs(g.at({2, 1, 0}) - 3.0) < 1e-14);
        // Confluent entry: (t^3)^[2](1,1,1) = 3.
        CHECK(std::abs(g.at({1, 1, 1}) - 3.0) < 1e-14);
    }

    TEST_CASE("errors") {
        CHECK_THROWS_AS(static_cast<void>(divdiff_eval(fn::monomial(2), {1.0, 2.0, 3.0}, 1)), OrderMismatch);
        const ScalarFn c4 = fn::poly_bump(0.0, 1.0, 5);
        CHECK(c4.order() == 4);
        CHECK_NOTHROW(static_cast<void>(divdiff_eval(c4, {0.1, 0.1, 0.1, 0.1, 0.1}, 4)));
        CHECK_THROWS_AS(static_cast<void>(divdiff_eval(c4, {0.1, 0.1, 0.1, 0.1, 0.1, 0.1}, 5)),
                        InsufficientDerivatives);
    }

    TEST_CASE("permutation symmetry") {
        std::mt19937_64 rng(11);
        for (int trial = 0; trial < 60; ++trial) {
            const ScalarFn f = random_fn(rng);
            const std::size_t m = 2 + rng() % 4;
            auto nodes = distinct_nodes(rng, m, 0.05);
            const complex ref = divdiff_eval(f, nodes, static_cast<int>(m) - 1);
            std::sort(nodes.begin(), nodes.end());
            do {
                CHECK(rel(divdiff_eval(f, nodes, static_cast<int>(m) - 1), ref) <= 1e-9);
            } while (std::next_permutation(nodes.begin(), nodes.end()));
        }
    }

    TEST_CASE("two-term recursion on distinct nodes") {
        std::mt19937_64 rng(12);
        for (int trial = 0; trial < 100; ++trial) {
            const ScalarFn f = random_fn(rng);
            const std::size_t m = 2 + rng() % 4;
            const auto t = distinct_nodes(rng, m, 0.05);
            const int k = static_cast<int>(m) - 1;
            const std::vector<double> head(t.begin(), t.end() - 1), tail(t.begin() + 1, t.end());
            const complex rec = (divdiff_eval(f, tail, k - 1) - divdiff_eval(f, head, k - 1)) / (t.back() - t.front());
            CHECK(rel(divdiff_eval(f, t, k), rec) <= 1e-9);
        }
    }

    TEST_CASE("confluent limit converges at first order") {
        const ScalarFn f = fn::sine(1.3, 0.4);
        const complex limit = divdiff_eval(f, {0.2, 0.2, 0.9}, 2);
        std::vector<double> errs;
        for (double h : {1e-3, 1e-4, 1e-5}) errs.push_back(std::abs(divdiff_eval(f, {0.2, 0.2 + h, 0.9}, 2) - limit));
        // Each decade of h buys roughly one decade of error.
        CHECK(errs[0] / errs[1] == doctest::Approx(10.0).epsilon(0.05));
        CHECK(errs[1] / errs[2] == doctest::Approx(10.0).epsilon(0.05));
    }

    TEST_CASE("degree collapse is exact on integer nodes") {
        for (int m = 0; m < 5; ++m)
            for (int k = m + 1; k <= 5; ++k) {
                std::vector<double> nodes;
                for (int i = 0; i <= k; ++i) nodes.push_back(static_cast<double>(2 * i - 3));
                CHECK(divdiff_eval(fn::monomial(m), nodes, k) == complex(0.0, 0.0));
            }
    }

    TEST_CASE("monomials give complete homogeneous polynomials") {
        std::mt19937_64 rng(13);
        for (int m = 0; m <= 6; ++m)
            for (int k = 0; k <= std::min(m, 4); ++k) {
                const auto t = distinct_nodes(rng, static_cast<std::size_t>(k) + 1, 0.1);
                const double ref = oracle::complete_homogeneous(m - k, t);
                CHECK(rel(divdiff_eval(fn::monomial(m), t, k), ref) <= 1e-9);
            }
    }

    TEST_CASE("compositions") {
        const auto v = enumerate_compositions(3, 2);
        const std::vector<std::vector<int>> expect{{2, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 2, 0}, {0, 1, 1}, {0, 0, 2}};
        REQUIRE(v.size() == expect.size());
        for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i].parts == expect[i]);
        for (int slots = 1; slots <= 6; ++slots)
            for (int total = 0; total <= 20; ++total) {
                const auto c = enumerate_compositions(slots, total);
                CHECK(static_cast<double>(c.size()) == binomial(total + slots - 1, slots - 1));
                for (std::size_t i = 1; i < c.size(); ++i) CHECK(c[i - 1].parts > c[i].parts);
            }
    }

    TEST_CASE("support hints and transforms") {
        const ScalarFn b = fn::smooth_bump(1.0, 0.5);
        REQUIRE(b.support_hint());
        CHECK(b.support_hint()->lo == 0.5);
        CHECK(b(1.6) == complex(0.0, 0.0));
        const ScalarFn d = fn::dilate(b, 2.0);
        CHECK(d.support_hint()->hi == doctest::Approx(0.75));
        CHECK(std::abs(d.eval(0.55, 1) - 2.0 * b.eval(1.1, 1)) < 1e-14);
        const ScalarFn s = fn::translate(b, 3.0);
        CHECK(std::abs(s(4.2) - b(1.2)) < 1e-15);
    }
}

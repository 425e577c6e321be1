#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "schurlab/errors.hpp"
#include "schurlab/schatten.hpp"

using namespace schurlab;

TEST_SUITE("schatten") {
    TEST_CASE("singular values agree with the x^* x eigen route") {
        std::mt19937_64 rng(21);
        for (int trial = 0; trial < 20; ++trial) {
            const Matrix x = oracle::random_matrix(rng, 3 + trial % 9);
            const auto s = singular_values(x);
            const auto ref = oracle::singular_values_eig(x);
            REQUIRE(s.size() == ref.size());
            for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - ref[i]) < 1e-9 * (1.0 + ref[0]));
            for (double p : {1.0, 1.5, 2.0, 3.0, kInf})
                CHECK(schatten_norm(x, p) == doctest::Approx(oracle::schatten_eig(x, p)).epsilon(1e-9));
            // Frobenius is S_2.
            CHECK(schatten_norm(x, 2.0) == doctest::Approx(x.norm()).epsilon(1e-12));
        }
    }

    TEST_CASE("diagonal matrices give l^p norms") {
        Matrix d = Matrix::Zero(4, 4);
        d(0, 0) = 3.0;
        d(1, 1) = complex(0.0, -4.0);
        d(3, 3) = 1.0;
        CHECK(schatten_norm(d, 1.0) == doctest::Approx(8.0));
        CHECK(schatten_norm(d, 2.0) == doctest::Approx(std::sqrt(26.0)));
        CHECK(schatten_norm(d, kInf) == doctest::Approx(4.0));
        CHECK(schatten_norm(d, 0.5) == doctest::Approx(std::pow(std::sqrt(3.0) + 2.0 + 1.0, 2.0)));
        CHECK(schatten_norm(Matrix::Zero(3, 3), 0.5) == 0.0);
    }

    TEST_CASE("tiny and huge scales do not under- or overflow") {
        Matrix x = Matrix::Identity(5, 5);
        CHECK(schatten_norm(x * 1e-200, 0.25) == doctest::Approx(1e-200 * std::pow(5.0, 4.0)));
        CHECK(schatten_norm(x * 1e200, 4.0) == doctest::Approx(1e200 * std::pow(5.0, 0.25)));
    }

    TEST_CASE("unitary invariance") {
        std::mt19937_64 rng(22);
        for (int trial = 0; trial < 10; ++trial) {
            const Matrix x = oracle::random_matrix(rng, 8);
            const Matrix u = oracle::random_unitary(rng, 8), v = oracle::random_unitary(rng, 8);
            for (double p : {0.5, 1.0, 2.0, kInf})
                CHECK(schatten_norm(u * x * v, p) == doctest::Approx(schatten_norm(x, p)).epsilon(1e-10));
        }
    }

    TEST_CASE("inequalities on random matrices") {
        std::mt19937_64 rng(23);
        for (int trial = 0; trial < 30; ++trial) {
            const Matrix x = oracle::random_matrix(rng, 6), y = oracle::random_matrix(rng, 6);
            for (double p : {1.0, 2.0, 4.0, kInf})
                CHECK(schatten_norm(x + y, p) <= (schatten_norm(x, p) + schatten_norm(y, p)) * (1 + 1e-12));
            for (double p : {0.25, 0.5, 0.75}) {
                const double lhs = std::pow(schatten_norm(x + y, p), p);
                CHECK(lhs <= (std::pow(schatten_norm(x, p), p) + std::pow(schatten_norm(y, p), p)) * (1 + 1e-12));
            }
            for (double p1 : {1.0, 2.0, 3.0, kInf})
                for (double p2 : {1.0, 2.0, kInf}) {
                    const double p = holder_combine({p1, p2});
                    CHECK(schatten_norm(x * y, p) <= schatten_norm(x, p1) * schatten_norm(y, p2) * (1 + 1e-12));
                }
        }
    }

    TEST_CASE("hoelder combination and sharp exponent") {
        CHECK(holder_combine({2.0, 2.0}) == doctest::Approx(1.0));
        CHECK(holder_combine({1.0, kInf}) == doctest::Approx(1.0));
        CHECK(holder_combine({kInf, kInf}) == kInf);
        CHECK(holder_combine({3.0, 3.0, 3.0}) == doctest::Approx(1.0));
        CHECK_THROWS_AS(static_cast<void>(holder_combine({2.0, -1.0})), InvalidArgument);
        CHECK(*sharp_exponent(0.5) == doctest::Approx(1.0));
        CHECK(*sharp_exponent(0.75) == doctest::Approx(3.0));
        CHECK(*sharp_exponent(1.0) == kInf);
        CHECK_FALSE(sharp_exponent(1.5).has_value());
    }

    TEST_CASE("exponent regimes") {
        CHECK(ExponentTuple{2.0, 2.0}.in_main_regime());
        CHECK(ExponentTuple{2.0, 2.0}.p() == doctest::Approx(1.0));
        CHECK(ExponentTuple{3.0, 3.0, 3.0}.in_main_regime());
        CHECK(ExponentTuple{1.0, 1.0}.in_main_regime());
        CHECK(ExponentTuple{2.0, 2.0, 2.0}.in_main_regime());
        CHECK(ExponentTuple{1.0}.in_main_regime());
        CHECK_FALSE(ExponentTuple{2.0}.in_main_regime());
        CHECK(ExponentTuple{2.0}.regime() == "banach");
        CHECK(ExponentTuple{4.0, 4.0}.regime() == "banach");
        // p = 1/3 and the head (1;1) has combination 1/2.
        CHECK(ExponentTuple{1.0, 1.0, 1.0}.regime() == "quasi-banach");
        CHECK_FALSE(ExponentTuple{kInf, 1.0}.in_main_regime());
        CHECK(ExponentTuple{0.5, 2.0}.regime() == "quasi-banach");
        CHECK_THROWS_AS(ExponentTuple(std::vector<double>{}), InvalidArgument);
    }

    TEST_CASE("pinching") {
        std::mt19937_64 rng(24);
        const Matrix x = oracle::random_matrix(rng, 7);
        const auto part = BlockPartition::uniform(7, 3);
        REQUIRE(part.blocks().size() == 3);
        const Matrix e = block_expectation(x, part);
        CHECK(e(0, 2) == x(0, 2));
        CHECK(e(0, 3) == complex(0.0, 0.0));
        CHECK(e(6, 6) == x(6, 6));
        CHECK(e(5, 6) == complex(0.0, 0.0));
        // Idempotent.
        CHECK((block_expectation(e, part) - e).norm() == 0.0);
        for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) CHECK(schatten_norm(e, p) <= schatten_norm(x, p) * (1 + 1e-12));
        // Uncovered indices are dropped.
        const Matrix partial = block_expectation(x, BlockPartition({{1, 3}}));
        CHECK(partial(0, 0) == complex(0.0, 0.0));
        CHECK(partial(2, 1) == x(2, 1));

        CHECK_THROWS_AS(static_cast<void>(block_expectation(x, BlockPartition({{5, 9}}))), IndexOutOfRange);
        CHECK_THROWS_AS(BlockPartition({{0, 3}, {2, 4}}), InvalidArgument);
        CHECK_THROWS_AS(static_cast<void>(BlockPartition::uniform(4, 0)), InvalidArgument);
    }

    TEST_CASE("kernel matrix validation") {
        CHECK_THROWS_AS(KernelMatrix(Matrix::Zero(2, 3)), DimensionMismatch);
        CHECK_THROWS_AS(KernelMatrix(Matrix::Zero(2, 2), {0.0, 0.0}), InvalidArgument);
        CHECK_THROWS_AS(KernelMatrix(Matrix::Zero(2, 2), {0.0}), DimensionMismatch);
        Matrix bad = Matrix::Zero(2, 2);
        bad(0, 1) = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(KernelMatrix{bad}, InvalidArgument);
        CHECK_THROWS_AS(static_cast<void>(svd(bad)), NumericalFailure);
        CHECK_THROWS_AS(static_cast<void>(schatten_norm(Matrix::Identity(2, 2), 0.0)), InvalidArgument);
    }
}

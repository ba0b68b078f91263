#include <gtest/gtest.h>

#include <cmath>

#include "proxyvote/dense_solver.hpp"
#include "proxyvote/errors.hpp"
#include "proxyvote/random_stream.hpp"

using namespace proxyvote;

TEST(DenseSolver, SolvesSmallSystem) {
    // 2x + y = 5, x + 3y = 10  ->  x = 1, y = 3
    DenseMatrix a(2, 2);
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 3;
    DenseMatrix b(2, 1);
    b(0, 0) = 5;
    b(1, 0) = 10;
    const auto x = solve_dense(a, b);
    EXPECT_NEAR(x(0, 0), 1.0, 1e-14);
    EXPECT_NEAR(x(1, 0), 3.0, 1e-14);
}

TEST(DenseSolver, NeedsPivoting) {
    // Zero on the leading diagonal.
    DenseMatrix a(3, 3);
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(2, 2) = 2;
    DenseMatrix b(3, 2);
    b(0, 0) = 4;
    b(1, 0) = 5;
    b(2, 0) = 6;
    b(0, 1) = -1;
    const auto x = solve_dense(a, b);
    EXPECT_NEAR(x(0, 0), 5.0, 1e-15);
    EXPECT_NEAR(x(1, 0), 4.0, 1e-15);
    EXPECT_NEAR(x(2, 0), 3.0, 1e-15);
    EXPECT_NEAR(x(1, 1), -1.0, 1e-15);
}

TEST(DenseSolver, RandomSystemsHaveSmallResidual) {
    RandomStream rng(8);
    for (std::size_t n : {1u, 5u, 40u, 120u}) {
        DenseMatrix a(n, n);
        DenseMatrix b(n, 3);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) a(i, j) = rng.uniform01() - 0.5;
            a(i, i) += 2.0;
            for (std::size_t j = 0; j < 3; ++j) b(i, j) = rng.uniform01();
        }
        const auto x = solve_dense(a, b);
        const auto ax = multiply(a, x);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(ax(i, j), b(i, j), 1e-11);
        }
    }
}

TEST(DenseSolver, SingularThrows) {
    DenseMatrix a(2, 2);
    a(0, 0) = 1;
    a(0, 1) = 2;
    a(1, 0) = 2;
    a(1, 1) = 4;
    EXPECT_THROW(solve_dense(a, DenseMatrix(2, 1, 1.0)), SingularSystemError);
}

TEST(DenseSolver, ShapeMismatchRejected) {
    EXPECT_THROW(solve_dense(DenseMatrix(2, 3), DenseMatrix(2, 1)), InvalidInput);
    EXPECT_THROW(solve_dense(DenseMatrix(2, 2), DenseMatrix(3, 1)), InvalidInput);
}

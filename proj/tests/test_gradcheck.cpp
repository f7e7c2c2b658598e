#include <gtest/gtest.h>

#include <cmath>

#include "sact/gradcheck.hpp"
#include "sact/rng.hpp"

using namespace sact;

TEST(FiniteDiff, QuadraticAtThree) {
  auto f = [](const Tensor& x) { return x[0] * x[0]; };
  auto r = finite_diff_grad(f, Tensor({1}, {3.0}));
  EXPECT_NEAR(r.grad[0], 6.0, 1e-6);
  EXPECT_FALSE(r.kink[0]);
}

TEST(FiniteDiff, ReluAwayFromKink) {
  auto f = [](const Tensor& x) { return std::max(x[0], 0.0); };
  auto r = finite_diff_grad(f, Tensor({1}, {2.0}));
  EXPECT_NEAR(r.grad[0], 1.0, 1e-6);
  EXPECT_FALSE(r.kink[0]);
}

TEST(FiniteDiff, AbsAtZeroFlaggedAsKink) {
  auto f = [](const Tensor& x) { return std::fabs(x[0]); };
  auto r = finite_diff_grad(f, Tensor({1}, {0.0}));
  EXPECT_TRUE(r.kink[0]);
}

TEST(FiniteDiff, CubicPolynomialsMatchAnalytic) {
  // f(x) = 2x^3 - x^2 + 0.5x - 4, f' = 6x^2 - 2x + 0.5
  auto f = [](const Tensor& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      s += 2.0 * x[i] * x[i] * x[i] - x[i] * x[i] + 0.5 * x[i] - 4.0;
    return s;
  };
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Tensor x({4});
    for (std::size_t i = 0; i < 4; ++i) x[i] = rng.uniform(-3.0, 3.0);
    auto r = finite_diff_grad(f, x);
    for (std::size_t i = 0; i < 4; ++i) {
      const double expect = 6.0 * x[i] * x[i] - 2.0 * x[i] + 0.5;
      ASSERT_TRUE(grad_close(expect, r.grad[i], 1e-6))
          << "x=" << x[i] << " analytic=" << expect << " fd=" << r.grad[i];
      ASSERT_FALSE(r.kink[i]);
    }
  }
}

TEST(FiniteDiff, MultiCoordinateGradient) {
  // f(x, y) = x * y + y^2
  auto f = [](const Tensor& x) { return x[0] * x[1] + x[1] * x[1]; };
  auto r = finite_diff_grad(f, Tensor({2}, {2.0, -1.5}));
  EXPECT_TRUE(grad_close(-1.5, r.grad[0], 1e-6));
  EXPECT_TRUE(grad_close(2.0 - 3.0, r.grad[1], 1e-6));
}

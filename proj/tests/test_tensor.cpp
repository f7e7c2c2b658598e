#include <gtest/gtest.h>

#include <cmath>

#include "sact/rng.hpp"
#include "sact/tensor.hpp"

using namespace sact;

TEST(Tensor, ShapeDataInvariant) {
  Tensor t({2, 3});
  EXPECT_EQ(t.size(), 6u);
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0, 3.0}), DimensionError);
}

TEST(Matmul, IdentityCase) {
  Tensor eye({2, 2}, {1, 0, 0, 1});
  Tensor a({2, 2}, {1, 2, 3, 4});
  Tensor r = matmul(eye, a);
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(r[i], a[i]);
}

TEST(Matmul, HandArithmetic) {
  Tensor a({2, 2}, {1, 2, 3, 4});
  Tensor b({2, 1}, {1, 1});
  Tensor r = matmul(a, b);
  EXPECT_DOUBLE_EQ(r[0], 3.0);
  EXPECT_DOUBLE_EQ(r[1], 7.0);
}

TEST(Matmul, DimensionMismatch) {
  Tensor a({2, 3});
  Tensor b({2, 2});
  EXPECT_THROW(matmul(a, b), DimensionError);
}

TEST(Conv2d, OneByOneKernelScales) {
  Tensor in({1, 1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  Tensor k({1, 1, 1, 1}, {2.0});
  Tensor out = conv2d(in, k, 1, 0);
  ASSERT_EQ(out.size(), 9u);
  for (std::size_t i = 0; i < 9; ++i) EXPECT_DOUBLE_EQ(out[i], 2.0 * in[i]);
}

TEST(Conv2d, AllOnesKernelSums) {
  Tensor in({1, 1, 2, 2}, {1, 2, 3, 4});
  Tensor k({1, 1, 2, 2}, {1, 1, 1, 1});
  Tensor out = conv2d(in, k, 1, 0);
  ASSERT_EQ(out.shape(), (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_DOUBLE_EQ(out[0], 10.0);
}

TEST(Conv2d, KernelLargerThanPaddedInput) {
  Tensor in({1, 1, 2, 2});
  Tensor k({1, 1, 5, 5});
  EXPECT_THROW(conv2d(in, k, 1, 0), DimensionError);
}

TEST(Conv2d, ChannelMismatch) {
  Tensor in({1, 2, 4, 4});
  Tensor k({1, 3, 3, 3});
  EXPECT_THROW(conv2d(in, k, 1, 0), DimensionError);
}

namespace {

// Quadruple-loop brute-force definition used as the oracle.
Tensor conv2d_naive(const Tensor& in, const Tensor& kern, int stride, int pad) {
  const std::size_t n = in.dim(0), c = in.dim(1), h = in.dim(2), w = in.dim(3);
  const std::size_t o = kern.dim(0), kh = kern.dim(2), kw = kern.dim(3);
  const std::size_t oh = (h + 2 * pad - kh) / stride + 1;
  const std::size_t ow = (w + 2 * pad - kw) / stride + 1;
  Tensor out({n, o, oh, ow});
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t f = 0; f < o; ++f)
      for (std::size_t oy = 0; oy < oh; ++oy)
        for (std::size_t ox = 0; ox < ow; ++ox) {
          double acc = 0.0;
          for (std::size_t ic = 0; ic < c; ++ic)
            for (std::size_t ky = 0; ky < kh; ++ky)
              for (std::size_t kx = 0; kx < kw; ++kx) {
                const long iy = static_cast<long>(oy * stride + ky) - pad;
                const long ix = static_cast<long>(ox * stride + kx) - pad;
                if (iy < 0 || ix < 0 || iy >= static_cast<long>(h) ||
                    ix >= static_cast<long>(w))
                  continue;
                acc += in[((b * c + ic) * h + iy) * w + ix] *
                       kern[((f * c + ic) * kh + ky) * kw + kx];
              }
          out[((b * o + f) * oh + oy) * ow + ox] = acc;
        }
  return out;
}

Tensor random_tensor(std::vector<std::size_t> shape, Rng& rng) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-1.0, 1.0);
  return t;
}

}  // namespace

TEST(Conv2d, MatchesNaiveOracleOnRandomInstances) {
  Rng rng(20240901);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.uniform_int(2);
    const std::size_t c = 1 + rng.uniform_int(3);
    const std::size_t o = 1 + rng.uniform_int(3);
    const std::size_t k = 1 + rng.uniform_int(3);
    const std::size_t h = k + rng.uniform_int(5);
    const std::size_t w = k + rng.uniform_int(5);
    const int stride = 1 + static_cast<int>(rng.uniform_int(2));
    const int pad = static_cast<int>(rng.uniform_int(2));
    Tensor in = random_tensor({n, c, h, w}, rng);
    Tensor kern = random_tensor({o, c, k, k}, rng);
    Tensor fast = conv2d(in, kern, stride, pad);
    Tensor slow = conv2d_naive(in, kern, stride, pad);
    ASSERT_EQ(fast.shape(), slow.shape());
    for (std::size_t i = 0; i < fast.size(); ++i)
      ASSERT_LT(std::fabs(fast[i] - slow[i]), 1e-10);
  }
}

TEST(Conv2d, SpecExampleRandomInstance) {
  Rng rng(7);
  Tensor in = random_tensor({1, 3, 5, 5}, rng);
  Tensor kern = random_tensor({2, 3, 3, 3}, rng);
  Tensor fast = conv2d(in, kern, 1, 0);
  Tensor slow = conv2d_naive(in, kern, 1, 0);
  for (std::size_t i = 0; i < fast.size(); ++i)
    ASSERT_LT(std::fabs(fast[i] - slow[i]), 1e-10);
}

TEST(Softmax, SymmetryCase) {
  Tensor r = softmax(Tensor({2}, {0.0, 0.0}));
  EXPECT_DOUBLE_EQ(r[0], 0.5);
  EXPECT_DOUBLE_EQ(r[1], 0.5);
}

TEST(Softmax, DirectEvaluation) {
  Tensor r = softmax(Tensor({3}, {1.0, 2.0, 3.0}));
  EXPECT_NEAR(r[0], 0.09003057317038046, 1e-12);
  EXPECT_NEAR(r[1], 0.24472847105479767, 1e-12);
  EXPECT_NEAR(r[2], 0.66524095577482183, 1e-12);
}

TEST(Softmax, ShiftInvarianceWithoutOverflow) {
  Tensor r = softmax(Tensor({2}, {3.0, 1003.0}));
  EXPECT_NEAR(r[0], 0.0, 1e-9);
  EXPECT_NEAR(r[1], 1.0, 1e-9);
  EXPECT_TRUE(r.all_finite());

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    Tensor x({5});
    for (std::size_t i = 0; i < 5; ++i) x[i] = rng.uniform(-4.0, 4.0);
    const double c = rng.uniform(-100.0, 100.0);
    Tensor shifted = x;
    for (std::size_t i = 0; i < 5; ++i) shifted[i] += c;
    Tensor a = softmax(x), b = softmax(shifted);
    double sum = 0.0;
    for (std::size_t i = 0; i < 5; ++i) {
      EXPECT_NEAR(a[i], b[i], 1e-9);
      EXPECT_GT(a[i], 0.0);
      sum += a[i];
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(CrossEntropy, DirectEvaluation) {
  auto r = cross_entropy(Tensor({2}, {0.5, 0.5}), 0);
  EXPECT_NEAR(r.loss, 0.69314718055994531, 1e-12);
  EXPECT_FALSE(r.clamped);
}

TEST(CrossEntropy, PerfectPredictionIsZeroLoss) {
  auto r = cross_entropy(Tensor({3}, {0.0, 1.0, 0.0}), 1);
  EXPECT_DOUBLE_EQ(r.loss, 0.0);
}

TEST(CrossEntropy, ZeroProbabilityClampsAndFlags) {
  auto r = cross_entropy(Tensor({3}, {0.0, 1.0, 0.0}), 0);
  EXPECT_TRUE(r.clamped);
  EXPECT_NEAR(r.loss, -std::log(1e-12), 1e-6);
}

TEST(CrossEntropy, FusedGradient) {
  Tensor probs = softmax(Tensor({3}, {1.0, 2.0, 3.0}));
  Tensor g = softmax_xent_grad(probs, 2);
  EXPECT_NEAR(g[0], 0.0900, 5e-5);
  EXPECT_NEAR(g[1], 0.2447, 5e-5);
  EXPECT_NEAR(g[2], -0.3348, 5e-5);
}

TEST(CrossEntropy, LabelOutOfRange) {
  EXPECT_THROW(cross_entropy(Tensor({2}, {0.5, 0.5}), 2), ContractViolation);
}

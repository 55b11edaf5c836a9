#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "fringe/layers.hpp"
#include "oracles.hpp"

using namespace fringe;

namespace {

Tensor random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (auto& v : t.values()) v = scale * standard_normal(rng);
  return t;
}

double dot(const Tensor& a, const Tensor& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Checks input and parameter gradients of the scalar sum(forward(x) * r)
// against central differences.
void check_gradients(Layer& layer, Tensor x, Mode mode, double tol = 1e-6) {
  Rng rng(99);
  const Tensor y0 = layer.forward(x, mode);
  const Tensor r = random_tensor(y0.shape(), rng);
  std::vector<Parameter*> params;
  layer.collect_parameters(params);
  for (auto* p : params) p->grad.fill(0.0);

  layer.forward(x, mode);
  const Tensor gx = layer.backward(r);

  auto loss = [&] { return dot(layer.forward(x, mode), r); };
  const auto nx = oracle::central_difference(loss, x.values());
  for (std::size_t i = 0; i < nx.size(); ++i) ASSERT_TRUE(oracle::close(gx[i], nx[i], tol, tol)) << "input " << i << ": " << gx[i] << " vs " << nx[i];
  for (auto* p : params) {
    const Tensor analytic = p->grad;
    const auto np = oracle::central_difference(loss, p->value.values());
    for (std::size_t i = 0; i < np.size(); ++i)
      ASSERT_TRUE(oracle::close(analytic[i], np[i], tol, tol)) << p->name << "[" << i << "]: " << analytic[i] << " vs " << np[i];
  }
}

}  // namespace

TEST(Conv2d, MatchesDirectLoopConvolution) {
  Rng rng(1);
  for (auto [k, stride, pad] : {std::tuple{3, 1, 1}, std::tuple{3, 2, 1}, std::tuple{1, 2, 0}, std::tuple{7, 2, 3}}) {
    Conv2d conv("c", 3, 4, k, stride, pad, true, rng);
    std::vector<Parameter*> params;
    conv.collect_parameters(params);
    ASSERT_EQ(params.size(), 2u);
    for (auto& v : params[1]->value.values()) v = standard_normal(rng);
    const Tensor x = random_tensor({2, 3, 9, 9}, rng);
    const Tensor y = conv.forward(x, Mode::train);
    const Tensor expect = oracle::conv2d(x, params[0]->value, &params[1]->value, k, stride, pad);
    ASSERT_EQ(y.shape(), expect.shape());
    for (std::size_t i = 0; i < y.size(); ++i) ASSERT_NEAR(y[i], expect[i], 1e-10);
  }
}

TEST(Conv2d, GradientsMatchFiniteDifferences) {
  Rng rng(2);
  Conv2d conv("c", 2, 3, 3, 2, 1, true, rng);
  check_gradients(conv, random_tensor({2, 2, 5, 5}, rng), Mode::train);
}

TEST(Conv2d, ReplicatePaddingEqualsEdgeExtendedInput) {
  Rng rng(12);
  Conv2d padded("c", 2, 3, 3, 2, 1, false, rng, PaddingMode::replicate);
  std::vector<Parameter*> params;
  padded.collect_parameters(params);
  const Tensor x = random_tensor({1, 2, 6, 6}, rng);
  Tensor extended({1, 2, 8, 8});
  for (int c = 0; c < 2; ++c)
    for (int r = 0; r < 8; ++r)
      for (int k = 0; k < 8; ++k)
        extended[(c * 8 + r) * 8 + k] = x[(c * 6 + std::clamp(r - 1, 0, 5)) * 6 + std::clamp(k - 1, 0, 5)];
  const Tensor y = padded.forward(x, Mode::train);
  const Tensor expect = oracle::conv2d(extended, params[0]->value, nullptr, 3, 2, 0);
  ASSERT_EQ(y.shape(), expect.shape());
  for (std::size_t i = 0; i < y.size(); ++i) ASSERT_NEAR(y[i], expect[i], 1e-10);
  check_gradients(padded, x, Mode::train);
}

TEST(Conv2d, NoBiasHasOneParameter) {
  Rng rng(3);
  Conv2d conv("c", 2, 3, 3, 1, 1, false, rng);
  std::vector<Parameter*> params;
  conv.collect_parameters(params);
  EXPECT_EQ(params.size(), 1u);
  EXPECT_EQ(params[0]->name, "c.weight");
}

TEST(BatchNorm2d, TrainModeNormalizesPerChannel) {
  Rng rng(4);
  BatchNorm2d bn("bn", 3);
  Tensor x = random_tensor({4, 3, 5, 5}, rng, 3.0);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] += 7.0;
  const Tensor y = bn.forward(x, Mode::train);
  for (int c = 0; c < 3; ++c) {
    double s = 0, s2 = 0;
    int n = 0;
    for (int b = 0; b < 4; ++b)
      for (int i = 0; i < 25; ++i) {
        const double v = y[(b * 3 + c) * 25 + i];
        s += v;
        s2 += v * v;
        ++n;
      }
    EXPECT_NEAR(s / n, 0.0, 1e-10);
    EXPECT_NEAR(s2 / n, 1.0, 1e-3);
  }
}

TEST(BatchNorm2d, GradientsMatchFiniteDifferences) {
  Rng rng(5);
  BatchNorm2d bn("bn", 2);
  std::vector<Parameter*> params;
  bn.collect_parameters(params);
  for (auto* p : params)
    for (auto& v : p->value.values()) v += 0.3 * standard_normal(rng);
  check_gradients(bn, random_tensor({3, 2, 3, 3}, rng), Mode::train, 1e-5);
}

TEST(BatchNorm2d, EvalModeUsesRunningStatistics) {
  Rng rng(6);
  BatchNorm2d bn("bn", 1, 0.1, 0.0);
  std::vector<NamedTensor> buffers;
  bn.collect_buffers(buffers);
  ASSERT_EQ(buffers.size(), 2u);
  (*buffers[0].second)[0] = 2.0;
  (*buffers[1].second)[0] = 4.0;
  Tensor x({1, 1, 1, 2});
  x[0] = 4.0;
  x[1] = 0.0;
  const Tensor y = bn.forward(x, Mode::eval);
  EXPECT_NEAR(y[0], 1.0, 1e-12);
  EXPECT_NEAR(y[1], -1.0, 1e-12);
  EXPECT_EQ((*buffers[0].second)[0], 2.0);
  check_gradients(bn, random_tensor({2, 1, 2, 2}, rng), Mode::eval);
}

TEST(BatchNorm2d, RunningStatisticsFollowMomentum) {
  BatchNorm2d bn("bn", 1, 0.1);
  std::vector<NamedTensor> buffers;
  bn.collect_buffers(buffers);
  Tensor x({1, 1, 1, 2});
  x[0] = 1.0;
  x[1] = 3.0;
  bn.forward(x, Mode::train);
  EXPECT_NEAR((*buffers[0].second)[0], 0.1 * 2.0, 1e-12);
  // Unbiased batch variance (2) blended into the initial 1.
  EXPECT_NEAR((*buffers[1].second)[0], 0.9 + 0.1 * 2.0, 1e-12);
}

TEST(Linear, ForwardAndGradients) {
  Rng rng(7);
  Linear lin("fc", 4, 3, true, rng);
  const Tensor x = random_tensor({5, 4}, rng);
  const Tensor y = lin.forward(x, Mode::train);
  for (int n = 0; n < 5; ++n)
    for (int o = 0; o < 3; ++o) {
      double s = (*lin.bias()).value[o];
      for (int i = 0; i < 4; ++i) s += x[n * 4 + i] * lin.weight().value[o * 4 + i];
      EXPECT_NEAR(y[n * 3 + o], s, 1e-12);
    }
  check_gradients(lin, x, Mode::train);
}

TEST(MaxPool2d, ForwardAndGradients) {
  Rng rng(8);
  MaxPool2d pool(3, 2, 1);
  const Tensor x = random_tensor({2, 2, 6, 6}, rng);
  const Tensor y = pool.forward(x, Mode::train);
  ASSERT_EQ(y.shape(), (std::vector<int>{2, 2, 3, 3}));
  for (int nc = 0; nc < 4; ++nc)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) {
        double m = -1e300;
        for (int dr = -1; dr <= 1; ++dr)
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = 2 * r + dr, cc = 2 * c + dc;
            if (rr >= 0 && rr < 6 && cc >= 0 && cc < 6) m = std::max(m, x[nc * 36 + rr * 6 + cc]);
          }
        EXPECT_EQ(y[nc * 9 + r * 3 + c], m);
      }
  check_gradients(pool, x, Mode::train);
}

TEST(Relu, Gradients) {
  Rng rng(9);
  Relu relu;
  check_gradients(relu, random_tensor({3, 7}, rng), Mode::train);
}

TEST(ResidualBlock, Gradients) {
  Rng rng(10);
  Sequential main, shortcut;
  main.add<Conv2d>("a", 2, 3, 3, 2, 1, false, rng);
  main.add<BatchNorm2d>("abn", 3);
  shortcut.add<Conv2d>("s", 2, 3, 1, 2, 0, false, rng);
  ResidualBlock block(std::move(main), std::move(shortcut));
  check_gradients(block, random_tensor({2, 2, 4, 4}, rng), Mode::train, 1e-5);
}

TEST(GlobalAveragePool, MeanAndBackward) {
  Rng rng(11);
  const Tensor x = random_tensor({2, 3, 4, 4}, rng);
  const Tensor y = global_average_pool(x);
  ASSERT_EQ(y.shape(), (std::vector<int>{2, 3}));
  for (int nc = 0; nc < 6; ++nc) {
    double s = 0;
    for (int i = 0; i < 16; ++i) s += x[nc * 16 + i];
    EXPECT_NEAR(y[nc], s / 16, 1e-12);
  }
  Tensor g({2, 3}, 1.0);
  const Tensor gx = global_average_pool_backward(g, x.shape());
  for (std::size_t i = 0; i < gx.size(); ++i) EXPECT_EQ(gx[i], 1.0 / 16);
}

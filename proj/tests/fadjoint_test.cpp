#include <gtest/gtest.h>

#include <random>

#include "fadjoint/deltarule.hpp"
#include "fadjoint/fadjoint.hpp"
#include "fadjoint/fsym.hpp"
#include "fadjoint/gradcheck.hpp"
#include "support/test_support.hpp"

using namespace fadjoint;

namespace {

Network e1() {
  return Network({{1, 1, 1}, BiasMode::augmented, ActivationKind::identity},
                 {Matrix{{2.0, 1.0}}, Matrix{{3.0, -1.0}}});
}

Network e2() {
  return Network({{1, 2, 1}, BiasMode::augmented, ActivationKind::identity},
                 {Matrix{{1.0, 0.0}, {-1.0, 1.0}}, Matrix{{1.0, 2.0, 0.5}}});
}

const std::vector<ActivationKind> kSmooth{ActivationKind::identity, ActivationKind::sigmoid,
                                          ActivationKind::tanh};

Vector combine(double a, const Vector& u, double b, const Vector& v) {
  Vector w(u.dim());
  for (std::size_t i = 0; i < u.dim(); ++i) w[i] = a * u[i] + b * v[i];
  return w;
}

}  // namespace

TEST(FAdjoint, WorkedExampleA111) {
  const Network net = e1();
  const FPropagation f = forward(net, Vector{0.5});
  const FAdjoint a = fadjoint_pass(net, f, Vector{1.0});
  EXPECT_EQ(a.xstar(2), (Vector{1.0}));
  EXPECT_EQ(a.ystar(2), (Vector{1.0}));
  EXPECT_EQ(a.xstar(1), (Vector{3.0}));
  EXPECT_EQ(a.ystar(1), (Vector{3.0}));
  EXPECT_EQ(a.xstar(0), (Vector{6.0}));

  const GradientSet g = weight_gradients(f, a);
  EXPECT_EQ(g.layer(2), (Matrix{{2.0, 1.0}}));
  EXPECT_EQ(g.layer(1), (Matrix{{1.5, 3.0}}));
}

TEST(FAdjoint, WorkedExampleA121) {
  const Network net = e2();
  const FPropagation f = forward(net, Vector{1.0});
  const FAdjoint a = fadjoint_pass(net, f, Vector{1.0});
  EXPECT_EQ(a.ystar(2), (Vector{1.0}));
  EXPECT_EQ(a.xstar(1), (Vector{1.0, 2.0}));
  EXPECT_EQ(a.ystar(1), (Vector{1.0, 2.0}));
  EXPECT_EQ(a.xstar(0), (Vector{-1.0}));

  const GradientSet g = weight_gradients(f, a);
  EXPECT_EQ(g.layer(2), (Matrix{{1.0, 0.0, 1.0}}));
  EXPECT_EQ(g.layer(1), (Matrix{{1.0, 1.0}, {2.0, 2.0}}));
}

TEST(FAdjoint, RecordOrderFollowsBackwardSweep) {
  const Network net = e2();
  const FPropagation f = forward(net, Vector{1.0});
  const FAdjoint a = fadjoint_pass(net, f, Vector{1.0});
  ASSERT_EQ(a.ystars.size(), 2u);
  EXPECT_EQ(a.ystars.front(), a.ystar(2));
  EXPECT_EQ(a.xstars.back(), a.xstar(0));
}

TEST(FAdjoint, ZeroSeedGivesZeroGradients) {
  const Network net = e2();
  const FPropagation f = forward(net, Vector{0.3});
  EXPECT_EQ(weight_gradients(f, fadjoint_pass(net, f, Vector{0.0})), GradientSet::zeros_like(net));
}

TEST(FAdjoint, OrthogonalIdentitySeededWithOutputRetracesForward) {
  const Network net = orthogonal_network(4, 3, 5);
  const Vector x{0.1, -0.7, 2.0, 0.4};
  const FPropagation f = forward(net, x);
  const FAdjoint a = fadjoint_pass(net, f, output(f));
  for (std::size_t h = 0; h <= 3; ++h) EXPECT_LE(max_abs_diff(a.xstar(h), f.x(h)), 1e-12);
  for (std::size_t h = 1; h <= 3; ++h) EXPECT_LE(max_abs_diff(a.ystar(h), f.y(h)), 1e-12);
}

TEST(FAdjoint, AugmentedAdjointDropsBiasCoordinate) {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = testkit::random_case(rng, kSmooth);
    const FPropagation f = forward(c.net, c.input);
    const FAdjoint a = fadjoint_pass(c.net, f, testkit::random_vector(c.net.arch().output_dim(), rng));
    const Architecture& arch = c.net.arch();
    for (std::size_t h = 0; h <= arch.depth(); ++h) {
      const std::size_t want =
          arch.bias_mode == BiasMode::augmented ? arch.layer_sizes[h] : f.x(h).dim();
      EXPECT_EQ(a.xstar(h).dim(), want);
      if (h > 0) EXPECT_EQ(a.ystar(h).dim(), arch.layer_sizes[h]);
    }
    // Last column of dW^h multiplies the constant 1, so it is Y^h_* itself.
    if (arch.bias_mode == BiasMode::augmented) {
      const GradientSet g = weight_gradients(f, a);
      for (std::size_t h = 1; h <= arch.depth(); ++h) {
        const Matrix& gh = g.layer(h);
        for (std::size_t i = 0; i < gh.rows(); ++i) EXPECT_EQ(gh(i, gh.cols() - 1), a.ystar(h)[i]);
      }
    }
  }
}

TEST(FAdjoint, MismatchedInputsAreRejected) {
  const Network net = e2();
  const FPropagation f = forward(net, Vector{1.0});
  EXPECT_THROW(fadjoint_pass(net, f, Vector{1.0, 1.0}), DimensionError);
  EXPECT_THROW(fadjoint_pass(e1(), f, Vector{1.0}), DimensionError);
  const FPropagation f1 = forward(e1(), Vector{1.0});
  const FAdjoint a1 = fadjoint_pass(e1(), f1, Vector{1.0});
  EXPECT_THROW(weight_gradients(f, a1), DimensionError);
}

TEST(FAdjoint, LossSeeds) {
  EXPECT_EQ(loss_seed(LossKind::elementary, Vector{5.0, 2.0}, Vector{1.0, 1.0}), Vector(2, 1.0));
  EXPECT_EQ(loss_seed(LossKind::mse, Vector{5.0, 2.0}, Vector{1.0, 1.0}), (Vector{4.0, 1.0}));
  EXPECT_EQ(loss_value(LossKind::elementary, Vector{5.0, 2.0}, Vector{1.0, 1.0}), 5.0);
  EXPECT_EQ(loss_value(LossKind::mse, Vector{5.0, 2.0}, Vector{1.0, 1.0}), 8.5);
  EXPECT_THROW(loss_value(LossKind::mse, Vector{1.0}, Vector{1.0, 2.0}), DimensionError);
  EXPECT_EQ(parse_loss("mse"), LossKind::mse);
  EXPECT_THROW(parse_loss("hinge"), std::invalid_argument);
}

TEST(FAdjoint, GradientWithElementaryLoss) {
  const GradientResult r = gradient(e1(), Vector{0.5}, Vector{2.0}, LossKind::elementary);
  EXPECT_EQ(r.loss, 3.0);
  EXPECT_EQ(r.gradients.layer(1), (Matrix{{1.5, 3.0}}));
  EXPECT_EQ(r.gradients.layer(2), (Matrix{{2.0, 1.0}}));
}

TEST(FAdjoint, GradientWithZeroResidual) {
  const GradientResult r = gradient(e1(), Vector{0.5}, Vector{5.0}, LossKind::mse);
  EXPECT_EQ(r.loss, 0.0);
  EXPECT_EQ(r.gradients, GradientSet::zeros_like(e1()));
}

TEST(FAdjoint, DepthOneClosedForm) {
  std::mt19937_64 rng(52);
  for (auto kind : kSmooth) {
    const Architecture arch{{3, 2}, BiasMode::plain, kind};
    const Network net(arch, {testkit::random_matrix(2, 3, rng)});
    const Vector x = testkit::random_vector(3, rng);
    const Vector seed = testkit::random_vector(2, rng);
    const FPropagation f = forward(net, x);
    const GradientSet g = weight_gradients(f, fadjoint_pass(net, f, seed));
    const Matrix expected = outer(hadamard(seed, derivative(kind, f.y(1))), x);
    EXPECT_LE(max_abs_diff(g.layer(1), expected), 1e-15);
  }
}

TEST(FAdjointProperty, LinearInSeed) {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = testkit::random_case(rng, kSmooth);
    const FPropagation f = forward(c.net, c.input);
    const std::size_t n = c.net.arch().output_dim();
    const Vector s1 = testkit::random_vector(n, rng), s2 = testkit::random_vector(n, rng);
    const double alpha = coef(rng), beta = coef(rng);
    const FAdjoint a1 = fadjoint_pass(c.net, f, s1);
    const FAdjoint a2 = fadjoint_pass(c.net, f, s2);
    const FAdjoint mix = fadjoint_pass(c.net, f, combine(alpha, s1, beta, s2));
    for (std::size_t h = 0; h <= c.net.depth(); ++h) {
      const Vector expect = combine(alpha, a1.xstar(h), beta, a2.xstar(h));
      EXPECT_LE(max_abs_diff(mix.xstar(h), expect), 1e-12 * std::max(1.0, max_abs(expect)));
    }
    for (std::size_t h = 1; h <= c.net.depth(); ++h) {
      const Vector expect = combine(alpha, a1.ystar(h), beta, a2.ystar(h));
      EXPECT_LE(max_abs_diff(mix.ystar(h), expect), 1e-12 * std::max(1.0, max_abs(expect)));
    }
  }
}

TEST(FAdjointProperty, MatchesDeltaRule) {
  std::mt19937_64 rng(54);
  for (int trial = 0; trial < 100; ++trial) {
    const auto c = testkit::random_case(rng, kSmooth);
    const FPropagation f = forward(c.net, c.input);
    const Vector seed = loss_seed(LossKind::mse, output(f), c.target);
    const GradientSet a = weight_gradients(f, fadjoint_pass(c.net, f, seed));
    const GradientSet d = deltarule::backprop(c.net, f, seed);
    ASSERT_TRUE(a.congruent_with(c.net));
    for (std::size_t h = 1; h <= a.depth(); ++h) {
      for (std::size_t k = 0; k < a.layer(h).size(); ++k) {
        EXPECT_TRUE(testkit::relatively_equal(a.layer(h).data()[k], d.layer(h).data()[k], 1e-12));
      }
    }
  }
}

TEST(FAdjointProperty, MatchesFiniteDifferences) {
  std::mt19937_64 rng(55);
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = testkit::random_case(rng, kSmooth);
    const GradientSet a = gradient(c.net, c.input, c.target, LossKind::mse).gradients;
    const GradientSet n = numeric_gradient(c.net, c.input, c.target, LossKind::mse);
    const GradientReport r = compare(a, n, kDefaultAtol, kDefaultRtol);
    EXPECT_TRUE(r.pass) << describe(r);
  }
}

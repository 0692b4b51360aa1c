#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fadjoint/trainer.hpp"
#include "support/test_support.hpp"

using namespace fadjoint;

namespace {

Network e1() {
  return Network({{1, 1, 1}, BiasMode::augmented, ActivationKind::identity},
                 {Matrix{{2.0, 1.0}}, Matrix{{3.0, -1.0}}});
}

Dataset xor_data() {
  return Dataset({{Vector{0.0, 0.0}, Vector{0.0}},
                  {Vector{0.0, 1.0}, Vector{1.0}},
                  {Vector{1.0, 0.0}, Vector{1.0}},
                  {Vector{1.0, 1.0}, Vector{0.0}}});
}

Dataset line_data() {
  std::vector<Sample> samples;
  for (double x : {-1.0, -0.5, 0.0, 0.5, 1.0}) samples.push_back({Vector{x}, Vector{2.0 * x + 1.0}});
  return Dataset(std::move(samples));
}

}  // namespace

TEST(Trainer, ZeroRateLeavesNetworkUnchanged) {
  const StepResult r = sgd_step(e1(), {Vector{0.5}, Vector{1.0}}, 0.0, LossKind::mse);
  EXPECT_EQ(r.net, e1());
  EXPECT_EQ(r.loss, 8.0);
}

TEST(Trainer, ZeroResidualLeavesNetworkUnchanged) {
  const StepResult r = sgd_step(e1(), {Vector{0.5}, Vector{5.0}}, 0.3, LossKind::mse);
  EXPECT_EQ(r.net, e1());
  EXPECT_EQ(r.loss, 0.0);
}

TEST(Trainer, ElementaryLossStep) {
  const StepResult r = sgd_step(e1(), {Vector{0.5}, Vector{0.0}}, 0.1, LossKind::elementary);
  EXPECT_NEAR(r.net.weight(2)(0, 0), 2.8, 1e-15);
  EXPECT_NEAR(r.net.weight(2)(0, 1), -1.1, 1e-15);
  EXPECT_NEAR(r.net.weight(1)(0, 0), 2.0 - 0.15, 1e-15);
  EXPECT_NEAR(r.net.weight(1)(0, 1), 1.0 - 0.3, 1e-15);
}

TEST(Trainer, SingleEpochZeroRate) {
  const Network net = init({{2, 2, 1}, BiasMode::augmented, ActivationKind::sigmoid},
                           InitScheme::uniform(0.5), 3);
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  cfg.epochs = 1;
  const TrainResult r = train(net, xor_data(), cfg);
  EXPECT_EQ(r.net, net);
  ASSERT_EQ(r.history.size(), 1u);
  EXPECT_DOUBLE_EQ(r.history[0], mean_loss(net, xor_data(), LossKind::mse));
}

TEST(Trainer, XorConverges) {
  const Network net = init({{2, 2, 1}, BiasMode::augmented, ActivationKind::sigmoid},
                           InitScheme::uniform(0.5), 1);
  TrainConfig cfg;
  cfg.learning_rate = 0.5;
  cfg.epochs = 20000;
  cfg.shuffle_seed = 1;
  const TrainResult r = train(net, xor_data(), cfg);
  EXPECT_EQ(r.history.size(), 20000u);
  EXPECT_LT(r.history.back(), 0.05);
}

TEST(Trainer, LinearRegressionRecoversLine) {
  const Network net = init({{1, 1}, BiasMode::augmented, ActivationKind::identity},
                           InitScheme::zeros(), 0);
  TrainConfig cfg;
  cfg.learning_rate = 0.05;
  cfg.epochs = 500;
  cfg.shuffle_seed = 1;
  const TrainResult r = train(net, line_data(), cfg);
  EXPECT_NEAR(r.net.weight(1)(0, 0), 2.0, 1e-2);
  EXPECT_NEAR(r.net.weight(1)(0, 1), 1.0, 1e-2);
}

TEST(Trainer, DeterministicForFixedSeed) {
  const Network net = init({{2, 3, 1}, BiasMode::augmented, ActivationKind::tanh},
                           InitScheme::xavier(), 9);
  TrainConfig cfg;
  cfg.learning_rate = 0.2;
  cfg.epochs = 50;
  cfg.shuffle_seed = 4;
  const TrainResult a = train(net, xor_data(), cfg);
  const TrainResult b = train(net, xor_data(), cfg);
  EXPECT_EQ(a.net, b.net);
  EXPECT_EQ(a.history, b.history);
}

TEST(Trainer, CallbackFiresEveryLogInterval) {
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.epochs = 10;
  cfg.log_every = 4;
  std::vector<std::size_t> seen;
  train(init({{2, 2, 1}, BiasMode::augmented, ActivationKind::sigmoid}, InitScheme::xavier(), 1),
        xor_data(), cfg, [&](std::size_t epoch, double) { seen.push_back(epoch); });
  EXPECT_EQ(seen, (std::vector<std::size_t>{4, 8, 10}));
}

TEST(Trainer, RejectsBadConfigAndData) {
  TrainConfig cfg;
  cfg.epochs = 0;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  cfg.epochs = 1;
  cfg.learning_rate = -0.1;
  EXPECT_THROW(cfg.validate(), std::invalid_argument);
  EXPECT_THROW(Dataset({}), std::invalid_argument);
  EXPECT_THROW(Dataset({{Vector{1.0}, Vector{1.0}}, {Vector{1.0, 2.0}, Vector{1.0}}}),
               std::invalid_argument);
  TrainConfig ok;
  EXPECT_THROW(train(e1(), xor_data(), ok), DimensionError);
}

TEST(TrainerProperty, SmallStepsDoNotIncreaseLoss) {
  std::mt19937_64 rng(71);
  int violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto c = testkit::random_case(rng, {ActivationKind::sigmoid});
    const Sample s{c.input, c.target};
    const StepResult r = sgd_step(c.net, s, 1e-3, LossKind::mse);
    const double after = gradient(r.net, s.input, s.target, LossKind::mse).loss;
    if (after > r.loss) ++violations;
  }
  EXPECT_LE(violations, 2);
}

TEST(Csv, ParsesHeaderCommentsAndBlankLines) {
  std::istringstream in("# xor\nx1,x2,y\n\n0,0,0\n 0 , 1 , 1\n# done\n1,0,1\n");
  const Dataset d = load_csv(in, 2, 1);
  ASSERT_EQ(d.size(), 3u);
  EXPECT_EQ(d[1].input, (Vector{0.0, 1.0}));
  EXPECT_EQ(d[1].target, (Vector{1.0}));
}

TEST(Csv, HeaderIsOptional) {
  std::istringstream in("1,2\n3,4\n");
  EXPECT_EQ(load_csv(in, 1, 1).size(), 2u);
}

TEST(Csv, ColumnMismatchNamesTheLine) {
  std::istringstream in("x,y\n1,2\n3,4,5\n");
  try {
    load_csv(in, 1, 1);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("3 columns"), std::string::npos);
  }
}

TEST(Csv, NonNumericDataRow) {
  std::istringstream in("1,2\nfoo,4\n");
  try {
    load_csv(in, 1, 1);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Csv, EmptyFile) {
  std::istringstream in("# nothing\n");
  EXPECT_THROW(load_csv(in, 1, 1), ParseError);
}

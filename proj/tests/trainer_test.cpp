#include "ics/trainer.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "ics/centers.hpp"
#include "ics/data.hpp"
#include "ics/error.hpp"

namespace ics {
namespace {

Dataset small_dataset(std::size_t n, std::size_t m, std::size_t max_labels,
                      std::uint64_t seed) {
  SyntheticSpec spec;
  spec.n_samples = n;
  spec.d_features = 8;
  spec.m_labels = m;
  spec.min_labels = 1;
  spec.max_labels = max_labels;
  spec.noise_sigma = 0.05;
  spec.seed = seed;
  return generate_synthetic(spec);
}

TrainConfig quick_config() {
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 32;
  cfg.hidden_layers = {16};
  cfg.adam.lr = 1e-2;
  cfg.seed = 4;
  return cfg;
}

TEST(TrainConfig, Validation) {
  TrainConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.batch_size = 0;
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = TrainConfig{};
  cfg.epochs = -1;
  EXPECT_THROW(cfg.validate(), ArgumentError);
  cfg = TrainConfig{};
  cfg.loss.beta = 1.5;
  EXPECT_THROW(cfg.validate(), ArgumentError);
}

TEST(TrainConfig, LearningRateSchedule) {
  TrainConfig cfg;
  cfg.adam.lr = 1e-3;
  EXPECT_DOUBLE_EQ(cfg.learning_rate(0), 1e-3);
  EXPECT_DOUBLE_EQ(cfg.learning_rate(29), 1e-3);
  EXPECT_NEAR(cfg.learning_rate(30), 1e-4, 1e-18);
  EXPECT_NEAR(cfg.learning_rate(89), 1e-5, 1e-18);
}

TEST(TrainConfig, SolverTakesLossHyperparameters) {
  TrainConfig cfg;
  cfg.loss.lambda = 0.3;
  cfg.loss.beta = 0.7;
  cfg.solver.lambda = 99.0;
  const auto s = cfg.effective_solver();
  EXPECT_EQ(s.lambda, 0.3);
  EXPECT_EQ(s.beta, 0.7);
}

TEST(Train, LossDecreasesOnSeparableData) {
  const auto data = small_dataset(200, 2, 1, 8);
  const auto centers = generate_centers(16, 2, 1);
  auto cfg = quick_config();
  cfg.epochs = 10;
  const auto state = train(data, centers, cfg);
  ASSERT_EQ(state.loss_history.size(), 10u);
  EXPECT_LT(state.loss_history.back().j, state.loss_history.front().j);
  for (const auto& e : state.loss_history) EXPECT_TRUE(std::isfinite(e.j));
}

TEST(Train, ZeroEpochsReturnsInitialState) {
  const auto data = small_dataset(40, 4, 2, 1);
  const auto centers = generate_centers(16, 4, 1);
  auto cfg = quick_config();
  cfg.epochs = 0;
  const auto trained = train(data, centers, cfg);
  const auto initial = initial_train_state(data, centers, cfg);
  EXPECT_EQ(trained.encoder, initial.encoder);
  EXPECT_TRUE(trained.loss_history.empty());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto c = static_cast<double>(data.samples[i].positive_labels().size());
    for (double w : trained.weight_table[i]) EXPECT_DOUBLE_EQ(w, 1.0 / c);
  }
}

TEST(Train, IsDeterministic) {
  const auto data = small_dataset(60, 4, 3, 2);
  const auto centers = generate_centers(16, 4, 2);
  const auto cfg = quick_config();
  const auto a = train(data, centers, cfg);
  const auto b = train(data, centers, cfg);
  EXPECT_EQ(a.encoder, b.encoder);
  EXPECT_EQ(a.weight_table, b.weight_table);
  ASSERT_EQ(a.loss_history.size(), b.loss_history.size());
  for (std::size_t e = 0; e < a.loss_history.size(); ++e) {
    EXPECT_EQ(a.loss_history[e].j, b.loss_history[e].j);
  }
}

TEST(Train, ThreadCountDoesNotChangeResult) {
  const auto data = small_dataset(60, 4, 3, 2);
  const auto centers = generate_centers(16, 4, 2);
  auto cfg = quick_config();
  const auto a = train(data, centers, cfg);
  cfg.threads = 4;
  const auto b = train(data, centers, cfg);
  EXPECT_EQ(a.encoder, b.encoder);
  EXPECT_EQ(a.weight_table, b.weight_table);
}

TEST(Train, EqualModeMatchesLearnedOnSingleLabelData) {
  const auto data = small_dataset(50, 4, 1, 3);
  const auto centers = generate_centers(16, 4, 3);
  auto cfg = quick_config();
  const auto learned = train(data, centers, cfg);
  cfg.weight_mode = WeightMode::equal;
  const auto equal = train(data, centers, cfg);
  EXPECT_EQ(learned.encoder, equal.encoder);
  for (std::size_t e = 0; e < learned.loss_history.size(); ++e) {
    EXPECT_EQ(learned.loss_history[e].j, equal.loss_history[e].j);
  }
}

TEST(Train, EqualModeKeepsUniformWeights) {
  const auto data = small_dataset(50, 6, 3, 3);
  const auto centers = generate_centers(16, 6, 3);
  auto cfg = quick_config();
  cfg.weight_mode = WeightMode::equal;
  const auto state = train(data, centers, cfg);
  for (const auto& w : state.weight_table) {
    for (double x : w) EXPECT_DOUBLE_EQ(x, 1.0 / static_cast<double>(w.size()));
  }
}

TEST(Train, LearnedWeightsStayOnSimplex) {
  const auto data = small_dataset(80, 6, 3, 5);
  const auto centers = generate_centers(16, 6, 5);
  auto cfg = quick_config();
  cfg.solver.gradient_mode = GradientMode::exact;
  cfg.loss.beta = 1.0;
  cfg.loss.lambda = 0.05;
  const auto state = train(data, centers, cfg);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& w = state.weight_table[i];
    double sum = 0.0;
    for (double x : w) {
      EXPECT_GE(x, 0.0);
      sum += x;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(Train, RejectsZeroLabelSample) {
  auto data = small_dataset(20, 4, 2, 6);
  data.samples[7].labels.assign(4, 0);
  data.samples[7].proportions.reset();
  const auto centers = generate_centers(16, 4, 6);
  try {
    train(data, centers, quick_config());
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find('7'), std::string::npos) << e.what();
  }
}

TEST(Train, RejectsLabelCountMismatch) {
  const auto data = small_dataset(20, 4, 2, 6);
  const auto centers = generate_centers(16, 5, 6);
  EXPECT_THROW(train(data, centers, quick_config()), ConfigError);
}

TEST(EncodeAll, MatchesForwardPerSample) {
  const auto data = small_dataset(30, 4, 2, 9);
  const auto enc = Encoder::initialized({8, 16, 16}, 9);
  const auto codes = encode_all(enc, data, 3);
  ASSERT_EQ(codes.size(), data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    EXPECT_EQ(codes[i], enc.forward(data.samples[i].features));
  }
}

}  // namespace
}  // namespace ics

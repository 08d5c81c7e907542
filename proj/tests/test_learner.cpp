#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "tilr/learner.hpp"

using namespace tilr;

namespace {

FeatureMatrix matrix(std::vector<std::vector<double>> rows, std::vector<int> labels) {
  FeatureMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c) m.at(r, c) = rows[r][c];
  m.labels() = std::move(labels);
  return m;
}

FeatureMatrix separable() {
  return matrix({{1, 0}, {1, 1}, {0, 1}, {0, 0}}, {1, 1, 0, 0});
}

// Central differences of the loss in every parameter, bias last.
std::vector<double> numeric_gradient(const FeatureMatrix& m, ModelParams p, double l2, double h) {
  std::vector<double> out;
  for (std::size_t i = 0; i <= p.theta.size(); ++i) {
    double& x = i < p.theta.size() ? p.theta[i] : p.bias;
    const double keep = x;
    x = keep + h;
    const double up = loss(m, p, l2);
    x = keep - h;
    const double down = loss(m, p, l2);
    x = keep;
    out.push_back((up - down) / (2 * h));
  }
  return out;
}

}  // namespace

TEST(Score, Examples) {
  EXPECT_EQ(score(std::vector<double>{1, 0, 1}, {{0, 0, 0}, 0}), 0.5);
  EXPECT_NEAR(score(std::vector<double>{1}, {{10}, 0}), 1.0 / (1.0 + std::exp(-10.0)), 1e-15);
  EXPECT_EQ(score(std::vector<double>{0}, {{10}, 0}), 0.5);
  EXPECT_EQ(score(std::vector<double>{1}, {{1000}, 0}), 1.0 - kProbabilityClamp);
  EXPECT_EQ(score(std::vector<double>{1}, {{-1000}, 0}), kProbabilityClamp);
  EXPECT_THROW(score(std::vector<double>{1, 1}, {{1}, 0}), LearnerError);
}

TEST(Loss, ZeroParametersGiveLn2) {
  const auto m = separable();
  EXPECT_NEAR(loss(m, {{0, 0}, 0}, 0.3), std::log(2.0), 1e-12);
}

TEST(Loss, L2Term) {
  const auto m = matrix({{0, 0}}, {1});
  const double base = loss(m, {{1, 1}, 0}, 0.0);
  EXPECT_NEAR(loss(m, {{1, 1}, 0}, 0.1) - base, 0.2, 1e-15);
}

TEST(Gradient, SymmetricBias) {
  const auto m = matrix({{1, 1}, {1, 1}}, {1, 0});
  EXPECT_EQ(gradient(m, {{0, 0}, 0}, 0.0).bias, 0.0);
}

TEST(Gradient, ZeroColumn) {
  const auto m = matrix({{0, 1}, {0, 0}, {0, 1}}, {1, 0, 0});
  const ModelParams p{{0.7, -0.3}, 0.2};
  EXPECT_EQ(gradient(m, p, 0.05).theta[0], 2 * 0.05 * 0.7);
}

TEST(Gradient, MatchesFiniteDifferences) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0, 1), weight(-2, 2);
  for (int trial = 0; trial < 20; ++trial) {
    FeatureMatrix m(5, 4);
    for (std::size_t r = 0; r < 5; ++r) {
      for (std::size_t c = 0; c < 4; ++c) m.at(r, c) = unit(rng);
      m.labels()[r] = unit(rng) < 0.5;
    }
    ModelParams p{{weight(rng), weight(rng), weight(rng), weight(rng)}, weight(rng)};
    const double l2 = 0.01;
    const auto g = gradient(m, p, l2);
    const auto n = numeric_gradient(m, p, l2, 1e-5);
    for (std::size_t i = 0; i < n.size(); ++i) {
      const double a = i < g.theta.size() ? g.theta[i] : g.bias;
      EXPECT_LT(std::abs(a - n[i]) / (std::abs(a) + 1e-12), 1e-5) << "param " << i;
    }
  }
}

TEST(Train, SeparableToySet) {
  const auto m = separable();
  const auto r = train(m, {0.5, 500, 0.0, 0});
  EXPECT_EQ(accuracy(m, r.params), 1.0);
  EXPECT_EQ(r.losses.size(), 501u);
  EXPECT_LT(r.losses.back(), r.losses.front());
}

TEST(Train, LossVanishesOnSeparableData) {
  const auto m = separable();
  const auto r = train(m, {0.5, 20000, 0.0, 0});
  EXPECT_LT(r.losses.back(), 0.01);
}

TEST(Train, Preconditions) {
  const auto m = separable();
  EXPECT_THROW(train(m, {0.1, 0, 0.0, 0}), LearnerError);
  EXPECT_THROW(train(m, {0.0, 10, 0.0, 0}), LearnerError);
  auto bad = matrix({{2.0}}, {1});
  EXPECT_THROW(train(bad, {}), LearnerError);
  auto bad_label = matrix({{1.0}}, {3});
  EXPECT_THROW(train(bad_label, {}), LearnerError);
}

TEST(Train, Deterministic) {
  const auto m = separable();
  const auto a = train(m, {0.3, 100, 1e-3, 5});
  const auto b = train(m, {0.3, 100, 1e-3, 5});
  EXPECT_EQ(a.losses, b.losses);
  EXPECT_EQ(a.params.theta, b.params.theta);
}

TEST(ModelFile, RoundTrip) {
  const ModelParams p{{0.1, -2.5e-9, 1.0 / 3.0}, -0.75};
  const std::vector<std::string> sigs = {"T() <- A(X0,X1)", "T() <- B(X0,X1)", "T() <- A(X0,X1) , B(X1,X2)"};
  std::stringstream s;
  write_model(s, p, sigs);
  const auto loaded = read_model(s);
  EXPECT_EQ(loaded.params.theta, p.theta);
  EXPECT_EQ(loaded.params.bias, p.bias);
  EXPECT_EQ(loaded.signatures, sigs);
}

TEST(ModelFile, Errors) {
  std::stringstream no_bias("T() <- A(X0,X1) 1.0\n");
  EXPECT_THROW(read_model(no_bias), LearnerError);
  std::stringstream bad_number("bias zero\n");
  EXPECT_THROW(read_model(bad_number), LearnerError);
  std::stringstream s;
  EXPECT_THROW(write_model(s, {{1.0}, 0}, {}), LearnerError);
}

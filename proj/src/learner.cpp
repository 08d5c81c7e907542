#include "tilr/learner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>

namespace tilr {
namespace {

void require_dims(const FeatureMatrix& m, const ModelParams& params) {
  if (params.theta.size() != m.cols()) {
    throw LearnerError("model has " + std::to_string(params.theta.size()) + " weights for " +
                       std::to_string(m.cols()) + " features");
  }
}

std::string format17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), values_(rows * cols, 0.0), labels_(rows, 0) {}

void FeatureMatrix::validate() const {
  if (values_.size() != rows_ * cols_ || labels_.size() != rows_) {
    throw LearnerError("feature matrix dimensions are inconsistent");
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) throw LearnerError("feature value outside [0, 1]");
  }
  for (int y : labels_) {
    if (y != 0 && y != 1) throw LearnerError("labels must be 0 or 1");
  }
}

double logistic(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double ez = std::exp(z);
  return ez / (1.0 + ez);
}

double score(std::span<const double> row, const ModelParams& params) {
  if (row.size() != params.theta.size()) throw LearnerError("feature row dimension mismatch");
  double z = params.bias;
  for (std::size_t i = 0; i < row.size(); ++i) z += params.theta[i] * row[i];
  return std::clamp(logistic(z), kProbabilityClamp, 1.0 - kProbabilityClamp);
}

double loss(const FeatureMatrix& m, const ModelParams& params, double l2) {
  require_dims(m, params);
  if (l2 < 0) throw LearnerError("l2 must be non-negative");
  double total = 0.0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double f = score(m.row(r), params);
    const int y = m.labels()[r];
    total += -(y * std::log(f) + (1 - y) * std::log(1.0 - f));
  }
  double penalty = 0.0;
  for (double t : params.theta) penalty += t * t;
  const double mean = m.rows() == 0 ? 0.0 : total / static_cast<double>(m.rows());
  return mean + l2 * penalty;
}

// The clamp is ignored here; it only matters for |z| > ~16 where the
// logistic gradient is already negligible.
Gradient gradient(const FeatureMatrix& m, const ModelParams& params, double l2) {
  require_dims(m, params);
  Gradient g{std::vector<double>(m.cols(), 0.0), 0.0};
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row(r);
    double z = params.bias;
    for (std::size_t i = 0; i < row.size(); ++i) z += params.theta[i] * row[i];
    const double residual = logistic(z) - m.labels()[r];
    for (std::size_t i = 0; i < row.size(); ++i) g.theta[i] += residual * row[i];
    g.bias += residual;
  }
  const double n = m.rows() == 0 ? 1.0 : static_cast<double>(m.rows());
  for (std::size_t i = 0; i < g.theta.size(); ++i) g.theta[i] = g.theta[i] / n + 2.0 * l2 * params.theta[i];
  g.bias /= n;
  return g;
}

TrainResult train(const FeatureMatrix& m, const TrainConfig& config) {
  if (!(config.lr > 0)) throw LearnerError("learning rate must be positive");
  if (config.epochs < 1) throw LearnerError("epochs must be at least 1");
  m.validate();

  TrainResult result;
  result.params.theta.assign(m.cols(), 0.0);
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const double current = loss(m, result.params, config.l2);
    if (!std::isfinite(current)) {
      throw LearnerError("non-finite loss at epoch " + std::to_string(epoch));
    }
    result.losses.push_back(current);
    const Gradient g = gradient(m, result.params, config.l2);
    for (std::size_t i = 0; i < g.theta.size(); ++i) result.params.theta[i] -= config.lr * g.theta[i];
    result.params.bias -= config.lr * g.bias;
  }
  const double final_loss = loss(m, result.params, config.l2);
  if (!std::isfinite(final_loss)) throw LearnerError("non-finite final loss");
  result.losses.push_back(final_loss);
  return result;
}

double accuracy(const FeatureMatrix& m, const ModelParams& params) {
  if (m.rows() == 0) return 0.0;
  std::size_t correct = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const int predicted = score(m.row(r), params) >= 0.5 ? 1 : 0;
    correct += predicted == m.labels()[r];
  }
  return static_cast<double>(correct) / static_cast<double>(m.rows());
}

void write_model(std::ostream& out, const ModelParams& params,
                 std::span<const std::string> signatures) {
  if (signatures.size() != params.theta.size()) throw LearnerError("one signature per weight required");
  out << "bias " << format17(params.bias) << '\n';
  for (std::size_t i = 0; i < signatures.size(); ++i) {
    out << signatures[i] << ' ' << format17(params.theta[i]) << '\n';
  }
}

LoadedModel read_model(std::istream& in) {
  LoadedModel model;
  std::string line;
  bool have_bias = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto space = line.rfind(' ');
    if (space == std::string::npos) throw LearnerError("model line " + std::to_string(line_no) + ": missing value");
    const std::string key = line.substr(0, space);
    const std::string value = line.substr(space + 1);
    char* end = nullptr;
    const double v = std::strtod(value.c_str(), &end);
    if (value.empty() || end != value.c_str() + value.size() || !std::isfinite(v)) {
      throw LearnerError("model line " + std::to_string(line_no) + ": bad number '" + value + "'");
    }
    if (!have_bias) {
      if (key != "bias") throw LearnerError("model file must start with a bias line");
      model.params.bias = v;
      have_bias = true;
      continue;
    }
    model.signatures.push_back(key);
    model.params.theta.push_back(v);
  }
  if (!have_bias) throw LearnerError("model file has no bias line");
  return model;
}

}  // namespace tilr

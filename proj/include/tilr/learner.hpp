#pragma once

// Linear rule weighting through a logistic link, trained with full-batch
// gradient descent on mean binary cross-entropy plus an L2 penalty.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tilr {

class LearnerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kProbabilityClamp = 1e-7;

/// Row-major features in [0, 1]: one row per query, one column per rule.
class FeatureMatrix {
 public:
  FeatureMatrix() = default;
  FeatureMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& at(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  std::span<const double> row(std::size_t r) const {
    return std::span<const double>(values_).subspan(r * cols_, cols_);
  }

  std::vector<int>& labels() { return labels_; }
  const std::vector<int>& labels() const { return labels_; }

  /// Throws unless dimensions agree, values lie in [0, 1] and labels are 0/1.
  void validate() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
  std::vector<int> labels_;
};

struct ModelParams {
  std::vector<double> theta;
  double bias = 0.0;
};

struct Gradient {
  std::vector<double> theta;
  double bias = 0.0;
};

double logistic(double z);

/// logistic(bias + θ·row), clamped to [ε, 1 − ε].
double score(std::span<const double> row, const ModelParams& params);

double loss(const FeatureMatrix& m, const ModelParams& params, double l2);

Gradient gradient(const FeatureMatrix& m, const ModelParams& params, double l2);

struct TrainConfig {
  double lr = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
  std::uint64_t seed = 0;
};

struct TrainResult {
  ModelParams params;
  /// Loss before each update, then the final loss (epochs + 1 entries).
  std::vector<double> losses;
};

/// Full-batch gradient descent from θ = 0, bias = 0.
TrainResult train(const FeatureMatrix& m, const TrainConfig& config);

/// Fraction of rows whose thresholded score (0.5) matches the label.
double accuracy(const FeatureMatrix& m, const ModelParams& params);

/// Model file: "bias <v>" then "<rule-signature> <weight>" per rule, values
/// printed with 17 significant digits.
void write_model(std::ostream& out, const ModelParams& params,
                 std::span<const std::string> signatures);
struct LoadedModel {
  ModelParams params;
  std::vector<std::string> signatures;
};
LoadedModel read_model(std::istream& in);

}  // namespace tilr

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "fadjoint/fadjoint.hpp"
#include "fadjoint/network.hpp"

namespace fadjoint {

struct Sample {
  Vector input;
  Vector target;
};

/// Nonempty list of samples with uniform input and target dimensions.
class Dataset {
 public:
  /// Throws std::invalid_argument if empty or ragged.
  explicit Dataset(std::vector<Sample> samples);

  std::size_t size() const { return samples_.size(); }
  std::size_t input_dim() const { return samples_.front().input.dim(); }
  std::size_t target_dim() const { return samples_.front().target.dim(); }
  const Sample& operator[](std::size_t i) const { return samples_[i]; }
  const std::vector<Sample>& samples() const { return samples_; }

 private:
  std::vector<Sample> samples_;
};

/// CSV rows: input_dim inputs then target_dim targets. Blank lines and lines
/// starting with '#' are skipped; a non-numeric first row is taken as a header.
/// Throws ParseError naming the row's line number.
Dataset load_csv(std::istream& in, std::size_t input_dim, std::size_t target_dim);

struct TrainConfig {
  double learning_rate = 0.1;
  std::size_t epochs = 1;
  LossKind loss = LossKind::mse;
  /// Shuffle the visiting order each epoch when set.
  std::optional<std::uint64_t> shuffle_seed;
  /// Calls the epoch callback every `log_every` epochs; 0 disables it.
  std::size_t log_every = 0;

  /// Throws std::invalid_argument unless learning_rate >= 0 and epochs >= 1.
  /// A zero rate is allowed so a run can report the loss of an untouched model.
  void validate() const;
};

struct StepResult {
  Network net;
  /// Loss at the sample before the update.
  double loss = 0.0;
};

/// One gradient-descent step W^h <- W^h - lr dJ/dW^h on a single sample.
StepResult sgd_step(const Network& net, const Sample& sample, double lr, LossKind loss);

struct TrainResult {
  Network net;
  /// Mean per-sample loss of each epoch, measured before each update.
  std::vector<double> history;
};

using EpochCallback = std::function<void(std::size_t epoch, double mean_loss)>;

/// Per-sample SGD. Deterministic for a given config.
TrainResult train(Network net, const Dataset& data, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = {});

/// Mean loss over the dataset without updating.
double mean_loss(const Network& net, const Dataset& data, LossKind loss);

}  // namespace fadjoint

#include "fadjoint/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

#include "fadjoint/fprop.hpp"

namespace fadjoint {

Dataset::Dataset(std::vector<Sample> samples) : samples_(std::move(samples)) {
  if (samples_.empty()) throw std::invalid_argument("dataset is empty");
  const std::size_t in = samples_.front().input.dim();
  const std::size_t out = samples_.front().target.dim();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (samples_[i].input.dim() != in || samples_[i].target.dim() != out) {
      throw std::invalid_argument("sample " + std::to_string(i) +
                                  " has dimensions that differ from the first sample");
    }
  }
}

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string::npos ? std::string::npos
                                                                        : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_cell(const std::string& cell, double& value) {
  if (cell.empty()) return false;
  char* end = nullptr;
  value = std::strtod(cell.c_str(), &end);
  return end == cell.c_str() + cell.size() && std::isfinite(value);
}

void sgd_step_in_place(Network& net, const Sample& sample, double lr, LossKind loss,
                       double& loss_out) {
  const GradientResult g = gradient(net, sample.input, sample.target, loss);
  loss_out = g.loss;
  descend(net, g.gradients, lr);
}

}  // namespace

Dataset load_csv(std::istream& in, std::size_t input_dim, std::size_t target_dim) {
  const std::size_t width = input_dim + target_dim;
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  bool first_row = true;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string content = trim(line);
    if (content.empty() || content.front() == '#') continue;
    const auto cells = split_commas(content);
    std::vector<double> values(cells.size());
    bool numeric = true;
    for (std::size_t i = 0; i < cells.size(); ++i) numeric = numeric && parse_cell(cells[i], values[i]);
    if (!numeric) {
      if (first_row) {
        first_row = false;
        continue;  // header
      }
      throw ParseError(line_no, "non-numeric value in data row");
    }
    first_row = false;
    if (cells.size() != width) {
      throw ParseError(line_no, "row has " + std::to_string(cells.size()) + " columns, expected " +
                                    std::to_string(width) + " (" + std::to_string(input_dim) +
                                    " inputs + " + std::to_string(target_dim) + " targets)");
    }
    Sample s;
    s.input = Vector(std::vector<double>(values.begin(), values.begin() + input_dim));
    s.target = Vector(std::vector<double>(values.begin() + input_dim, values.end()));
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw ParseError(line_no, "no data rows");
  return Dataset(std::move(samples));
}

void TrainConfig::validate() const {
  if (!(learning_rate >= 0.0) || !std::isfinite(learning_rate)) {
    throw std::invalid_argument("learning rate must be a non-negative finite number");
  }
  if (epochs < 1) throw std::invalid_argument("epochs must be at least 1");
}

StepResult sgd_step(const Network& net, const Sample& sample, double lr, LossKind loss) {
  StepResult result{net, 0.0};
  sgd_step_in_place(result.net, sample, lr, loss, result.loss);
  return result;
}

TrainResult train(Network net, const Dataset& data, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  cfg.validate();
  if (data.input_dim() != net.arch().input_dim() || data.target_dim() != net.arch().output_dim()) {
    throw DimensionError("dataset dims " + std::to_string(data.input_dim()) + "->" +
                         std::to_string(data.target_dim()) + " do not match architecture " +
                         format_layer_sizes(net.arch().layer_sizes));
  }

  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(cfg.shuffle_seed.value_or(0));

  TrainResult result{std::move(net), {}};
  result.history.reserve(cfg.epochs);
  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.shuffle_seed) std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    for (std::size_t idx : order) {
      double loss = 0.0;
      sgd_step_in_place(result.net, data[idx], cfg.learning_rate, cfg.loss, loss);
      total += loss;
    }
    const double mean = total / static_cast<double>(data.size());
    result.history.push_back(mean);
    if (on_epoch && cfg.log_every > 0 && (epoch % cfg.log_every == 0 || epoch == cfg.epochs)) {
      on_epoch(epoch, mean);
    }
  }
  return result;
}

double mean_loss(const Network& net, const Dataset& data, LossKind loss) {
  double total = 0.0;
  for (const Sample& s : data.samples()) {
    total += loss_value(loss, output(forward(net, s.input)), s.target);
  }
  return total / static_cast<double>(data.size());
}

}  // namespace fadjoint

#include "fadjoint/fadjoint.hpp"

#include <stdexcept>
#include <string>

#include "fadjoint/activation.hpp"

namespace fadjoint {

std::string_view to_string(LossKind kind) {
  return kind == LossKind::elementary ? "elementary" : "mse";
}

LossKind parse_loss(std::string_view name) {
  if (name == "elementary") return LossKind::elementary;
  if (name == "mse") return LossKind::mse;
  throw std::invalid_argument("unknown loss '" + std::string(name) +
                              "' (expected elementary|mse)");
}

namespace {

void check_target(const Vector& output, const Vector& target) {
  if (output.dim() != target.dim()) {
    throw DimensionError("target has dim " + std::to_string(target.dim()) + ", output has dim " +
                         std::to_string(output.dim()));
  }
}

void check_record(const Network& net, const FPropagation& record) {
  const Architecture& arch = net.arch();
  if (record.depth() != arch.depth() || record.xs.size() != arch.depth()) {
    throw DimensionError("forward record has depth " + std::to_string(record.depth()) +
                         ", network has depth " + std::to_string(arch.depth()));
  }
  for (std::size_t h = 0; h <= arch.depth(); ++h) {
    if (record.x(h).dim() != arch.activation_dim(h)) {
      throw DimensionError("layer " + std::to_string(h) + ": record X has dim " +
                           std::to_string(record.x(h).dim()) + ", network expects " +
                           std::to_string(arch.activation_dim(h)));
    }
    if (h > 0 && record.y(h).dim() != arch.layer_sizes[h]) {
      throw DimensionError("layer " + std::to_string(h) + ": record Y has dim " +
                           std::to_string(record.y(h).dim()) + ", network expects " +
                           std::to_string(arch.layer_sizes[h]));
    }
  }
}

}  // namespace

double loss_value(LossKind kind, const Vector& output, const Vector& target) {
  check_target(output, target);
  double acc = 0.0;
  for (std::size_t i = 0; i < output.dim(); ++i) {
    const double r = output[i] - target[i];
    acc += kind == LossKind::elementary ? r : 0.5 * r * r;
  }
  return acc;
}

Vector loss_seed(LossKind kind, const Vector& output, const Vector& target) {
  check_target(output, target);
  if (kind == LossKind::elementary) return Vector(output.dim(), 1.0);
  Vector seed(output.dim());
  for (std::size_t i = 0; i < output.dim(); ++i) seed[i] = output[i] - target[i];
  return seed;
}

FAdjoint fadjoint_pass(const Network& net, const FPropagation& record, const Vector& seed) {
  check_record(net, record);
  const std::size_t depth = net.depth();
  if (seed.dim() != net.arch().output_dim()) {
    throw DimensionError("seed has dim " + std::to_string(seed.dim()) + ", output layer has " +
                         std::to_string(net.arch().output_dim()) + " units");
  }
  const bool augmented = net.bias_mode() == BiasMode::augmented;

  FAdjoint adjoint;
  adjoint.xLstar = seed;
  adjoint.ystars.reserve(depth);
  adjoint.xstars.reserve(depth);
  const Vector* xstar = &adjoint.xLstar;
  for (std::size_t h = depth; h >= 1; --h) {
    Vector ystar = hadamard(*xstar, derivative(net.activation(), record.y(h)));
    const Matrix back = augmented ? transpose(sharp(net.weight(h))) : transpose(net.weight(h));
    adjoint.xstars.push_back(matvec(back, ystar));
    adjoint.ystars.push_back(std::move(ystar));
    xstar = &adjoint.xstars.back();
  }
  return adjoint;
}

GradientSet weight_gradients(const FPropagation& record, const FAdjoint& adjoint) {
  if (record.depth() != adjoint.depth()) {
    throw DimensionError("forward record depth " + std::to_string(record.depth()) +
                         " vs adjoint depth " + std::to_string(adjoint.depth()));
  }
  GradientSet grads;
  grads.layers.reserve(record.depth());
  for (std::size_t h = 1; h <= record.depth(); ++h) {
    if (adjoint.ystar(h).dim() != record.y(h).dim()) {
      throw DimensionError("layer " + std::to_string(h) + ": Y_* has dim " +
                           std::to_string(adjoint.ystar(h).dim()) + ", Y has dim " +
                           std::to_string(record.y(h).dim()));
    }
    grads.layers.push_back(outer(adjoint.ystar(h), record.x(h - 1)));
  }
  return grads;
}

GradientResult gradient(const Network& net, const Vector& input, const Vector& target,
                        LossKind loss) {
  const FPropagation record = forward(net, input);
  const Vector& out = output(record);
  GradientResult result;
  result.loss = loss_value(loss, out, target);
  const FAdjoint adjoint = fadjoint_pass(net, record, loss_seed(loss, out, target));
  result.gradients = weight_gradients(record, adjoint);
  return result;
}

}  // namespace fadjoint
